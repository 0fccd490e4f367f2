#include "miura/fourier.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <unordered_map>

#include <fftw3.h>

#include "fftw_cache.hpp"

namespace miura::fft {
namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

fftw_plan get_c2c_plan(int n, int sign) {
    static std::unordered_map<long, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(planner_mutex());
    long key = 2L * n + (sign > 0 ? 1 : 0);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<std::complex<double>> buf(n);
    auto* p = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_plan plan = fftw_plan_dft_1d(n, p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache.emplace(key, plan);
    return plan;
}

fftw_plan get_r2c_plan(int n) {
    static std::unordered_map<int, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(planner_mutex());
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<double> in(n);
    std::vector<std::complex<double>> out(n / 2 + 1);
    fftw_plan plan = fftw_plan_dft_r2c_1d(n, in.data(), reinterpret_cast<fftw_complex*>(out.data()),
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache.emplace(n, plan);
    return plan;
}

fftw_plan get_c2r_plan(int n) {
    static std::unordered_map<int, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(planner_mutex());
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<std::complex<double>> in(n / 2 + 1);
    std::vector<double> out(n);
    fftw_plan plan = fftw_plan_dft_c2r_1d(n, reinterpret_cast<fftw_complex*>(in.data()), out.data(),
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache.emplace(n, plan);
    return plan;
}

} // namespace

void dft(std::vector<std::complex<double>>& data, int sign) {
    fftw_plan plan = get_c2c_plan(static_cast<int>(data.size()), sign > 0 ? FFTW_BACKWARD : FFTW_FORWARD);
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, p, p);
}

void r2c(const std::vector<double>& in, std::vector<std::complex<double>>& out) {
    int n = static_cast<int>(in.size());
    out.resize(n / 2 + 1);
    fftw_plan plan = get_r2c_plan(n);
    fftw_execute_dft_r2c(plan, const_cast<double*>(in.data()),
                         reinterpret_cast<fftw_complex*>(out.data()));
}

void c2r(std::vector<std::complex<double>>& in, std::vector<double>& out) {
    int n = static_cast<int>(out.size());
    fftw_plan plan = get_c2r_plan(n);
    fftw_execute_dft_c2r(plan, reinterpret_cast<fftw_complex*>(in.data()), out.data());
}

} // namespace miura::fft

namespace miura {

namespace {

constexpr double kPi = std::numbers::pi;

void check_pairing(const Grid& xg, const Grid& kg) {
    if (xg.count != kg.count)
        throw ValidationError("fourier.pairing", "grid counts differ");
    if (std::abs(xg.count * xg.step * kg.step - kPi) > 1e-9)
        throw ValidationError("fourier.pairing", "count*dx*dk must equal pi");
}

// out_j = weight * sum_n in_n e^{+2 i k_j x_n}   (dft_sign = +1)
// out_n = weight * sum_j in_j e^{-2 i k_j x_n}   (dft_sign = -1, roles swapped)
// Phases split as e^{2ik_jx_n} = e^{2ik_jx0} w_n e^{+2pi i nj/N}, w_n = e^{i pi n (1-N)/N}.
cvec phased_dft(const cvec& in, const Grid& xg, const Grid& kg, int dft_sign, double weight) {
    const int n = xg.count;
    cvec buf(in);
    const double half_phase = kPi * (1.0 - n) / n;
    if (dft_sign > 0) {
        for (int m = 0; m < n; ++m) buf[m] *= std::polar(1.0, half_phase * m);
        fft::dft(buf, +1);
        for (int j = 0; j < n; ++j) buf[j] *= weight * std::polar(1.0, 2.0 * kg.point(j) * xg.start);
    } else {
        for (int j = 0; j < n; ++j) buf[j] *= std::polar(1.0, -2.0 * kg.point(j) * xg.start);
        fft::dft(buf, -1);
        for (int m = 0; m < n; ++m) buf[m] *= weight * std::polar(1.0, -half_phase * m);
    }
    return buf;
}

} // namespace

EdgeReport edge_magnitudes(const SampledFunction& f) {
    return EdgeReport{std::abs(f.values.front()), std::abs(f.values.back()), f.max_abs()};
}

SampledFunction fourier_forward(const SampledFunction& f, DecayGuard guard) {
    if (f.domain != Domain::space)
        throw ValidationError("fourier_forward.domain", "input must be space-domain");
    if (guard == DecayGuard::enforce) {
        EdgeReport e = edge_magnitudes(f);
        if (e.max > 0.0 && std::max(e.left, e.right) > 1e-8 * e.max)
            throw ValidationError("fourier_forward.decay",
                                  "endpoint magnitudes " + std::to_string(e.left) + ", " +
                                      std::to_string(e.right) + " exceed 1e-8 of max " +
                                      std::to_string(e.max));
    }
    Grid kg = f.grid.conjugate();
    SampledFunction out(kg, Domain::wavenumber);
    out.values = phased_dft(f.values, f.grid, kg, +1, f.grid.step);
    return out;
}

Grid space_partner(const Grid& k_grid) {
    double dx = kPi / (k_grid.step * k_grid.count);
    return Grid(-0.5 * k_grid.count * dx, dx, k_grid.count);
}

SampledFunction fourier_inverse(const SampledFunction& g, KernelSign sign, DecayGuard guard) {
    return fourier_inverse_onto(g, space_partner(g.grid), sign, guard);
}

SampledFunction fourier_inverse_onto(const SampledFunction& g, const Grid& space_grid,
                                     KernelSign sign, DecayGuard guard) {
    if (g.domain != Domain::wavenumber)
        throw ValidationError("fourier_inverse.domain", "input must be wavenumber-domain");
    check_pairing(space_grid, g.grid);
    if (guard == DecayGuard::enforce) {
        // The loose threshold admits the slow O(1/k) tails reflection data
        // legitimately carries on a finite conjugate grid.
        EdgeReport e = edge_magnitudes(g);
        if (e.max > 0.0 && std::max(e.left, e.right) > 5e-2 * e.max)
            throw ValidationError("fourier_inverse.decay",
                                  "endpoint magnitudes " + std::to_string(e.left) + ", " +
                                      std::to_string(e.right) + " exceed 5e-2 of max " +
                                      std::to_string(e.max));
    }
    SampledFunction out(space_grid, Domain::space);
    const double w = g.grid.step / kPi;
    if (sign == KernelSign::minus) {
        out.values = phased_dft(g.values, space_grid, g.grid, -1, w);
    } else {
        // e^{+2ikx} kernel via conjugation of the exact minus-kernel path.
        cvec conj_in(g.values.size());
        for (std::size_t j = 0; j < g.values.size(); ++j) conj_in[j] = std::conj(g.values[j]);
        out.values = phased_dft(conj_in, space_grid, g.grid, -1, w);
        for (auto& v : out.values) v = std::conj(v);
    }
    return out;
}

SampledFunction cauchy_project(const SampledFunction& f, HalfLine side) {
    if (f.domain != Domain::wavenumber)
        throw ValidationError("cauchy_project.domain", "input must be wavenumber-domain");
    SampledFunction g = fourier_inverse(f, KernelSign::minus, DecayGuard::skip);
    for (int n = 0; n < g.grid.count; ++n) {
        double x = g.grid.point(n);
        bool keep = (side == HalfLine::plus) ? (x >= -0.5 * g.grid.step) : (x < -0.5 * g.grid.step);
        if (!keep) g.values[n] = 0.0;
    }
    SampledFunction out = fourier_forward(g, DecayGuard::skip);
    if (side == HalfLine::minus)
        for (auto& v : out.values) v = -v;
    return out;
}

std::vector<double> raised_cosine_taper(int n, double fraction) {
    std::vector<double> w(n, 1.0);
    int m = static_cast<int>(std::ceil(fraction * n));
    if (m < 1) return w;
    for (int j = 0; j < m && j < n; ++j) {
        double t = 0.5 * (1.0 - std::cos(kPi * (j + 1) / (m + 1)));
        w[j] = std::min(w[j], t);
        w[n - 1 - j] = std::min(w[n - 1 - j], t);
    }
    return w;
}

SampledFunction apply_taper(const SampledFunction& f, double fraction) {
    SampledFunction out = f;
    auto w = raised_cosine_taper(f.grid.count, fraction);
    for (int j = 0; j < f.grid.count; ++j) out.values[j] *= w[j];
    return out;
}

std::vector<double> smooth_taper(int n, double fraction) {
    std::vector<double> w(n, 1.0);
    int m = static_cast<int>(std::ceil(fraction * n));
    if (m < 1) return w;
    auto ramp = [](double t) { // 0 at t=0, 1 at t=1, flat C-infinity ends
        if (t <= 0.0) return 0.0;
        if (t >= 1.0) return 1.0;
        double a = std::exp(-1.0 / t);
        double b = std::exp(-1.0 / (1.0 - t));
        return a / (a + b);
    };
    for (int j = 0; j < m && j < n; ++j) {
        double t = ramp((j + 1.0) / (m + 1.0));
        w[j] = std::min(w[j], t);
        w[n - 1 - j] = std::min(w[n - 1 - j], t);
    }
    return w;
}

SampledFunction inverse_with_pole_correction(const SampledFunction& g, KernelSign sign,
                                             double taper_fraction) {
    if (g.domain != Domain::wavenumber)
        throw ValidationError("inverse_with_pole_correction.domain", "wavenumber input required");
    const Grid& kg = g.grid;
    const int m = kg.count;

    // Tail coefficient c = lim 2ik g(k) from the outermost samples; real for
    // conjugate-symmetric data, modulated tails average out.
    int outer = std::max(4, m / 50);
    double c = 0.0;
    for (int j = 0; j < outer; ++j) {
        c += (cplx(0.0, 2.0 * kg.point(j)) * g.values[j]).real();
        c += (cplx(0.0, 2.0 * kg.point(m - 1 - j)) * g.values[m - 1 - j]).real();
    }
    c /= 2.0 * outer;
    if (std::abs(c) < 1e-12 * (1.0 + sup_abs(g.values))) c = 0.0;
    double beta = std::clamp(std::abs(c), 0.5, 8.0);

    SampledFunction resid = g;
    if (c != 0.0)
        for (int j = 0; j < m; ++j) resid.values[j] -= c / cplx(-beta, 2.0 * kg.point(j));
    auto w = smooth_taper(m, taper_fraction);
    for (int j = 0; j < m; ++j) resid.values[j] *= w[j];

    SampledFunction out = fourier_inverse(resid, sign, DecayGuard::skip);
    if (c != 0.0) {
        // (1/pi) int c e^{+-2ikx}/(2ik - beta) dk = -c e^{+-beta x} on the
        // half-line where the exponential decays; midpoint at the jump sample.
        for (int n = 0; n < out.grid.count; ++n) {
            double x = out.grid.point(n);
            double s = (sign == KernelSign::plus) ? x : -x;
            if (std::abs(s) < 0.25 * out.grid.step)
                out.values[n] += -0.5 * c;
            else if (s < 0.0)
                out.values[n] += -c * std::exp(beta * s);
        }
    }
    return out;
}

} // namespace miura
