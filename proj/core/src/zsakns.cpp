#include "miura/zsakns.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "miura/fourier.hpp"

namespace miura {

namespace {

using Mat2 = std::array<cplx, 4>; // row-major [a b; c d]

Mat2 mul(const Mat2& m, const Mat2& n) {
    return Mat2{m[0] * n[0] + m[1] * n[2], m[0] * n[1] + m[1] * n[3],
                m[2] * n[0] + m[3] * n[2], m[2] * n[1] + m[3] * n[3]};
}

cplx det(const Mat2& m) { return m[0] * m[3] - m[1] * m[2]; }

// Weights for the oscillatory cell integral int_0^h u_lin(t) e^{-2ik(x_l+t)} dt
// = e^{-2ik x_l} (u_l P + u_r Q) with z = -2ik h:
//   P = h (e^z - 1 - z)/z^2,  Q = h (e^z (z-1) + 1)/z^2.
struct CellWeights {
    cplx p, q;
};

CellWeights cell_weights(double k, double h) {
    cplx z(0.0, -2.0 * k * h);
    double az = std::abs(z);
    if (az < 0.25) {
        cplx zp(1.0, 0.0), psum(0.0), qsum(0.0);
        double fact = 2.0; // (j+2)! running
        for (int j = 0;; ++j) {
            psum += zp / fact;
            qsum += zp * static_cast<double>(j + 1) / fact;
            zp *= z;
            fact *= (j + 3);
            if (j >= 3 && std::abs(zp) / fact < 1e-18) break;
            if (j > 24) break;
        }
        return CellWeights{h * psum, h * qsum};
    }
    cplx ez = std::exp(z);
    cplx z2 = z * z;
    return CellWeights{h * (ez - 1.0 - z) / z2, h * (ez * (z - 1.0) + 1.0) / z2};
}

// exp([[0, c],[conj(c), 0]]) = [[ch, sh c/|c|],[sh conj(c)/|c|, ch]].
Mat2 su_exp(const cplx& c) {
    double ac = std::abs(c);
    double ch, sh_over;
    if (ac < 1e-6) {
        double a2 = ac * ac;
        ch = 1.0 + 0.5 * a2 + a2 * a2 / 24.0;
        sh_over = 1.0 + a2 / 6.0 + a2 * a2 / 120.0;
    } else {
        ch = std::cosh(ac);
        sh_over = std::sinh(ac) / ac;
    }
    return Mat2{cplx(ch, 0.0), sh_over * c, sh_over * std::conj(c), cplx(ch, 0.0)};
}

struct Stepper {
    const CellProfile& u;
    double k;
    CellWeights w;

    Stepper(const CellProfile& prof, double k_) : u(prof), k(k_), w(cell_weights(k_, prof.grid.step)) {}

    // Transfer over cell c in the rotated frame: phi(x_{c+1}) = exp(Omega_c) phi(x_c).
    cplx omega_offdiag(int c, const cplx& phase_left) const {
        return phase_left * (u.left[c] * w.p + u.right[c] * w.q);
    }
};

} // namespace

CellProfile cell_profile(const ExtremalPair& pair, Side side) {
    const Grid& g = pair.grid;
    const int n0 = pair.origin_index();
    const RealFunction& u = (side == Side::right) ? pair.u_plus : pair.u_minus;
    CellProfile prof{g, std::vector<double>(g.count - 1), std::vector<double>(g.count - 1)};
    for (int c = 0; c + 1 < g.count; ++c) {
        prof.left[c] = u.values[c];
        prof.right[c] = u.values[c + 1];
    }
    if (side == Side::right && n0 >= 1) prof.right[n0 - 1] = pair.u_plus_left0;
    if (side == Side::left && n0 + 1 < g.count) prof.left[n0] = pair.u_minus_right0;
    return prof;
}

std::vector<Mat2> integrate_akns(const CellProfile& u, double k, IntegrationEnd from) {
    const Grid& g = u.grid;
    const int n = g.count;
    std::vector<Mat2> out(n);
    const cplx rot_up = std::polar(1.0, -2.0 * k * g.step); // e^{-2ik dx}
    Stepper st(u, k);

    Mat2 phi{1.0, 0.0, 0.0, 1.0};
    if (from == IntegrationEnd::right_end) {
        out[n - 1] = phi;
        cplx phase = std::polar(1.0, -2.0 * k * g.point(n - 2));
        for (int c = n - 2; c >= 0; --c) {
            Mat2 e = su_exp(-st.omega_offdiag(c, phase));
            phi = mul(e, phi);
            out[c] = phi;
            phase /= rot_up;
        }
    } else {
        out[0] = phi;
        cplx phase = std::polar(1.0, -2.0 * k * g.point(0));
        for (int c = 0; c + 1 < n; ++c) {
            Mat2 e = su_exp(st.omega_offdiag(c, phase));
            phi = mul(e, phi);
            out[c + 1] = phi;
            phase *= rot_up;
        }
    }
    double drift = std::abs(det(phi) - 1.0);
    if (drift > 1e-6)
        throw SolverError("akns.determinant",
                          "unit-determinant drift " + std::to_string(drift) + "; refine the grid");
    // Undo the rotation: Psi = e^{ikx sigma3} phi.
    for (int j = 0; j < n; ++j) {
        cplx ep = std::polar(1.0, k * g.point(j));
        cplx em = std::conj(ep);
        out[j] = Mat2{ep * out[j][0], ep * out[j][1], em * out[j][2], em * out[j][3]};
    }
    return out;
}

JostSolution jost(Side side, const ExtremalPair& pair, double k) {
    if (k == 0.0) throw ValidationError("jost.k", "k = 0 is handled by zero_energy_jost");
    CellProfile prof = cell_profile(pair, side);
    auto psi = integrate_akns(prof, k,
                              side == Side::right ? IntegrationEnd::right_end : IntegrationEnd::left_end);
    JostSolution out;
    out.side = side;
    out.k = k;
    out.x_grid = pair.grid;
    out.f.resize(pair.grid.count);
    out.f_quasi.resize(pair.grid.count);
    const cplx ik(0.0, k);
    for (int j = 0; j < pair.grid.count; ++j) {
        // Right solution is the first column, left the second.
        cplx p1 = (side == Side::right) ? psi[j][0] : psi[j][1];
        cplx p2 = (side == Side::right) ? psi[j][2] : psi[j][3];
        out.f[j] = p1 + p2;
        out.f_quasi[j] = ik * (p1 - p2);
    }
    return out;
}

cvec modified_wronskian(const JostSolution& y1, const JostSolution& y2,
                        const RealFunction* v_conversion) {
    if (!(y1.x_grid == y2.x_grid))
        throw ValidationError("wronskian.grid", "solutions sampled on different grids");
    if (y1.side != y2.side && v_conversion == nullptr)
        throw ValidationError("wronskian.reference",
                              "solutions reference different representatives; supply v");
    cvec out(y1.x_grid.count);
    for (int j = 0; j < y1.x_grid.count; ++j) {
        cplx q1 = y1.f_quasi[j];
        if (v_conversion) q1 += v_conversion->values[j] * y1.f[j];
        out[j] = y1.f[j] * y2.f_quasi[j] - y2.f[j] * q1;
    }
    return out;
}

namespace {

// Streamed integration of the rotated system from one end to a target index,
// returning phi there. Much cheaper than materializing the full solution.
Mat2 stream_to(const CellProfile& u, double k, IntegrationEnd from, int target) {
    const Grid& g = u.grid;
    Stepper st(u, k);
    Mat2 phi{1.0, 0.0, 0.0, 1.0};
    const cplx rot_up = std::polar(1.0, -2.0 * k * g.step);
    if (from == IntegrationEnd::right_end) {
        cplx phase = std::polar(1.0, -2.0 * k * g.point(g.count - 2));
        for (int c = g.count - 2; c >= target; --c) {
            phi = mul(su_exp(-st.omega_offdiag(c, phase)), phi);
            phase /= rot_up;
        }
    } else {
        cplx phase = std::polar(1.0, -2.0 * k * g.point(0));
        for (int c = 0; c < target; ++c) {
            phi = mul(su_exp(st.omega_offdiag(c, phase)), phi);
            phase *= rot_up;
        }
    }
    return phi;
}

struct OriginValues {
    cplx f, f_quasi; // at x = 0, rotated back
};

// f and f^[1] of the side's Jost solution at x = 0.
OriginValues origin_values(const CellProfile& prof, Side side, double k, int n0) {
    Mat2 phi = stream_to(prof, k,
                         side == Side::right ? IntegrationEnd::right_end : IntegrationEnd::left_end,
                         n0);
    // x = 0: rotation phases are 1.
    cplx p1 = (side == Side::right) ? phi[0] : phi[1];
    cplx p2 = (side == Side::right) ? phi[2] : phi[3];
    return OriginValues{p1 + p2, cplx(0.0, k) * (p1 - p2)};
}

void run_parallel(int jobs, int count, const std::function<void(int)>& body) {
    jobs = std::max(1, jobs);
    if (jobs == 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < jobs; ++t)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
        });
    for (auto& th : pool) th.join();
}

} // namespace

ScatteringData scattering(const ExtremalPair& pair, const Grid& k_grid,
                          const ScatteringOptions& opts) {
    const int m = k_grid.count;
    const int half = m / 2;
    if (m % 2 != 0 || std::abs(k_grid.point(half) + k_grid.point(half - 1)) > 1e-9 * k_grid.step)
        throw ValidationError("scattering.k_grid", "k grid must be symmetric with 0 excluded");

    ScatteringData sd;
    sd.k_grid = k_grid;
    sd.a.resize(m);
    sd.b.resize(m);

    const CellProfile up = cell_profile(pair, Side::right);
    const CellProfile um = cell_profile(pair, Side::left);
    const int n0 = pair.origin_index();
    const double v0 = pair.v0;

    run_parallel(opts.jobs, half, [&](int i) {
        int j = half + i;
        double k = k_grid.point(j);
        OriginValues fp = origin_values(up, Side::right, k, n0);
        OriginValues fm = origin_values(um, Side::left, k, n0);
        // Convert the left solution's quasi-derivative to the right representative.
        cplx fmq = fm.f_quasi + v0 * fm.f;
        cplx two_ik(0.0, 2.0 * k);
        cplx w_a = fm.f * fp.f_quasi - fp.f * fmq;
        // W{f_-(k), f_+(-k)}: f(-k) = conj f(k) for real k.
        cplx w_b = fm.f * std::conj(fp.f_quasi) - std::conj(fp.f) * fmq;
        sd.a[j] = w_a / two_ik;
        sd.b[j] = -w_b / two_ik;
        sd.a[m - 1 - j] = std::conj(sd.a[j]);
        sd.b[m - 1 - j] = std::conj(sd.b[j]);
    });

    sd.a_reg.resize(m);
    sd.b_reg.resize(m);
    sd.r_plus.resize(m);
    sd.r_minus.resize(m);
    sd.t.resize(m);
    double max_udev = 0.0;
    double min_abs_a = 1e300;
    for (int j = 0; j < m; ++j) {
        double k = k_grid.point(j);
        cplx reg = k / cplx(k, 1.0);
        sd.a_reg[j] = reg * sd.a[j];
        sd.b_reg[j] = reg * sd.b[j];
        sd.r_plus[j] = -std::conj(sd.b[j]) / sd.a[j]; // b(-k) = conj b(k)
        sd.r_minus[j] = sd.b[j] / sd.a[j];
        sd.t[j] = 1.0 / sd.a[j];
        double u = std::norm(sd.a[j]) - std::norm(sd.b[j]) - 1.0;
        max_udev = std::max(max_udev, std::abs(u));
        min_abs_a = std::min(min_abs_a, std::abs(sd.a[j]));
    }
    sd.max_unitarity_dev = max_udev;
    if (min_abs_a < 1.0 - 1e-4)
        throw SolverError("scattering.unitarity",
                          "|a| = " + std::to_string(min_abs_a) + " < 1 violates |a|^2-|b|^2 = 1");

    // theta = lim 2ik a(k), extrapolated evenly from the innermost samples.
    cvec g(m);
    for (int j = 0; j < m; ++j) g[j] = cplx(0.0, 2.0 * k_grid.point(j)) * sd.a[j];
    cplx theta_c = extrapolate_even_to_zero(k_grid, std::span<const cplx>(g));
    sd.theta = theta_c.real();
    double a_reg_sup = sup_abs(sd.a_reg);
    sd.class_tag = (std::abs(sd.theta) > 1e-3 * (1.0 + a_reg_sup)) ? PotentialClass::generic
                                                                   : PotentialClass::exceptional;

    if (opts.check_wronskian_constancy) {
        // Spot check x-independence of W{f_-, f_+} at one moderate k.
        double k = k_grid.point(std::min(m - 1, half + half / 2));
        JostSolution jp = jost(Side::right, pair, k);
        JostSolution jm = jost(Side::left, pair, k);
        cvec w = modified_wronskian(jm, jp, &pair.v);
        cplx med = w[pair.grid.count / 3]; // reference well inside the grid
        double dev = 0.0;
        for (const auto& x : w) dev = std::max(dev, std::abs(x - med));
        sd.wronskian_x_dev = dev / std::max(1e-300, std::abs(med));
    }
    return sd;
}

ZeroEnergyJost zero_energy_jost(const ExtremalPair& pair) {
    const Grid& g = pair.grid;
    CellProfile up = cell_profile(pair, Side::right);
    CellProfile um = cell_profile(pair, Side::left);
    ZeroEnergyJost out{RealFunction(g), RealFunction(g)};
    // f_+(x,0) = exp(-int_x^{end} u_+), f_-(x,0) = exp(int_{start}^x u_-).
    double acc = 0.0;
    out.f_plus.values[g.count - 1] = 1.0;
    for (int c = g.count - 2; c >= 0; --c) {
        acc += 0.5 * g.step * (up.left[c] + up.right[c]);
        out.f_plus.values[c] = std::exp(-acc);
    }
    acc = 0.0;
    out.f_minus.values[0] = 1.0;
    for (int c = 0; c + 1 < g.count; ++c) {
        acc += 0.5 * g.step * (um.left[c] + um.right[c]);
        out.f_minus.values[c + 1] = std::exp(acc);
    }
    for (int j = 0; j < g.count; ++j)
        if (!(out.f_plus.values[j] > 0.0) || !(out.f_minus.values[j] > 0.0))
            throw SolverError("zero_energy.positivity", "zero-energy Jost solution not positive");
    return out;
}

double hardy_support_mass(const ExtremalPair& pair, const ScatteringData& sd, double x, Side side) {
    const Grid& kg = sd.k_grid;
    const int m = kg.count;
    const int half = m / 2;
    const int nx = pair.grid.index_of(x);
    const CellProfile prof = cell_profile(pair, side == Side::right ? Side::right : Side::left);
    const cvec& r = (side == Side::right) ? sd.r_plus : sd.r_minus;

    cvec mm(m); // m_side(x, k) over the grid
    for (int i = 0; i < half; ++i) {
        int j = half + i;
        double k = kg.point(j);
        Mat2 phi = stream_to(prof, k,
                             side == Side::right ? IntegrationEnd::right_end : IntegrationEnd::left_end,
                             nx);
        cplx val;
        if (side == Side::right) {
            // m_+ = f_+ e^{-ikx} = phi11 + e^{-2ikx} phi21
            val = phi[0] + std::polar(1.0, -2.0 * k * x) * phi[2];
        } else {
            // m_- = f_- e^{+ikx} = e^{2ikx} phi12 + phi22
            val = std::polar(1.0, 2.0 * k * x) * phi[1] + phi[3];
        }
        mm[j] = val;
        mm[m - 1 - j] = std::conj(val);
    }

    SampledFunction h(kg, Domain::wavenumber);
    for (int j = 0; j < m; ++j) {
        double k = kg.point(j);
        double sgn = (side == Side::right) ? +2.0 : -2.0;
        cplx mod = std::polar(1.0, sgn * k * x);
        h.values[j] = mm[m - 1 - j] + mod * r[j] * mm[j] - 1.0;
    }
    SampledFunction g = inverse_with_pole_correction(h, KernelSign::minus);
    double neg = 0.0, tot = 0.0;
    for (int n = 0; n < g.grid.count; ++n) {
        double w = std::norm(g.values[n]);
        tot += w;
        if (g.grid.point(n) < -0.5 * g.grid.step) neg += w;
    }
    if (tot <= 1e-300) return 0.0;
    return std::sqrt(neg / tot);
}

} // namespace miura
