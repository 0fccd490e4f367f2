#include "miura/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace miura {

Grid::Grid(double start_, double step_, int count_) : start(start_), step(step_), count(count_) {
    if (!(step > 0.0)) throw ValidationError("grid.step", "step must be positive");
    if (count < 2) throw ValidationError("grid.count", "need at least two points");
}

Grid Grid::centered(double half_width, double step) {
    if (!(half_width > 0.0) || !(step > 0.0))
        throw ValidationError("grid.centered", "half_width and step must be positive");
    double n_half = half_width / step;
    int n = static_cast<int>(std::lround(n_half));
    if (std::abs(n_half - n) > 1e-9 * std::max(1.0, n_half))
        throw ValidationError("grid.centered", "half_width must be an integer multiple of step");
    return Grid(-half_width, step, 2 * n);
}

Grid Grid::conjugate() const {
    double dk = std::numbers::pi / (step * count);
    double start_k = (0.5 - 0.5 * count) * dk;
    return Grid(start_k, dk, count);
}

Grid Grid::symmetric_subgrid(double kmax) const {
    if (!(kmax > 0.0)) throw ValidationError("grid.symmetric_subgrid", "kmax must be positive");
    // Half-integer samples: biggest m with (m - 1/2) dk <= kmax.
    int m = static_cast<int>(std::floor(kmax / step + 0.5));
    m = std::clamp(m, 1, count / 2);
    return Grid((0.5 - m) * step, step, 2 * m);
}

int Grid::index_of(double x) const {
    double j = (x - start) / step;
    int ji = static_cast<int>(std::lround(j));
    if (ji < 0 || ji >= count || std::abs(j - ji) > 1e-8)
        throw ValidationError("grid.index_of", "point is not on the lattice");
    return ji;
}

bool Grid::has_point(double x) const {
    double j = (x - start) / step;
    int ji = static_cast<int>(std::lround(j));
    return ji >= 0 && ji < count && std::abs(j - ji) <= 1e-8;
}

SampledFunction::SampledFunction(Grid g, Domain d, cvec v) : grid(g), domain(d), values(std::move(v)) {
    if (static_cast<int>(values.size()) != grid.count)
        throw ValidationError("sampled_function", "values length must equal grid.count");
}

double SampledFunction::max_abs() const { return sup_abs(values); }

double SampledFunction::max_imag() const {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v.imag()));
    return m;
}

RealFunction::RealFunction(Grid g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (static_cast<int>(values.size()) != grid.count)
        throw ValidationError("real_function", "values length must equal grid.count");
}

double RealFunction::max_abs() const { return sup_abs(values); }

double trapezoid(const Grid& g, std::span<const double> f) {
    double s = 0.5 * (f.front() + f.back());
    for (std::size_t j = 1; j + 1 < f.size(); ++j) s += f[j];
    return s * g.step;
}

std::vector<double> cumtrapz(const Grid& g, std::span<const double> f) {
    std::vector<double> out(f.size(), 0.0);
    for (std::size_t j = 1; j < f.size(); ++j)
        out[j] = out[j - 1] + 0.5 * g.step * (f[j - 1] + f[j]);
    return out;
}

double x_norm(const SampledFunction& f) {
    std::vector<double> a(f.values.size()), a2(f.values.size());
    for (std::size_t j = 0; j < f.values.size(); ++j) {
        a[j] = std::abs(f.values[j]);
        a2[j] = a[j] * a[j];
    }
    return trapezoid(f.grid, a) + std::sqrt(trapezoid(f.grid, a2));
}

double x_norm(const RealFunction& f) {
    std::vector<double> a(f.values.size()), a2(f.values.size());
    for (std::size_t j = 0; j < f.values.size(); ++j) {
        a[j] = std::abs(f.values[j]);
        a2[j] = a[j] * a[j];
    }
    return trapezoid(f.grid, a) + std::sqrt(trapezoid(f.grid, a2));
}

double sup_abs(std::span<const cplx> v) {
    double m = 0.0;
    for (const auto& x : v) m = std::max(m, std::abs(x));
    return m;
}

double sup_abs(std::span<const double> v) {
    double m = 0.0;
    for (const auto& x : v) m = std::max(m, std::abs(x));
    return m;
}

namespace {
template <typename T>
T extrapolate_even_impl(const Grid& k, std::span<const T> f) {
    if (k.count < 4 || k.count % 2 != 0)
        throw ValidationError("extrapolate_even_to_zero", "need an even-count symmetric grid");
    int h = k.count / 2;
    if (std::abs(k.point(h) + k.point(h - 1)) > 1e-9 * k.step)
        throw ValidationError("extrapolate_even_to_zero", "grid is not symmetric about 0");
    // Even parts at the two innermost |k|: k1 = dk/2, k2 = 3 dk/2.
    T e1 = 0.5 * (f[h] + f[h - 1]);
    T e2 = 0.5 * (f[h + 1] + f[h - 2]);
    double k1 = k.point(h), k2 = k.point(h + 1);
    // Linear in k^2: e(k) = e0 + c k^2.
    double w = k1 * k1 / (k2 * k2 - k1 * k1);
    return e1 - (e2 - e1) * w;
}
} // namespace

double extrapolate_even_to_zero(const Grid& k_grid, std::span<const double> f) {
    return extrapolate_even_impl<double>(k_grid, f);
}

cplx extrapolate_even_to_zero(const Grid& k_grid, std::span<const cplx> f) {
    return extrapolate_even_impl<cplx>(k_grid, f);
}

} // namespace miura
