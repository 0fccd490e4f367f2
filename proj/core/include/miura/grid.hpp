#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace miura {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

/// Input or configuration violates a documented precondition.
class ValidationError : public std::runtime_error {
public:
    ValidationError(std::string check, std::string detail)
        : std::runtime_error(check + ": " + detail), check_(std::move(check)) {}
    const std::string& check() const noexcept { return check_; }

private:
    std::string check_;
};

/// A numerical procedure failed to converge or lost a structural invariant.
class SolverError : public std::runtime_error {
public:
    SolverError(std::string check, std::string detail)
        : std::runtime_error(check + ": " + detail), check_(std::move(check)) {}
    const std::string& check() const noexcept { return check_; }

private:
    std::string check_;
};

enum class Domain { space, wavenumber };

/// Uniform grid: points start + j*step, j in [0, count).
struct Grid {
    double start = 0.0;
    double step = 0.0;
    int count = 0;

    Grid() = default;
    Grid(double start_, double step_, int count_);

    double point(int j) const { return start + step * j; }
    double back() const { return point(count - 1); }

    /// Symmetric grid [-half_width, half_width - step] with step = half_width/n_half.
    /// Contains x = 0 exactly.
    static Grid centered(double half_width, double step);

    /// Wavenumber grid paired with this space grid under the e^{2ikx} kernel:
    /// count*dx*dk = pi, samples at half-integer multiples of dk so k = 0 is
    /// never a sample and the discrete transform pair is exactly invertible.
    Grid conjugate() const;

    /// Even-count symmetric sub-grid of this (conjugate) grid with |k| <= kmax.
    Grid symmetric_subgrid(double kmax) const;

    /// Index of an on-lattice point; throws if x is not a grid point.
    int index_of(double x) const;
    bool has_point(double x) const;

    bool operator==(const Grid& o) const {
        return count == o.count && start == o.start && step == o.step;
    }
};

/// Uniformly sampled complex-valued function with grid metadata.
struct SampledFunction {
    Grid grid;
    Domain domain = Domain::space;
    cvec values;

    SampledFunction() = default;
    SampledFunction(Grid g, Domain d) : grid(g), domain(d), values(g.count, cplx(0.0)) {}
    SampledFunction(Grid g, Domain d, cvec v);

    double max_abs() const;
    double max_imag() const;
};

/// Real-valued sampled function (potential profiles, kernels, norms).
struct RealFunction {
    Grid grid;
    std::vector<double> values;

    RealFunction() = default;
    RealFunction(Grid g) : grid(g), values(g.count, 0.0) {}
    RealFunction(Grid g, std::vector<double> v);

    double max_abs() const;
};

double trapezoid(const Grid& g, std::span<const double> f);
/// Running trapezoid integral from the first grid point; result[j] = int_{x0}^{x_j}.
std::vector<double> cumtrapz(const Grid& g, std::span<const double> f);

/// L1 + L2 norm (trapezoid quadrature for both pieces).
double x_norm(const SampledFunction& f);
double x_norm(const RealFunction& f);

double sup_abs(std::span<const cplx> v);
double sup_abs(std::span<const double> v);

/// Value at k = 0 of an even profile, extrapolated linearly in k^2 from the two
/// innermost symmetric sample pairs of a k-grid that excludes 0.
double extrapolate_even_to_zero(const Grid& k_grid, std::span<const double> f);
cplx extrapolate_even_to_zero(const Grid& k_grid, std::span<const cplx> f);

} // namespace miura
