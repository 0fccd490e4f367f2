#include <doctest.h>

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "miura/fourier.hpp"

using namespace miura;

namespace {

constexpr double kPi = std::numbers::pi;

SampledFunction sample_space(const Grid& g, const std::function<cplx(double)>& f) {
    SampledFunction out(g, Domain::space);
    for (int j = 0; j < g.count; ++j) out.values[j] = f(g.point(j));
    return out;
}

// Random smooth decaying function: a few Gaussians with complex amplitudes.
SampledFunction random_smooth(const Grid& g, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> amp(-1.0, 1.0), cen(-5.0, 5.0), wid(0.5, 2.0);
    std::vector<std::array<double, 5>> parts;
    for (int i = 0; i < 4; ++i)
        parts.push_back({amp(rng), amp(rng), cen(rng), wid(rng), amp(rng)});
    return sample_space(g, [&](double x) {
        cplx v = 0.0;
        for (auto& p : parts)
            v += cplx(p[0], p[1]) * std::exp(-(x - p[2]) * (x - p[2]) / (p[3] * p[3])) *
                 std::cos(p[4] * x);
        return v;
    });
}

double max_dev(const cvec& a, const cvec& b) {
    double m = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
    return m;
}

} // namespace

TEST_CASE("conjugate grid pairing") {
    Grid g = Grid::centered(20.0, 1.0 / 64.0);
    CHECK(g.count == 2560);
    Grid kg = g.conjugate();
    CHECK(kg.count == g.count);
    CHECK(g.count * g.step * kg.step == doctest::Approx(kPi).epsilon(1e-14));
    // Half-integer placement: 0 is never a sample, grid is symmetric.
    for (int j = 0; j < kg.count; ++j) CHECK(std::abs(kg.point(j)) > 0.25 * kg.step);
    CHECK(kg.point(kg.count / 2) == doctest::Approx(0.5 * kg.step));
    CHECK(kg.point(kg.count / 2 - 1) == doctest::Approx(-0.5 * kg.step));
}

TEST_CASE("forward transform of zero is zero") {
    Grid g = Grid::centered(10.0, 1.0 / 32.0);
    SampledFunction z(g, Domain::space);
    auto zh = fourier_forward(z);
    CHECK(zh.max_abs() == 0.0);
    auto back = fourier_inverse(zh);
    CHECK(back.max_abs() == 0.0);
}

TEST_CASE("forward transform of a one-sided exponential") {
    // f(x) = -a e^{a x} for x < 0; closed form int_{-inf}^0 e^{2ikx} f = -a/(a + 2ik).
    // The jump at the on-grid point 0 is sampled at its midpoint.
    const double a = 1.0;
    Grid g = Grid::centered(30.0, 1.0 / 1024.0);
    auto f = sample_space(g, [&](double x) {
        if (x < 0.0) return cplx(-a * std::exp(a * x));
        if (x == 0.0) return cplx(-0.5 * a);
        return cplx(0.0);
    });
    auto fh = fourier_forward(f, DecayGuard::skip);
    double dev = 0.0;
    for (int j = 0; j < fh.grid.count; ++j) {
        double k = fh.grid.point(j);
        if (std::abs(k) > 4.0) continue;
        cplx expected = -a / cplx(a, 2.0 * k);
        dev = std::max(dev, std::abs(fh.values[j] - expected));
    }
    CHECK(dev < 1e-6);
}

TEST_CASE("Gaussian transform closed form") {
    // f = e^{-x^2} -> f^(k) = sqrt(pi) e^{-k^2} under the e^{2ikx} kernel.
    Grid g = Grid::centered(20.0, 1.0 / 64.0);
    auto f = sample_space(g, [](double x) { return cplx(std::exp(-x * x)); });
    auto fh = fourier_forward(f);
    double dev = 0.0;
    for (int j = 0; j < fh.grid.count; ++j) {
        double k = fh.grid.point(j);
        dev = std::max(dev, std::abs(fh.values[j] - std::sqrt(kPi) * std::exp(-k * k)));
    }
    CHECK(dev < 1e-10);

    SUBCASE("round trip is the identity") {
        auto back = fourier_inverse(fh);
        CHECK(max_dev(back.values, f.values) < 1e-8 * f.max_abs());
    }
}

TEST_CASE("plus-kernel inverse by residue closed form") {
    // g(k) = a/(2ik - a) -> (1/pi) int g e^{2ikx} dk = -a e^{a x} for x < 0, 0 for x > 0.
    const double a = 1.0;
    Grid xg = Grid::centered(20.0, 1.0 / 64.0);
    Grid kg = xg.conjugate();
    SampledFunction g(kg, Domain::wavenumber);
    for (int j = 0; j < kg.count; ++j) g.values[j] = a / cplx(-a, 2.0 * kg.point(j));
    auto dev_away = [&](const SampledFunction& F, double min_x) {
        double dev = 0.0;
        for (int j = 0; j < xg.count; ++j) {
            double x = xg.point(j);
            if (std::abs(x) < min_x) continue;
            double expected = x < 0.0 ? -a * std::exp(a * x) : 0.0;
            dev = std::max(dev, std::abs(F.values[j].real() - expected));
        }
        return dev;
    };

    // Raw truncated-grid path: the O(1/k) tail of g rings like 1/(kmax |x|).
    auto F = fourier_inverse(g, KernelSign::plus, DecayGuard::skip);
    CHECK(F.max_imag() < 1e-10);
    CHECK(dev_away(F, 2.0) < 1e-3);
    // The jump sample lands at the midpoint of the two one-sided limits.
    CHECK(F.values[xg.index_of(0.0)].real() == doctest::Approx(-0.5 * a).epsilon(0.02));

    // Pole-corrected path removes the truncation ringing.
    auto Fc = inverse_with_pole_correction(g, KernelSign::plus);
    CHECK(dev_away(Fc, 2.0 * xg.step) < 1e-5);
    CHECK(Fc.values[xg.index_of(0.0)].real() == doctest::Approx(-0.5 * a).epsilon(1e-3));
}

TEST_CASE("non-decaying input is rejected with measured endpoints") {
    Grid g = Grid::centered(10.0, 1.0 / 32.0);
    auto f = sample_space(g, [](double x) { return cplx(std::exp(0.1 * x)); });
    CHECK_THROWS_AS(fourier_forward(f), ValidationError);
}

TEST_CASE("Parseval constant under the e^{2ikx} convention") {
    Grid g = Grid::centered(16.0, 1.0 / 64.0);
    auto f = random_smooth(g, 7u);
    auto fh = fourier_forward(f, DecayGuard::skip);
    auto l2sq = [](const SampledFunction& s) {
        std::vector<double> a(s.values.size());
        for (std::size_t j = 0; j < s.values.size(); ++j) a[j] = std::norm(s.values[j]);
        return trapezoid(s.grid, a);
    };
    // ||f^||^2 = pi ||f||^2; trapezoid vs plain-sum weights differ only at the
    // decayed endpoints.
    CHECK(l2sq(fh) == doctest::Approx(kPi * l2sq(f)).epsilon(1e-10));
}

TEST_CASE("x_norm values") {
    SUBCASE("zero") {
        Grid g = Grid::centered(5.0, 1.0 / 64.0);
        CHECK(x_norm(SampledFunction(g, Domain::space)) == 0.0);
    }
    SUBCASE("indicator of [0,1]") {
        Grid g = Grid::centered(5.0, 1.0 / 512.0);
        auto f = sample_space(g, [](double x) { return cplx(x >= 0.0 && x <= 1.0 ? 1.0 : 0.0); });
        CHECK(std::abs(x_norm(f) - 2.0) < 2.0 * g.step);
    }
    SUBCASE("two-sided exponential") {
        Grid g = Grid::centered(20.0, 1.0 / 64.0);
        auto f = sample_space(g, [](double x) { return cplx(std::exp(-std::abs(x))); });
        CHECK(std::abs(x_norm(f) - 3.0) < 1e-3);
    }
}

TEST_CASE("x_norm dominates the sup of the transform") {
    Grid g = Grid::centered(12.0, 1.0 / 64.0);
    for (unsigned seed : {1u, 2u, 3u, 4u}) {
        auto f = random_smooth(g, seed);
        auto fh = fourier_forward(f, DecayGuard::skip);
        CHECK(fh.max_abs() <= x_norm(f) * (1.0 + 1e-12));
    }
}

TEST_CASE("Cauchy projections") {
    Grid xg = Grid::centered(12.0, 1.0 / 64.0);
    Grid kg = xg.conjugate();

    SUBCASE("C+ - C- = I and idempotency") {
        auto f = fourier_forward(random_smooth(xg, 11u), DecayGuard::skip);
        auto cp = cauchy_project(f, HalfLine::plus);
        auto cm = cauchy_project(f, HalfLine::minus);
        cvec diff(f.values.size());
        for (std::size_t j = 0; j < diff.size(); ++j) diff[j] = cp.values[j] - cm.values[j];
        CHECK(max_dev(diff, f.values) < 1e-10 * std::max(1.0, f.max_abs()));

        auto cpp = cauchy_project(cp, HalfLine::plus);
        CHECK(max_dev(cpp.values, cp.values) < 1e-10 * std::max(1.0, cp.max_abs()));
        auto cpm = cauchy_project(cp, HalfLine::minus);
        CHECK(sup_abs(cpm.values) < 1e-10 * std::max(1.0, cp.max_abs()));
    }

    SUBCASE("fixes transforms of positive-half-line functions") {
        // f^ = forward transform of g supported on x > 0.
        SampledFunction g(xg, Domain::space);
        for (int j = 0; j < xg.count; ++j) {
            double x = xg.point(j);
            g.values[j] = x > 0.0 ? std::exp(-x) * std::sin(3.0 * x) : 0.0;
        }
        auto f = fourier_forward(g, DecayGuard::skip);
        auto cp = cauchy_project(f, HalfLine::plus);
        CHECK(max_dev(cp.values, f.values) < 1e-8 * std::max(1.0, f.max_abs()));
        auto cm = cauchy_project(f, HalfLine::minus);
        CHECK(sup_abs(cm.values) < 1e-8 * std::max(1.0, f.max_abs()));
    }

    SUBCASE("zero maps to zero") {
        SampledFunction z(kg, Domain::wavenumber);
        CHECK(cauchy_project(z, HalfLine::plus).max_abs() == 0.0);
        CHECK(cauchy_project(z, HalfLine::minus).max_abs() == 0.0);
    }
}

TEST_CASE("even extrapolation to k = 0") {
    Grid kg = Grid::centered(10.0, 1.0 / 16.0).conjugate();
    std::vector<double> f(kg.count);
    for (int j = 0; j < kg.count; ++j) {
        double k = kg.point(j);
        f[j] = 3.0 - 2.0 * k * k + 0.5 * k; // odd part must drop out
    }
    CHECK(extrapolate_even_to_zero(kg, std::span<const double>(f)) ==
          doctest::Approx(3.0).epsilon(1e-10));
}
