#include <doctest.h>

#include <cmath>
#include <functional>

#include "miura/riccati.hpp"

using namespace miura;

namespace {

RealFunction sample_real(const Grid& g, const std::function<double(double)>& f) {
    RealFunction out(g);
    for (int j = 0; j < g.count; ++j) out.values[j] = f(g.point(j));
    return out;
}

// C-infinity test bump centered at c with half-width w, phi(c) = 1.
struct TestBump {
    double c, w;
    double phi(double x) const {
        double t = (x - c) / w;
        if (std::abs(t) >= 1.0) return 0.0;
        return std::exp(1.0 - 1.0 / (1.0 - t * t));
    }
    double dphi(double x) const {
        double t = (x - c) / w;
        if (std::abs(t) >= 1.0) return 0.0;
        double d = 1.0 - t * t;
        return phi(x) * (-2.0 * t / (d * d)) / w;
    }
};

} // namespace

TEST_CASE("delta preset extremal extension matches the closed forms") {
    const double alpha = 1.0;
    Grid g = Grid::centered(20.0, 1.0 / 64.0);
    PresetParams p;
    p.alpha = alpha;
    auto triple = preset(PresetKind::delta, p, g);
    CHECK(triple.v0 == alpha);
    CHECK(sup_abs(triple.w_plus.values) == 0.0);
    CHECK(sup_abs(triple.w_minus.values) == 0.0);

    auto pair = extend_extremal(triple);
    double dev_up = 0.0, dev_um = 0.0, dev_yp = 0.0, dev_ym = 0.0;
    for (int j = 0; j < g.count; ++j) {
        double x = g.point(j);
        double up = x > 0.0 ? 0.0 : (x < 0.0 ? -alpha / (1.0 - alpha * x) : 0.0);
        double um = x > 0.0 ? alpha / (1.0 + alpha * x) : 0.0;
        double yp = x > 0.0 ? 1.0 : 1.0 - alpha * x;
        double ym = x > 0.0 ? 1.0 + alpha * x : 1.0;
        dev_up = std::max(dev_up, std::abs(pair.u_plus.values[j] - up));
        dev_um = std::max(dev_um, std::abs(pair.u_minus.values[j] - um));
        dev_yp = std::max(dev_yp, std::abs(pair.y_plus.values[j] - yp));
        dev_ym = std::max(dev_ym, std::abs(pair.y_minus.values[j] - ym));
    }
    CHECK(dev_up < 1e-10);
    CHECK(dev_um < 1e-10);
    CHECK(dev_yp < 1e-9);
    CHECK(dev_ym < 1e-9);
    CHECK(pair.u_plus_left0 == doctest::Approx(-alpha));
    CHECK(pair.u_minus_right0 == doctest::Approx(alpha));
}

TEST_CASE("zero jump weight glues the halves") {
    Grid g = Grid::centered(8.0, 1.0 / 128.0);
    PresetParams p;
    p.v0 = 0.0;
    p.amp_plus = 0.4;
    p.amp_minus = -0.3;
    auto triple = preset(PresetKind::bump, p, g);
    auto pair = extend_extremal(triple);
    double dev = 0.0;
    for (int j = 0; j < g.count; ++j)
        dev = std::max(dev, std::abs(pair.u_plus.values[j] - pair.u_minus.values[j]));
    CHECK(dev < 1e-12);
    CHECK(sup_abs(pair.v.values) < 1e-12);
    CHECK(v_profile(pair).max_abs() == 0.0);
}

TEST_CASE("restriction recovers the triple exactly") {
    Grid g = Grid::centered(10.0, 1.0 / 64.0);
    PresetParams p;
    p.v0 = 0.7;
    auto triple = preset(PresetKind::bump, p, g);
    auto pair = extend_extremal(triple);
    auto back = restrict_to_triple(pair);
    CHECK(back.v0 == triple.v0);
    CHECK(back.w_plus.values == triple.w_plus.values);
    CHECK(back.w_minus.values == triple.w_minus.values);
}

TEST_CASE("v profile of the delta preset") {
    const double alpha = 1.0;
    Grid g = Grid::centered(20.0, 1.0 / 64.0);
    PresetParams p;
    p.alpha = alpha;
    auto pair = extend_extremal(preset(PresetKind::delta, p, g));
    auto v = v_profile(pair);
    // v(1) = exp(-int_0^1 ds/(1+s)) = 1/2; pointwise route: u_-(1) - u_+(1) = 1/2.
    int j1 = g.index_of(1.0);
    CHECK(v.values[j1] == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(pair.u_minus.values[j1] - pair.u_plus.values[j1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(v.values[g.index_of(0.0)] == alpha);
}

TEST_CASE("v profile agrees with the pointwise difference on a fine grid") {
    Grid g = Grid::centered(8.0, 1.0 / 2048.0);
    PresetParams p;
    p.v0 = 0.7;
    p.center = 2.0;
    p.width = 1.5;
    auto pair = extend_extremal(preset(PresetKind::bump, p, g));
    auto v = v_profile(pair);
    double rel = 0.0;
    for (int j = 0; j < g.count; ++j) {
        if (j == pair.origin_index()) continue; // stored one-sided limits differ there
        double diff = pair.u_minus.values[j] - pair.u_plus.values[j];
        rel = std::max(rel, std::abs(v.values[j] - diff) / std::max(1e-12, std::abs(diff)));
    }
    CHECK(rel < 1e-6);
}

TEST_CASE("y ratio is monotone non-decreasing") {
    Grid g = Grid::centered(10.0, 1.0 / 64.0);
    for (double v0 : {0.0, 0.4, 1.3}) {
        PresetParams p;
        p.v0 = v0;
        auto pair = extend_extremal(preset(PresetKind::bump, p, g));
        bool ok = true;
        for (int j = 0; j + 1 < g.count; ++j) {
            double r0 = pair.y_minus.values[j] / pair.y_plus.values[j];
            double r1 = pair.y_minus.values[j + 1] / pair.y_plus.values[j + 1];
            ok = ok && (r1 >= r0 - 1e-12);
        }
        CHECK(ok);
    }
}

TEST_CASE("weak Miura image") {
    Grid g = Grid::centered(12.0, 1.0 / 256.0);

    SUBCASE("zero representative") {
        RealFunction u(g);
        TestBump tb{0.5, 2.0};
        auto phi = sample_real(g, [&](double x) { return tb.phi(x); });
        auto dphi = sample_real(g, [&](double x) { return tb.dphi(x); });
        CHECK(miura_apply(u, phi, dphi) == 0.0);
    }

    SUBCASE("tanh representative has image 1") {
        // (tanh)' + tanh^2 = sech^2 + 1 - sech^2 = 1, so <q, phi> = int phi.
        auto u = sample_real(g, [](double x) { return std::tanh(x); });
        TestBump tb{-0.5, 3.0};
        auto phi = sample_real(g, [&](double x) { return tb.phi(x); });
        auto dphi = sample_real(g, [&](double x) { return tb.dphi(x); });
        double expected = trapezoid(g, phi.values);
        CHECK(miura_apply(u, phi, dphi) == doctest::Approx(expected).epsilon(1e-6));
    }

    SUBCASE("support touching the boundary is rejected") {
        RealFunction u(g);
        auto phi = sample_real(g, [](double) { return 1.0; });
        auto dphi = sample_real(g, [](double) { return 0.0; });
        CHECK_THROWS_AS(miura_apply(u, phi, dphi), ValidationError);
    }
}

TEST_CASE("Miura images of the two representatives coincide away from the origin") {
    Grid g = Grid::centered(8.0, 1.0 / 1024.0);
    PresetParams p;
    p.v0 = 0.9;
    auto pair = extend_extremal(preset(PresetKind::bump, p, g));
    TestBump tb{2.5, 1.2}; // support (1.3, 3.7), away from 0
    RealFunction phi(g), dphi(g);
    for (int j = 0; j < g.count; ++j) {
        phi.values[j] = tb.phi(g.point(j));
        dphi.values[j] = tb.dphi(g.point(j));
    }
    double a = miura_apply(pair.u_plus, phi, dphi, pair.u_plus_left0);
    double b = miura_apply(pair.u_minus, phi, dphi);
    CHECK(std::abs(a - b) < 1e-6);
}

TEST_CASE("jump weight emerges from shrinking test functions") {
    // <q, phi_eps> - <u_glued' + u_glued^2, phi_eps> -> v0 phi(0); the full
    // representative u_+ realizes <q, .> weakly.
    Grid g = Grid::centered(10.0, 1.0 / 256.0);
    auto run = [&](const ExtremalPair& pair, double v0) {
        RealFunction glued = glued_representative(pair);
        std::vector<double> vals;
        for (double eps : {0.2, 0.1, 0.05}) {
            TestBump tb{0.0, eps * 5.0}; // phi(0) = 1
            RealFunction phi(g), dphi(g);
            for (int j = 0; j < g.count; ++j) {
                phi.values[j] = tb.phi(g.point(j));
                dphi.values[j] = tb.dphi(g.point(j));
            }
            double full = miura_apply(pair.u_plus, phi, dphi, pair.u_plus_left0);
            double cut = miura_apply(glued, phi, dphi);
            vals.push_back(full - cut);
        }
        // Richardson step assuming a leading O(eps) correction.
        double rich = 2.0 * vals[1] - vals[0];
        CHECK(std::abs(vals[2] - v0) < 5e-3);
        CHECK(std::abs(rich - v0) < 5e-3);
    };
    PresetParams pd;
    pd.alpha = 1.0;
    run(extend_extremal(preset(PresetKind::delta, pd, g)), 1.0);
    PresetParams pb;
    pb.v0 = 0.8;
    run(extend_extremal(preset(PresetKind::bump, pb, g)), 0.8);
}

TEST_CASE("preset validation and fixtures") {
    Grid g = Grid::centered(20.0, 1.0 / 64.0);
    SUBCASE("delta requires positive weight") {
        PresetParams p;
        p.alpha = -1.0;
        CHECK_THROWS_AS(preset(PresetKind::delta, p, g), ValidationError);
    }
    SUBCASE("oscillatory parameter ranges") {
        PresetParams p;
        p.alpha = 0.5;
        CHECK_THROWS_AS(preset(PresetKind::oscillatory, p, g), ValidationError);
        p.alpha = 2.0;
        p.beta = 2.5;
        CHECK_THROWS_AS(preset(PresetKind::oscillatory, p, g), ValidationError);
    }
    SUBCASE("oscillatory samples the even profile") {
        PresetParams p;
        p.alpha = 2.0;
        p.beta = 4.0;
        auto t = preset(PresetKind::oscillatory, p, g);
        CHECK(t.v0 == 0.0);
        CHECK(t.truncation_tail_norm > 0.0);
        int j = t.w_plus.grid.index_of(2.0);
        CHECK(t.w_plus.values[j] ==
              doctest::Approx(std::pow(2.0, -2.0) * std::sin(std::pow(2.0, 4.0))));
        // Even extension: w_-(-x) = w_+(x).
        int jm = t.w_minus.grid.index_of(-2.0);
        CHECK(t.w_minus.values[jm] == doctest::Approx(t.w_plus.values[j]));
    }
    SUBCASE("free potential") {
        PresetParams p;
        auto t = preset(PresetKind::free_potential, p, g);
        CHECK(t.v0 == 0.0);
        CHECK(sup_abs(t.w_plus.values) == 0.0);
    }
    SUBCASE("log singular clamps the origin cell") {
        PresetParams p;
        p.alpha = 1.0;
        auto t = preset(PresetKind::log_singular, p, g);
        CHECK(t.w_plus.values[0] == doctest::Approx(std::log(0.5 * g.step)));
        CHECK(std::isfinite(x_norm(t.w_plus)));
    }
    SUBCASE("negative jump weight is rejected") {
        Grid gp(0.0, 1.0 / 64.0, 65), gm(-1.0, 1.0 / 64.0, 65);
        CHECK_THROWS_AS(make_triple(RealFunction(gp), RealFunction(gm), -0.1), ValidationError);
    }
}
