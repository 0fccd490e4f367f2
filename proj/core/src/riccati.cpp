#include "miura/riccati.hpp"

#include <cmath>

namespace miura {

namespace {

void check_finite(const RealFunction& f, const char* what) {
    for (double v : f.values)
        if (!std::isfinite(v)) throw ValidationError(what, "non-finite sample");
}

// Smooth bump on (-1, 1), normalized to 1 at the center.
double bump_profile(double t) {
    if (std::abs(t) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

// C-infinity cutoff: 1 for s <= 0, 0 for s >= 1.
double smooth_cutoff(double s) {
    if (s <= 0.0) return 1.0;
    if (s >= 1.0) return 0.0;
    double a = std::exp(-1.0 / s);
    double b = std::exp(-1.0 / (1.0 - s));
    return b / (a + b);
}

} // namespace

Grid RiccatiTriple::full_grid() const {
    return Grid(w_minus.grid.start, w_minus.grid.step, w_minus.grid.count - 1 + w_plus.grid.count);
}

RiccatiTriple make_triple(RealFunction w_plus, RealFunction w_minus, double v0,
                          double truncation_tail_norm) {
    if (v0 < 0.0) throw ValidationError("riccati.v0", "jump weight must be nonnegative");
    if (std::abs(w_plus.grid.start) > 1e-12)
        throw ValidationError("riccati.w_plus", "right data must start at x = 0");
    if (std::abs(w_minus.grid.back()) > 1e-9 * w_minus.grid.step)
        throw ValidationError("riccati.w_minus", "left data must end at x = 0");
    if (std::abs(w_plus.grid.step - w_minus.grid.step) > 1e-12)
        throw ValidationError("riccati.grids", "half-line steps differ");
    check_finite(w_plus, "riccati.w_plus");
    check_finite(w_minus, "riccati.w_minus");
    return RiccatiTriple{std::move(w_plus), std::move(w_minus), v0, truncation_tail_norm};
}

ExtremalPair extend_extremal(const RiccatiTriple& triple) {
    const Grid g = triple.full_grid();
    const int n0 = g.index_of(0.0);
    const int n = g.count;
    const double a = triple.v0;
    const auto& wp = triple.w_plus.values;  // index j <-> grid index n0 + j
    const auto& wm = triple.w_minus.values; // index j <-> grid index j

    ExtremalPair pair;
    pair.grid = g;
    pair.v0 = a;
    pair.u_plus = RealFunction(g);
    pair.u_minus = RealFunction(g);
    pair.v = RealFunction(g);
    pair.y_plus = RealFunction(g);
    pair.y_minus = RealFunction(g);

    // Native sides: y = exp(int_0^x w).
    std::vector<double> ip = cumtrapz(triple.w_plus.grid, wp);
    for (int j = 0; j < triple.w_plus.grid.count; ++j) pair.y_plus.values[n0 + j] = std::exp(ip[j]);
    std::vector<double> im = cumtrapz(triple.w_minus.grid, wm); // from -L
    const double im0 = im.back();                               // int_{-L}^{0} w_minus
    for (int j = 0; j <= n0; ++j) pair.y_minus.values[j] = std::exp(im[j] - im0);

    // y_minus on the right: y_- = y_+ (1 + a J), J = int_0^x y_+^{-2}.
    std::vector<double> inv2p(triple.w_plus.grid.count);
    for (int j = 0; j < triple.w_plus.grid.count; ++j) {
        double y = pair.y_plus.values[n0 + j];
        inv2p[j] = 1.0 / (y * y);
    }
    std::vector<double> jp = cumtrapz(triple.w_plus.grid, inv2p);
    for (int j = 0; j < triple.w_plus.grid.count; ++j)
        pair.y_minus.values[n0 + j] = pair.y_plus.values[n0 + j] * (1.0 + a * jp[j]);

    // y_plus on the left: y_+ = y_- (1 + a K), K = int_x^0 y_-^{-2}.
    std::vector<double> inv2m(triple.w_minus.grid.count);
    for (int j = 0; j <= n0; ++j) {
        double y = pair.y_minus.values[j];
        inv2m[j] = 1.0 / (y * y);
    }
    std::vector<double> jm = cumtrapz(triple.w_minus.grid, inv2m);
    const double jm0 = jm.back();
    for (int j = 0; j <= n0; ++j)
        pair.y_plus.values[j] = pair.y_minus.values[j] * (1.0 + a * (jm0 - jm[j]));

    for (int j = 0; j < n; ++j) {
        if (!(pair.y_plus.values[j] > 0.0) || !(pair.y_minus.values[j] > 0.0))
            throw ValidationError("riccati.extend", "extremal solution lost positivity");
    }

    // Representatives. Native halves are copied; the other half uses the
    // closed-form logarithmic-derivative quotient instead of differencing y.
    for (int j = 0; j < triple.w_plus.grid.count; ++j) pair.u_plus.values[n0 + j] = wp[j];
    for (int j = 0; j <= n0; ++j) pair.u_minus.values[j] = wm[j];
    for (int j = 0; j < n0; ++j) {
        double denom = 1.0 + a * (jm0 - jm[j]);
        pair.u_plus.values[j] = wm[j] - a * inv2m[j] / denom;
    }
    for (int j = 1; j < triple.w_plus.grid.count; ++j) {
        double denom = 1.0 + a * jp[j];
        pair.u_minus.values[n0 + j] = wp[j] + a * inv2p[j] / denom;
    }
    pair.u_plus_left0 = wm[n0] - a;
    pair.u_minus_right0 = wp[0] + a;

    for (int j = 0; j < n; ++j) pair.v.values[j] = pair.u_minus.values[j] - pair.u_plus.values[j];
    pair.v.values[n0] = a; // both one-sided limits equal v0 exactly

    return pair;
}

RiccatiTriple restrict_to_triple(const ExtremalPair& pair) {
    const int n0 = pair.origin_index();
    Grid gp(0.0, pair.grid.step, pair.grid.count - n0);
    Grid gm(pair.grid.start, pair.grid.step, n0 + 1);
    RealFunction wp(gp), wm(gm);
    for (int j = 0; j < gp.count; ++j) wp.values[j] = pair.u_plus.values[n0 + j];
    for (int j = 0; j <= n0; ++j) wm.values[j] = pair.u_minus.values[j];
    return make_triple(std::move(wp), std::move(wm), pair.v0);
}

RealFunction v_profile(const ExtremalPair& pair) {
    const int n0 = pair.origin_index();
    const double dx = pair.grid.step;
    RealFunction out(pair.grid);
    // One-sided sums of u_+ + u_- on each side of the jump.
    std::vector<double> s(pair.grid.count);
    for (int j = 0; j < pair.grid.count; ++j)
        s[j] = pair.u_plus.values[j] + pair.u_minus.values[j];
    const double s0_right = pair.u_plus.values[n0] + pair.u_minus_right0;
    const double s0_left = pair.u_plus_left0 + pair.u_minus.values[n0];

    out.values[n0] = pair.v0;
    double acc = 0.0;
    for (int j = n0 + 1; j < pair.grid.count; ++j) {
        double sl = (j == n0 + 1) ? s0_right : s[j - 1];
        acc += 0.5 * dx * (sl + s[j]);
        out.values[j] = pair.v0 * std::exp(-acc);
    }
    acc = 0.0;
    for (int j = n0 - 1; j >= 0; --j) {
        double sr = (j == n0 - 1) ? s0_left : s[j + 1];
        acc += 0.5 * dx * (sr + s[j]);
        out.values[j] = pair.v0 * std::exp(acc);
    }
    return out;
}

double miura_apply(const RealFunction& u, const RealFunction& phi, const RealFunction& dphi,
                   std::optional<double> origin_left) {
    const Grid& g = u.grid;
    if (!(phi.grid == g) || !(dphi.grid == g))
        throw ValidationError("miura_apply.grid", "test function grid mismatch");
    for (int j : {0, 1, g.count - 2, g.count - 1})
        if (std::abs(phi.values[j]) > 0.0)
            throw ValidationError("miura_apply.support", "test function touches the grid boundary");

    int n0 = g.has_point(0.0) ? g.index_of(0.0) : -1;
    auto integrand = [&](int j, double uj) { return -uj * dphi.values[j] + uj * uj * phi.values[j]; };
    double sum = 0.0;
    for (int c = 0; c + 1 < g.count; ++c) {
        double ul = u.values[c];
        double ur = u.values[c + 1];
        if (origin_left && n0 >= 0 && c + 1 == n0) ur = *origin_left; // cell ending at 0 from the left
        sum += 0.5 * g.step * (integrand(c, ul) + integrand(c + 1, ur));
    }
    return sum;
}

RealFunction glued_representative(const ExtremalPair& pair) {
    const int n0 = pair.origin_index();
    RealFunction out(pair.grid);
    for (int j = 0; j < n0; ++j) out.values[j] = pair.u_minus.values[j];
    for (int j = n0 + 1; j < pair.grid.count; ++j) out.values[j] = pair.u_plus.values[j];
    out.values[n0] = 0.5 * (pair.u_minus.values[n0] + pair.u_plus.values[n0]);
    return out;
}

PresetKind preset_kind_from_name(const std::string& name) {
    if (name == "delta") return PresetKind::delta;
    if (name == "bump") return PresetKind::bump;
    if (name == "oscillatory") return PresetKind::oscillatory;
    if (name == "log_singular") return PresetKind::log_singular;
    if (name == "free") return PresetKind::free_potential;
    throw ValidationError("preset.name", "unknown preset '" + name + "'");
}

std::string preset_name(PresetKind kind) {
    switch (kind) {
        case PresetKind::delta: return "delta";
        case PresetKind::bump: return "bump";
        case PresetKind::oscillatory: return "oscillatory";
        case PresetKind::log_singular: return "log_singular";
        case PresetKind::free_potential: return "free";
    }
    return "?";
}

RiccatiTriple preset(PresetKind kind, const PresetParams& p, const Grid& x_grid) {
    const int n0 = x_grid.index_of(0.0);
    Grid gp(0.0, x_grid.step, x_grid.count - n0);
    Grid gm(x_grid.start, x_grid.step, n0 + 1);
    RealFunction wp(gp), wm(gm);
    double tail = 0.0;
    double v0 = 0.0;

    switch (kind) {
        case PresetKind::delta: {
            if (!(p.alpha > 0.0)) throw ValidationError("preset.delta", "alpha must be positive");
            v0 = p.alpha;
            break;
        }
        case PresetKind::free_potential:
            break;
        case PresetKind::bump: {
            if (p.v0 < 0.0) throw ValidationError("preset.bump", "v0 must be nonnegative");
            if (!(p.center - p.width >= 0.0) || !(p.center + p.width <= -x_grid.start))
                throw ValidationError("preset.bump", "bump support must lie inside a half-line");
            v0 = p.v0;
            for (int j = 0; j < gp.count; ++j)
                wp.values[j] = p.amp_plus * bump_profile((gp.point(j) - p.center) / p.width);
            for (int j = 0; j < gm.count; ++j)
                wm.values[j] = p.amp_minus * bump_profile((gm.point(j) + p.center) / p.width);
            break;
        }
        case PresetKind::oscillatory: {
            if (!(p.alpha > 1.0) || !(p.beta > p.alpha + 1.0))
                throw ValidationError("preset.oscillatory", "need alpha > 1 and beta > alpha + 1");
            auto u = [&](double x) {
                double ax = std::abs(x);
                if (ax == 0.0) return 0.0;
                return std::pow(ax, -p.alpha) * std::sin(std::pow(ax, p.beta));
            };
            for (int j = 0; j < gp.count; ++j) wp.values[j] = u(gp.point(j));
            for (int j = 0; j < gm.count; ++j) wm.values[j] = u(gm.point(j));
            double l = -x_grid.start;
            tail = std::pow(l, 1.0 - p.alpha) / (p.alpha - 1.0) +
                   std::sqrt(std::pow(l, 1.0 - 2.0 * p.alpha) / (2.0 * p.alpha - 1.0));
            break;
        }
        case PresetKind::log_singular: {
            if (p.alpha == 0.0) throw ValidationError("preset.log_singular", "alpha must be nonzero");
            double clamp = 0.5 * x_grid.step;
            auto u = [&](double x) {
                double ax = std::max(std::abs(x), clamp); // one-cell clamp of the log singularity
                return p.alpha * smooth_cutoff(std::abs(x) - 1.0) * std::log(ax);
            };
            for (int j = 0; j < gp.count; ++j) wp.values[j] = u(gp.point(j));
            for (int j = 0; j < gm.count; ++j) wm.values[j] = u(gm.point(j));
            break;
        }
    }
    return make_triple(std::move(wp), std::move(wm), v0, tail);
}

} // namespace miura
