#pragma once

#include <optional>
#include <string>

#include "miura/grid.hpp"

namespace miura {

/// The potential's identity: right/left Riccati data plus the jump weight.
/// w_plus lives on [0, L], w_minus on [-L, 0]; v0 >= 0. v0 > 0 marks the
/// generic class, v0 = 0 the exceptional one.
struct RiccatiTriple {
    RealFunction w_plus;
    RealFunction w_minus;
    double v0 = 0.0;
    /// X-norm of the part of the preset truncated outside the grid (0 for
    /// compactly supported data).
    double truncation_tail_norm = 0.0;

    Grid full_grid() const;
};

RiccatiTriple make_triple(RealFunction w_plus, RealFunction w_minus, double v0,
                          double truncation_tail_norm = 0.0);

/// Extremal representatives on the full line. u_plus/u_minus are sampled on
/// the full grid with the value at x = 0 taken from their native side; the
/// other one-sided limit at 0 is carried separately (both representatives jump
/// there by v0 plus the w mismatch).
struct ExtremalPair {
    Grid grid;
    RealFunction u_plus;
    RealFunction u_minus;
    RealFunction v;
    RealFunction y_plus;
    RealFunction y_minus;
    double u_plus_left0 = 0.0;   // u_plus(0-)
    double u_minus_right0 = 0.0; // u_minus(0+)
    double v0 = 0.0;

    int origin_index() const { return grid.index_of(0.0); }
};

ExtremalPair extend_extremal(const RiccatiTriple& triple);

/// Restriction back to the defining data (exact inverse of extend_extremal).
RiccatiTriple restrict_to_triple(const ExtremalPair& pair);

/// Jump profile by the exponential identity v(x) = v0 exp(-int_0^x (u+ + u-)).
RealFunction v_profile(const ExtremalPair& pair);

/// Weak Miura image paired with a test function: <u' + u^2, phi> evaluated as
/// -int u phi' + int u^2 phi. phi must vanish near the grid boundary; dphi is
/// its exact derivative. origin_left supplies u(0-) when u jumps at 0 so the
/// origin cell is integrated one-sidedly.
double miura_apply(const RealFunction& u, const RealFunction& phi, const RealFunction& dphi,
                   std::optional<double> origin_left = std::nullopt);

/// The glued representative: u_minus on x < 0, u_plus on x > 0 (midpoint at 0).
RealFunction glued_representative(const ExtremalPair& pair);

enum class PresetKind { delta, bump, oscillatory, log_singular, free_potential };

struct PresetParams {
    double alpha = 1.0;      // delta weight / oscillatory decay / log strength
    double beta = 4.0;       // oscillatory frequency power
    double v0 = 0.7;         // bump jump weight
    double amp_plus = 0.3;   // bump amplitudes
    double amp_minus = -0.2;
    double center = 2.0;     // bump center distance from the origin
    double width = 1.5;      // bump half-width
};

PresetKind preset_kind_from_name(const std::string& name);
std::string preset_name(PresetKind kind);

RiccatiTriple preset(PresetKind kind, const PresetParams& params, const Grid& x_grid);

} // namespace miura
