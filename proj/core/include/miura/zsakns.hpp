#pragma once

#include <array>

#include "miura/riccati.hpp"

namespace miura {

enum class Side { right, left };
enum class PotentialClass { generic, exceptional };

/// Per-cell endpoint values of a representative, one-sided at the origin jump.
struct CellProfile {
    Grid grid;
    std::vector<double> left;  // value at the lower cell edge (from inside the cell)
    std::vector<double> right; // value at the upper cell edge (from inside the cell)
};

CellProfile cell_profile(const ExtremalPair& pair, Side side);

/// Jost solution with its quasi-derivative f' - u f, referenced to the
/// representative of `side`.
struct JostSolution {
    Side side = Side::right;
    double k = 0.0;
    Grid x_grid;
    cvec f;
    cvec f_quasi;
};

enum class IntegrationEnd { right_end, left_end };

/// Matrix solution of dPsi/dx = ik sigma3 Psi + Q Psi with off-diagonal u,
/// normalized to exp(ikx sigma3) at the starting end. Row-major 2x2 entries.
std::vector<std::array<cplx, 4>> integrate_akns(const CellProfile& u, double k, IntegrationEnd from);

JostSolution jost(Side side, const ExtremalPair& pair, double k);

/// y1 y2^[1] - y2 y1^[1] per grid point. When the solutions reference
/// different representatives, y1's quasi-derivative is converted with the
/// sampled jump profile v: f^[1],plus = f^[1],minus + v f.
cvec modified_wronskian(const JostSolution& y1, const JostSolution& y2,
                        const RealFunction* v_conversion = nullptr);

struct ScatteringData {
    Grid k_grid;
    cvec a, b;
    cvec a_reg, b_reg; // k/(k+i) regularizations
    cvec r_plus, r_minus, t;
    double theta = 0.0;
    PotentialClass class_tag = PotentialClass::exceptional;
    // Diagnostics
    double max_unitarity_dev = 0.0; // | |a|^2 - |b|^2 - 1 |
    double max_det_drift = 0.0;
    double wronskian_x_dev = 0.0; // constancy of W{f-, f+} over x at a sample k
};

struct ScatteringOptions {
    int jobs = 1;
    bool check_wronskian_constancy = true;
};

ScatteringData scattering(const ExtremalPair& pair, const Grid& k_grid,
                          const ScatteringOptions& opts = {});

/// Zero-energy Jost solutions (strictly positive).
struct ZeroEnergyJost {
    RealFunction f_plus;
    RealFunction f_minus;
};
ZeroEnergyJost zero_energy_jost(const ExtremalPair& pair);

/// Relative L2 mass on the negative half-line of the inverse transform of the
/// Hardy combination m(x,-k) + e^{+-2ikx} r(k) m(x,k) - 1. Near zero when the
/// reflection data and the potential are consistent.
double hardy_support_mass(const ExtremalPair& pair, const ScatteringData& sd, double x, Side side);

} // namespace miura
