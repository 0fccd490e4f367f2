#pragma once

#include "miura/cauchy_riesz.hpp"

namespace miura {

/// Marchenko kernels: F from the right reflection coefficient (e^{+2ikx}
/// transform), F# from the left one (e^{-2ikx}). Real-valued on the space grid.
struct MarchenkoKernel {
    RealFunction F;
    RealFunction F_sharp;
    double edge_mass_f = 0.0;       // |r| at the conjugate-grid edge (truncation indicator)
    double edge_mass_f_sharp = 0.0;
};

MarchenkoKernel marchenko_kernels(const ReflectionData& r, const ReflectionData& r_sharp);

struct GlmOptions {
    double zeta_half_width = -1.0; // default: the grid half-width
    int power_iterations = 20;
    double cg_rel_tol = 1e-12;
    int cg_max_iterations = 0;     // 0: 40 * size
    int dense_size_threshold = 200;
    bool force_dense = false;
    int jobs = 1;
};

struct GlmSolution {
    double x = 0.0;
    Grid zeta_grid;                // [0, L_z] (right) or [-L_z, 0] (left)
    std::vector<double> gamma12;
    std::vector<double> gamma11;
    double solver_residual = 0.0;        // backward error of the (I - T^2) solve
    double operator_norm_estimate = 0.0; // power-iteration estimate of ||T||
    double solvability_margin = 0.0;     // 1 - ||T||^2 estimate
    int iterations = 0;
    bool dense_path = false;
};

/// (T_F(x) psi)(y) = int_0^inf psi(t) F(x + y + t) dt by trapezoid quadrature;
/// psi sampled on [0, (count-1) dx]. Direct evaluation, used by tests and the
/// dense path; the solver uses an FFT Hankel product behind the same contract.
std::vector<double> apply_kernel_operator(const RealFunction& F, double x,
                                          std::span<const double> psi);

/// Solve the Gelfand-Levitan-Marchenko system (I - T_F^2(x)) Gamma12 = -F(x+.)
/// on the zeta half-line; Gamma11 = -T Gamma12. The left problem is the mirror
/// image (x -> -x, zeta -> -zeta, kernel s -> F(-s)) of the right one.
GlmSolution solve_glm(const RealFunction& F, double x, Side side, const GlmOptions& opts = {});

/// L2(zeta) residual of K(x,zeta) + F(x+zeta) + int K(x,t) F(x+t+zeta) dt
/// for K = Gamma11 + Gamma12 from a right-problem solution.
double kernel_equation_residual(const RealFunction& F, const GlmSolution& sol);

struct ReconstructionDiagnostics {
    std::vector<double> solver_residual;
    std::vector<double> operator_norm;
    std::vector<int> iterations;
    double max_solver_residual = 0.0;
    double min_solvability_margin = 1.0;
    double max_jump_w_diff = 0.0; // max adjacent-sample jump of w# - w
    bool v0_clamped = false;
};

struct ReconstructionResult {
    RiccatiTriple triple;
    RealFunction w_full;
    RealFunction w_sharp_full;
    double v0_readout = 0.0;
    ReconstructionDiagnostics diagnostics;
};

ReconstructionResult reconstruct_riccati(const MarchenkoKernel& kernels, const Grid& x_grid,
                                         const GlmOptions& opts = {});

struct ReconstructedJost {
    cvec f;       // e^{ikx}(1 + int_0^inf K(x,z) e^{2ikz} dz)
    cvec f_sharp; // e^{-ikx}(1 + int_{-inf}^0 K#(x,z) e^{-2ikz} dz)
};

ReconstructedJost reconstructed_jost(const MarchenkoKernel& kernels, double x, const Grid& k_grid,
                                     const GlmOptions& opts = {});

/// a = 1/t and b = r# a assembled from the transmission reconstruction.
struct CoefficientPair {
    cvec a, b;
};
CoefficientPair scattering_coefficients_from_reflection(const TransmissionReconstruction& tr,
                                                        const ReflectionData& r_sharp);

struct ConsistencyReport {
    double max_residual = 0.0;   // normalized residual of both exchange relations
    double max_unitarity_dev = 0.0;
};

ConsistencyReport consistency_check(const MarchenkoKernel& kernels, const CoefficientPair& ab,
                                    std::span<const double> x_samples, const Grid& k_grid,
                                    const GlmOptions& opts = {});

} // namespace miura
