#pragma once

#include "miura/grid.hpp"

namespace miura {

/// Transform conventions used throughout:
///   forward:  f^(k) = int e^{+2ikx} f(x) dx, sampled on the conjugate grid
///   inverse:  f(x)  = (1/pi) int e^{-2ikx} f^(k) dk   (KernelSign::minus)
///             F(x)  = (1/pi) int e^{+2ikx} g(k) dk    (KernelSign::plus)
/// With the pairing rule count*dx*dk = pi and half-integer k samples, the
/// discrete forward/inverse(minus) pair is exactly unitary: no interpolation,
/// no windowing loss at the samples.
enum class KernelSign { plus, minus };

enum class DecayGuard { enforce, skip };

/// Magnitudes at the first/last sample relative to the max; used by the decay
/// guards and reported as truncation diagnostics by callers that skip them.
struct EdgeReport {
    double left = 0.0;
    double right = 0.0;
    double max = 0.0;
};
EdgeReport edge_magnitudes(const SampledFunction& f);

SampledFunction fourier_forward(const SampledFunction& f, DecayGuard guard = DecayGuard::enforce);

/// Inverse onto the canonical centered space partner of g's wavenumber grid.
SampledFunction fourier_inverse(const SampledFunction& g, KernelSign sign = KernelSign::minus,
                                DecayGuard guard = DecayGuard::enforce);

/// Inverse onto an explicit space grid (must satisfy the pairing rule).
SampledFunction fourier_inverse_onto(const SampledFunction& g, const Grid& space_grid,
                                     KernelSign sign = KernelSign::minus,
                                     DecayGuard guard = DecayGuard::enforce);

/// Centered space grid paired with a conjugate wavenumber grid.
Grid space_partner(const Grid& k_grid);

enum class HalfLine { plus, minus };

/// Riesz projections: C+ keeps the part of f whose inverse transform is
/// supported on x >= 0 (the x = 0 sample belongs to the plus side), C- the
/// x < 0 part with the sign flipped, so that C+ - C- = I and C+- are
/// idempotent exactly on the lattice.
SampledFunction cauchy_project(const SampledFunction& f, HalfLine side);

/// Raised-cosine window rising over the outer `fraction` of samples each side.
std::vector<double> raised_cosine_taper(int n, double fraction = 0.05);
SampledFunction apply_taper(const SampledFunction& f, double fraction = 0.05);

/// C-infinity window (mollifier ramp) over the outer `fraction` of samples.
std::vector<double> smooth_taper(int n, double fraction = 0.15);

/// Inverse transform for data with a slow O(1/k) tail (reflection-type).
/// Hard truncation of such a tail at the conjugate-grid edge rings like
/// O(1/(kmax |x|)); here the unmodulated pole c/(2ik - beta), with c estimated
/// from the outermost samples, is inverted in closed form and the O(1/k^2)
/// residual is smoothly tapered before the discrete transform.
SampledFunction inverse_with_pole_correction(const SampledFunction& g, KernelSign sign,
                                             double taper_fraction = 0.15);

} // namespace miura
