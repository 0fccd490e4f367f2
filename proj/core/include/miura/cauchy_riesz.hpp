#pragma once

#include "miura/fourier.hpp"
#include "miura/zsakns.hpp"

namespace miura {

/// Reflection data on a symmetric wavenumber grid excluding 0, with the
/// regularized profile r~(k) = (1 - |r(k)|^2)/k^2 stored redundantly.
struct ReflectionData {
    Grid k_grid;
    cvec r;
    std::vector<double> r_tilde;
    PotentialClass class_tag = PotentialClass::exceptional;
};

/// Build from raw samples; r_tilde is derived and the class is inferred from
/// the k -> 0 extrapolation.
ReflectionData make_reflection_data(const Grid& k_grid, cvec r);
ReflectionData reflection_from_scattering(const ScatteringData& sd, Side side);

struct MembershipReport {
    bool symmetry_ok = false;
    bool subunitary_ok = false;
    bool decay_ok = false;
    bool consistency_ok = false;
    bool generic_signature_ok = false; // r(0) -> -1 and r~(0) > 0
    bool exceptional_signature_ok = false;

    double max_symmetry_dev = 0.0;
    double min_distance_from_one = 0.0; // min_k (1 - |r|)
    double edge_magnitude = 0.0;        // sup |r| over the outer samples
    double r0 = 0.0;                    // extrapolated r(0) (real by symmetry)
    double r_tilde0 = 0.0;              // extrapolated r~(0)
    double max_consistency_dev = 0.0;   // | r~ k^2 - (1-|r|^2) |

    bool passes(PotentialClass tag) const {
        bool common = symmetry_ok && subunitary_ok && decay_ok && consistency_ok;
        return common &&
               (tag == PotentialClass::generic ? generic_signature_ok : exceptional_signature_ok);
    }
};

MembershipReport validate_membership(const ReflectionData& rd);

/// log[(1 - |r|^2)(k^2+1)/k^2], computed stably as log[(1-|r|^2) + r~].
/// Strictly positive argument on the whole grid or a membership error.
RealFunction log_argument(const ReflectionData& rd);

struct TransmissionReconstruction {
    Grid k_grid;
    cvec t;       // t(k) = k t~(k)/(k+i)
    cvec t_tilde; // invertible outer factor, t~(-k) = conj t~(k)
    double theta = 0.0;
    double symmetry_dev = 0.0; // pre-enforcement deviation of the t~ symmetry
};

/// t from one reflection coefficient: modulus exactly from the log argument,
/// phase from the Riesz projection of the tapered log argument.
TransmissionReconstruction reconstruct_transmission(const ReflectionData& rd);

/// r#(k) = -(t(k)/t(-k)) r(-k); preserves r~ pointwise and the class.
ReflectionData involution(const ReflectionData& rd);
ReflectionData involution(const ReflectionData& rd, const TransmissionReconstruction& tr);

} // namespace miura
