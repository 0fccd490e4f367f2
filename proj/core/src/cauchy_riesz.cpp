#include "miura/cauchy_riesz.hpp"

#include <algorithm>
#include <cmath>

namespace miura {

namespace {

int mirror_index(int m, int j) { return m - 1 - j; }

void require_symmetric(const Grid& kg) {
    int m = kg.count;
    if (m % 2 != 0 || std::abs(kg.point(m / 2) + kg.point(m / 2 - 1)) > 1e-9 * kg.step)
        throw ValidationError("reflection.k_grid", "grid must be symmetric with 0 excluded");
}

} // namespace

ReflectionData make_reflection_data(const Grid& k_grid, cvec r) {
    require_symmetric(k_grid);
    if (static_cast<int>(r.size()) != k_grid.count)
        throw ValidationError("reflection.values", "length mismatch with k grid");
    ReflectionData rd;
    rd.k_grid = k_grid;
    rd.r = std::move(r);
    rd.r_tilde.resize(k_grid.count);
    for (int j = 0; j < k_grid.count; ++j) {
        double k = k_grid.point(j);
        rd.r_tilde[j] = (1.0 - std::norm(rd.r[j])) / (k * k);
    }
    std::vector<double> re(k_grid.count);
    for (int j = 0; j < k_grid.count; ++j) re[j] = rd.r[j].real();
    double r0 = extrapolate_even_to_zero(k_grid, std::span<const double>(re));
    double rt0 = extrapolate_even_to_zero(k_grid, std::span<const double>(rd.r_tilde));
    rd.class_tag = (std::abs(r0 + 1.0) <= 1e-3 && rt0 > 0.0) ? PotentialClass::generic
                                                             : PotentialClass::exceptional;
    return rd;
}

ReflectionData reflection_from_scattering(const ScatteringData& sd, Side side) {
    ReflectionData rd = make_reflection_data(sd.k_grid, side == Side::right ? sd.r_plus : sd.r_minus);
    rd.class_tag = sd.class_tag; // the direct map's theta test is authoritative
    return rd;
}

MembershipReport validate_membership(const ReflectionData& rd) {
    const Grid& kg = rd.k_grid;
    const int m = kg.count;
    MembershipReport rep;

    double sym = 0.0, consist = 0.0;
    double min_dist = 1e300, sup = 0.0;
    for (int j = 0; j < m; ++j) {
        sym = std::max(sym, std::abs(rd.r[mirror_index(m, j)] - std::conj(rd.r[j])));
        double k = kg.point(j);
        consist = std::max(consist, std::abs(rd.r_tilde[j] * k * k - (1.0 - std::norm(rd.r[j]))));
        double a = std::abs(rd.r[j]);
        sup = std::max(sup, a);
        min_dist = std::min(min_dist, 1.0 - a);
    }
    rep.max_symmetry_dev = sym;
    rep.symmetry_ok = sym <= 1e-8;
    rep.min_distance_from_one = min_dist;
    rep.subunitary_ok = min_dist > 0.0;
    rep.max_consistency_dev = consist;
    rep.consistency_ok = consist <= 1e-10 * (1.0 + sup);

    int edge = std::max(1, m / 50);
    double edge_mag = 0.0;
    for (int j = 0; j < edge; ++j) {
        edge_mag = std::max(edge_mag, std::abs(rd.r[j]));
        edge_mag = std::max(edge_mag, std::abs(rd.r[m - 1 - j]));
    }
    rep.edge_magnitude = edge_mag;
    rep.decay_ok = (sup == 0.0) || (edge_mag <= 0.05 * sup);

    std::vector<double> re(m);
    for (int j = 0; j < m; ++j) re[j] = rd.r[j].real();
    rep.r0 = extrapolate_even_to_zero(kg, std::span<const double>(re));
    rep.r_tilde0 = extrapolate_even_to_zero(kg, std::span<const double>(rd.r_tilde));
    rep.generic_signature_ok = std::abs(rep.r0 + 1.0) <= 1e-3 && rep.r_tilde0 > 0.0;
    rep.exceptional_signature_ok = std::abs(rep.r0) < 1.0;
    return rep;
}

RealFunction log_argument(const ReflectionData& rd) {
    if (rd.class_tag != PotentialClass::generic)
        throw ValidationError("log_argument.class", "operation requires generic-class data");
    RealFunction out(rd.k_grid);
    for (int j = 0; j < rd.k_grid.count; ++j) {
        double arg = (1.0 - std::norm(rd.r[j])) + rd.r_tilde[j];
        if (!(arg > 0.0))
            throw ValidationError("log_argument.positivity",
                                  "argument " + std::to_string(arg) + " at k = " +
                                      std::to_string(rd.k_grid.point(j)));
        out.values[j] = std::log(arg);
    }
    return out;
}

TransmissionReconstruction reconstruct_transmission(const ReflectionData& rd) {
    MembershipReport rep = validate_membership(rd);
    if (!rep.passes(PotentialClass::generic))
        throw ValidationError("reconstruct_transmission.membership",
                              "reflection data fails the generic-class checks (r(0) = " +
                                  std::to_string(rep.r0) + ")");
    RealFunction ell = log_argument(rd);
    const Grid& kg = rd.k_grid;
    const int m = kg.count;

    // Zero-extend and taper the log argument before projecting; the taper
    // suppresses ringing from the hard grid truncation. Modulus and phase are
    // both taken from the projection of the tapered argument, which keeps
    // |t~|^2 = e^ell exact wherever the taper is 1 and the inverse transform
    // of t~ - 1 one-sided on the lattice.
    SampledFunction ell_s(kg, Domain::wavenumber);
    auto taper = raised_cosine_taper(m, 0.05);
    for (int j = 0; j < m; ++j) ell_s.values[j] = ell.values[j] * taper[j];
    SampledFunction proj = cauchy_project(ell_s, HalfLine::plus);

    TransmissionReconstruction tr;
    tr.k_grid = kg;
    tr.t_tilde.resize(m);
    tr.t.resize(m);
    for (int j = 0; j < m; ++j)
        tr.t_tilde[j] = std::polar(std::exp(0.5 * ell_s.values[j].real()), proj.values[j].imag());

    double sym = 0.0;
    for (int j = 0; j < m; ++j)
        sym = std::max(sym, std::abs(tr.t_tilde[mirror_index(m, j)] - std::conj(tr.t_tilde[j])));
    tr.symmetry_dev = sym;
    if (sym > 1e-8)
        throw SolverError("reconstruct_transmission.symmetry",
                          "t~ symmetry deviation " + std::to_string(sym));
    for (int j = 0; j < m / 2; ++j) {
        cplx s = 0.5 * (tr.t_tilde[m - 1 - j] + std::conj(tr.t_tilde[j]));
        tr.t_tilde[j] = std::conj(s);
        tr.t_tilde[m - 1 - j] = s;
    }

    for (int j = 0; j < m; ++j) {
        double k = kg.point(j);
        tr.t[j] = k * tr.t_tilde[j] / cplx(k, 1.0);
    }

    // theta = lim 2ik/t(k) = -2/t~(0).
    cvec g(m);
    for (int j = 0; j < m; ++j) g[j] = cplx(0.0, 2.0 * kg.point(j)) / tr.t[j];
    tr.theta = extrapolate_even_to_zero(kg, std::span<const cplx>(g)).real();
    return tr;
}

ReflectionData involution(const ReflectionData& rd, const TransmissionReconstruction& tr) {
    const int m = rd.k_grid.count;
    cvec rs(m);
    for (int j = 0; j < m; ++j) {
        cplx t_minus = tr.t[mirror_index(m, j)];
        rs[j] = -(tr.t[j] / t_minus) * rd.r[mirror_index(m, j)];
    }
    ReflectionData out;
    out.k_grid = rd.k_grid;
    out.r = std::move(rs);
    out.r_tilde = rd.r_tilde; // |t(k)/t(-k)| = 1 preserves the profile exactly
    out.class_tag = rd.class_tag;
    return out;
}

ReflectionData involution(const ReflectionData& rd) {
    return involution(rd, reconstruct_transmission(rd));
}

} // namespace miura
