#pragma once

#include <filesystem>

#include "miura/glm.hpp"

namespace miura {

/// ScatteringData CSV: one metadata line "# theta=<v> class=<tag>", then the
/// mandatory header "k,re_a,im_a,re_b,im_b,re_r_plus,im_r_plus,re_r_minus,
/// im_r_minus,re_t,im_t", one row per grid k.
void write_scattering_csv(const std::filesystem::path& path, const ScatteringData& sd);

/// ReflectionData CSV: metadata "# class=<tag>", header "k,re_r,im_r,r_tilde".
void write_reflection_csv(const std::filesystem::path& path, const ReflectionData& rd);
ReflectionData read_reflection_csv(const std::filesystem::path& path);

/// Potential JSON: {"preset": name, "params": {...}} or
/// {"samples": {"x0": ..., "dx": ..., "w_plus": [...], "w_minus": [...], "v0": ...}}.
/// x0 is the left end of the w_minus grid; w_plus starts at 0.
void write_potential_json(const std::filesystem::path& path, const RiccatiTriple& triple);

struct PotentialInput {
    bool is_preset = false;
    PresetKind kind = PresetKind::delta;
    PresetParams params;
    RiccatiTriple triple; // filled when !is_preset
};
PotentialInput read_potential_json(const std::filesystem::path& path);

/// Resolve to a triple on the requested grid (presets are sampled; sample
/// files must match the grid).
RiccatiTriple resolve_potential(const PotentialInput& input, const Grid& x_grid);

void write_membership_json(const std::filesystem::path& path, const MembershipReport& rep,
                           PotentialClass tag);
void write_reconstruction_diagnostics_json(const std::filesystem::path& path,
                                           const ReconstructionResult& rec,
                                           const MarchenkoKernel& kernels);

std::string class_name(PotentialClass tag);

} // namespace miura
