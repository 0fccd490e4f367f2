#include "miura/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace miura {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("io.open", "cannot open " + path.string() + " for writing");
    return out;
}

json grid_json(const Grid& g) {
    return json{{"start", g.start}, {"step", g.step}, {"count", g.count}};
}

} // namespace

std::string class_name(PotentialClass tag) {
    return tag == PotentialClass::generic ? "generic" : "exceptional";
}

void write_scattering_csv(const std::filesystem::path& path, const ScatteringData& sd) {
    auto out = open_out(path);
    out << "# theta=" << fmt(sd.theta) << " class=" << class_name(sd.class_tag) << "\n";
    out << "k,re_a,im_a,re_b,im_b,re_r_plus,im_r_plus,re_r_minus,im_r_minus,re_t,im_t\n";
    for (int j = 0; j < sd.k_grid.count; ++j) {
        out << fmt(sd.k_grid.point(j)) << ',' << fmt(sd.a[j].real()) << ',' << fmt(sd.a[j].imag())
            << ',' << fmt(sd.b[j].real()) << ',' << fmt(sd.b[j].imag()) << ','
            << fmt(sd.r_plus[j].real()) << ',' << fmt(sd.r_plus[j].imag()) << ','
            << fmt(sd.r_minus[j].real()) << ',' << fmt(sd.r_minus[j].imag()) << ','
            << fmt(sd.t[j].real()) << ',' << fmt(sd.t[j].imag()) << "\n";
    }
}

void write_reflection_csv(const std::filesystem::path& path, const ReflectionData& rd) {
    auto out = open_out(path);
    out << "# class=" << class_name(rd.class_tag) << "\n";
    out << "k,re_r,im_r,r_tilde\n";
    for (int j = 0; j < rd.k_grid.count; ++j) {
        out << fmt(rd.k_grid.point(j)) << ',' << fmt(rd.r[j].real()) << ',' << fmt(rd.r[j].imag())
            << ',' << fmt(rd.r_tilde[j]) << "\n";
    }
}

ReflectionData read_reflection_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("io.open", "cannot open " + path.string());
    std::string line;
    std::string cls = "generic";
    std::vector<double> k;
    cvec r;
    std::vector<double> rt;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto pos = line.find("class=");
            if (pos != std::string::npos) cls = line.substr(pos + 6);
            continue;
        }
        if (!header_seen) { // mandatory header row
            header_seen = true;
            continue;
        }
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != 4)
            throw ValidationError("io.reflection_csv", "expected 4 columns, got row of size " +
                                                           std::to_string(row.size()));
        k.push_back(row[0]);
        r.emplace_back(row[1], row[2]);
        rt.push_back(row[3]);
    }
    if (k.size() < 4) throw ValidationError("io.reflection_csv", "too few rows");
    double dk = k[1] - k[0];
    for (std::size_t j = 1; j < k.size(); ++j)
        if (std::abs(k[j] - k[j - 1] - dk) > 1e-9 * dk)
            throw ValidationError("io.reflection_csv", "non-uniform k grid");
    Grid kg(k[0], dk, static_cast<int>(k.size()));
    ReflectionData rd = make_reflection_data(kg, std::move(r));
    rd.class_tag = (cls.find("generic") != std::string::npos) ? PotentialClass::generic
                                                              : PotentialClass::exceptional;
    // Stored r_tilde wins over the derived one (consistency is validated later).
    rd.r_tilde = std::move(rt);
    return rd;
}

void write_potential_json(const std::filesystem::path& path, const RiccatiTriple& triple) {
    json samples{{"x0", triple.w_minus.grid.start},
                 {"dx", triple.w_minus.grid.step},
                 {"w_plus", triple.w_plus.values},
                 {"w_minus", triple.w_minus.values},
                 {"v0", triple.v0}};
    json doc{{"samples", samples}};
    auto out = open_out(path);
    out << doc.dump(2) << "\n";
}

PotentialInput read_potential_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("io.open", "cannot open " + path.string());
    json doc = json::parse(in);
    PotentialInput input;
    if (doc.contains("preset")) {
        input.is_preset = true;
        input.kind = preset_kind_from_name(doc["preset"].get<std::string>());
        if (doc.contains("params")) {
            const json& p = doc["params"];
            auto get = [&](const char* key, double& dst) {
                if (p.contains(key)) dst = p[key].get<double>();
            };
            get("alpha", input.params.alpha);
            get("beta", input.params.beta);
            get("v0", input.params.v0);
            get("amp_plus", input.params.amp_plus);
            get("amp_minus", input.params.amp_minus);
            get("center", input.params.center);
            get("width", input.params.width);
        }
        return input;
    }
    if (!doc.contains("samples"))
        throw ValidationError("io.potential", "expected a 'preset' or 'samples' object");
    const json& s = doc["samples"];
    double x0 = s["x0"].get<double>();
    double dx = s["dx"].get<double>();
    std::vector<double> wp = s["w_plus"].get<std::vector<double>>();
    std::vector<double> wm = s["w_minus"].get<std::vector<double>>();
    double v0 = s["v0"].get<double>();
    Grid gm(x0, dx, static_cast<int>(wm.size()));
    Grid gp(0.0, dx, static_cast<int>(wp.size()));
    input.triple = make_triple(RealFunction(gp, std::move(wp)), RealFunction(gm, std::move(wm)), v0);
    return input;
}

RiccatiTriple resolve_potential(const PotentialInput& input, const Grid& x_grid) {
    if (input.is_preset) return preset(input.kind, input.params, x_grid);
    if (!(input.triple.full_grid() == x_grid))
        throw ValidationError("io.potential",
                              "sample file grid does not match the requested grid; "
                              "rerun with matching --grid-l/--grid-dx");
    return input.triple;
}

void write_membership_json(const std::filesystem::path& path, const MembershipReport& rep,
                           PotentialClass tag) {
    json doc{{"class", class_name(tag)},
             {"passes", rep.passes(tag)},
             {"symmetry_ok", rep.symmetry_ok},
             {"subunitary_ok", rep.subunitary_ok},
             {"decay_ok", rep.decay_ok},
             {"consistency_ok", rep.consistency_ok},
             {"generic_signature_ok", rep.generic_signature_ok},
             {"exceptional_signature_ok", rep.exceptional_signature_ok},
             {"max_symmetry_dev", rep.max_symmetry_dev},
             {"min_distance_from_one", rep.min_distance_from_one},
             {"edge_magnitude", rep.edge_magnitude},
             {"r0", rep.r0},
             {"r_tilde0", rep.r_tilde0},
             {"max_consistency_dev", rep.max_consistency_dev}};
    auto out = open_out(path);
    out << doc.dump(2) << "\n";
}

void write_reconstruction_diagnostics_json(const std::filesystem::path& path,
                                           const ReconstructionResult& rec,
                                           const MarchenkoKernel& kernels) {
    const auto& d = rec.diagnostics;
    json doc{{"v0_readout", rec.v0_readout},
             {"v0_clamped", d.v0_clamped},
             {"max_solver_residual", d.max_solver_residual},
             {"min_solvability_margin", d.min_solvability_margin},
             {"max_jump_w_diff", d.max_jump_w_diff},
             {"kernel_edge_mass_f", kernels.edge_mass_f},
             {"kernel_edge_mass_f_sharp", kernels.edge_mass_f_sharp},
             {"x_grid", grid_json(rec.w_full.grid)},
             {"solver_residual", d.solver_residual},
             {"operator_norm", d.operator_norm},
             {"iterations", d.iterations}};
    auto out = open_out(path);
    out << doc.dump(2) << "\n";
}

} // namespace miura
