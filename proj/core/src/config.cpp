#include "sqg/config.hpp"

#include <fstream>
#include <sstream>

#include "sqg/io.hpp"

namespace sqg {

namespace {

enum class Kind { Int, Number, Bool, String, NumberList };

struct Field {
    const char* path;
    Kind kind;
};

// Every field the config must carry.
constexpr Field kFields[] = {
    {"/data/n0", Kind::Int},
    {"/data/N", Kind::Int},
    {"/data/alpha", Kind::Number},
    {"/data/dilation", Kind::Int},
    {"/grid/resolution", Kind::Int},
    {"/multiplier/alpha", Kind::Number},
    {"/multiplier/gamma", Kind::Number},
    {"/multiplier/normalization", Kind::Number},
    {"/evolution/cfl", Kind::Number},
    {"/evolution/fixed_dt", Kind::Number},
    {"/evolution/t_end", Kind::Number},
    {"/evolution/snapshot_stride", Kind::Int},
    {"/evolution/dealias", Kind::Bool},
    {"/evolution/exhaustion_fraction", Kind::Number},
    {"/evolution/exhaustion_sobolev_index", Kind::Number},
    {"/kernel/probes", Kind::Int},
    {"/kernel/image_radius", Kind::Int},
    {"/kernel/exclusion_cells", Kind::Number},
    {"/probes/count", Kind::Int},
    {"/probes/off_support_fraction", Kind::Number},
    {"/probes/min_cells", Kind::Number},
    {"/probes/image_radius", Kind::Int},
    {"/markers/ring", Kind::Int},
    {"/markers/interior", Kind::Int},
    {"/markers/substeps", Kind::Int},
    {"/markers/transport_check_stride", Kind::Int},
    {"/markers/trajectory_stride", Kind::Int},
    {"/claims/ell_offset", Kind::Int},
    {"/claims/pairs", Kind::Int},
    {"/claims/transport_tolerance", Kind::Number},
    {"/hardy/count", Kind::Int},
    {"/hardy/lengths", Kind::NumberList},
    {"/hardy/terms", Kind::Int},
    {"/report/inflation_factor", Kind::Number},
    {"/report/window_margin", Kind::Number},
    {"/report/loglip_pairs", Kind::Int},
    {"/seed", Kind::Int},
    {"/output", Kind::String},
};

bool has_kind(const nlohmann::json& v, Kind k) {
    switch (k) {
        case Kind::Int: return v.is_number_integer();
        case Kind::Number: return v.is_number();
        case Kind::Bool: return v.is_boolean();
        case Kind::String: return v.is_string();
        case Kind::NumberList:
            if (!v.is_array()) return false;
            for (const auto& e : v)
                if (!e.is_number()) return false;
            return true;
    }
    return false;
}

const char* kind_name(Kind k) {
    switch (k) {
        case Kind::Int: return "integer";
        case Kind::Number: return "number";
        case Kind::Bool: return "boolean";
        case Kind::String: return "string";
        case Kind::NumberList: return "list of numbers";
    }
    return "?";
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    std::vector<std::string> missing, mistyped;
    if (!j.is_object()) throw ValidationError("config must be a JSON object");
    for (const auto& f : kFields) {
        const nlohmann::json::json_pointer p(f.path);
        if (!j.contains(p))
            missing.push_back(f.path);
        else if (!has_kind(j.at(p), f.kind))
            mistyped.push_back(std::string(f.path) + " (expected " + kind_name(f.kind) + ")");
    }
    if (!missing.empty() || !mistyped.empty()) {
        std::ostringstream os;
        os << "invalid config:";
        for (const auto& m : missing) os << "\n  missing " << m;
        for (const auto& m : mistyped) os << "\n  wrong type " << m;
        throw ValidationError(os.str());
    }
    auto at = [&](const char* path) -> const nlohmann::json& { return j.at(nlohmann::json::json_pointer(path)); };
    ExperimentConfig c;
    c.data.n0 = at("/data/n0").get<int>();
    c.data.N = at("/data/N").get<int>();
    c.data.alpha = at("/data/alpha").get<double>();
    c.data.dilation = at("/data/dilation").get<int>();
    c.resolution = at("/grid/resolution").get<int>();
    c.multiplier.alpha = at("/multiplier/alpha").get<double>();
    c.multiplier.gamma = at("/multiplier/gamma").get<double>();
    c.multiplier.normalization = at("/multiplier/normalization").get<double>();
    c.evolution.multiplier = c.multiplier;
    c.evolution.cfl = at("/evolution/cfl").get<double>();
    c.evolution.fixed_dt = at("/evolution/fixed_dt").get<double>();
    c.evolution.t_end = at("/evolution/t_end").get<double>();
    c.evolution.snapshot_stride = at("/evolution/snapshot_stride").get<int>();
    c.evolution.dealias = at("/evolution/dealias").get<bool>();
    c.evolution.exhaustion_fraction = at("/evolution/exhaustion_fraction").get<double>();
    c.evolution.exhaustion_sobolev_index = at("/evolution/exhaustion_sobolev_index").get<double>();
    c.kernel.probes = at("/kernel/probes").get<int>();
    c.kernel.image_radius = at("/kernel/image_radius").get<int>();
    c.kernel.exclusion_cells = at("/kernel/exclusion_cells").get<double>();
    c.probes.count = at("/probes/count").get<int>();
    c.probes.off_support_fraction = at("/probes/off_support_fraction").get<double>();
    c.probes.min_cells = at("/probes/min_cells").get<double>();
    c.lemma_image_radius = at("/probes/image_radius").get<int>();
    c.tracker.seeding.ring = at("/markers/ring").get<int>();
    c.tracker.seeding.interior = at("/markers/interior").get<int>();
    c.tracker.substeps = at("/markers/substeps").get<int>();
    c.tracker.transport_check_stride = at("/markers/transport_check_stride").get<int>();
    c.tracker.trajectory_stride = at("/markers/trajectory_stride").get<int>();
    c.claims.ell_offset = at("/claims/ell_offset").get<int>();
    c.claims.pairs = at("/claims/pairs").get<int>();
    c.claims.transport_tolerance = at("/claims/transport_tolerance").get<double>();
    c.hardy.count = at("/hardy/count").get<int>();
    c.hardy.lengths = at("/hardy/lengths").get<std::vector<double>>();
    c.hardy.terms = at("/hardy/terms").get<int>();
    c.report.inflation_factor = at("/report/inflation_factor").get<double>();
    c.report.window_margin = at("/report/window_margin").get<double>();
    c.report.loglip_pairs = at("/report/loglip_pairs").get<int>();
    c.seed = at("/seed").get<unsigned long long>();
    c.output = at("/output").get<std::string>();
    c.claims.seed = c.seed;
    c.validate();
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    nlohmann::json j;
    try {
        j = read_json(path);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("config " + path + " does not parse: " + e.what());
    }
    return from_json(j);
}

nlohmann::json ExperimentConfig::to_json() const {
    return {{"data", {{"n0", data.n0}, {"N", data.N}, {"alpha", data.alpha}, {"dilation", data.dilation}}},
            {"grid", {{"resolution", resolution}}},
            {"multiplier",
             {{"alpha", multiplier.alpha}, {"gamma", multiplier.gamma}, {"normalization", multiplier.normalization}}},
            {"evolution",
             {{"cfl", evolution.cfl},
              {"fixed_dt", evolution.fixed_dt},
              {"t_end", evolution.t_end},
              {"snapshot_stride", evolution.snapshot_stride},
              {"dealias", evolution.dealias},
              {"exhaustion_fraction", evolution.exhaustion_fraction},
              {"exhaustion_sobolev_index", evolution.exhaustion_sobolev_index}}},
            {"kernel",
             {{"probes", kernel.probes},
              {"image_radius", kernel.image_radius},
              {"exclusion_cells", kernel.exclusion_cells}}},
            {"probes",
             {{"count", probes.count},
              {"off_support_fraction", probes.off_support_fraction},
              {"min_cells", probes.min_cells},
              {"image_radius", lemma_image_radius}}},
            {"markers",
             {{"ring", tracker.seeding.ring},
              {"interior", tracker.seeding.interior},
              {"substeps", tracker.substeps},
              {"transport_check_stride", tracker.transport_check_stride},
              {"trajectory_stride", tracker.trajectory_stride}}},
            {"claims",
             {{"ell_offset", claims.ell_offset},
              {"pairs", claims.pairs},
              {"transport_tolerance", claims.transport_tolerance}}},
            {"hardy", {{"count", hardy.count}, {"lengths", hardy.lengths}, {"terms", hardy.terms}}},
            {"report",
             {{"inflation_factor", report.inflation_factor},
              {"window_margin", report.window_margin},
              {"loglip_pairs", report.loglip_pairs}}},
            {"seed", seed},
            {"output", output}};
}

void ExperimentConfig::validate() const {
    data.validate();
    const Grid g(resolution);
    require_resolved(data, g);
    multiplier.validate();
    evolution.validate();
    if (kernel.probes < 1) throw ValidationError("kernel.probes must be >= 1");
    if (kernel.image_radius < 1) throw ValidationError("kernel.image_radius must be >= 1");
    if (kernel.exclusion_cells < 1.0) throw ValidationError("kernel.exclusion_cells must be >= 1");
    if (probes.count < 1) throw ValidationError("probes.count must be >= 1");
    if (!(probes.off_support_fraction >= 0.0 && probes.off_support_fraction <= 1.0))
        throw ValidationError("probes.off_support_fraction must lie in [0,1]");
    if (probes.min_cells < 1.0) throw ValidationError("probes.min_cells must be >= 1");
    if (lemma_image_radius < 1) throw ValidationError("probes.image_radius must be >= 1");
    if (tracker.seeding.ring < 64) throw ValidationError("markers.ring must be >= 64");
    if (tracker.seeding.ring % 4 != 0) throw ValidationError("markers.ring must be a multiple of 4");
    if (tracker.seeding.interior < 4) throw ValidationError("markers.interior must be >= 4");
    if (tracker.substeps < 1) throw ValidationError("markers.substeps must be >= 1");
    if (tracker.transport_check_stride < 1) throw ValidationError("markers.transport_check_stride must be >= 1");
    if (tracker.trajectory_stride < 1) throw ValidationError("markers.trajectory_stride must be >= 1");
    if (claims.ell_offset < 0 || data.n0 + claims.ell_offset > data.N)
        throw ValidationError("claims.ell_offset must keep ell within [n0, N]");
    if (claims.pairs < 1) throw ValidationError("claims.pairs must be >= 1");
    if (!(claims.transport_tolerance > 0.0)) throw ValidationError("claims.transport_tolerance must be positive");
    if (hardy.count < 1) throw ValidationError("hardy.count must be >= 1");
    if (hardy.lengths.empty()) throw ValidationError("hardy.lengths must not be empty");
    for (double l : hardy.lengths)
        if (!(l > 0.0 && l <= 1.0)) throw ValidationError("hardy.lengths entries must lie in (0,1]");
    if (hardy.terms < 2) throw ValidationError("hardy.terms must be >= 2");
    if (!(report.inflation_factor > 1.0)) throw ValidationError("report.inflation_factor must exceed 1");
    if (!(report.window_margin >= 0.0)) throw ValidationError("report.window_margin must be >= 0");
    if (report.loglip_pairs < 1) throw ValidationError("report.loglip_pairs must be >= 1");
    if (output.empty()) throw ValidationError("output must name a directory");
}

std::string ExperimentConfig::hash() const {
    // the output location does not change any result
    nlohmann::json j = to_json();
    j.erase("output");
    return git_blob_hash(j.dump());
}

}  // namespace sqg
