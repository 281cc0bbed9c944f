#include "ioss/config_io.hpp"

#include <fstream>

namespace ioss {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw SpecError(where + ": " + what);
}

const json& member(const json& obj, const std::string& where, const char* key) {
    if (!obj.is_object()) fail(where, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) fail(where + "." + key, "missing");
    return *it;
}

double numberAt(const json& obj, const std::string& where, const char* key) {
    const json& v = member(obj, where, key);
    if (!v.is_number()) fail(where + "." + key, "expected a number");
    return v.get<double>();
}

int intAt(const json& obj, const std::string& where, const char* key) {
    const json& v = member(obj, where, key);
    if (!v.is_number_integer()) fail(where + "." + key, "expected an integer");
    return v.get<int>();
}

bool boolAt(const json& obj, const std::string& where, const char* key) {
    const json& v = member(obj, where, key);
    if (!v.is_boolean()) fail(where + "." + key, "expected a boolean");
    return v.get<bool>();
}

ExprAst exprAt(const json& parent, const std::string& where,
               const std::vector<std::string>& vars) {
    if (!parent.is_string()) fail(where, "expected an expression string");
    try {
        return parse_expr(parent.get<std::string>(), vars);
    } catch (const ExprError& e) {
        fail(where, e.what());
    }
}

std::vector<ExprAst> exprArrayAt(const json& obj, const std::string& where, const char* key,
                                 const std::vector<std::string>& vars) {
    const json& arr = member(obj, where, key);
    if (!arr.is_array()) fail(where + "." + key, "expected an array of expression strings");
    std::vector<ExprAst> out;
    for (std::size_t i = 0; i < arr.size(); ++i)
        out.push_back(exprAt(arr[i], where + "." + key + "[" + std::to_string(i) + "]", vars));
    return out;
}

}  // namespace

SystemSpec parse_spec_json(const json& doc) {
    SystemSpec spec;
    const json& dims = member(doc, "spec", "dims");
    spec.state_dim = intAt(dims, "dims", "d");
    spec.input_dim = intAt(dims, "dims", "m");
    spec.output_dim = intAt(dims, "dims", "p_out");
    if (spec.state_dim <= 0) fail("dims.d", "must be positive");
    if (spec.input_dim < 0) fail("dims.m", "must be nonnegative");

    const std::vector<std::string> f_vars = dynamics_variables(spec.state_dim, spec.input_dim);
    const std::vector<std::string> x_vars = state_variables(spec.state_dim);

    const json& subs = member(doc, "spec", "subsystems");
    if (!subs.is_array()) fail("subsystems", "expected an array");
    for (std::size_t i = 0; i < subs.size(); ++i) {
        const std::string where = "subsystems[" + std::to_string(i) + "]";
        const json& s = subs[i];
        SubsystemSpec sub;
        sub.id = intAt(s, where, "id");
        sub.stable = boolAt(s, where, "stable");
        sub.lambda_abs = numberAt(s, where, "lambda");
        sub.min_dwell = numberAt(s, where, "delta");
        sub.max_dwell = numberAt(s, where, "Delta");
        sub.dynamics = exprArrayAt(s, where, "f", f_vars);
        sub.output = exprArrayAt(s, where, "h", x_vars);
        sub.lyapunov = exprAt(member(s, where, "V"), where + ".V", x_vars);
        spec.subsystems.push_back(std::move(sub));
    }

    const json& edges = member(doc, "spec", "edges");
    if (!edges.is_array()) fail("edges", "expected an array");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const std::string where = "edges[" + std::to_string(i) + "]";
        EdgeSpec e;
        e.from = intAt(edges[i], where, "from");
        e.to = intAt(edges[i], where, "to");
        e.mu = numberAt(edges[i], where, "mu");
        spec.edges.push_back(e);
    }

    if (doc.contains("defaults")) {
        const json& d = doc["defaults"];
        if (!d.is_object()) fail("defaults", "expected an object");
        if (d.contains("tolerance")) {
            if (!d["tolerance"].is_number()) fail("defaults.tolerance", "expected a number");
            spec.defaults.tolerance = d["tolerance"].get<double>();
        }
        if (d.contains("rk_step")) {
            if (!d["rk_step"].is_number()) fail("defaults.rk_step", "expected a number");
            spec.defaults.rk_step = d["rk_step"].get<double>();
        }
        if (d.contains("seed")) {
            if (!d["seed"].is_number_unsigned()) fail("defaults.seed", "expected an unsigned integer");
            spec.defaults.seed = d["seed"].get<std::uint64_t>();
        }
    }

    validate(spec);
    return spec;
}

SystemSpec load_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot open spec file " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw SpecError("parse error in " + path.string() + ": " + e.what());
    }
    return parse_spec_json(doc);
}

nlohmann::json spec_to_json(const SystemSpec& spec) {
    json doc;
    doc["dims"] = {{"d", spec.state_dim}, {"m", spec.input_dim}, {"p_out", spec.output_dim}};
    doc["subsystems"] = json::array();
    for (const auto& sub : spec.subsystems) {
        json s;
        s["id"] = sub.id;
        s["stable"] = sub.stable;
        s["lambda"] = sub.lambda_abs;
        s["delta"] = sub.min_dwell;
        s["Delta"] = sub.max_dwell;
        s["f"] = json::array();
        for (const auto& e : sub.dynamics) s["f"].push_back(to_string(e));
        s["h"] = json::array();
        for (const auto& e : sub.output) s["h"].push_back(to_string(e));
        s["V"] = to_string(sub.lyapunov);
        doc["subsystems"].push_back(std::move(s));
    }
    doc["edges"] = json::array();
    for (const auto& e : spec.edges)
        doc["edges"].push_back({{"from", e.from}, {"to", e.to}, {"mu", e.mu}});
    doc["defaults"] = {{"tolerance", spec.defaults.tolerance},
                       {"rk_step", spec.defaults.rk_step},
                       {"seed", spec.defaults.seed}};
    return doc;
}

void save_spec(const std::filesystem::path& path, const SystemSpec& spec) {
    std::ofstream out(path);
    if (!out) throw SpecError("cannot write spec file " + path.string());
    out << spec_to_json(spec).dump(2) << "\n";
}

}  // namespace ioss
