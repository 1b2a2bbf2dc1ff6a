#include "ifstype/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "ifstype/errors.hpp"
#include "json.hpp"

namespace ifstype {

namespace {

using nlohmann::json;

void expect_keys(const json& j, const char* where, const std::set<std::string>& allowed) {
    for (const auto& item : j.items())
        if (!allowed.count(item.key()))
            fail("ConfigError", std::string("unknown key \"") + item.key() + "\" in " + where);
}

Rat rat_field(const json& j, const char* where) {
    if (!j.is_string())
        fail("ConfigError", std::string(where) + " must be a rational string \"a/b\"");
    return rat_parse(j.get<std::string>());
}

std::vector<Rat> rat_list(const json& j, const char* where) {
    if (!j.is_array()) fail("ConfigError", std::string(where) + " must be an array");
    std::vector<Rat> out;
    for (const auto& item : j) out.push_back(rat_field(item, where));
    return out;
}

WeightedIFS parse_system(const json& j) {
    expect_keys(j, "system", {"ratio", "digits", "probs"});
    if (!j.contains("ratio") || !j.contains("digits") || !j.contains("probs"))
        fail("ConfigError", "system needs ratio, digits and probs");
    WeightedIFS f;
    f.ratio = rat_field(j.at("ratio"), "system.ratio");
    f.digits = rat_list(j.at("digits"), "system.digits");
    f.probs = rat_list(j.at("probs"), "system.probs");
    return f;
}

Construction parse_construction(const json& j) {
    expect_keys(j, "construction", {"kind", "R", "block_probs", "shared_prob"});
    if (!j.contains("kind") || !j.contains("R") || !j.contains("block_probs"))
        fail("ConfigError", "construction needs kind, R and block_probs");
    std::string kind = j.at("kind").get<std::string>();
    std::uint32_t R = j.at("R").get<std::uint32_t>();
    std::vector<Rat> probs = rat_list(j.at("block_probs"), "construction.block_probs");
    std::optional<Rat> shared;
    if (j.contains("shared_prob")) shared = rat_field(j.at("shared_prob"), "shared_prob");
    if (kind == "multipoint") return multipoint(R, probs, shared);
    if (kind == "multiinterval") return multiinterval(R, probs, shared);
    fail("ConfigError", "construction kind must be multipoint or multiinterval, got \"" + kind +
                            "\"");
}

} // namespace

const WeightedIFS& RunConfig::ifs() const {
    if (construction) return construction->ifs;
    if (system) return *system;
    fail("ConfigError", "config names no system");
}

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        fail("ConfigError", e.what());
    }
    if (!j.is_object()) fail("ConfigError", "config root must be an object");
    expect_keys(j, "config",
                {"system", "construction", "L", "Lc", "cap", "oracle_depths", "oracle_points",
                 "oracle_qs", "qmin", "qmax", "qstep", "qrefine", "out"});

    RunConfig cfg;
    try {
        if (j.contains("construction")) cfg.construction = parse_construction(j.at("construction"));
        if (j.contains("system")) cfg.system = parse_system(j.at("system"));
        if (j.contains("L")) cfg.outer_len = j.at("L").get<std::uint32_t>();
        if (j.contains("Lc")) cfg.cycle_len = j.at("Lc").get<std::uint32_t>();
        if (j.contains("cap")) cfg.closure_cap = j.at("cap").get<std::size_t>();
        if (j.contains("oracle_depths")) {
            auto d = j.at("oracle_depths");
            if (!d.is_array() || d.size() != 2)
                fail("ConfigError", "oracle_depths must be [lo, hi]");
            cfg.oracle_depths = {d.at(0).get<std::uint32_t>(), d.at(1).get<std::uint32_t>()};
        }
        if (j.contains("oracle_points"))
            cfg.oracle_points = rat_list(j.at("oracle_points"), "oracle_points");
        if (j.contains("oracle_qs"))
            cfg.oracle_qs = j.at("oracle_qs").get<std::vector<double>>();
        if (j.contains("qmin")) cfg.grid.qmin = j.at("qmin").get<double>();
        if (j.contains("qmax")) cfg.grid.qmax = j.at("qmax").get<double>();
        if (j.contains("qstep")) cfg.grid.step = j.at("qstep").get<double>();
        if (j.contains("qrefine")) cfg.grid.refine = j.at("qrefine").get<double>();
        if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
    } catch (const json::exception& e) {
        fail("ConfigError", e.what());
    }

    if (!cfg.system && !cfg.construction)
        fail("ConfigError", "config needs a system or a construction");
    if (cfg.system && cfg.construction) {
        const WeightedIFS& a = *cfg.system;
        const WeightedIFS& b = cfg.construction->ifs;
        if (a.ratio != b.ratio || a.digits != b.digits || a.probs != b.probs)
            fail("ConfigError", "system does not match its construction");
    }
    if (cfg.outer_len == 0 || cfg.cycle_len == 0 || cfg.closure_cap == 0)
        fail("ConfigError", "depths must be positive");
    if (!(cfg.grid.qmin <= cfg.grid.qmax))
        fail("ConfigError", "grid needs qmin <= qmax");
    if (!(cfg.grid.step > 0) || !(cfg.grid.refine > 0))
        fail("ConfigError", "grid steps must be positive");
    if (cfg.system && !cfg.construction) validate(*cfg.system);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("IoError", "cannot read config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string render_config(const RunConfig& cfg) {
    json j;
    const WeightedIFS& f = cfg.ifs();
    json sys;
    sys["ratio"] = rat_str(f.ratio);
    json digits = json::array(), probs = json::array();
    for (const Rat& d : f.digits) digits.push_back(rat_str(d));
    for (const Rat& p : f.probs) probs.push_back(rat_str(p));
    sys["digits"] = digits;
    sys["probs"] = probs;
    j["system"] = sys;
    if (cfg.construction) {
        const Construction& con = *cfg.construction;
        json c;
        c["kind"] = con.kind;
        c["R"] = con.grid;
        json bp = json::array();
        for (const Block& b : con.blocks)
            for (std::size_t m : b.maps) bp.push_back(rat_str(con.ifs.probs[m]));
        c["block_probs"] = bp;
        if (!con.shared.empty()) c["shared_prob"] = rat_str(con.ifs.probs[con.shared.front()]);
        j["construction"] = c;
    }
    j["L"] = cfg.outer_len;
    j["Lc"] = cfg.cycle_len;
    j["cap"] = cfg.closure_cap;
    if (!cfg.oracle_depths.unset())
        j["oracle_depths"] = {cfg.oracle_depths.lo, cfg.oracle_depths.hi};
    if (!cfg.oracle_points.empty()) {
        json pts = json::array();
        for (const Rat& x : cfg.oracle_points) pts.push_back(rat_str(x));
        j["oracle_points"] = pts;
    }
    if (!cfg.oracle_qs.empty()) j["oracle_qs"] = cfg.oracle_qs;
    j["qmin"] = cfg.grid.qmin;
    j["qmax"] = cfg.grid.qmax;
    j["qstep"] = cfg.grid.step;
    j["qrefine"] = cfg.grid.refine;
    j["out"] = cfg.out;
    return j.dump(2) + "\n";
}

} // namespace ifstype
