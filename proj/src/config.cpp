#include "mcpipe/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace mcpipe {

void TestbedConfig::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw ConfigError(std::string("config: ") + name + " must be positive");
    };
    auto nonneg = [](double v, const char* name) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw ConfigError(std::string("config: ") + name + " must be nonnegative");
    };
    positive(a, "a");
    positive(nu, "nu");
    positive(eta, "eta");
    positive(Rp, "Rp");
    positive(kT, "kT");
    positive(zeta, "zeta");
    positive(T, "T");
    positive(dt, "dt");
    positive(d, "d");
    // zero flow / volume / mass are meaningful limits in several formulas
    nonneg(Qb, "Qb");
    nonneg(Qp, "Qp");
    nonneg(Vi, "Vi");
    nonneg(m_p, "m_p");
    nonneg(chi_ref, "chi_ref");

    const double ratio = T / dt;
    if (ratio < 0.5 || std::abs(ratio - std::round(ratio)) > 1e-9 * ratio + 1e-12)
        throw ConfigError("config: T/dt must be a positive integer");
}

int TestbedConfig::oversampling() const {
    return static_cast<int>(std::lround(T / dt));
}

namespace {

using Json = nlohmann::ordered_json;

TestbedConfig config_from_json(const Json& j) {
    TestbedConfig cfg;
    if (!j.is_object()) throw ConfigError("config: JSON root must be an object");
    for (const auto& [key, value] : j.items()) {
        if (!value.is_number())
            throw ConfigError("config: field '" + key + "' must be a number");
        const double v = value.get<double>();
        if (key == "a") cfg.a = v;
        else if (key == "Qb") cfg.Qb = v;
        else if (key == "Qp") cfg.Qp = v;
        else if (key == "Vi") cfg.Vi = v;
        else if (key == "chi_ref") cfg.chi_ref = v;
        else if (key == "nu") cfg.nu = v;
        else if (key == "eta") cfg.eta = v;
        else if (key == "Rp") cfg.Rp = v;
        else if (key == "m_p") cfg.m_p = v;
        else if (key == "kT") cfg.kT = v;
        else if (key == "zeta") cfg.zeta = v;
        else if (key == "T") cfg.T = v;
        else if (key == "dt") cfg.dt = v;
        else if (key == "d") cfg.d = v;
        else throw ConfigError("config: unknown field '" + key + "'");
    }
    cfg.validate();
    return cfg;
}

}  // namespace

TestbedConfig config_from_json_text(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: JSON parse failed: ") + e.what());
    }
    return config_from_json(j);
}

TestbedConfig config_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return config_from_json_text(ss.str());
}

std::string config_to_json_text(const TestbedConfig& cfg) {
    Json j;
    j["a"] = cfg.a;
    j["Qb"] = cfg.Qb;
    j["Qp"] = cfg.Qp;
    j["Vi"] = cfg.Vi;
    j["chi_ref"] = cfg.chi_ref;
    j["nu"] = cfg.nu;
    j["eta"] = cfg.eta;
    j["Rp"] = cfg.Rp;
    j["m_p"] = cfg.m_p;
    j["kT"] = cfg.kT;
    j["zeta"] = cfg.zeta;
    j["T"] = cfg.T;
    j["dt"] = cfg.dt;
    j["d"] = cfg.d;
    return j.dump(2);
}

double effective_velocity(const TestbedConfig& cfg) {
    return cfg.Qb / (kPi * cfg.a * cfg.a);
}

double max_velocity(const TestbedConfig& cfg) {
    return 2.0 * effective_velocity(cfg);
}

double scale_factor(const TestbedConfig& cfg, double d) {
    if (!(d > 0.0)) throw ConfigError("scale_factor: d must be positive");
    return cfg.chi_ref * cfg.Vi / (kPi * cfg.a * cfg.a * d);
}

double injection_duration(const TestbedConfig& cfg) {
    if (!(cfg.Qp > 0.0)) throw ConfigError("injection_duration: Qp must be positive");
    return cfg.Vi / cfg.Qp;
}

double injection_depth(const TestbedConfig& cfg) {
    const double total = cfg.Qp + cfg.Qb;
    if (!(total > 0.0)) throw ConfigError("injection_depth: Qp + Qb must be positive");
    return 2.0 * cfg.a * cfg.Qp / total;
}

}  // namespace mcpipe
