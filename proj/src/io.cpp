#include "mcpipe/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mcpipe {

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "' for reading");
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    return out;
}

struct CsvBody {
    std::vector<double> t;
    std::vector<double> v;
    double dt = 0.0;  // 0 when no "# dt=" header
};

CsvBody read_csv_body(const std::string& path) {
    std::ifstream in = open_in(path);
    CsvBody body;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto pos = line.find("dt=");
            if (pos != std::string::npos) body.dt = std::stod(line.substr(pos + 3));
            continue;
        }
        if (!header_seen) {
            if (line.rfind("t_s,", 0) != 0)
                throw ConfigError("CSV '" + path + "': expected header 't_s,chi'");
            header_seen = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ConfigError("CSV '" + path + "': malformed row '" + line + "'");
        body.t.push_back(std::stod(line.substr(0, comma)));
        body.v.push_back(std::stod(line.substr(comma + 1)));
    }
    if (!header_seen) throw ConfigError("CSV '" + path + "': missing header");
    return body;
}

}  // namespace

void write_sampled_csv(const std::string& path, const SampledSignal& x) {
    x.validate();
    std::ofstream out = open_out(path);
    out << "t_s,chi\n";
    for (std::size_t i = 0; i < x.timestamps.size(); ++i)
        out << format_double(x.timestamps[i]) << ',' << format_double(x.values[i]) << '\n';
}

SampledSignal read_sampled_csv(const std::string& path) {
    CsvBody body = read_csv_body(path);
    SampledSignal x;
    x.timestamps = std::move(body.t);
    x.values = std::move(body.v);
    x.validate();
    return x;
}

void write_regular_csv(const std::string& path, const RegularSignal& x) {
    std::ofstream out = open_out(path);
    out << "# dt=" << format_double(x.dt) << '\n';
    out << "t_s,chi\n";
    for (std::size_t i = 0; i < x.values.size(); ++i)
        out << format_double(x.time_at(i)) << ',' << format_double(x.values[i]) << '\n';
}

RegularSignal read_regular_csv(const std::string& path) {
    CsvBody body = read_csv_body(path);
    if (!(body.dt > 0.0)) throw ConfigError("CSV '" + path + "': missing '# dt=' header");
    RegularSignal x;
    x.dt = body.dt;
    x.origin = body.t.empty() ? 0 : static_cast<long long>(std::llround(body.t.front() / body.dt));
    x.values = std::move(body.v);
    return x;
}

bool csv_is_regular(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line.find("dt=") != std::string::npos) return true;
            continue;
        }
        return false;
    }
    return false;
}

void write_bits_file(const std::string& path, const SymbolSequence& a) {
    a.validate();
    std::ofstream out = open_out(path);
    for (auto b : a.bits) out << (b ? '1' : '0');
    out << '\n';
}

SymbolSequence read_bits_file(const std::string& path, int kt) {
    std::ifstream in = open_in(path);
    SymbolSequence a;
    char c;
    while (in.get(c)) {
        if (c == '0') a.bits.push_back(0);
        else if (c == '1') a.bits.push_back(1);
        else if (c == '\n' || c == '\r' || c == ' ' || c == '\t') continue;
        else throw ConfigError("bits file '" + path + "': unexpected character '" + c + "'");
    }
    a.kt = kt;
    a.validate();
    return a;
}

Json estimate_to_json(const ChannelEstimate& est) {
    Json j;
    j["schema"] = "mcpipe-estimate-1";
    j["method"] = est.method == EstimatorMethod::model ? "model" : "samples";
    j["n"] = est.n_symbols;
    j["i"] = est.oversampling;
    if (est.fitted) {
        j["fitted"] = Json{{"alpha", est.fitted->alpha},
                           {"beta", est.fitted->beta},
                           {"gamma", est.fitted->gamma}};
    }
    j["residual"] = est.residual;
    j["taps"] = est.taps;
    return j;
}

ChannelEstimate estimate_from_json(const Json& j) {
    if (j.value("schema", "") != "mcpipe-estimate-1")
        throw ConfigError("estimate JSON: unknown schema");
    ChannelEstimate est;
    const std::string method = j.at("method").get<std::string>();
    if (method == "model") est.method = EstimatorMethod::model;
    else if (method == "samples") est.method = EstimatorMethod::samples;
    else throw ConfigError("estimate JSON: unknown method '" + method + "'");
    est.n_symbols = j.at("n").get<int>();
    est.oversampling = j.at("i").get<int>();
    if (j.contains("fitted")) {
        FittedParams p;
        p.alpha = j["fitted"].at("alpha").get<double>();
        p.beta = j["fitted"].at("beta").get<double>();
        p.gamma = j["fitted"].at("gamma").get<double>();
        est.fitted = p;
    }
    est.residual = j.at("residual").get<double>();
    est.taps = j.at("taps").get<std::vector<double>>();
    return est;
}

void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out = open_out(path);
    out << j.dump(2) << '\n';
}

Json read_json_file(const std::string& path) {
    std::ifstream in = open_in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return Json::parse(ss.str());
    } catch (const std::exception& e) {
        throw ConfigError("JSON '" + path + "': parse failed: " + e.what());
    }
}

}  // namespace mcpipe
