#include "mcpipe/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "mcpipe/rng.hpp"

namespace mcpipe {

namespace {

constexpr std::uint64_t kBitsStream = 3;
constexpr std::uint64_t kDistanceSeedStream = 100;

std::string distance_label(std::size_t index, double d) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "d%02zu_%gcm", index, d * 100.0);
    return buf;
}

std::string bits_to_string(std::span<const std::uint8_t> bits) {
    std::string s;
    s.reserve(bits.size());
    for (auto b : bits) s.push_back(b ? '1' : '0');
    return s;
}

void require_schedule(const std::vector<int>& v, std::size_t n, const char* name) {
    if (v.size() < n)
        throw ConfigError(std::string("experiment: schedule '") + name +
                          "' shorter than the distance list");
}

}  // namespace

void ExperimentSpec::validate() const {
    cfg.validate();
    truth.validate();
    if (distances.empty()) throw ConfigError("experiment: empty distance list");
    for (double d : distances)
        if (!(d > 0.0)) throw ConfigError("experiment: distances must be positive");
    if (!(lz >= 0.0)) throw ConfigError("experiment: lz must be nonnegative");
    if (noise_sigma < 0.0 || jitter_sigma < 0.0)
        throw ConfigError("experiment: negative noise or jitter");
    require_schedule(n_memory, distances.size(), "n_memory");
    if (kind == ExperimentKind::data_transmission) {
        if (K < 2) throw ConfigError("experiment: K must be >= 2");
        if (score_last < 1 || score_last > K)
            throw ConfigError("experiment: score_last out of range");
        require_schedule(kt_model, distances.size(), "kt_model");
        require_schedule(kt_samples, distances.size(), "kt_samples");
        for (std::size_t i = 0; i < distances.size(); ++i) {
            const int kt = kt_for(i);
            if (kt < 1 || kt >= K) throw ConfigError("experiment: Kt out of range");
            if (K - kt < score_last)
                throw ConfigError("experiment: score window exceeds the information symbols");
        }
    } else {
        if (pulse_count < 1) throw ConfigError("experiment: pulse_count must be >= 1");
        if (pulse_T.size() < distances.size())
            throw ConfigError("experiment: pulse_T shorter than the distance list");
        for (std::size_t i = 0; i < distances.size(); ++i) {
            const double ratio = pulse_T[i] / cfg.dt;
            if (!(pulse_T[i] > 0.0) || std::abs(ratio - std::round(ratio)) > 1e-9 * ratio)
                throw ConfigError("experiment: pulse_T must be a positive multiple of dt");
            if (static_cast<double>(n_memory[i]) * cfg.T > pulse_T[i])
                throw ConfigError("experiment: fit window longer than the pulse interval");
        }
    }
}

int ExperimentSpec::kt_for(std::size_t distance_index) const {
    return estimator == EstimatorMethod::model ? kt_model[distance_index]
                                               : kt_samples[distance_index];
}

std::vector<PulseTrainDistanceResult> run_pulse_train(const ExperimentSpec& spec, Exec exec) {
    ExperimentSpec s = spec;
    s.kind = ExperimentKind::pulse_train;
    s.validate();
    const int I = s.cfg.oversampling();

    std::vector<PulseTrainDistanceResult> out;
    for (std::size_t di = 0; di < s.distances.size(); ++di) {
        const double d = s.distances[di];
        const double Tp = s.pulse_T[di];
        const int N = s.n_memory[di];

        TestbedConfig cfgp = s.cfg;
        cfgp.T = Tp;
        cfgp.validate();
        CirModel model{cfgp, d, s.truth, s.lz};
        model.validate();

        // consecutive pulses must not overlap
        if (support_end(model) - support_start(model) > Tp)
            throw ConfigError("pulse_train: response support exceeds the pulse interval");

        SymbolSequence ones;
        ones.bits.assign(static_cast<std::size_t>(s.pulse_count), 1);
        ones.kt = 0;

        const double t0 = t_start(model);
        const double phase = t0 - std::floor(t0 / s.cfg.dt) * s.cfg.dt;

        RxOptions opt;
        opt.noise_sigma = s.noise_sigma;
        opt.jitter_sigma = s.jitter_sigma;
        opt.seed = rng_word(s.seed, kDistanceSeedStream, di);
        opt.taps_symbols = 1;  // truncate each response at its own interval
        opt.quiet = 2.0;
        opt.grid_phase = phase < s.cfg.dt ? phase : 0.0;
        const SampledSignal raw = simulate_rx(model, ones, opt, exec);

        const std::size_t seg_len = static_cast<std::size_t>(N) * static_cast<std::size_t>(I);
        PulseTrainDistanceResult res;
        res.d = d;
        res.T = Tp;
        res.segments.reserve(static_cast<std::size_t>(s.pulse_count));

        if (s.jitter_sigma == 0.0) {
            // samples already sit on the onset-aligned grid
            for (int k = 0; k < s.pulse_count; ++k) {
                const double t_seg = opt.quiet + static_cast<double>(k) * Tp + t0;
                const auto i0 = static_cast<std::size_t>(
                    std::llround((t_seg - opt.grid_phase) / s.cfg.dt));
                if (i0 + seg_len > raw.values.size())
                    throw NumericError("pulse_train: record too short for segmentation");
                res.segments.emplace_back(raw.values.begin() + static_cast<long long>(i0),
                                          raw.values.begin() + static_cast<long long>(i0 + seg_len));
            }
        } else {
            const RegularSignal reg = resample_linear(raw, s.cfg.dt);
            for (int k = 0; k < s.pulse_count; ++k) {
                const double t_seg = opt.quiet + static_cast<double>(k) * Tp + t0;
                const long long g = std::llround(t_seg / s.cfg.dt) - reg.origin;
                if (g < 0 || static_cast<std::size_t>(g) + seg_len > reg.values.size())
                    throw NumericError("pulse_train: record too short for segmentation");
                res.segments.emplace_back(reg.values.begin() + g,
                                          reg.values.begin() + g + static_cast<long long>(seg_len));
            }
        }

        res.mean_pulse.assign(seg_len, 0.0);
        for (const auto& seg : res.segments)
            for (std::size_t i = 0; i < seg_len; ++i) res.mean_pulse[i] += seg[i];
        for (auto& v : res.mean_pulse) v /= static_cast<double>(s.pulse_count);

        RegularSignal rt;
        rt.dt = s.cfg.dt;
        rt.origin = 0;
        rt.values = res.mean_pulse;
        SymbolSequence single;
        single.bits = {1};
        single.kt = 1;
        const ChannelEstimate est = fit_model(rt, single, s.cfg, d, N, I, {}, exec);
        res.fitted = *est.fitted;
        res.residual = est.residual;
        out.push_back(std::move(res));
    }
    return out;
}

std::vector<DataTransmissionDistanceResult> run_data_transmission(const ExperimentSpec& spec,
                                                                  Exec exec) {
    ExperimentSpec s = spec;
    s.kind = ExperimentKind::data_transmission;
    s.validate();
    const int I = s.cfg.oversampling();
    const int K = s.K;

    // one fixed sequence for all distances; the leading 1 anchors the sync
    SymbolSequence seq;
    seq.bits.assign(static_cast<std::size_t>(K), 0);
    seq.bits[0] = 1;
    for (int k = 1; k < K; ++k)
        seq.bits[static_cast<std::size_t>(k)] =
            static_cast<std::uint8_t>(rng_bit(s.seed, kBitsStream, static_cast<std::uint64_t>(k)));

    std::vector<DataTransmissionDistanceResult> out;
    for (std::size_t di = 0; di < s.distances.size(); ++di) {
        const double d = s.distances[di];
        const int N = s.n_memory[di];
        const int Kt = s.kt_for(di);
        const int Ki = K - Kt;
        seq.kt = Kt;

        CirModel model{s.cfg, d, s.truth, s.lz};
        model.validate();

        RxOptions opt;
        opt.noise_sigma = s.noise_sigma;
        opt.jitter_sigma = s.jitter_sigma;
        opt.seed = rng_word(s.seed, kDistanceSeedStream, di);
        opt.taps_symbols = N;
        opt.quiet = 2.0;
        const SampledSignal raw = simulate_rx(model, seq, opt, exec);
        const RegularSignal reg = resample_linear(raw, s.cfg.dt);
        const auto sync = synchronize(reg);
        if (!sync) throw SyncError("data_transmission: synchronization not found");
        const RegularSignal& r = sync->shifted;

        const std::size_t record_len =
            static_cast<std::size_t>(K) * static_cast<std::size_t>(I);
        if (r.values.size() < record_len)
            throw NumericError("data_transmission: synchronized record shorter than K*I");

        RegularSignal rt;
        rt.dt = r.dt;
        rt.origin = r.origin;
        rt.values.assign(r.values.begin(),
                         r.values.begin() + static_cast<long long>(Kt) * I);
        const ChannelEstimate est =
            s.estimator == EstimatorMethod::model
                ? fit_model(rt, seq, s.cfg, d, N, I, {}, exec)
                : fit_samples(rt, seq, N, I);

        DataTransmissionDistanceResult res;
        res.d = d;
        res.kt = Kt;
        res.n = N;
        res.bits_true = seq.bits;
        res.estimate = est;
        res.raw = raw;

        const DetectionResult vit = viterbi_detect(r, est, seq, Ki, N, I, exec);
        res.bits_viterbi = vit.bits;
        const IncreaseParams ip = increase_params(model, I, s.cfg.dt);
        const DetectionResult inc = increase_detect(r, ip, K, I);
        res.bits_increase = inc.bits;

        const std::span<const std::uint8_t> truth_info(seq.bits.data() + Kt,
                                                       static_cast<std::size_t>(Ki));
        res.errors_viterbi = count_errors(vit.bits, truth_info, Ki - s.score_last);
        res.errors_increase = count_errors(inc.bits, seq.bits, K - s.score_last);

        const RegularSignal s_model = pam_synthesize(seq, est.taps, I, s.cfg.dt, exec);
        std::vector<double> model_rec(record_len, 0.0);
        const std::size_t n_copy = std::min(record_len, s_model.values.size());
        std::copy(s_model.values.begin(), s_model.values.begin() + static_cast<long long>(n_copy),
                  model_rec.begin());
        res.rmse_all = rmse(std::span<const double>(r.values.data(), record_len), model_rec, K,
                            scale_factor(s.cfg, d));
        out.push_back(std::move(res));
    }
    return out;
}

namespace {

Json fitted_json(const FittedParams& p) {
    return Json{{"alpha", p.alpha}, {"beta", p.beta}, {"gamma", p.gamma}};
}

}  // namespace

Json spec_to_json(const ExperimentSpec& spec) {
    Json j;
    j["kind"] = spec.kind == ExperimentKind::pulse_train ? "pulse_train" : "data_transmission";
    j["config"] = Json::parse(config_to_json_text(spec.cfg));
    j["distances"] = spec.distances;
    j["K"] = spec.K;
    j["estimator"] = spec.estimator == EstimatorMethod::model ? "model" : "samples";
    j["kt_model"] = spec.kt_model;
    j["kt_samples"] = spec.kt_samples;
    j["n_memory"] = spec.n_memory;
    j["pulse_count"] = spec.pulse_count;
    j["pulse_T"] = spec.pulse_T;
    j["truth"] = Json{{"alpha", spec.truth.alpha}, {"beta", spec.truth.beta}};
    j["lz"] = spec.lz;
    j["noise_sigma"] = spec.noise_sigma;
    j["jitter_sigma"] = spec.jitter_sigma;
    j["seed"] = spec.seed;
    j["score_last"] = spec.score_last;
    return j;
}

ExperimentSpec spec_from_json(const Json& j) {
    ExperimentSpec spec;
    if (!j.is_object()) throw ConfigError("experiment spec: JSON root must be an object");
    for (const auto& [key, value] : j.items()) {
        if (key == "kind") {
            const std::string kind = value.get<std::string>();
            if (kind == "pulse_train") spec.kind = ExperimentKind::pulse_train;
            else if (kind == "data_transmission") spec.kind = ExperimentKind::data_transmission;
            else throw ConfigError("experiment spec: unknown kind '" + kind + "'");
        } else if (key == "config") {
            spec.cfg = config_from_json_text(value.dump());
        } else if (key == "distances") {
            spec.distances = value.get<std::vector<double>>();
        } else if (key == "K") {
            spec.K = value.get<int>();
        } else if (key == "estimator") {
            const std::string est = value.get<std::string>();
            if (est == "model") spec.estimator = EstimatorMethod::model;
            else if (est == "samples") spec.estimator = EstimatorMethod::samples;
            else throw ConfigError("experiment spec: unknown estimator '" + est + "'");
        } else if (key == "kt_model") {
            spec.kt_model = value.get<std::vector<int>>();
        } else if (key == "kt_samples") {
            spec.kt_samples = value.get<std::vector<int>>();
        } else if (key == "n_memory") {
            spec.n_memory = value.get<std::vector<int>>();
        } else if (key == "pulse_count") {
            spec.pulse_count = value.get<int>();
        } else if (key == "pulse_T") {
            spec.pulse_T = value.get<std::vector<double>>();
        } else if (key == "truth") {
            spec.truth = BetaInit{value.at("alpha").get<double>(), value.at("beta").get<double>()};
        } else if (key == "lz") {
            spec.lz = value.get<double>();
        } else if (key == "noise_sigma") {
            spec.noise_sigma = value.get<double>();
        } else if (key == "jitter_sigma") {
            spec.jitter_sigma = value.get<double>();
        } else if (key == "seed") {
            spec.seed = value.get<std::uint64_t>();
        } else if (key == "score_last") {
            spec.score_last = value.get<int>();
        } else {
            throw ConfigError("experiment spec: unknown field '" + key + "'");
        }
    }
    spec.validate();
    return spec;
}

Json emit_report(const ExperimentSpec& spec, const std::vector<PulseTrainDistanceResult>& res,
                 const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(fs::path(out_dir) / "signals");
    fs::create_directories(fs::path(out_dir) / "estimates");

    Json report;
    report["schema"] = "mcpipe-report-1";
    report["kind"] = "pulse_train";
    report["spec"] = spec_to_json(spec);
    report["results"] = Json::array();

    for (std::size_t i = 0; i < res.size(); ++i) {
        const auto& r = res[i];
        const std::string label = distance_label(i, r.d);

        const std::string overlay_rel = "signals/" + label + "_pulses.csv";
        const std::string overlay = (fs::path(out_dir) / overlay_rel).string();
        {
            std::FILE* f = std::fopen(overlay.c_str(), "w");
            if (!f) throw ConfigError("emit_report: cannot write '" + overlay + "'");
            std::fputs("t_s", f);
            for (std::size_t p = 0; p < r.segments.size(); ++p) std::fprintf(f, ",pulse%02zu", p);
            std::fputs(",mean\n", f);
            for (std::size_t s = 0; s < r.mean_pulse.size(); ++s) {
                std::fprintf(f, "%.17g", static_cast<double>(s) * spec.cfg.dt);
                for (const auto& seg : r.segments) std::fprintf(f, ",%.17g", seg[s]);
                std::fprintf(f, ",%.17g\n", r.mean_pulse[s]);
            }
            std::fclose(f);
        }

        ChannelEstimate est;
        est.method = EstimatorMethod::model;
        est.fitted = r.fitted;
        est.residual = r.residual;
        est.n_symbols = static_cast<int>(r.mean_pulse.size()) / spec.cfg.oversampling();
        est.oversampling = spec.cfg.oversampling();
        CirModel m{spec.cfg, r.d, BetaInit{r.fitted.alpha, r.fitted.beta}, 0.0};
        est.taps = limit_taps(m, r.mean_pulse.size(), spec.cfg.dt, Exec::serial);
        for (auto& v : est.taps) v *= r.fitted.gamma;
        const std::string est_rel = "estimates/" + label + ".json";
        write_json_file((fs::path(out_dir) / est_rel).string(), estimate_to_json(est));

        Json entry;
        entry["d"] = r.d;
        entry["T"] = r.T;
        entry["fitted"] = fitted_json(r.fitted);
        entry["residual"] = r.residual;
        entry["files"] = Json{{"overlay", overlay_rel}, {"estimate", est_rel}};
        report["results"].push_back(entry);
    }
    write_json_file((fs::path(out_dir) / "report.json").string(), report);
    return report;
}

Json emit_report(const ExperimentSpec& spec,
                 const std::vector<DataTransmissionDistanceResult>& res,
                 const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(fs::path(out_dir) / "signals");
    fs::create_directories(fs::path(out_dir) / "estimates");

    Json report;
    report["schema"] = "mcpipe-report-1";
    report["kind"] = "data_transmission";
    report["spec"] = spec_to_json(spec);
    report["results"] = Json::array();

    for (std::size_t i = 0; i < res.size(); ++i) {
        const auto& r = res[i];
        const std::string label = distance_label(i, r.d);

        const std::string sig_rel = "signals/" + label + ".csv";
        write_sampled_csv((fs::path(out_dir) / sig_rel).string(), r.raw);
        const std::string est_rel = "estimates/" + label + ".json";
        write_json_file((fs::path(out_dir) / est_rel).string(), estimate_to_json(r.estimate));

        Json entry;
        entry["d"] = r.d;
        entry["kt"] = r.kt;
        entry["n"] = r.n;
        entry["errors"] = Json{{"viterbi", r.errors_viterbi}, {"increase", r.errors_increase}};
        entry["score_last"] = spec.score_last;
        entry["rmse"] = r.rmse_all;
        if (r.estimate.fitted) entry["fitted"] = fitted_json(*r.estimate.fitted);
        entry["residual"] = r.estimate.residual;
        entry["bits_true"] = bits_to_string(r.bits_true);
        entry["bits_viterbi"] = bits_to_string(r.bits_viterbi);
        entry["bits_increase"] = bits_to_string(r.bits_increase);
        entry["files"] = Json{{"signal", sig_rel}, {"estimate", est_rel}};
        report["results"].push_back(entry);
    }
    write_json_file((fs::path(out_dir) / "report.json").string(), report);
    return report;
}

Json read_report(const std::string& path) {
    Json j = read_json_file(path);
    if (j.value("schema", "") != "mcpipe-report-1")
        throw ConfigError("report '" + path + "': unknown schema");
    return j;
}

Json run_experiment(const ExperimentSpec& spec, const std::string& out_dir, Exec exec) {
    if (spec.kind == ExperimentKind::pulse_train)
        return emit_report(spec, run_pulse_train(spec, exec), out_dir);
    return emit_report(spec, run_data_transmission(spec, exec), out_dir);
}

}  // namespace mcpipe
