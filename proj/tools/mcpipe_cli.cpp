// mcpipe: model, simulate, estimate, and detect on the flow-driven
// nanoparticle link.
//
// Exit codes: 0 success, 2 configuration error, 3 numeric failure,
// 4 synchronization not found.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mcpipe/cir_oracle.hpp"
#include "mcpipe/detection.hpp"
#include "mcpipe/estimation.hpp"
#include "mcpipe/experiment.hpp"
#include "mcpipe/io.hpp"
#include "mcpipe/physics.hpp"
#include "mcpipe/rng.hpp"
#include "mcpipe/units.hpp"

using namespace mcpipe;

namespace {

std::string output_root() {
    if (const char* env = std::getenv("MCPIPE_OUTPUT_ROOT")) return env;
    return ".";
}

TestbedConfig load_config(const std::string& config_path, double d_cm) {
    TestbedConfig cfg =
        config_path.empty() ? TestbedConfig{} : config_from_json_file(config_path);
    if (d_cm > 0.0) cfg.d = units::centimeter(d_cm);
    cfg.validate();
    return cfg;
}

std::string flow_regime_name(FlowRegime r) {
    return r == FlowRegime::laminar ? "laminar" : "turbulent";
}
std::string transport_regime_name(TransportRegime r) {
    return r == TransportRegime::flow_dominated ? "flow_dominated" : "diffusion_dominated";
}

int cmd_characterize(const std::string& config_path, double d_cm, const std::string& json_out) {
    const TestbedConfig cfg = load_config(config_path, d_cm);
    const RegimeReport rep = characterize(cfg, cfg.d);
    const RegimeThresholds th = regime_thresholds(cfg, cfg.d);

    Json j;
    j["reynolds"] = rep.reynolds;
    j["flow_regime"] = flow_regime_name(rep.flow_regime);
    j["dispersion_factor"] = rep.dispersion_factor;
    j["transport_regime"] = transport_regime_name(rep.transport_regime);
    j["diffusion_coeff"] = rep.diffusion_coeff;
    j["gravity"] = Json{{"force", rep.gravity_force},
                        {"drift", rep.gravity_drift},
                        {"onset", rep.gravity_onset_time}};
    j["thresholds"] = Json{{"qb_turbulent", th.qb_turbulent},
                           {"a_turbulent", th.a_turbulent},
                           {"ueff_dispersion", th.ueff_dispersion},
                           {"a_dispersion", th.a_dispersion},
                           {"d_dispersion", th.d_dispersion},
                           {"diff_dispersion", th.diff_dispersion}};

    std::printf("%-28s %14.6g\n", "Reynolds number", rep.reynolds);
    std::printf("%-28s %14s\n", "flow regime", flow_regime_name(rep.flow_regime).c_str());
    std::printf("%-28s %14.6g\n", "dispersion factor", rep.dispersion_factor);
    std::printf("%-28s %14s\n", "transport regime",
                transport_regime_name(rep.transport_regime).c_str());
    std::printf("%-28s %14.6g\n", "diffusion coeff [m^2/s]", rep.diffusion_coeff);
    std::printf("%-28s %14.6g\n", "gravity force [N]", rep.gravity_force);
    std::printf("%-28s %14.6g\n", "gravity drift [m/s]", rep.gravity_drift);
    std::printf("%-28s %14.6g\n", "gravity onset [s]", rep.gravity_onset_time);
    std::printf("%-28s %14.6g\n", "Qb -> turbulent [mL/min]",
                units::to_ml_per_min(th.qb_turbulent));
    std::printf("%-28s %14.6g\n", "a -> turbulent [mm]", units::to_millimeter(th.a_turbulent));
    std::printf("%-28s %14.6g\n", "u_eff -> dispersive [mm/s]", th.ueff_dispersion * 1e3);
    std::printf("%-28s %14.6g\n", "a -> dispersive [mm]", units::to_millimeter(th.a_dispersion));
    std::printf("%-28s %14.6g\n", "d -> dispersive [m]", th.d_dispersion);
    std::printf("%-28s %14.6g\n", "D -> dispersive [m^2/s]", th.diff_dispersion);

    if (!json_out.empty()) write_json_file(json_out, j);
    return 0;
}

int cmd_cir(const std::string& config_path, double d_cm, double alpha, double beta, double lz_mm,
            double t_max, double step, const std::string& csv_out, const std::string& json_out) {
    const TestbedConfig cfg = load_config(config_path, d_cm);
    CirModel m{cfg, cfg.d, BetaInit{alpha, beta}, units::millimeter(lz_mm)};
    m.validate();

    Json j;
    j["c_d"] = scale(m);
    j["t0"] = t_start(m);
    j["t_peak"] = t_peak(m);
    j["h_peak"] = h_peak(m);
    j["support_start"] = support_start(m);
    if (!json_out.empty()) write_json_file(json_out, j);
    std::printf("c_d=%.6g t0=%.6g s t_peak=%.6g s h_peak=%.6g\n", scale(m), t_start(m), t_peak(m),
                h_peak(m));

    if (!csv_out.empty()) {
        const auto n = static_cast<std::size_t>(t_max / step) + 1;
        const auto h = sample_cir(m, 0.0, step, n);
        std::FILE* f = std::fopen(csv_out.c_str(), "w");
        if (!f) throw ConfigError("cir: cannot write '" + csv_out + "'");
        std::fputs("t_s,h\n", f);
        for (std::size_t i = 0; i < n; ++i)
            std::fprintf(f, "%.17g,%.17g\n", static_cast<double>(i) * step, h[i]);
        std::fclose(f);
    }
    return 0;
}

int cmd_synth(const std::string& config_path, double d_cm, double alpha, double beta, double lz_mm,
              const std::string& bits_str, const std::string& bits_file, int random_k,
              std::uint64_t seed, double noise, double jitter, int taps, const std::string& out,
              const std::string& bits_out) {
    const TestbedConfig cfg = load_config(config_path, d_cm);
    CirModel m{cfg, cfg.d, BetaInit{alpha, beta}, units::millimeter(lz_mm)};
    m.validate();

    SymbolSequence a;
    if (!bits_file.empty()) {
        a = read_bits_file(bits_file, 0);
    } else if (!bits_str.empty()) {
        for (char ch : bits_str) {
            if (ch == '0') a.bits.push_back(0);
            else if (ch == '1') a.bits.push_back(1);
            else throw ConfigError("synth: --bits must contain only 0 and 1");
        }
    } else if (random_k > 0) {
        a.bits.assign(static_cast<std::size_t>(random_k), 0);
        a.bits[0] = 1;
        for (int k = 1; k < random_k; ++k)
            a.bits[static_cast<std::size_t>(k)] =
                static_cast<std::uint8_t>(rng_bit(seed, 3, static_cast<std::uint64_t>(k)));
    } else {
        throw ConfigError("synth: provide --bits, --bits-file, or --random");
    }

    RxOptions opt;
    opt.noise_sigma = noise;
    opt.jitter_sigma = jitter;
    opt.seed = seed;
    opt.taps_symbols = taps;
    const SampledSignal rx = simulate_rx(m, a, opt);
    write_sampled_csv(out, rx);
    if (!bits_out.empty()) write_bits_file(bits_out, a);
    std::printf("wrote %zu samples to %s\n", rx.values.size(), out.c_str());
    return 0;
}

RegularSignal load_prepared_signal(const std::string& path, double dt, bool no_sync) {
    RegularSignal reg;
    if (csv_is_regular(path)) {
        reg = read_regular_csv(path);
    } else {
        reg = resample_linear(read_sampled_csv(path), dt);
    }
    if (no_sync) return reg;
    const auto sync = synchronize(reg);
    if (!sync) throw SyncError("signal '" + path + "': no onset found");
    return sync->shifted;
}

int cmd_fit(const std::string& config_path, double d_cm, const std::string& signal_path,
            const std::string& bits_path, int kt, const std::string& method, int n, double ridge,
            bool no_sync, const std::string& out) {
    const TestbedConfig cfg = load_config(config_path, d_cm);
    const int I = cfg.oversampling();
    SymbolSequence at = read_bits_file(bits_path, kt > 0 ? kt : 0);
    if (kt <= 0) at.kt = at.size();

    RegularSignal r = load_prepared_signal(signal_path, cfg.dt, no_sync);
    const std::size_t window = static_cast<std::size_t>(at.kt) * static_cast<std::size_t>(I);
    if (r.values.size() < window) throw ConfigError("fit: record shorter than Kt*I samples");
    RegularSignal rt;
    rt.dt = r.dt;
    rt.origin = r.origin;
    rt.values.assign(r.values.begin(), r.values.begin() + static_cast<long long>(window));

    const ChannelEstimate est = method == "model" ? fit_model(rt, at, cfg, cfg.d, n, I)
                                                  : fit_samples(rt, at, n, I, ridge);
    write_json_file(out, estimate_to_json(est));
    if (est.fitted)
        std::printf("fitted alpha=%.6g beta=%.6g gamma=%.6g residual=%.6g\n", est.fitted->alpha,
                    est.fitted->beta, est.fitted->gamma, est.residual);
    else
        std::printf("fitted %zu taps, residual=%.6g\n", est.taps.size(), est.residual);
    return 0;
}

int cmd_detect(const std::string& config_path, double d_cm, const std::string& signal_path,
               const std::string& estimate_path, const std::string& method,
               const std::string& bits_path, int kt, int ki, const std::string& truth_path,
               int skip, bool no_sync, const std::string& out) {
    const TestbedConfig cfg = load_config(config_path, d_cm);
    const int I = cfg.oversampling();
    const RegularSignal r = load_prepared_signal(signal_path, cfg.dt, no_sync);

    // symbol budget: explicit --ki wins, then the truth length, then whatever
    // fits in the record
    std::optional<int> truth_symbols;
    if (!truth_path.empty())
        truth_symbols = read_bits_file(truth_path, 0).size();

    DetectionResult result;
    Json j;
    j["method"] = method;
    if (method == "viterbi") {
        if (estimate_path.empty()) throw ConfigError("detect: viterbi needs --estimate");
        const ChannelEstimate est = estimate_from_json(read_json_file(estimate_path));
        SymbolSequence at;
        if (!bits_path.empty()) {
            at = read_bits_file(bits_path, kt);
            at.bits.resize(static_cast<std::size_t>(kt));
            at.kt = kt;
        }
        const int n = est.n_symbols;
        if (ki <= 0) {
            ki = truth_symbols ? *truth_symbols - at.kt
                               : static_cast<int>(r.values.size()) / I - at.kt;
            if (ki <= 0) throw ConfigError("detect: record too short for any information symbol");
        }
        result = viterbi_detect(r, est, at, ki, n, I);
        j["objective"] = result.objective;
    } else if (method == "increase") {
        CirModel m{cfg, cfg.d, BetaInit{3.0, 3.0}, 0.0};
        const IncreaseParams p = increase_params(m, I, cfg.dt);
        const int k_total =
            ki > 0 ? ki
                   : (truth_symbols ? *truth_symbols : static_cast<int>(r.values.size()) / I);
        result = increase_detect(r, p, k_total, I);
        j["xi"] = p.xi;
        j["i_off"] = p.i_off;
    } else {
        throw ConfigError("detect: method must be viterbi or increase");
    }

    std::string bits;
    for (auto b : result.bits) bits.push_back(b ? '1' : '0');
    j["bits"] = bits;

    if (!truth_path.empty()) {
        const SymbolSequence truth = read_bits_file(truth_path, 0);
        const std::size_t offset = method == "viterbi" ? static_cast<std::size_t>(kt) : 0;
        if (truth.bits.size() < offset + result.bits.size())
            throw ConfigError("detect: truth file shorter than the decided sequence");
        const std::span<const std::uint8_t> truth_span(truth.bits.data() + offset,
                                                       result.bits.size());
        j["errors"] = count_errors(result.bits, truth_span, skip);
        j["skip"] = skip;
    }
    write_json_file(out, j);
    std::printf("decided %zu symbols%s\n", result.bits.size(),
                j.contains("errors")
                    ? (", errors=" + std::to_string(j["errors"].get<int>())).c_str()
                    : "");
    return 0;
}

int cmd_experiment(const std::string& spec_path, const std::string& kind,
                   const std::string& distances_cm, const std::string& estimator,
                   std::uint64_t seed, double noise, double jitter, std::string out_dir) {
    ExperimentSpec spec;
    if (!spec_path.empty()) spec = spec_from_json(read_json_file(spec_path));
    if (!kind.empty()) {
        if (kind == "pulse_train") spec.kind = ExperimentKind::pulse_train;
        else if (kind == "data_transmission") spec.kind = ExperimentKind::data_transmission;
        else throw ConfigError("experiment: unknown kind '" + kind + "'");
    }
    if (!distances_cm.empty()) {
        const ExperimentSpec base = spec;  // schedules are tied to base.distances
        spec.distances.clear();
        std::string token;
        for (char ch : distances_cm + ",") {
            if (ch == ',') {
                if (!token.empty()) spec.distances.push_back(units::centimeter(std::stod(token)));
                token.clear();
            } else {
                token.push_back(ch);
            }
        }
        // remap the per-distance schedules by nearest base distance
        spec.kt_model.clear();
        spec.kt_samples.clear();
        spec.n_memory.clear();
        spec.pulse_T.clear();
        for (double d : spec.distances) {
            std::size_t nearest = 0;
            for (std::size_t i = 1; i < base.distances.size(); ++i)
                if (std::abs(base.distances[i] - d) < std::abs(base.distances[nearest] - d))
                    nearest = i;
            spec.kt_model.push_back(base.kt_model[nearest]);
            spec.kt_samples.push_back(base.kt_samples[nearest]);
            spec.n_memory.push_back(base.n_memory[nearest]);
            spec.pulse_T.push_back(base.pulse_T[nearest]);
        }
    }
    if (!estimator.empty()) {
        if (estimator == "model") spec.estimator = EstimatorMethod::model;
        else if (estimator == "samples") spec.estimator = EstimatorMethod::samples;
        else throw ConfigError("experiment: unknown estimator '" + estimator + "'");
    }
    if (seed != 0) spec.seed = seed;
    if (noise >= 0.0) spec.noise_sigma = noise;
    if (jitter >= 0.0) spec.jitter_sigma = jitter;
    spec.validate();

    if (out_dir.empty())
        out_dir = (std::filesystem::path(output_root()) / "mcpipe_out").string();
    const Json report = run_experiment(spec, out_dir);
    std::printf("report written to %s\n",
                (std::filesystem::path(out_dir) / "report.json").string().c_str());
    for (const auto& entry : report["results"]) {
        if (entry.contains("errors"))
            std::printf("  d=%5.3g m  viterbi=%d  increase=%d  rmse=%.4g\n",
                        entry["d"].get<double>(), entry["errors"]["viterbi"].get<int>(),
                        entry["errors"]["increase"].get<int>(), entry["rmse"].get<double>());
        else
            std::printf("  d=%5.3g m  alpha=%.4g beta=%.4g gamma=%.4g\n",
                        entry["d"].get<double>(), entry["fitted"]["alpha"].get<double>(),
                        entry["fitted"]["beta"].get<double>(),
                        entry["fitted"]["gamma"].get<double>());
    }
    return 0;
}

int cmd_eval(const std::string& hyp_path, const std::string& truth_path, int skip,
             const std::string& rmse_a, const std::string& rmse_b, int k_norm, double c_d,
             const std::string& out) {
    Json j;
    if (!hyp_path.empty()) {
        if (truth_path.empty()) throw ConfigError("eval: --truth required with --hyp");
        const SymbolSequence hyp = read_bits_file(hyp_path, 0);
        const SymbolSequence truth = read_bits_file(truth_path, 0);
        j["errors"] = count_errors(hyp.bits, truth.bits, skip);
        j["skip"] = skip;
        j["symbols"] = hyp.bits.size();
    }
    if (!rmse_a.empty()) {
        if (rmse_b.empty() || k_norm <= 0 || !(c_d > 0.0))
            throw ConfigError("eval: --rmse needs two files, --k and --cd");
        const RegularSignal a = read_regular_csv(rmse_a);
        const RegularSignal b = read_regular_csv(rmse_b);
        const std::size_t n = std::min(a.values.size(), b.values.size());
        j["rmse"] = rmse(std::span<const double>(a.values.data(), n),
                         std::span<const double>(b.values.data(), n), k_norm, c_d);
    }
    if (j.empty()) throw ConfigError("eval: nothing to evaluate");
    if (!out.empty()) write_json_file(out, j);
    std::printf("%s\n", j.dump().c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"flow-driven magnetic-nanoparticle link toolkit"};
    app.require_subcommand(1);

    std::string config_path, json_out, csv_out, out, bits_str, bits_file, bits_out;
    std::string signal_path, estimate_path, method = "samples", truth_path;
    std::string spec_path, kind, distances_cm, estimator;
    std::string hyp_path, rmse_a, rmse_b, bits_path;
    double d_cm = 0.0, alpha = 3.0, beta = 3.0, lz_mm = 0.0, t_max = 20.0, step = 0.01;
    double noise = 0.0, jitter = 0.0, ridge = 0.0, c_d = 0.0;
    int random_k = 0, taps = 0, kt = 0, ki = 0, n = 15, skip = 0, k_norm = 0;
    std::uint64_t seed = 1;

    auto* c_char = app.add_subcommand("characterize", "flow/diffusion/gravity regime report");
    c_char->add_option("--config", config_path, "JSON config file");
    c_char->add_option("--d-cm", d_cm, "distance in cm (overrides config)");
    c_char->add_option("--json", json_out, "write the report as JSON");

    auto* c_cir = app.add_subcommand("cir", "evaluate the impulse response on a grid");
    c_cir->add_option("--config", config_path, "JSON config file");
    c_cir->add_option("--d-cm", d_cm, "distance in cm");
    c_cir->add_option("--alpha", alpha, "initial distribution alpha");
    c_cir->add_option("--beta", beta, "initial distribution beta");
    c_cir->add_option("--lz-mm", lz_mm, "receiver window length in mm (0 = limit form)");
    c_cir->add_option("--t-max", t_max, "grid end time [s]");
    c_cir->add_option("--step", step, "grid step [s]");
    c_cir->add_option("-o,--out", csv_out, "CSV output path");
    c_cir->add_option("--json", json_out, "JSON header output path");

    auto* c_synth = app.add_subcommand("synth", "synthesize a receiver record");
    c_synth->add_option("--config", config_path, "JSON config file");
    c_synth->add_option("--d-cm", d_cm, "distance in cm");
    c_synth->add_option("--alpha", alpha, "initial distribution alpha");
    c_synth->add_option("--beta", beta, "initial distribution beta");
    c_synth->add_option("--lz-mm", lz_mm, "receiver window length in mm");
    c_synth->add_option("--bits", bits_str, "bit string, e.g. 1011");
    c_synth->add_option("--bits-file", bits_file, "bits file (one line of 0/1)");
    c_synth->add_option("--random", random_k, "generate K random bits (first fixed to 1)");
    c_synth->add_option("--seed", seed, "random seed");
    c_synth->add_option("--noise", noise, "noise level in units of c_d");
    c_synth->add_option("--jitter", jitter, "sampling jitter std dev [s]");
    c_synth->add_option("--taps", taps, "response truncation in symbols (0 = auto)");
    c_synth->add_option("-o,--out", out, "output CSV")->required();
    c_synth->add_option("--bits-out", bits_out, "write the transmitted bits");

    auto* c_fit = app.add_subcommand("fit", "estimate the channel from a training prefix");
    c_fit->add_option("--config", config_path, "JSON config file");
    c_fit->add_option("--d-cm", d_cm, "distance in cm");
    c_fit->add_option("--signal", signal_path, "received CSV (raw or regular)")->required();
    c_fit->add_option("--bits", bits_path, "transmitted bits file")->required();
    c_fit->add_option("--kt", kt, "training prefix length (0 = whole file)");
    c_fit->add_option("--method", method, "model | samples");
    c_fit->add_option("--n", n, "memory length in symbols");
    c_fit->add_option("--ridge", ridge, "ridge regularizer for the sample method");
    c_fit->add_flag("--no-sync", "skip threshold synchronization");
    c_fit->add_option("-o,--out", out, "estimate JSON output")->required();

    auto* c_detect = app.add_subcommand("detect", "decide the transmitted bits");
    c_detect->add_option("--config", config_path, "JSON config file");
    c_detect->add_option("--d-cm", d_cm, "distance in cm");
    c_detect->add_option("--signal", signal_path, "received CSV")->required();
    c_detect->add_option("--estimate", estimate_path, "estimate JSON (viterbi)");
    c_detect->add_option("--method", method, "viterbi | increase")->required();
    c_detect->add_option("--bits", bits_path, "training bits file (viterbi)");
    c_detect->add_option("--kt", kt, "training prefix length");
    c_detect->add_option("--ki", ki, "information symbols to decide (0 = fill the record)");
    c_detect->add_option("--truth", truth_path, "true bits for scoring");
    c_detect->add_option("--skip", skip, "leading symbols ignored when scoring");
    c_detect->add_flag("--no-sync", "skip threshold synchronization");
    c_detect->add_option("-o,--out", out, "decision JSON output")->required();

    auto* c_exp = app.add_subcommand("experiment", "run a full synthetic experiment");
    c_exp->add_option("--spec", spec_path, "experiment spec JSON");
    c_exp->add_option("--kind", kind, "pulse_train | data_transmission");
    c_exp->add_option("--distances-cm", distances_cm, "comma list, e.g. 5,10,20,40");
    c_exp->add_option("--estimator", estimator, "model | samples");
    c_exp->add_option("--seed", seed, "random seed");
    c_exp->add_option("--noise", noise, "noise level in units of c_d");
    c_exp->add_option("--jitter", jitter, "sampling jitter std dev [s]");
    c_exp->add_option("--out", out, "output directory (default $MCPIPE_OUTPUT_ROOT/mcpipe_out)");

    auto* c_eval = app.add_subcommand("eval", "score decisions or compute an RMSE");
    c_eval->add_option("--hyp", hyp_path, "decided bits file");
    c_eval->add_option("--truth", truth_path, "true bits file");
    c_eval->add_option("--skip", skip, "leading symbols ignored");
    c_eval->add_option("--rmse-a", rmse_a, "regular CSV, received");
    c_eval->add_option("--rmse-b", rmse_b, "regular CSV, model");
    c_eval->add_option("--k", k_norm, "symbol count for the RMSE normalization");
    c_eval->add_option("--cd", c_d, "distance scale factor c_d");
    c_eval->add_option("-o,--out", out, "JSON output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*c_char) return cmd_characterize(config_path, d_cm, json_out);
        if (*c_cir) return cmd_cir(config_path, d_cm, alpha, beta, lz_mm, t_max, step, csv_out,
                                   json_out);
        if (*c_synth)
            return cmd_synth(config_path, d_cm, alpha, beta, lz_mm, bits_str, bits_file, random_k,
                             seed, noise, jitter, taps, out, bits_out);
        if (*c_fit)
            return cmd_fit(config_path, d_cm, signal_path, bits_path, kt, method, n, ridge,
                           c_fit->count("--no-sync") > 0, out);
        if (*c_detect)
            return cmd_detect(config_path, d_cm, signal_path, estimate_path, method, bits_path, kt,
                              ki, truth_path, skip, c_detect->count("--no-sync") > 0, out);
        if (*c_exp)
            return cmd_experiment(spec_path, kind, distances_cm, estimator, seed, noise, jitter,
                                  out);
        if (*c_eval) return cmd_eval(hyp_path, truth_path, skip, rmse_a, rmse_b, k_norm, c_d, out);
    } catch (const SyncError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const NumericError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "unexpected error: %s\n", e.what());
        return 1;
    }
    return 0;
}
