#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mcpipe/detection.hpp"
#include "mcpipe/estimation.hpp"
#include "mcpipe/io.hpp"

namespace mcpipe {

enum class ExperimentKind { pulse_train, data_transmission };

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::data_transmission;
    TestbedConfig cfg;
    std::vector<double> distances = {0.05, 0.10, 0.20, 0.40};  // [m]

    // data transmission
    int K = 400;
    EstimatorMethod estimator = EstimatorMethod::samples;
    std::vector<int> kt_model = {10, 15, 20, 20};     // per distance
    std::vector<int> kt_samples = {50, 75, 100, 100}; // per distance
    std::vector<int> n_memory = {10, 15, 20, 20};     // CIR length in symbols, per distance

    // pulse train
    int pulse_count = 15;
    std::vector<double> pulse_T = {20.0, 40.0, 60.0, 60.0};  // [s], per distance

    // channel ground truth for the synthetic runs
    BetaInit truth{3.0, 3.0};
    double lz = 0.0;

    double noise_sigma = 0.0;
    double jitter_sigma = 0.0;
    std::uint64_t seed = 1;
    int score_last = 300;  // error-count window

    void validate() const;
    int kt_for(std::size_t distance_index) const;
};

ExperimentSpec spec_from_json(const Json& j);
Json spec_to_json(const ExperimentSpec& spec);

struct PulseTrainDistanceResult {
    double d = 0.0;
    double T = 0.0;
    std::vector<std::vector<double>> segments;  // pulse_count x (N*I)
    std::vector<double> mean_pulse;
    FittedParams fitted;
    double residual = 0.0;
};

struct DataTransmissionDistanceResult {
    double d = 0.0;
    int kt = 0;
    int n = 0;
    std::vector<std::uint8_t> bits_true;      // K
    std::vector<std::uint8_t> bits_viterbi;   // Ki
    std::vector<std::uint8_t> bits_increase;  // K
    int errors_viterbi = 0;   // over the last score_last symbols
    int errors_increase = 0;
    double rmse_all = 0.0;    // whole record vs PAM with the estimated taps
    ChannelEstimate estimate;
    SampledSignal raw;
};

std::vector<PulseTrainDistanceResult> run_pulse_train(const ExperimentSpec& spec,
                                                      Exec exec = Exec::par);
std::vector<DataTransmissionDistanceResult> run_data_transmission(const ExperimentSpec& spec,
                                                                  Exec exec = Exec::par);

// Writes report.json plus signals/*.csv and estimates/*.json under out_dir
// and returns the report. The report embeds the spec for provenance.
Json emit_report(const ExperimentSpec& spec, const std::vector<PulseTrainDistanceResult>& res,
                 const std::string& out_dir);
Json emit_report(const ExperimentSpec& spec,
                 const std::vector<DataTransmissionDistanceResult>& res,
                 const std::string& out_dir);

Json read_report(const std::string& path);

// Convenience driver: run the spec and emit everything under out_dir.
Json run_experiment(const ExperimentSpec& spec, const std::string& out_dir,
                    Exec exec = Exec::par);

}  // namespace mcpipe
