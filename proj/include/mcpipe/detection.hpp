#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mcpipe/cir.hpp"
#include "mcpipe/estimation.hpp"
#include "mcpipe/signal.hpp"

namespace mcpipe {

struct DetectionResult {
    std::vector<std::uint8_t> bits;
    double objective = 0.0;                   // squared error of the decided sequence
    std::optional<std::vector<double>> path_metrics;  // per-symbol best metric trace
};

struct IncreaseParams {
    double xi = 0.0;  // detection threshold, susceptibility units
    int i_off = 0;    // sample offset within the symbol interval, in [0, I)
};

// Exact minimizer of || r - s([at ai], h) ||^2 over ai in {0,1}^Ki via a
// 2^(N-1)-state trellis. The record is truncated at (kt+Ki)*I samples; ties
// break toward bit 0. Identical output under both execution policies.
DetectionResult viterbi_detect(const RegularSignal& r, const ChannelEstimate& h,
                               const SymbolSequence& at, int Ki, int N, int I,
                               Exec exec = Exec::par, bool want_trace = false);

// Detector parameterization from the peak analytics of `assumed` (default
// alpha = beta = 3): xi = h_peak/20, i_off = min(I-1, round((t_peak-t0)/dt)).
IncreaseParams increase_params(const CirModel& m, int I, double dt,
                               const BetaInit& assumed = {3.0, 3.0});

// Decide 1 iff r[k*I + i_off] - r[k*I] > xi, for k in [0, K).
DetectionResult increase_detect(const RegularSignal& r, const IncreaseParams& p, int K, int I);

// Hamming distance over indices >= skip.
int count_errors(std::span<const std::uint8_t> bits_hat, std::span<const std::uint8_t> bits_true,
                 int skip = 0);

}  // namespace mcpipe
