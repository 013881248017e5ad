#pragma once

#include <optional>
#include <vector>

#include "mcpipe/signal.hpp"

namespace mcpipe {

enum class EstimatorMethod { model, samples };

struct FittedParams {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
};

struct ChannelEstimate {
    std::vector<double> taps;  // length N*I
    EstimatorMethod method = EstimatorMethod::samples;
    std::optional<FittedParams> fitted;  // model method only
    double residual = 0.0;               // training sum of squared errors
    int n_symbols = 0;                   // N
    int oversampling = 0;                // I
};

// Convolution design of the PAM map for a training prefix: entry (r, c) is 1
// iff c = r - k*I for some k with a[k] = 1. Stored as one column offset per
// active symbol.
struct DesignMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<int> active_offsets;  // k*I for every k with a[k] = 1

    std::vector<double> apply(std::span<const double> h) const;            // A h
    std::vector<double> apply_transpose(std::span<const double> r) const;  // A^T r
    std::vector<double> dense() const;                                     // row-major
};

DesignMatrix build_design(const SymbolSequence& at, int N, int I, std::size_t rows);

struct FitModelOptions {
    double lo = 1.0;    // lower box bound on alpha, beta
    double hi = 10.0;   // upper box bound
    std::vector<double> start_grid = {1.0, 2.0, 3.0, 4.0, 6.0};
    double param_tol = 1e-8;
    int max_evals = 5000;  // per start
};

// Bounded nonlinear least squares for (alpha, beta, gamma): gamma is
// eliminated in closed form per (alpha, beta) candidate, the remaining 2-D
// search runs Nelder-Mead from every start-grid point. rt must already be
// synchronized; its length sets the fit window.
ChannelEstimate fit_model(const RegularSignal& rt, const SymbolSequence& at,
                          const TestbedConfig& cfg, double d, int N, int I,
                          const FitModelOptions& opt = {}, Exec exec = Exec::par);

// Linear least squares on the N*I taps (column-pivoted orthogonal
// factorization; minimum-norm solution when rank-deficient, or the ridge
// solution when ridge > 0).
ChannelEstimate fit_samples(const RegularSignal& rt, const SymbolSequence& at, int N, int I,
                            double ridge = 0.0);

}  // namespace mcpipe
