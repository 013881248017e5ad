#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mcpipe/cir.hpp"
#include "mcpipe/parallel.hpp"

namespace mcpipe {

// OOK symbol sequence with a training prefix of kt symbols.
struct SymbolSequence {
    std::vector<std::uint8_t> bits;
    int kt = 0;

    int size() const { return static_cast<int>(bits.size()); }
    int ki() const { return size() - kt; }
    void validate() const;
};

// Irregularly sampled record: strictly increasing timestamps [s] and
// susceptibility values.
struct SampledSignal {
    std::vector<double> timestamps;
    std::vector<double> values;

    void validate() const;
};

// Regular record on the absolute grid t = (origin + k) * dt.
struct RegularSignal {
    double dt = 0.1;
    long long origin = 0;
    std::vector<double> values;

    double time_at(std::size_t k) const { return (static_cast<double>(origin) + static_cast<double>(k)) * dt; }
};

// s[i] = sum_k a[k] h[i - k*I]. Output length (K-1)*I + len(h) covers the
// last symbol plus the full tap tail.
RegularSignal pam_synthesize(const SymbolSequence& a, std::span<const double> h, int I,
                             double dt = 0.1, Exec exec = Exec::par);

struct RxOptions {
    double noise_sigma = 0.0;   // white Gaussian noise, std dev noise_sigma * c_d
    double jitter_sigma = 0.0;  // sampling-time jitter std dev [s], clipped at 3 sigma
    std::uint64_t seed = 0;
    int taps_symbols = 0;       // CIR truncation in symbols; 0 = ceil(support/T)
    double quiet = 2.0;         // quiet interval recorded before the first injection [s]
    double grid_phase = 0.0;    // sampling clock phase in [0, dt)
};

// Synthetic receiver record for a symbol sequence: injections at
// quiet + k*T, nominal cfg.dt sampling with optional jitter, additive white
// Gaussian noise. Deterministic in (options.seed); identical under both
// execution policies.
SampledSignal simulate_rx(const CirModel& m, const SymbolSequence& a, const RxOptions& opt,
                          Exec exec = Exec::par);

// Linear interpolation onto the absolute grid k*dt restricted to
// [first, last] timestamp; no extrapolation.
RegularSignal resample_linear(const SampledSignal& x, double dt = 0.1);

struct SyncResult {
    long long i_start = 0;    // index into the input signal
    RegularSignal shifted;    // r[i] = x[i + i_start]
};

// First index starting `run` consecutive samples strictly above
// max(values)/100. Empty optional when no such run exists.
std::optional<SyncResult> synchronize(const RegularSignal& x, int run = 10,
                                      double threshold_fraction = 0.01);

// sqrt( sum (r-s)^2 / K / c_d^2 ) over two equal-length records.
double rmse(std::span<const double> r, std::span<const double> s, int K, double c_d);

}  // namespace mcpipe
