#include "mcpipe/signal.hpp"

#include <algorithm>
#include <cmath>

#include "mcpipe/rng.hpp"

namespace mcpipe {

namespace {
// rng stream ids for simulate_rx
constexpr std::uint64_t kNoiseStream = 1;
constexpr std::uint64_t kJitterStream = 2;
}  // namespace

void SymbolSequence::validate() const {
    if (kt < 0 || kt > size()) throw ConfigError("SymbolSequence: kt out of range");
    for (auto b : bits)
        if (b > 1) throw ConfigError("SymbolSequence: bits must be 0 or 1");
}

void SampledSignal::validate() const {
    if (timestamps.size() != values.size())
        throw ConfigError("SampledSignal: timestamps/values length mismatch");
    for (std::size_t i = 1; i < timestamps.size(); ++i)
        if (!(timestamps[i] > timestamps[i - 1]))
            throw ConfigError("SampledSignal: timestamps must be strictly increasing");
}

RegularSignal pam_synthesize(const SymbolSequence& a, std::span<const double> h, int I,
                             double dt, Exec exec) {
    if (I < 1) throw ConfigError("pam_synthesize: I must be >= 1");
    a.validate();
    const long long K = a.size();
    RegularSignal out;
    out.dt = dt;
    out.origin = 0;
    if (K == 0 || h.empty()) return out;

    const long long len = static_cast<long long>(h.size());
    const std::size_t n = static_cast<std::size_t>((K - 1) * I) + h.size();
    out.values.assign(n, 0.0);
    parallel_for(exec, n, [&](std::size_t idx) {
        const long long i = static_cast<long long>(idx);
        const long long k_hi = std::min<long long>(K - 1, i / I);
        const long long past = i - len + 1;  // need i - k*I < len
        const long long k_lo = past <= 0 ? 0 : (past + I - 1) / I;
        double acc = 0.0;
        for (long long k = k_lo; k <= k_hi; ++k)
            if (a.bits[static_cast<std::size_t>(k)]) acc += h[static_cast<std::size_t>(i - k * I)];
        out.values[idx] = acc;
    });
    return out;
}

SampledSignal simulate_rx(const CirModel& m, const SymbolSequence& a, const RxOptions& opt,
                          Exec exec) {
    m.validate();
    a.validate();
    if (a.size() == 0) throw ConfigError("simulate_rx: empty symbol sequence");
    if (opt.noise_sigma < 0.0 || opt.jitter_sigma < 0.0 || opt.quiet < 0.0)
        throw ConfigError("simulate_rx: negative option");
    const double dt = m.cfg.dt;
    if (!(opt.grid_phase >= 0.0) || !(opt.grid_phase < dt))
        throw ConfigError("simulate_rx: grid_phase must lie in [0, dt)");

    const double T = m.cfg.T;
    const long long K = a.size();
    const double onset = support_start(m);
    const int taps_symbols =
        opt.taps_symbols > 0
            ? opt.taps_symbols
            : static_cast<int>(std::ceil((support_end(m) - onset) / T));
    const double span = static_cast<double>(taps_symbols) * T;  // response kept on [onset, onset+span)

    const double t_end = opt.quiet + static_cast<double>(K - 1) * T + onset + span + 1.0;
    const std::size_t n = static_cast<std::size_t>(std::ceil((t_end - opt.grid_phase) / dt)) + 1;

    // jitter first: monotonicity must hold before any value is computed
    std::vector<double> times(n);
    const double clip = 3.0 * opt.jitter_sigma;
    parallel_for(exec, n, [&](std::size_t i) {
        double jit = 0.0;
        if (opt.jitter_sigma > 0.0)
            jit = std::clamp(opt.jitter_sigma * rng_gauss(opt.seed, kJitterStream, i), -clip, clip);
        times[i] = static_cast<double>(i) * dt + opt.grid_phase + jit;
    });
    for (std::size_t i = 1; i < n; ++i)
        if (!(times[i] > times[i - 1]))
            throw NumericError("simulate_rx: jitter breaks timestamp monotonicity");

    const double sigma_n = opt.noise_sigma * scale(m);
    // keep the truncation window decisions stable against rounding of the
    // sample instants (1 ns shift, far below dt and any jitter)
    const double edge = 1e-9;
    SampledSignal out;
    out.timestamps = std::move(times);
    out.values.assign(n, 0.0);
    parallel_for(exec, n, [&](std::size_t i) {
        const double t = out.timestamps[i];
        // symbols whose (truncated) response covers t
        const double rel = t - opt.quiet;
        long long k_hi = static_cast<long long>(std::floor((rel - onset) / T)) + 1;
        long long k_lo = static_cast<long long>(std::ceil((rel - onset - span) / T)) - 1;
        k_hi = std::min(k_hi, K - 1);
        k_lo = std::max<long long>(k_lo, 0);
        double acc = 0.0;
        for (long long k = k_lo; k <= k_hi; ++k) {
            if (!a.bits[static_cast<std::size_t>(k)]) continue;
            const double u = rel - static_cast<double>(k) * T;
            if (u >= onset - edge && u < onset + span - edge) acc += cir_eval(m, u);
        }
        if (sigma_n > 0.0) acc += sigma_n * rng_gauss(opt.seed, kNoiseStream, i);
        out.values[i] = acc;
    });
    return out;
}

RegularSignal resample_linear(const SampledSignal& x, double dt) {
    x.validate();
    if (x.timestamps.size() < 2) throw ConfigError("resample_linear: need at least 2 samples");
    if (!(dt > 0.0)) throw ConfigError("resample_linear: dt must be positive");

    const double first = x.timestamps.front();
    const double last = x.timestamps.back();
    const double eps = 1e-9 * dt;

    long long k0 = static_cast<long long>(std::floor(first / dt));
    if (static_cast<double>(k0) * dt < first - eps) ++k0;  // no extrapolation below first
    const long long k1 = static_cast<long long>(std::floor(last / dt + eps));

    RegularSignal out;
    out.dt = dt;
    out.origin = k0;
    if (k1 < k0) return out;
    out.values.reserve(static_cast<std::size_t>(k1 - k0 + 1));

    std::size_t j = 0;  // current segment [t_j, t_{j+1}]
    for (long long k = k0; k <= k1; ++k) {
        const double t = static_cast<double>(k) * dt;
        while (j + 2 < x.timestamps.size() && x.timestamps[j + 1] < t) ++j;
        const double t_a = x.timestamps[j];
        const double t_b = x.timestamps[j + 1];
        const double lam = std::clamp((t - t_a) / (t_b - t_a), 0.0, 1.0);
        out.values.push_back((1.0 - lam) * x.values[j] + lam * x.values[j + 1]);
    }
    return out;
}

std::optional<SyncResult> synchronize(const RegularSignal& x, int run, double threshold_fraction) {
    if (x.values.empty()) throw ConfigError("synchronize: empty signal");
    if (run < 1) throw ConfigError("synchronize: run length must be >= 1");
    const double threshold =
        threshold_fraction * *std::max_element(x.values.begin(), x.values.end());

    int consec = 0;
    for (std::size_t i = 0; i < x.values.size(); ++i) {
        if (x.values[i] > threshold) {
            if (++consec == run) {
                const long long i_start = static_cast<long long>(i) - run + 1;
                SyncResult res;
                res.i_start = i_start;
                res.shifted.dt = x.dt;
                res.shifted.origin = x.origin + i_start;
                res.shifted.values.assign(x.values.begin() + i_start, x.values.end());
                return res;
            }
        } else {
            consec = 0;
        }
    }
    return std::nullopt;
}

double rmse(std::span<const double> r, std::span<const double> s, int K, double c_d) {
    if (r.size() != s.size()) throw ConfigError("rmse: length mismatch");
    if (K < 1 || !(c_d > 0.0)) throw ConfigError("rmse: bad normalization");
    double acc = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double diff = r[i] - s[i];
        acc += diff * diff;
    }
    return std::sqrt(acc / static_cast<double>(K)) / c_d;
}

}  // namespace mcpipe
