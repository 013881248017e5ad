#include "mcpipe/cir.hpp"

#include <cmath>

namespace mcpipe {

void CirModel::validate() const {
    cfg.validate();
    init.validate();
    if (!(d > 0.0)) throw ConfigError("CirModel: d must be positive");
    if (!(lz >= 0.0)) throw ConfigError("CirModel: lz must be nonnegative");
    if (lz > 0.0 && !(d - lz / 2.0 > 0.0))
        throw ConfigError("CirModel: window reaches the transmitter (d - lz/2 <= 0)");
}

double scale(const CirModel& m) {
    return scale_factor(m.cfg, m.d);
}

double t_start(const CirModel& m) {
    return m.d / max_velocity(m.cfg);
}

double support_start(const CirModel& m) {
    return (m.d - m.lz / 2.0) / max_velocity(m.cfg);
}

double t_peak(const CirModel& m) {
    const double t0 = t_start(m);
    if (m.init.alpha <= 1.0) return t0;  // jump peak at the onset
    return t0 * (1.0 + (m.init.alpha - 1.0) / m.init.beta);
}

double h_peak(const CirModel& m) {
    const double a = m.init.alpha;
    const double b = m.init.beta;
    // pow(0,0) = 1 handles alpha = 1
    return scale(m) / beta_norm(a, b) * std::pow(a - 1.0, a - 1.0) * std::pow(b, b) /
           std::pow(a + b - 1.0, a + b - 1.0);
}

double cir_limit(const CirModel& m, double t) {
    const double t0 = t_start(m);
    if (!(t >= t0)) return 0.0;
    const double x = t0 / t;  // d / (u0 t)
    return scale(m) / beta_norm(m.init.alpha, m.init.beta) *
           std::pow(1.0 - x, m.init.alpha - 1.0) * std::pow(x, m.init.beta);
}

double cir_windowed(const CirModel& m, double t) {
    if (!(m.lz > 0.0)) throw ConfigError("cir_windowed: lz must be positive");
    if (!(t > 0.0)) return 0.0;
    const double u0t = max_velocity(m.cfg) * t;
    const double s_near = 1.0 - (m.d - m.lz / 2.0) / u0t;
    const double s_far = 1.0 - (m.d + m.lz / 2.0) / u0t;
    // beta_cdf clamps both arguments into [0,1]
    const double mass = beta_cdf(m.init, s_near) - beta_cdf(m.init, s_far);
    return scale(m) * m.d / m.lz * mass;
}

double cir_eval(const CirModel& m, double t) {
    return m.lz > 0.0 ? cir_windowed(m, t) : cir_limit(m, t);
}

double support_end(const CirModel& m, double fraction) {
    if (!(fraction > 0.0) || !(fraction < 1.0))
        throw ConfigError("support_end: fraction must be in (0,1)");
    const double target = fraction * h_peak(m);
    double lo = t_peak(m) * 1.0000001;
    if (cir_eval(m, lo) <= target) return lo;
    double hi = lo * 2.0;
    while (cir_eval(m, hi) > target) {
        hi *= 2.0;
        if (hi > 1e12) throw NumericError("support_end: no decay found");
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (cir_eval(m, mid) > target ? lo : hi) = mid;
    }
    return hi;
}

std::vector<double> sample_cir(const CirModel& m, double t_begin, double step, std::size_t n,
                               Exec exec) {
    std::vector<double> out(n);
    parallel_for(exec, n, [&](std::size_t j) {
        out[j] = cir_eval(m, t_begin + static_cast<double>(j) * step);
    });
    return out;
}

std::vector<double> limit_taps(const CirModel& m, std::size_t n, double dt, Exec exec) {
    const double t0 = t_start(m);
    std::vector<double> out(n);
    parallel_for(exec, n, [&](std::size_t j) {
        out[j] = cir_limit(m, t0 + static_cast<double>(j) * dt);
    });
    return out;
}

}  // namespace mcpipe
