#include "mcpipe/cir_oracle.hpp"

#include <algorithm>
#include <cmath>

namespace mcpipe {

double cir_oracle_1d(const CirModel& m, double t, const QuadratureOptions& opt) {
    if (!(m.lz > 0.0)) throw ConfigError("cir_oracle_1d: lz must be positive");
    if (!(t > 0.0)) return 0.0;
    const double u0t = max_velocity(m.cfg) * t;

    // The advected density maps z to s = 1 - (z+d)/(u0 t); restrict the
    // window to where s lands in [0,1].
    const double z_lo = std::max(-m.lz / 2.0, -m.d);
    const double z_hi = std::min(m.lz / 2.0, u0t - m.d);
    if (!(z_hi > z_lo)) return 0.0;

    const auto integrand = [&](double z) {
        return beta_pdf(m.init, 1.0 - (z + m.d) / u0t);
    };
    const double mass = adaptive_simpson(integrand, z_lo, z_hi, opt);
    return scale(m) * m.d / (m.lz * u0t) * mass;
}

double cir_oracle_2d(const CirModel& m, double t, double sigma_scale,
                     const QuadratureOptions& opt) {
    if (!(m.lz > 0.0)) throw ConfigError("cir_oracle_2d: lz must be positive");
    if (!(sigma_scale > 0.0)) throw ConfigError("cir_oracle_2d: sigma_scale must be positive");
    if (!(t > 0.0)) return 0.0;
    const double u0 = max_velocity(m.cfg);
    const double sigma = sigma_scale * m.lz;
    const double inv_norm = 1.0 / (sigma * std::sqrt(2.0 * kPi));

    // Inner integral in z over the receiver window; the Gaussian is
    // negligible outside +-8 sigma around the release plane position mu(s).
    const auto window_mass = [&](double s) {
        const double mu = u0 * (1.0 - s) * t - m.d;
        const double a = std::max(-m.lz / 2.0, mu - 8.0 * sigma);
        const double b = std::min(m.lz / 2.0, mu + 8.0 * sigma);
        if (!(b > a)) return 0.0;
        const auto gauss = [&](double z) {
            const double u = (z - mu) / sigma;
            return inv_norm * std::exp(-0.5 * u * u);
        };
        return adaptive_simpson(gauss, a, b, opt);
    };

    const auto integrand = [&](double s) { return beta_pdf(m.init, s) * window_mass(s); };

    // Outer integral over s. Only s with mu(s) within ~8 sigma of the window
    // contributes; integrating just that band keeps the refinement local.
    const double s_of_mu_lo = 1.0 - (m.d + m.lz / 2.0 + 8.0 * sigma) / (u0 * t);
    const double s_of_mu_hi = 1.0 - (m.d - m.lz / 2.0 - 8.0 * sigma) / (u0 * t);
    const double s_lo = std::clamp(s_of_mu_lo, 0.0, 1.0);
    const double s_hi = std::clamp(s_of_mu_hi, 0.0, 1.0);
    if (!(s_hi > s_lo)) return 0.0;

    const double mass = adaptive_simpson(integrand, s_lo, s_hi, opt);
    return scale(m) * m.d / m.lz * mass;
}

}  // namespace mcpipe
