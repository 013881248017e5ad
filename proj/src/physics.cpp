#include "mcpipe/physics.hpp"

#include <cmath>
#include <limits>

namespace mcpipe {

double reynolds(const TestbedConfig& cfg) {
    return cfg.a * max_velocity(cfg) / cfg.nu;
}

double stokes_friction(const TestbedConfig& cfg) {
    return 6.0 * kPi * cfg.eta * cfg.Rp;
}

double diffusion_coefficient(const TestbedConfig& cfg) {
    if (!(cfg.zeta > 0.0)) throw ConfigError("diffusion_coefficient: zeta must be positive");
    return cfg.kT / cfg.zeta;
}

double dispersion_factor(const TestbedConfig& cfg, double d) {
    if (!(d > 0.0)) throw ConfigError("dispersion_factor: d must be positive");
    const double ac = cfg.a / 10.0;  // characteristic length of flow variation
    return d * diffusion_coefficient(cfg) / (ac * ac * effective_velocity(cfg));
}

GravityReport gravity_report(const TestbedConfig& cfg, double critical_displacement,
                             double critical_time) {
    if (!(critical_displacement > 0.0) || !(critical_time > 0.0))
        throw ConfigError("gravity_report: critical displacement and time must be positive");
    GravityReport rep;
    rep.force = cfg.m_p * kGravity;
    rep.drift = rep.force / cfg.zeta;
    rep.onset = rep.drift > 0.0 ? critical_displacement / rep.drift
                                : std::numeric_limits<double>::infinity();
    rep.critical_mass = (critical_displacement / critical_time) * cfg.zeta / kGravity;
    return rep;
}

RegimeThresholds regime_thresholds(const TestbedConfig& cfg, double d) {
    if (!(d > 0.0)) throw ConfigError("regime_thresholds: d must be positive");
    const double ueff = effective_velocity(cfg);
    const double D = diffusion_coefficient(cfg);
    const double ac = cfg.a / 10.0;

    RegimeThresholds th;
    // Re = 2 Qb / (pi a nu)
    th.qb_turbulent = kReynoldsCritical * kPi * cfg.a * cfg.nu / 2.0;
    // Re = 2 a u_eff / nu, u_eff held fixed
    th.a_turbulent = kReynoldsCritical * cfg.nu / (2.0 * ueff);
    // alpha_D = d D / (ac^2 u)
    th.ueff_dispersion = d * D / (ac * ac);
    th.a_dispersion = 10.0 * std::sqrt(d * D / ueff);
    th.d_dispersion = ac * ac * ueff / D;
    th.diff_dispersion = ac * ac * ueff / d;
    return th;
}

RegimeReport characterize(const TestbedConfig& cfg, double d) {
    RegimeReport rep;
    rep.reynolds = reynolds(cfg);
    rep.flow_regime = rep.reynolds < kReynoldsCritical ? FlowRegime::laminar
                                                       : FlowRegime::turbulent;
    rep.dispersion_factor = dispersion_factor(cfg, d);
    rep.transport_regime = rep.dispersion_factor < kDispersionCritical
                               ? TransportRegime::flow_dominated
                               : TransportRegime::diffusion_dominated;
    rep.diffusion_coeff = diffusion_coefficient(cfg);
    const GravityReport g = gravity_report(cfg, cfg.a / 10.0, 60.0);
    rep.gravity_force = g.force;
    rep.gravity_drift = g.drift;
    rep.gravity_onset_time = g.onset;
    return rep;
}

}  // namespace mcpipe
