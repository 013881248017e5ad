#pragma once

#include "mcpipe/config.hpp"

namespace mcpipe {

inline constexpr double kGravity = 9.81;            // [m/s^2]
inline constexpr double kReynoldsCritical = 2100.0; // laminar/turbulent transition (circular duct)
inline constexpr double kDispersionCritical = 1.0;  // flow/diffusion dominance

enum class FlowRegime { laminar, turbulent };
enum class TransportRegime { flow_dominated, diffusion_dominated };

struct GravityReport {
    double force;          // m_p * g [N]
    double drift;          // force / zeta [m/s]
    double onset;          // critical_displacement / drift [s]
    double critical_mass;  // mass drifting critical_displacement in critical_time [kg]
};

// Each threshold is the value of one parameter that would put the system on
// its critical boundary, all other parameters held fixed (u_eff held fixed
// where noted, since it itself depends on a and Qb).
struct RegimeThresholds {
    double qb_turbulent;     // Qb with Re = 2100 [m^3/s]
    double a_turbulent;      // a with Re = 2100 at fixed u_eff [m]
    double ueff_dispersion;  // u_eff with alpha_D = 1 [m/s]
    double a_dispersion;     // a with alpha_D = 1 at fixed u_eff [m]
    double d_dispersion;     // d with alpha_D = 1 [m]
    double diff_dispersion;  // D with alpha_D = 1 [m^2/s]
};

struct RegimeReport {
    double reynolds;
    FlowRegime flow_regime;
    double dispersion_factor;
    TransportRegime transport_regime;
    double diffusion_coeff;      // [m^2/s]
    double gravity_force;        // [N]
    double gravity_drift;        // [m/s]
    double gravity_onset_time;   // [s], for a displacement of a/10
};

double reynolds(const TestbedConfig& cfg);               // a u0 / nu
double stokes_friction(const TestbedConfig& cfg);        // 6 pi eta Rp
double diffusion_coefficient(const TestbedConfig& cfg);  // kT / zeta (config zeta)
double dispersion_factor(const TestbedConfig& cfg, double d);  // d D / ((a/10)^2 u_eff)

GravityReport gravity_report(const TestbedConfig& cfg, double critical_displacement,
                             double critical_time);

RegimeThresholds regime_thresholds(const TestbedConfig& cfg, double d);

RegimeReport characterize(const TestbedConfig& cfg, double d);

}  // namespace mcpipe
