#pragma once

#include <string>

#include "mcpipe/errors.hpp"

namespace mcpipe {

inline constexpr double kPi = 3.14159265358979323846;

// Testbed configuration. All values are SI base units; use units.hpp to
// convert bench units (mL/min, uL, mm, cm) once at the boundary. Defaults are
// the reference bench settings.
struct TestbedConfig {
    double a = 0.75e-3;             // tube radius [m]
    double Qb = 5.0e-6 / 60.0;      // background flow rate [m^3/s]  (5 mL/min)
    double Qp = 5.26e-6 / 60.0;     // injection flow rate [m^3/s]   (5.26 mL/min)
    double Vi = 17.3e-9;            // injection volume [m^3]        (17.3 uL)
    double chi_ref = 3.0e-3;        // reference bulk susceptibility [-]
    double nu = 1.0e-6;             // kinematic viscosity [m^2/s]
    double eta = 1.0e-3;            // dynamic viscosity [Pa s]
    double Rp = 24.5e-9;            // hydrodynamic particle radius [m]
    double m_p = 2.5e-19;           // particle mass [kg]
    double kT = 4.11e-21;           // thermal energy k_B * T_m [J]
    double zeta = 5.18e-10;         // friction coefficient [kg/s]; see stokes_friction()
    double T = 1.0;                 // symbol duration [s]
    double dt = 0.1;                // sampling interval [s]
    double d = 0.10;                // transmitter-receiver distance [m]

    // Throws ConfigError on nonphysical values or non-integer T/dt.
    void validate() const;

    // Oversampling factor I = T/dt.
    int oversampling() const;
};

// JSON config mirrors the field names above; unspecified fields keep their
// defaults, unknown keys are rejected.
TestbedConfig config_from_json_text(const std::string& text);
TestbedConfig config_from_json_file(const std::string& path);
std::string config_to_json_text(const TestbedConfig& cfg);

// Derived hydrodynamic quantities.
double effective_velocity(const TestbedConfig& cfg);        // Qb / (pi a^2)
double max_velocity(const TestbedConfig& cfg);               // 2 u_eff
double scale_factor(const TestbedConfig& cfg, double d);     // chi_ref Vi / (pi a^2 d)
double injection_duration(const TestbedConfig& cfg);         // Vi / Qp
double injection_depth(const TestbedConfig& cfg);            // 2 a Qp / (Qp + Qb)

}  // namespace mcpipe
