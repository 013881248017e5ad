#pragma once

namespace mcpipe::units {

// Bench units -> SI. Convert once at the boundary; everything downstream is SI.
constexpr double ml_per_min(double v) { return v * 1e-6 / 60.0; }  // -> m^3/s
constexpr double microliter(double v) { return v * 1e-9; }         // -> m^3
constexpr double millimeter(double v) { return v * 1e-3; }         // -> m
constexpr double centimeter(double v) { return v * 1e-2; }         // -> m
constexpr double nanometer(double v) { return v * 1e-9; }          // -> m

// SI -> bench units, for display.
constexpr double to_ml_per_min(double v) { return v * 60.0 * 1e6; }
constexpr double to_millimeter(double v) { return v * 1e3; }
constexpr double to_centimeter(double v) { return v * 1e2; }

}  // namespace mcpipe::units
