#pragma once

#include "mcpipe/cir.hpp"
#include "mcpipe/quadrature.hpp"

namespace mcpipe {

// Quadrature evaluations of the windowed response, independent of the
// incomplete-beta route used by cir_windowed. Both require lz > 0.

// One-dimensional form: direct z-integration of the advected density over the
// receiver window.
double cir_oracle_1d(const CirModel& m, double t, const QuadratureOptions& opt = {});

// Two-dimensional (s, z) form with the axial point release widened to a
// narrow Gaussian of width sigma = sigma_scale * lz; nested quadrature.
double cir_oracle_2d(const CirModel& m, double t, double sigma_scale = 5e-4,
                     const QuadratureOptions& opt = {});

}  // namespace mcpipe
