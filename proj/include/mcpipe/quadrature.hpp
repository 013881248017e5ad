#pragma once

#include <functional>

namespace mcpipe {

struct QuadratureOptions {
    double abs_tol = 1e-13;
    double rel_tol = 1e-10;
    int max_depth = 55;
};

// Adaptive Simpson on [a, b]. Throws NumericError when the tolerance is not
// met at max_depth.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        const QuadratureOptions& opt = {});

}  // namespace mcpipe
