#pragma once

#include <functional>
#include <vector>

namespace optokerr {

struct QuadratureOptions {
    double rel_tol = 1e-9;
    double abs_tol = 0.0;
    int max_depth = 48;
};

// Adaptive Simpson on [a, b].
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        const QuadratureOptions& opt = {});

// Adaptive Simpson with interior breakpoints (resonances, kinks). Breakpoints
// outside (a, b) are ignored.
double adaptive_simpson_segmented(const std::function<double(double)>& f, double a,
                                  double b, const std::vector<double>& breakpoints,
                                  const QuadratureOptions& opt = {});

}  // namespace optokerr
