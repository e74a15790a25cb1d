#pragma once

#include <vector>

namespace optokerr {

struct RealRoot {
    double x = 0.0;
    int multiplicity = 1;
};

// Real roots of a real polynomial c[0] + c[1] x + ... + c[n] x^n, found as
// eigenvalues of the companion matrix and polished with Newton steps.
// Leading coefficients below `lead_tol` (relative to the largest coefficient)
// are dropped, reducing the degree. Returned sorted ascending; roots closer
// than `cluster_tol * (1 + |x|)` are merged with their multiplicity counted.
std::vector<RealRoot> real_polynomial_roots(const std::vector<double>& coeffs,
                                            double lead_tol = 1e-150,
                                            double cluster_tol = 1e-7);

// p(x) and p'(x) by Horner.
double poly_eval(const std::vector<double>& coeffs, double x);
double poly_deriv_eval(const std::vector<double>& coeffs, double x);

}  // namespace optokerr
