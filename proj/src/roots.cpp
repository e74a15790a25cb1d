#include "optokerr/roots.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "optokerr/errors.hpp"

namespace optokerr {

double poly_eval(const std::vector<double>& c, double x) {
    double acc = 0.0;
    for (size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
    return acc;
}

double poly_deriv_eval(const std::vector<double>& c, double x) {
    double acc = 0.0;
    for (size_t i = c.size(); i-- > 1;) acc = acc * x + static_cast<double>(i) * c[i];
    return acc;
}

std::vector<RealRoot> real_polynomial_roots(const std::vector<double>& coeffs,
                                            double lead_tol, double cluster_tol) {
    std::vector<double> c = coeffs;
    double scale = 0.0;
    for (double v : c) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return {};

    while (c.size() > 1 && std::abs(c.back()) < lead_tol * scale) c.pop_back();
    const size_t deg = c.size() - 1;
    if (deg == 0) return {};

    std::vector<double> roots;
    if (deg == 1) {
        roots.push_back(-c[0] / c[1]);
    } else {
        Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
        for (size_t i = 0; i + 1 < deg; ++i) companion(i + 1, i) = 1.0;
        for (size_t i = 0; i < deg; ++i) companion(i, deg - 1) = -c[i] / c[deg];

        Eigen::EigenSolver<Eigen::MatrixXd> es(companion, /*computeEigenvectors=*/false);
        if (es.info() != Eigen::Success)
            throw Error(ErrorKind::EigenFailure, "companion-matrix eigen solve failed");

        for (int i = 0; i < static_cast<int>(deg); ++i) {
            const std::complex<double> lam = es.eigenvalues()(i);
            if (std::abs(lam.imag()) > 1e-8 * (1.0 + std::abs(lam))) continue;
            double x = lam.real();
            // Newton polish to machine residual
            for (int it = 0; it < 64; ++it) {
                const double f = poly_eval(c, x);
                const double df = poly_deriv_eval(c, x);
                if (df == 0.0) break;
                const double step = f / df;
                x -= step;
                if (std::abs(step) <= 1e-16 * (1.0 + std::abs(x))) break;
            }
            roots.push_back(x);
        }
    }

    std::sort(roots.begin(), roots.end());
    std::vector<RealRoot> merged;
    for (double r : roots) {
        if (!merged.empty() && std::abs(r - merged.back().x) <= cluster_tol * (1.0 + std::abs(r))) {
            merged.back().multiplicity += 1;
            continue;
        }
        merged.push_back({r, 1});
    }
    return merged;
}

}  // namespace optokerr
