#include "optokerr/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace optokerr {

namespace {

double simpson(double fa, double fm, double fb, double h) {
    return (fa + 4.0 * fm + fb) * h / 6.0;
}

double adapt(const std::function<double(double)>& f, double a, double m, double b,
             double fa, double fm, double fb, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(fa, flm, fm, m - a);
    const double right = simpson(fm, frm, fb, b - m);
    const double err = (left + right - whole) / 15.0;
    if (depth <= 0 || std::abs(err) <= tol)
        return left + right + err;
    return adapt(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
         + adapt(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        const QuadratureOptions& opt) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = simpson(fa, fm, fb, b - a);
    const double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(whole)) + 1e-300;
    return adapt(f, a, m, b, fa, fm, fb, whole, tol, opt.max_depth);
}

double adaptive_simpson_segmented(const std::function<double(double)>& f, double a,
                                  double b, const std::vector<double>& breakpoints,
                                  const QuadratureOptions& opt) {
    std::vector<double> pts = {a, b};
    for (double x : breakpoints)
        if (x > a && x < b) pts.push_back(x);
    std::sort(pts.begin(), pts.end());
    double total = 0.0;
    for (size_t i = 0; i + 1 < pts.size(); ++i)
        total += adaptive_simpson(f, pts[i], pts[i + 1], opt);
    return total;
}

}  // namespace optokerr
