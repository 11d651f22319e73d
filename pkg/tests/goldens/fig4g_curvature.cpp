// fig4g_curvature: generated linear algebra kernel.

#include <Eigen/Dense>
#include <cassert>
#include <cmath>
#include <functional>

inline double lina_integrate_step(const std::function<double(double)>& f,
                                  double a, double b, double fa, double fm,
                                  double fb, double whole, double tol,
                                  int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    assert(depth < 40 && "quadrature tolerance unreachable");
    return lina_integrate_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth + 1)
         + lina_integrate_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth + 1);
}

inline double lina_integrate(const std::function<double(double)>& f,
                             double lo, double hi) {
    if (lo == hi) {
        return 0.0;
    }
    if (lo > hi) {
        return -lina_integrate(f, hi, lo);
    }
    const double fa = f(lo), fb = f(hi);
    const double m = 0.5 * (lo + hi);
    const double fm = f(m);
    const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    return lina_integrate_step(f, lo, hi, fa, fm, fb, whole, 1e-9, 0);
}


struct fig4g_curvature_result {
    double H;
    double ret;
};

inline fig4g_curvature_result fig4g_curvature(const Eigen::Matrix<double, 3, 1>& p, const std::function<double(double, const Eigen::Matrix<double, 3, 1>&)>& k_n) {
    assert(p.rows() == 3);

    const double H = 1 / (2 * M_PI) * lina_integrate([&](double phi) { return k_n(phi, p); }, 0, 2 * M_PI);
    return fig4g_curvature_result{H, H};
}
