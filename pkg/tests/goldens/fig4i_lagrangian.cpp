// fig4i_lagrangian: generated linear algebra kernel.

#include <Eigen/Dense>
#include <cassert>
#include <cmath>

struct fig4i_lagrangian_result {
    double L_x_nu;
    double ret;
};

inline fig4i_lagrangian_result fig4i_lagrangian(const Eigen::VectorXd& x, const Eigen::VectorXd& nu, const Eigen::MatrixXd& W) {
    const long n = x.rows();
    assert(x.rows() == n);
    assert(nu.rows() == n);
    assert(W.rows() == n && W.cols() == n);

    const double L_x_nu = (x.transpose() * W * x).value() + [&] { double _acc = 0.0; for (long i = 1; i <= n; ++i) { _acc += nu(i - 1) * (std::pow(x(i - 1), 2) - 1); } return _acc; }();
    return fig4i_lagrangian_result{L_x_nu, L_x_nu};
}
