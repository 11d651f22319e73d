// fig4p_bayer: generated linear algebra kernel.

#include <Eigen/Dense>
#include <cassert>
#include <cmath>

struct fig4p_bayer_result {
    double C;
    double ret;
};

inline fig4p_bayer_result fig4p_bayer(const Eigen::MatrixXd& c, const Eigen::MatrixXd& w, const Eigen::VectorXd& r_hat) {
    const long m = c.rows();
    const long k = c.cols();
    assert(c.rows() == m && c.cols() == k);
    assert(w.rows() == m && w.cols() == k);
    assert(r_hat.rows() == m);

    const double C = [&] { double _acc = 0.0; for (long i = 1; i <= m; ++i) { _acc += [&] { double _acc = 0.0; for (long j = 1; j <= k; ++j) { _acc += c(i - 1, j - 1) * w(i - 1, j - 1) * r_hat(i - 1); } return _acc; }(); } return _acc; }() / [&] { double _acc = 0.0; for (long i = 1; i <= m; ++i) { _acc += [&] { double _acc = 0.0; for (long j = 1; j <= k; ++j) { _acc += w(i - 1, j - 1) * r_hat(i - 1); } return _acc; }(); } return _acc; }();
    return fig4p_bayer_result{C, C};
}
