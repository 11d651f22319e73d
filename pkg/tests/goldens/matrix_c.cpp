// matrix_c: generated linear algebra kernel.

#include <Eigen/Dense>
#include <cassert>
#include <cmath>

struct matrix_c_result {
    Eigen::MatrixXd C;
    Eigen::MatrixXd ret;
};

inline matrix_c_result matrix_c(const Eigen::MatrixXd& M, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    const long n = M.rows();
    assert(M.rows() == n && M.cols() == n);
    assert(x.rows() == n);
    assert(y.rows() == n);

    const Eigen::MatrixXd C = (Eigen::MatrixXd(2 * n, 2 * n) << Eigen::MatrixXd::Identity(n, n), M + y * x.transpose(), M.transpose(), Eigen::MatrixXd::Zero(n, n)).finished();
    return matrix_c_result{C, C};
}
