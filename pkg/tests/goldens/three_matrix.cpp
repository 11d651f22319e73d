// three_matrix: generated linear algebra kernel.

#include <Eigen/Dense>
#include <cassert>
#include <cmath>

struct three_matrix_result {
    Eigen::Matrix<double, 3, 2> D;
    double c;
    double ret;
};

inline three_matrix_result three_matrix(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const Eigen::MatrixXd& C, const Eigen::Matrix<double, 2, 1>& x) {
    const long n = A.cols();
    const long m = B.cols();
    assert(A.rows() == 3 && A.cols() == n);
    assert(B.rows() == n && B.cols() == m);
    assert(C.rows() == m && C.cols() == 2);
    assert(x.rows() == 2);

    const Eigen::Matrix<double, 3, 2> D = A * B * C;
    const double c = (x.transpose() * D.transpose() * D * x).value();
    return three_matrix_result{D, c, c};
}
