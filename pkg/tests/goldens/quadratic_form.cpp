// quadratic_form: generated linear algebra kernel.

#include <Eigen/Dense>
#include <cassert>
#include <cmath>

struct quadratic_form_result {
    double ret;
};

inline quadratic_form_result quadratic_form(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double c, const Eigen::VectorXd& x) {
    const long n = A.rows();
    assert(A.rows() == n && A.cols() == n);
    assert(b.rows() == n);
    assert(x.rows() == n);

    const double ret = (x.transpose() * A * x).value() + (b.transpose() * x).value() + c;
    return quadratic_form_result{ret};
}
