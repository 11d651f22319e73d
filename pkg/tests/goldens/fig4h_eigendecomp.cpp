// fig4h_eigendecomp: generated linear algebra kernel.

#include <Eigen/Dense>
#include <cassert>
#include <cmath>

struct fig4h_eigendecomp_result {
    Eigen::Matrix<double, 2, 2> Omega;
    Eigen::Matrix<double, 2, 2> ret;
};

inline fig4h_eigendecomp_result fig4h_eigendecomp(double k_1, double k_2, const Eigen::Matrix<double, 2, 1>& e_1, const Eigen::Matrix<double, 2, 1>& e_2) {
    assert(e_1.rows() == 2);
    assert(e_2.rows() == 2);

    const Eigen::Matrix<double, 2, 2> Omega = (Eigen::Matrix<double, 2, 2>() << e_1, e_2).finished() * (Eigen::Matrix<double, 2, 2>() << k_1, 0, 0, k_2).finished() * (Eigen::Matrix<double, 2, 2>() << e_1.transpose(), e_2.transpose()).finished();
    return fig4h_eigendecomp_result{Omega, Omega};
}
