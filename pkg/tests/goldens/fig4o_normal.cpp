// fig4o_normal: generated linear algebra kernel.

#include <Eigen/Dense>
#include <cassert>
#include <cmath>
#include <vector>

struct fig4o_normal_result {
    Eigen::Matrix<double, 3, 1> n;
    Eigen::Matrix<double, 3, 1> ret;
};

inline fig4o_normal_result fig4o_normal(const std::vector<Eigen::Matrix<double, 3, 1>>& x) {
    const long dim_i = (long) x.size();
    assert((long) x.size() == dim_i);
    for (const auto& _e : x) { assert(_e.rows() == 3); }

    const Eigen::Matrix<double, 3, 1> n = (x[1] - x[0]).cross(x[2] - x[0]) / (x[1] - x[0]).cross(x[2] - x[0]).norm();
    return fig4o_normal_result{n, n};
}
