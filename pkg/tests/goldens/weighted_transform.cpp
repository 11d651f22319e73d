// weighted_transform: generated linear algebra kernel.

#include <Eigen/Dense>
#include <cassert>
#include <cmath>
#include <vector>

struct weighted_transform_result {
    Eigen::Matrix<double, 4, 1> u;
    Eigen::Matrix<double, 4, 1> ret;
};

inline weighted_transform_result weighted_transform(const std::vector<Eigen::Matrix<double, 4, 4>>& T, const std::vector<double>& w, const Eigen::Matrix<double, 4, 1>& v) {
    const long dim_i = (long) T.size();
    assert((long) T.size() == dim_i);
    for (const auto& _e : T) { assert(_e.rows() == 4 && _e.cols() == 4); }
    assert((long) w.size() == dim_i);
    assert(v.rows() == 4);

    const Eigen::Matrix<double, 4, 1> u = [&] { Eigen::Matrix<double, 4, 1> _acc = Eigen::Matrix<double, 4, 1>::Zero(); for (long i = 1; i <= dim_i; ++i) { _acc += w[i - 1] * T[i - 1] * v; } return _acc; }();
    return weighted_transform_result{u, u};
}
