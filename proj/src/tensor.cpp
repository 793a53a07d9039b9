#include "ggan/tensor.hpp"

#include <Eigen/Core>
#include <cmath>

namespace ggan {

bool Tensor::all_finite() const {
  for (double v : data)
    if (!std::isfinite(v)) return false;
  return true;
}

using CMat = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using Mat = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

void matmul(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n) {
  Mat(c, m, n).noalias() = CMat(a, m, k) * CMat(b, k, n);
}

void matmul_at_b_acc(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n) {
  Mat(c, k, n).noalias() += CMat(a, m, k).transpose() * CMat(b, m, n);
}

void matmul_a_bt_acc(const double* a, const double* b, double* c, std::size_t m, std::size_t n, std::size_t k) {
  Mat(c, m, k).noalias() += CMat(a, m, n) * CMat(b, k, n).transpose();
}

}  // namespace ggan
