#pragma once

#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <vector>

#include "ggan/errors.hpp"

namespace ggan {

// Dense row-major (batch-major) tensor of doubles. Most of the library works
// with rank-2 tensors shaped [batch, features].
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> data;

  Tensor() = default;
  Tensor(std::vector<std::size_t> s, std::vector<double> d) : shape(std::move(s)), data(std::move(d)) {
    if (data.size() != count(shape))
      throw GganError(Err::ShapeMismatch, "tensor data length does not match shape");
  }

  static std::size_t count(const std::vector<std::size_t>& s) {
    std::size_t n = 1;
    for (auto e : s) n *= e;
    return n;
  }

  static Tensor zeros(std::vector<std::size_t> s) {
    Tensor t;
    t.shape = std::move(s);
    t.data.assign(count(t.shape), 0.0);
    return t;
  }
  static Tensor full(std::vector<std::size_t> s, double v) {
    Tensor t = zeros(std::move(s));
    std::fill(t.data.begin(), t.data.end(), v);
    return t;
  }
  static Tensor row(std::vector<double> v) {
    const std::size_t n = v.size();
    return Tensor({1, n}, std::move(v));
  }

  std::size_t size() const { return data.size(); }
  std::size_t rows() const { return shape.empty() ? 0 : shape[0]; }
  std::size_t cols() const {
    std::size_t c = 1;
    for (std::size_t i = 1; i < shape.size(); ++i) c *= shape[i];
    return c;
  }
  double& at(std::size_t r, std::size_t c) { return data[r * cols() + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols() + c]; }

  bool same_shape(const Tensor& o) const { return shape == o.shape; }
  bool all_finite() const;
};

// c = a[MxK] * b[KxN]
void matmul(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n);
// c += a^T[KxM]^T... i.e. c[KxN] += a[MxK]^T * b[MxN]
void matmul_at_b_acc(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n);
// c[MxK] += a[MxN] * b[KxN]^T
void matmul_a_bt_acc(const double* a, const double* b, double* c, std::size_t m, std::size_t n, std::size_t k);

}  // namespace ggan
