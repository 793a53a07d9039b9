#include "ggan/tape.hpp"

#include <cmath>

namespace ggan {

Var Tape::push(Tensor value, std::function<void()> back) {
  Node n;
  n.grad = Tensor::zeros(value.shape);
  n.value = std::move(value);
  n.back = std::move(back);
  nodes_.push_back(std::move(n));
  return Var(nodes_.size() - 1);
}

Var Tape::leaf(Tensor value) { return push(std::move(value)); }

Var Tape::param(const std::string& name) {
  if (!store_) throw GganError(Err::BadParameter, "tape has no bound ParamStore");
  auto it = param_vars_.find(name);
  if (it != param_vars_.end()) return it->second;
  Var v = push(store_->get(name).value);
  param_vars_[name] = v;
  return v;
}

static void check_same(const Tensor& a, const Tensor& b, const char* op) {
  if (!a.same_shape(b)) throw GganError(Err::ShapeMismatch, std::string(op) + ": operand shapes differ");
}

Var Tape::add(Var a, Var b) {
  check_same(val(a), val(b), "add");
  Tensor out = val(a);
  for (std::size_t i = 0; i < out.size(); ++i) out.data[i] += val(b).data[i];
  return push(std::move(out), [this, a, b, o = int(nodes_.size())] {
    for (std::size_t i = 0; i < g(o).size(); ++i) {
      g(a).data[i] += g(o).data[i];
      g(b).data[i] += g(o).data[i];
    }
  });
}

Var Tape::sub(Var a, Var b) {
  check_same(val(a), val(b), "sub");
  Tensor out = val(a);
  for (std::size_t i = 0; i < out.size(); ++i) out.data[i] -= val(b).data[i];
  return push(std::move(out), [this, a, b, o = int(nodes_.size())] {
    for (std::size_t i = 0; i < g(o).size(); ++i) {
      g(a).data[i] += g(o).data[i];
      g(b).data[i] -= g(o).data[i];
    }
  });
}

Var Tape::mul(Var a, Var b) {
  check_same(val(a), val(b), "mul");
  Tensor out = val(a);
  for (std::size_t i = 0; i < out.size(); ++i) out.data[i] *= val(b).data[i];
  return push(std::move(out), [this, a, b, o = int(nodes_.size())] {
    for (std::size_t i = 0; i < g(o).size(); ++i) {
      g(a).data[i] += g(o).data[i] * val(b).data[i];
      g(b).data[i] += g(o).data[i] * val(a).data[i];
    }
  });
}

Var Tape::scale(Var a, double c) {
  Tensor out = val(a);
  for (double& v : out.data) v *= c;
  return push(std::move(out), [this, a, c, o = int(nodes_.size())] {
    for (std::size_t i = 0; i < g(o).size(); ++i) g(a).data[i] += c * g(o).data[i];
  });
}

Var Tape::add_scalar(Var a, double c) {
  Tensor out = val(a);
  for (double& v : out.data) v += c;
  return push(std::move(out), [this, a, o = int(nodes_.size())] {
    for (std::size_t i = 0; i < g(o).size(); ++i) g(a).data[i] += g(o).data[i];
  });
}

Var Tape::linear(Var x, Var w, Var b) {
  const Tensor& xv = val(x);
  const Tensor& wv = val(w);
  const std::size_t B = xv.rows(), n = xv.cols(), m = wv.cols();
  if (wv.rows() != n) throw GganError(Err::ShapeMismatch, "linear: weight rows != input cols");
  Tensor out = Tensor::zeros({B, m});
  matmul(xv.data.data(), wv.data.data(), out.data.data(), B, n, m);
  if (b >= 0) {
    const Tensor& bv = val(b);
    if (bv.size() != m) throw GganError(Err::ShapeMismatch, "linear: bias width != output cols");
    for (std::size_t r = 0; r < B; ++r)
      for (std::size_t c = 0; c < m; ++c) out.data[r * m + c] += bv.data[c];
  }
  return push(std::move(out), [this, x, w, b, B, n, m, o = int(nodes_.size())] {
    matmul_a_bt_acc(g(o).data.data(), val(w).data.data(), g(x).data.data(), B, m, n);
    matmul_at_b_acc(val(x).data.data(), g(o).data.data(), g(w).data.data(), B, n, m);
    if (b >= 0)
      for (std::size_t r = 0; r < B; ++r)
        for (std::size_t c = 0; c < m; ++c) g(b).data[c] += g(o).data[r * m + c];
  });
}

Var Tape::relu(Var a) {
  Tensor out = val(a);
  for (double& v : out.data) v = v > 0 ? v : 0.0;
  return push(std::move(out), [this, a, o = int(nodes_.size())] {
    for (std::size_t i = 0; i < g(o).size(); ++i)
      if (val(a).data[i] > 0) g(a).data[i] += g(o).data[i];
  });
}

Var Tape::leaky_relu(Var a, double slope) {
  Tensor out = val(a);
  for (double& v : out.data) v = v > 0 ? v : slope * v;
  return push(std::move(out), [this, a, slope, o = int(nodes_.size())] {
    for (std::size_t i = 0; i < g(o).size(); ++i)
      g(a).data[i] += g(o).data[i] * (val(a).data[i] > 0 ? 1.0 : slope);
  });
}

Var Tape::tanh_(Var a) {
  Tensor out = val(a);
  for (double& v : out.data) v = std::tanh(v);
  return push(std::move(out), [this, a, o = int(nodes_.size())] {
    for (std::size_t i = 0; i < g(o).size(); ++i) {
      const double y = val(o).data[i];
      g(a).data[i] += g(o).data[i] * (1.0 - y * y);
    }
  });
}

Var Tape::sigmoid(Var a) {
  Tensor out = val(a);
  for (double& v : out.data) v = 1.0 / (1.0 + std::exp(-v));
  return push(std::move(out), [this, a, o = int(nodes_.size())] {
    for (std::size_t i = 0; i < g(o).size(); ++i) {
      const double y = val(o).data[i];
      g(a).data[i] += g(o).data[i] * y * (1.0 - y);
    }
  });
}

Var Tape::exp_(Var a) {
  Tensor out = val(a);
  for (double& v : out.data) v = std::exp(v);
  return push(std::move(out), [this, a, o = int(nodes_.size())] {
    for (std::size_t i = 0; i < g(o).size(); ++i) g(a).data[i] += g(o).data[i] * val(o).data[i];
  });
}

static double softplus_val(double x) {
  // log(1 + e^x) without overflow
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

Var Tape::softplus(Var a) {
  Tensor out = val(a);
  for (double& v : out.data) v = softplus_val(v);
  return push(std::move(out), [this, a, o = int(nodes_.size())] {
    for (std::size_t i = 0; i < g(o).size(); ++i) {
      const double s = 1.0 / (1.0 + std::exp(-val(a).data[i]));
      g(a).data[i] += g(o).data[i] * s;
    }
  });
}

Var Tape::softmax_rows(Var a) {
  const Tensor& x = val(a);
  const std::size_t B = x.rows(), K = x.cols();
  Tensor out = Tensor::zeros({B, K});
  for (std::size_t r = 0; r < B; ++r) {
    double mx = x.data[r * K];
    for (std::size_t c = 1; c < K; ++c) mx = std::max(mx, x.data[r * K + c]);
    double sum = 0;
    for (std::size_t c = 0; c < K; ++c) sum += out.data[r * K + c] = std::exp(x.data[r * K + c] - mx);
    for (std::size_t c = 0; c < K; ++c) out.data[r * K + c] /= sum;
  }
  return push(std::move(out), [this, a, B, K, o = int(nodes_.size())] {
    for (std::size_t r = 0; r < B; ++r) {
      double dot = 0;
      for (std::size_t c = 0; c < K; ++c) dot += g(o).data[r * K + c] * val(o).data[r * K + c];
      for (std::size_t c = 0; c < K; ++c)
        g(a).data[r * K + c] += val(o).data[r * K + c] * (g(o).data[r * K + c] - dot);
    }
  });
}

Var Tape::concat_cols(const std::vector<Var>& xs) {
  if (xs.empty()) throw GganError(Err::EmptyInput, "concat_cols: no inputs");
  const std::size_t B = val(xs[0]).rows();
  std::size_t total = 0;
  for (Var x : xs) {
    if (val(x).rows() != B) throw GganError(Err::ShapeMismatch, "concat_cols: row counts differ");
    total += val(x).cols();
  }
  Tensor out = Tensor::zeros({B, total});
  std::size_t off = 0;
  for (Var x : xs) {
    const std::size_t c = val(x).cols();
    for (std::size_t r = 0; r < B; ++r)
      std::copy_n(val(x).data.data() + r * c, c, out.data.data() + r * total + off);
    off += c;
  }
  return push(std::move(out), [this, xs, B, total, o = int(nodes_.size())] {
    std::size_t off2 = 0;
    for (Var x : xs) {
      const std::size_t c = val(x).cols();
      for (std::size_t r = 0; r < B; ++r)
        for (std::size_t i = 0; i < c; ++i) g(x).data[r * c + i] += g(o).data[r * total + off2 + i];
      off2 += c;
    }
  });
}

Var Tape::slice_cols(Var a, std::size_t start, std::size_t len) {
  const Tensor& x = val(a);
  const std::size_t B = x.rows(), C = x.cols();
  if (start + len > C) throw GganError(Err::ShapeMismatch, "slice_cols: out of range");
  Tensor out = Tensor::zeros({B, len});
  for (std::size_t r = 0; r < B; ++r)
    std::copy_n(x.data.data() + r * C + start, len, out.data.data() + r * len);
  return push(std::move(out), [this, a, start, len, B, C, o = int(nodes_.size())] {
    for (std::size_t r = 0; r < B; ++r)
      for (std::size_t i = 0; i < len; ++i) g(a).data[r * C + start + i] += g(o).data[r * len + i];
  });
}

Var Tape::neg_half_sqdist(Var h, Var mu) {
  const Tensor& hv = val(h);
  const Tensor& mv = val(mu);
  const std::size_t B = hv.rows(), d = hv.cols(), K = mv.rows();
  if (mv.cols() != d) throw GganError(Err::ShapeMismatch, "neg_half_sqdist: dim mismatch");
  Tensor out = Tensor::zeros({B, K});
  for (std::size_t r = 0; r < B; ++r)
    for (std::size_t k = 0; k < K; ++k) {
      double s = 0;
      for (std::size_t j = 0; j < d; ++j) {
        const double diff = hv.data[r * d + j] - mv.data[k * d + j];
        s += diff * diff;
      }
      out.data[r * K + k] = -0.5 * s;
    }
  return push(std::move(out), [this, h, mu, B, d, K, o = int(nodes_.size())] {
    for (std::size_t r = 0; r < B; ++r)
      for (std::size_t k = 0; k < K; ++k) {
        const double go = g(o).data[r * K + k];
        if (go == 0) continue;
        for (std::size_t j = 0; j < d; ++j) {
          const double diff = val(h).data[r * d + j] - val(mu).data[k * d + j];
          g(h).data[r * d + j] -= go * diff;
          g(mu).data[k * d + j] += go * diff;
        }
      }
  });
}

Var Tape::sum_all(Var a) {
  double s = 0;
  for (double v : val(a).data) s += v;
  return push(Tensor({1, 1}, {s}), [this, a, o = int(nodes_.size())] {
    const double go = g(o).data[0];
    for (double& gv : g(a).data) gv += go;
  });
}

Var Tape::mean_all(Var a) {
  const double n = double(val(a).size());
  double s = 0;
  for (double v : val(a).data) s += v;
  return push(Tensor({1, 1}, {s / n}), [this, a, n, o = int(nodes_.size())] {
    const double go = g(o).data[0] / n;
    for (double& gv : g(a).data) gv += go;
  });
}

void Tape::backward(Var scalar_loss) {
  if (val(scalar_loss).size() != 1)
    throw GganError(Err::ShapeMismatch, "backward: loss must be scalar");
  g(scalar_loss).data[0] = 1.0;
  for (int i = scalar_loss; i >= 0; --i)
    if (nodes_[std::size_t(i)].back) nodes_[std::size_t(i)].back();
}

std::map<std::string, Tensor> Tape::param_grads() const {
  std::map<std::string, Tensor> out;
  for (auto& [name, v] : param_vars_) out.emplace(name, grad(v));
  return out;
}

Var bce_logits(Tape& t, Var logit, double target) {
  Var sp = t.softplus(logit);
  Var loss = target != 0.0 ? t.sub(sp, t.scale(logit, target)) : sp;
  return t.mean_all(loss);
}

double bce_logits_value(double logit, double target) {
  return softplus_val(logit) - target * logit;
}

}  // namespace ggan
