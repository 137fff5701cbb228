#include "navr1/tensor.hpp"

#include <cmath>
#include <limits>

#include "navr1/util.hpp"

namespace navr1 {

namespace {

std::size_t product(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

}  // namespace

double TensorData::scalar() const {
  if (numel() != 1) {
    throw ContractError("scalar() on tensor of shape " + shape_str(*this));
  }
  return data[0];
}

void TensorData::ensure_grad() {
  if (grad.size() != data.size()) grad.assign(data.size(), 0.0);
}

Tensor make_tensor(std::vector<std::size_t> shape) {
  auto t = std::make_shared<TensorData>();
  t->data.assign(product(shape), 0.0);
  t->shape = std::move(shape);
  return t;
}

Tensor make_tensor(std::vector<std::size_t> shape, std::vector<double> data) {
  if (product(shape) != data.size()) {
    throw ContractError("tensor data length " + std::to_string(data.size()) +
                        " does not match shape product " +
                        std::to_string(product(shape)));
  }
  auto t = std::make_shared<TensorData>();
  t->shape = std::move(shape);
  t->data = std::move(data);
  return t;
}

Tensor make_scalar(double v) { return make_tensor({1}, {v}); }

std::string shape_str(const TensorData& t) {
  std::string s = "[";
  for (std::size_t i = 0; i < t.shape.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(t.shape[i]);
  }
  return s + "]";
}

void zero_grad(const Tensor& t) {
  if (!t->grad.empty()) t->grad.assign(t->data.size(), 0.0);
}

void Tape::check_open() const {
  if (consumed_) throw ContractError("tape already consumed by backward()");
}

int Tape::record(const Tensor& out, std::function<void()> bw) {
  check_open();
  out->node = static_cast<int>(ops_.size());
  ops_.push_back(Op{out, std::move(bw)});
  return out->node;
}

Tensor Tape::matmul(const Tensor& a, const Tensor& b) {
  if (a->shape.size() != 2 || b->shape.size() != 2 || a->shape[1] != b->shape[0]) {
    throw ContractError("matmul shape mismatch: " + shape_str(*a) + " x " +
                        shape_str(*b));
  }
  const std::size_t m = a->shape[0], k = a->shape[1], n = b->shape[1];
  Tensor c = make_tensor({m, n});
  const double* ad = a->data.data();
  const double* bd = b->data.data();
  double* cd = c->data.data();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t p = 0; p < k; ++p) acc += ad[i * k + p] * bd[p * n + j];
      cd[i * n + j] = acc;
    }
  }
  record(c, [a, b, c, m, k, n] {
    a->ensure_grad();
    b->ensure_grad();
    const double* g = c->grad.data();
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t p = 0; p < k; ++p) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += g[i * n + j] * b->data[p * n + j];
        a->grad[i * k + p] += acc;
      }
    }
    for (std::size_t p = 0; p < k; ++p) {
      for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < m; ++i) acc += a->data[i * k + p] * g[i * n + j];
        b->grad[p * n + j] += acc;
      }
    }
  });
  return c;
}

Tensor Tape::add(const Tensor& a, const Tensor& b) {
  if (a->shape != b->shape) {
    throw ContractError("add shape mismatch: " + shape_str(*a) + " vs " +
                        shape_str(*b));
  }
  Tensor c = make_tensor(a->shape);
  for (std::size_t i = 0; i < c->numel(); ++i) c->data[i] = a->data[i] + b->data[i];
  record(c, [a, b, c] {
    a->ensure_grad();
    b->ensure_grad();
    for (std::size_t i = 0; i < c->numel(); ++i) {
      a->grad[i] += c->grad[i];
      b->grad[i] += c->grad[i];
    }
  });
  return c;
}

Tensor Tape::sub(const Tensor& a, const Tensor& b) {
  if (a->shape != b->shape) {
    throw ContractError("sub shape mismatch: " + shape_str(*a) + " vs " +
                        shape_str(*b));
  }
  Tensor c = make_tensor(a->shape);
  for (std::size_t i = 0; i < c->numel(); ++i) c->data[i] = a->data[i] - b->data[i];
  record(c, [a, b, c] {
    a->ensure_grad();
    b->ensure_grad();
    for (std::size_t i = 0; i < c->numel(); ++i) {
      a->grad[i] += c->grad[i];
      b->grad[i] -= c->grad[i];
    }
  });
  return c;
}

Tensor Tape::mul(const Tensor& a, const Tensor& b) {
  if (a->shape != b->shape) {
    throw ContractError("mul shape mismatch: " + shape_str(*a) + " vs " +
                        shape_str(*b));
  }
  Tensor c = make_tensor(a->shape);
  for (std::size_t i = 0; i < c->numel(); ++i) c->data[i] = a->data[i] * b->data[i];
  record(c, [a, b, c] {
    a->ensure_grad();
    b->ensure_grad();
    for (std::size_t i = 0; i < c->numel(); ++i) {
      a->grad[i] += c->grad[i] * b->data[i];
      b->grad[i] += c->grad[i] * a->data[i];
    }
  });
  return c;
}

Tensor Tape::add_rowvec(const Tensor& a, const Tensor& b) {
  const std::size_t m = a->rows(), n = a->cols();
  if (b->numel() != n) {
    throw ContractError("add_rowvec: " + shape_str(*a) + " + " + shape_str(*b));
  }
  Tensor c = make_tensor(a->shape);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      c->data[i * n + j] = a->data[i * n + j] + b->data[j];
  record(c, [a, b, c, m, n] {
    a->ensure_grad();
    b->ensure_grad();
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        a->grad[i * n + j] += c->grad[i * n + j];
        b->grad[j] += c->grad[i * n + j];
      }
  });
  return c;
}

Tensor Tape::scale(const Tensor& a, double k) {
  Tensor c = make_tensor(a->shape);
  for (std::size_t i = 0; i < c->numel(); ++i) c->data[i] = a->data[i] * k;
  record(c, [a, c, k] {
    a->ensure_grad();
    for (std::size_t i = 0; i < c->numel(); ++i) a->grad[i] += c->grad[i] * k;
  });
  return c;
}

Tensor Tape::add_scalar(const Tensor& a, double k) {
  Tensor c = make_tensor(a->shape);
  for (std::size_t i = 0; i < c->numel(); ++i) c->data[i] = a->data[i] + k;
  record(c, [a, c] {
    a->ensure_grad();
    for (std::size_t i = 0; i < c->numel(); ++i) a->grad[i] += c->grad[i];
  });
  return c;
}

Tensor Tape::tanh(const Tensor& a) {
  Tensor c = make_tensor(a->shape);
  for (std::size_t i = 0; i < c->numel(); ++i) c->data[i] = std::tanh(a->data[i]);
  record(c, [a, c] {
    a->ensure_grad();
    for (std::size_t i = 0; i < c->numel(); ++i)
      a->grad[i] += c->grad[i] * (1.0 - c->data[i] * c->data[i]);
  });
  return c;
}

Tensor Tape::exp(const Tensor& a) {
  Tensor c = make_tensor(a->shape);
  for (std::size_t i = 0; i < c->numel(); ++i) c->data[i] = std::exp(a->data[i]);
  record(c, [a, c] {
    a->ensure_grad();
    for (std::size_t i = 0; i < c->numel(); ++i)
      a->grad[i] += c->grad[i] * c->data[i];
  });
  return c;
}

Tensor Tape::rmsnorm_rows(const Tensor& a, double eps) {
  const std::size_t m = a->rows(), n = a->cols();
  Tensor c = make_tensor(a->shape);
  auto inv_rms = std::make_shared<std::vector<double>>(m);
  for (std::size_t i = 0; i < m; ++i) {
    double ms = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double v = a->data[i * n + j];
      ms += v * v;
    }
    double r = 1.0 / std::sqrt(ms / static_cast<double>(n) + eps);
    (*inv_rms)[i] = r;
    for (std::size_t j = 0; j < n; ++j) c->data[i * n + j] = a->data[i * n + j] * r;
  }
  record(c, [a, c, inv_rms, m, n] {
    a->ensure_grad();
    // y = x * r with r = (mean(x^2)+eps)^-1/2:
    // dx_j = r * dy_j - r^3/n * x_j * sum_k(dy_k * x_k)
    for (std::size_t i = 0; i < m; ++i) {
      double r = (*inv_rms)[i];
      double dot = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        dot += c->grad[i * n + j] * a->data[i * n + j];
      double coef = r * r * r * dot / static_cast<double>(n);
      for (std::size_t j = 0; j < n; ++j)
        a->grad[i * n + j] += r * c->grad[i * n + j] - coef * a->data[i * n + j];
    }
  });
  return c;
}

Tensor Tape::causal_row_softmax(const Tensor& a) {
  const std::size_t m = a->rows(), n = a->cols();
  if (m != n) throw ContractError("causal_row_softmax expects square input");
  Tensor c = make_tensor(a->shape);
  for (std::size_t i = 0; i < m; ++i) {
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j <= i; ++j) mx = std::max(mx, a->data[i * n + j]);
    double z = 0.0;
    for (std::size_t j = 0; j <= i; ++j) {
      double e = std::exp(a->data[i * n + j] - mx);
      c->data[i * n + j] = e;
      z += e;
    }
    for (std::size_t j = 0; j <= i; ++j) c->data[i * n + j] /= z;
  }
  record(c, [a, c, m, n] {
    a->ensure_grad();
    for (std::size_t i = 0; i < m; ++i) {
      double dot = 0.0;
      for (std::size_t j = 0; j <= i; ++j)
        dot += c->grad[i * n + j] * c->data[i * n + j];
      for (std::size_t j = 0; j <= i; ++j)
        a->grad[i * n + j] += c->data[i * n + j] * (c->grad[i * n + j] - dot);
    }
  });
  return c;
}

Tensor Tape::gather_rows(const Tensor& a, std::vector<std::size_t> ids) {
  const std::size_t n = a->cols();
  for (std::size_t id : ids) {
    if (id >= a->rows()) {
      throw ContractError("gather_rows: index " + std::to_string(id) +
                          " out of range for " + shape_str(*a));
    }
  }
  Tensor c = make_tensor({ids.size(), n});
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (std::size_t j = 0; j < n; ++j)
      c->data[i * n + j] = a->data[ids[i] * n + j];
  record(c, [a, c, ids = std::move(ids), n] {
    a->ensure_grad();
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (std::size_t j = 0; j < n; ++j)
        a->grad[ids[i] * n + j] += c->grad[i * n + j];
  });
  return c;
}

Tensor Tape::concat_rows(const std::vector<Tensor>& parts) {
  if (parts.empty()) throw ContractError("concat_rows: no parts");
  const std::size_t n = parts[0]->cols();
  std::size_t m = 0;
  for (const auto& p : parts) {
    if (p->cols() != n) {
      throw ContractError("concat_rows: column mismatch " + shape_str(*p));
    }
    m += p->rows();
  }
  Tensor c = make_tensor({m, n});
  std::size_t row = 0;
  for (const auto& p : parts) {
    for (std::size_t i = 0; i < p->numel(); ++i) c->data[row * n + i] = p->data[i];
    row += p->rows();
  }
  record(c, [parts, c, n] {
    std::size_t row = 0;
    for (const auto& p : parts) {
      p->ensure_grad();
      for (std::size_t i = 0; i < p->numel(); ++i) p->grad[i] += c->grad[row * n + i];
      row += p->rows();
    }
  });
  return c;
}

Tensor Tape::sum(const Tensor& a) {
  double acc = 0.0;
  for (double v : a->data) acc += v;
  Tensor c = make_scalar(acc);
  record(c, [a, c] {
    a->ensure_grad();
    for (std::size_t i = 0; i < a->numel(); ++i) a->grad[i] += c->grad[0];
  });
  return c;
}

Tensor Tape::mean(const Tensor& a) {
  double acc = 0.0;
  for (double v : a->data) acc += v;
  const double inv = 1.0 / static_cast<double>(a->numel());
  Tensor c = make_scalar(acc * inv);
  record(c, [a, c, inv] {
    a->ensure_grad();
    for (std::size_t i = 0; i < a->numel(); ++i) a->grad[i] += c->grad[0] * inv;
  });
  return c;
}

Tensor Tape::sum_scalars(const std::vector<Tensor>& xs) {
  if (xs.empty()) throw ContractError("sum_scalars: empty");
  double acc = 0.0;
  for (const auto& x : xs) acc += x->scalar();
  Tensor c = make_scalar(acc);
  record(c, [xs, c] {
    for (const auto& x : xs) {
      x->ensure_grad();
      x->grad[0] += c->grad[0];
    }
  });
  return c;
}

Tensor Tape::min2(const Tensor& a, const Tensor& b) {
  double av = a->scalar(), bv = b->scalar();
  bool take_a = av <= bv;
  Tensor c = make_scalar(take_a ? av : bv);
  record(c, [a, b, c, take_a] {
    const Tensor& sel = take_a ? a : b;
    sel->ensure_grad();
    sel->grad[0] += c->grad[0];
  });
  return c;
}

Tensor Tape::clamp(const Tensor& a, double lo, double hi) {
  Tensor c = make_tensor(a->shape);
  for (std::size_t i = 0; i < c->numel(); ++i)
    c->data[i] = std::min(hi, std::max(lo, a->data[i]));
  record(c, [a, c, lo, hi] {
    a->ensure_grad();
    for (std::size_t i = 0; i < c->numel(); ++i) {
      if (a->data[i] > lo && a->data[i] < hi) a->grad[i] += c->grad[i];
    }
  });
  return c;
}

Tensor Tape::softmax_cross_entropy(const Tensor& logits, std::size_t target,
                                   std::span<const std::size_t> allowed) {
  const std::size_t v = logits->numel();
  if (target >= v) {
    throw ContractError("cross entropy target " + std::to_string(target) +
                        " out of range for vocab " + std::to_string(v));
  }
  for (double x : logits->data) {
    if (!std::isfinite(x)) throw NumericError("non-finite logit");
  }
  std::vector<std::size_t> idx;
  if (allowed.empty()) {
    idx.resize(v);
    for (std::size_t i = 0; i < v; ++i) idx[i] = i;
  } else {
    idx.assign(allowed.begin(), allowed.end());
    bool member = false;
    for (std::size_t i : idx) {
      if (i >= v) throw ContractError("allowed index out of range");
      if (i == target) member = true;
    }
    if (!member) throw ContractError("target not in allowed token set");
  }
  double mx = -std::numeric_limits<double>::infinity();
  for (std::size_t i : idx) mx = std::max(mx, logits->data[i]);
  double z = 0.0;
  auto probs = std::make_shared<std::vector<double>>(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    (*probs)[k] = std::exp(logits->data[idx[k]] - mx);
    z += (*probs)[k];
  }
  double logp = 0.0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    (*probs)[k] /= z;
    if (idx[k] == target) logp = (logits->data[target] - mx) - std::log(z);
  }
  Tensor c = make_scalar(-logp);
  record(c, [logits, c, probs, idx = std::move(idx), target] {
    logits->ensure_grad();
    // d(-logp)/dlogit = softmax - onehot(target), restricted to the subset.
    for (std::size_t k = 0; k < idx.size(); ++k) {
      double g = (*probs)[k] - (idx[k] == target ? 1.0 : 0.0);
      logits->grad[idx[k]] += c->grad[0] * g;
    }
  });
  return c;
}

void Tape::backward(const Tensor& loss) {
  check_open();
  if (loss->numel() != 1) {
    throw ContractError("backward() needs a scalar loss, got " + shape_str(*loss));
  }
  loss->ensure_grad();
  loss->grad[0] = 1.0;
  for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) {
    // Ops whose output never received gradient are not ancestors of the loss.
    if (it->out->grad.empty()) continue;
    it->backward();
  }
  consumed_ = true;
  ops_.clear();
}

}  // namespace navr1
