#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace navr1 {

// Dense row-major 64-bit float array. Values are created either as leaves
// (parameters, constants) or as outputs of Tape ops; `node` is the id of the
// producing op on the recording tape, -1 for leaves.
struct TensorData {
  std::vector<std::size_t> shape;
  std::vector<double> data;
  std::vector<double> grad;  // allocated on first use, same length as data
  int node = -1;

  std::size_t numel() const { return data.size(); }
  std::size_t rows() const { return shape.empty() ? 1 : shape[0]; }
  std::size_t cols() const { return shape.size() < 2 ? 1 : shape[1]; }
  double scalar() const;
  void ensure_grad();
};

using Tensor = std::shared_ptr<TensorData>;

// Ordered name -> array collection; order is part of the checkpoint format.
using NamedTensors = std::vector<std::pair<std::string, Tensor>>;

Tensor make_tensor(std::vector<std::size_t> shape);
Tensor make_tensor(std::vector<std::size_t> shape, std::vector<double> data);
Tensor make_scalar(double v);
std::string shape_str(const TensorData& t);

void zero_grad(const Tensor& t);

// Define-by-run reverse-mode tape. Ops append a node with a backward rule;
// backward() replays the rules once, in reverse recording order, then marks
// the tape consumed. Single-threaded per tape.
class Tape {
 public:
  // c[m,n] = a[m,k] @ b[k,n]; backward dA += dC B^T, dB += A^T dC.
  Tensor matmul(const Tensor& a, const Tensor& b);
  // c[m,n] = a[m,k] @ b[n,k]^T (attention scores without a transpose copy).
  Tensor matmul_nt(const Tensor& a, const Tensor& b);
  // Elementwise; shapes must match.
  Tensor add(const Tensor& a, const Tensor& b);
  Tensor sub(const Tensor& a, const Tensor& b);
  Tensor mul(const Tensor& a, const Tensor& b);
  // a[m,n] + row vector b[n] broadcast over rows.
  Tensor add_rowvec(const Tensor& a, const Tensor& b);
  Tensor scale(const Tensor& a, double c);
  Tensor add_scalar(const Tensor& a, double c);
  Tensor tanh(const Tensor& a);
  Tensor exp(const Tensor& a);
  // Row-wise x / sqrt(mean(x^2) + eps), no learned gain.
  Tensor rmsnorm_rows(const Tensor& a, double eps = 1e-5);
  // Softmax over each row i restricted to columns [0, i]; columns beyond i
  // are exactly zero. Input must be square (attention scores).
  Tensor causal_row_softmax(const Tensor& a);
  // out[i, :] = a[ids[i], :]; backward scatter-adds (embedding lookup).
  Tensor gather_rows(const Tensor& a, std::vector<std::size_t> ids);
  // Stacks parts vertically; all parts share the column count.
  Tensor concat_rows(const std::vector<Tensor>& parts);
  Tensor sum(const Tensor& a);
  Tensor mean(const Tensor& a);
  // Sum of scalar tensors as a single node.
  Tensor sum_scalars(const std::vector<Tensor>& xs);
  // min of two scalars; ties take the first argument's branch.
  Tensor min2(const Tensor& a, const Tensor& b);
  // clamp to [lo, hi]; gradient is passed through only strictly inside.
  Tensor clamp(const Tensor& a, double lo, double hi);

  // -log softmax(logits)[target]; `logits` is a vector (or 1-row matrix).
  // When `allowed` is non-empty the softmax runs over that subset only and
  // target must be a member.
  Tensor softmax_cross_entropy(const Tensor& logits, std::size_t target,
                               std::span<const std::size_t> allowed = {});

  // Populates grads of every ancestor of `loss` (a scalar), then marks the
  // tape consumed. Recording or a second backward afterwards throws.
  void backward(const Tensor& loss);

  bool consumed() const { return consumed_; }
  std::size_t size() const { return ops_.size(); }

 private:
  struct Op {
    Tensor out;
    std::function<void()> backward;
  };
  int record(const Tensor& out, std::function<void()> bw);
  void check_open() const;

  std::vector<Op> ops_;
  bool consumed_ = false;
};

}  // namespace navr1
