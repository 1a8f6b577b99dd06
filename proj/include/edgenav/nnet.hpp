#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace edgenav {

// Small dense networks in double precision: tanh hidden layers, identity
// output, manual backprop. Sized for per-decision inference on a flight
// controller, not for throughput.

struct Gradients {
  std::vector<std::vector<double>> w;  // per layer, row-major [out][in]
  std::vector<std::vector<double>> b;  // per layer

  void add(const Gradients& other);
  void scale(double factor);
};

class Mlp {
 public:
  Mlp() = default;
  // widths = {in, hidden..., out}; weights drawn uniform in
  // +-sqrt(6 / (fan_in + fan_out)), biases zero, deterministic in seed.
  Mlp(std::vector<int> widths, std::uint64_t seed);

  const std::vector<int>& widths() const { return widths_; }
  int input_size() const { return widths_.front(); }
  int output_size() const { return widths_.back(); }

  std::vector<double> forward(const std::vector<double>& x) const;

  // Forward pass that records activations for a later backward pass. The
  // cache is tied to the parameter revision it was computed under; using it
  // after an update is a contract violation.
  struct Cache {
    std::uint64_t revision = ~0ULL;
    std::vector<std::vector<double>> acts;  // acts[0] = input, then post-tanh
    std::vector<double> output;
  };
  std::vector<double> forward(const std::vector<double>& x, Cache& cache) const;

  // Accumulates d(loss)/d(params) into grads given d(loss)/d(output).
  void backward(const Cache& cache, const std::vector<double>& d_output,
                Gradients& grads) const;

  Gradients zero_gradients() const;
  std::uint64_t revision() const { return revision_; }

  std::vector<std::vector<double>>& weights() { return w_; }
  std::vector<std::vector<double>>& biases() { return b_; }
  const std::vector<std::vector<double>>& weights() const { return w_; }
  const std::vector<std::vector<double>>& biases() const { return b_; }
  void bump_revision() { ++revision_; }

 private:
  std::vector<int> widths_;
  std::vector<std::vector<double>> w_;
  std::vector<std::vector<double>> b_;
  std::uint64_t revision_ = 0;
};

struct RmsProp {
  double lr = 7e-4;
  double decay = 0.99;
  double eps = 1e-5;
  Gradients mean_square;  // running average of squared gradients

  static RmsProp for_net(const Mlp& net, double lr);
};

// p -= lr * g / (sqrt(ms) + eps) with ms = decay * ms + (1 - decay) * g^2.
void rmsprop_step(RmsProp& opt, Mlp& net, const Gradients& grads);

// Numerically stable softmax.
std::vector<double> softmax(const std::vector<double>& logits);

void save_mlp(std::ostream& out, const Mlp& net);
Mlp load_mlp(std::istream& in);
void save_rmsprop(std::ostream& out, const RmsProp& opt);
RmsProp load_rmsprop(std::istream& in);

}  // namespace edgenav
