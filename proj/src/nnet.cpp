#include "edgenav/nnet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

#include "edgenav/errors.hpp"
#include "edgenav/hashrand.hpp"

namespace edgenav {

void Gradients::add(const Gradients& other) {
  if (w.size() != other.w.size()) throw ContractError("gradient shape mismatch");
  for (std::size_t l = 0; l < w.size(); ++l) {
    for (std::size_t i = 0; i < w[l].size(); ++i) w[l][i] += other.w[l][i];
    for (std::size_t i = 0; i < b[l].size(); ++i) b[l][i] += other.b[l][i];
  }
}

void Gradients::scale(double factor) {
  for (auto& layer : w)
    for (auto& v : layer) v *= factor;
  for (auto& layer : b)
    for (auto& v : layer) v *= factor;
}

Mlp::Mlp(std::vector<int> widths, std::uint64_t seed) : widths_(std::move(widths)) {
  if (widths_.size() < 2) throw ValidationError("mlp needs at least input and output widths");
  for (int wdt : widths_)
    if (wdt <= 0) throw ValidationError("mlp widths must be positive");
  const std::size_t layers = widths_.size() - 1;
  w_.resize(layers);
  b_.resize(layers);
  for (std::size_t l = 0; l < layers; ++l) {
    const int fan_in = widths_[l];
    const int fan_out = widths_[l + 1];
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    w_[l].resize(static_cast<std::size_t>(fan_in) * fan_out);
    for (std::size_t i = 0; i < w_[l].size(); ++i)
      w_[l][i] = bound * (2.0 * uniform01(hash_key(seed, l, i)) - 1.0);
    b_[l].assign(static_cast<std::size_t>(fan_out), 0.0);
  }
}

std::vector<double> Mlp::forward(const std::vector<double>& x) const {
  Cache cache;
  return forward(x, cache);
}

std::vector<double> Mlp::forward(const std::vector<double>& x, Cache& cache) const {
  if (static_cast<int>(x.size()) != input_size())
    throw ValidationError("mlp input size mismatch");
  cache.revision = revision_;
  cache.acts.assign(1, x);
  std::vector<double> a = x;
  for (std::size_t l = 0; l < w_.size(); ++l) {
    const int in = widths_[l];
    const int out = widths_[l + 1];
    std::vector<double> z(static_cast<std::size_t>(out));
    for (int o = 0; o < out; ++o) {
      double acc = b_[l][o];
      const double* row = &w_[l][static_cast<std::size_t>(o) * in];
      for (int i = 0; i < in; ++i) acc += row[i] * a[i];
      z[o] = acc;
    }
    if (l + 1 < w_.size()) {
      for (auto& v : z) v = std::tanh(v);
      cache.acts.push_back(z);
    }
    a = std::move(z);
  }
  cache.output = a;
  return a;
}

void Mlp::backward(const Cache& cache, const std::vector<double>& d_output,
                   Gradients& grads) const {
  if (cache.revision != revision_)
    throw ContractError("backward called with a cache from an older parameter revision");
  if (static_cast<int>(d_output.size()) != output_size())
    throw ValidationError("mlp output gradient size mismatch");
  if (grads.w.size() != w_.size()) throw ContractError("gradient shape mismatch");

  std::vector<double> delta = d_output;
  for (std::size_t l = w_.size(); l-- > 0;) {
    const int in = widths_[l];
    const int out = widths_[l + 1];
    const std::vector<double>& a_prev = cache.acts[l];
    for (int o = 0; o < out; ++o) {
      double* grow = &grads.w[l][static_cast<std::size_t>(o) * in];
      for (int i = 0; i < in; ++i) grow[i] += delta[o] * a_prev[i];
      grads.b[l][o] += delta[o];
    }
    if (l > 0) {
      std::vector<double> prev(static_cast<std::size_t>(in), 0.0);
      for (int o = 0; o < out; ++o) {
        const double* row = &w_[l][static_cast<std::size_t>(o) * in];
        for (int i = 0; i < in; ++i) prev[i] += row[i] * delta[o];
      }
      for (int i = 0; i < in; ++i) prev[i] *= 1.0 - a_prev[i] * a_prev[i];
      delta = std::move(prev);
    }
  }
}

Gradients Mlp::zero_gradients() const {
  Gradients g;
  g.w.resize(w_.size());
  g.b.resize(b_.size());
  for (std::size_t l = 0; l < w_.size(); ++l) {
    g.w[l].assign(w_[l].size(), 0.0);
    g.b[l].assign(b_[l].size(), 0.0);
  }
  return g;
}

RmsProp RmsProp::for_net(const Mlp& net, double lr) {
  RmsProp opt;
  opt.lr = lr;
  opt.mean_square = net.zero_gradients();
  return opt;
}

void rmsprop_step(RmsProp& opt, Mlp& net, const Gradients& grads) {
  auto& w = net.weights();
  auto& b = net.biases();
  if (opt.mean_square.w.size() != w.size())
    throw ContractError("optimizer state does not match network shape");
  for (std::size_t l = 0; l < w.size(); ++l) {
    for (std::size_t i = 0; i < w[l].size(); ++i) {
      double& ms = opt.mean_square.w[l][i];
      const double g = grads.w[l][i];
      ms = opt.decay * ms + (1.0 - opt.decay) * g * g;
      w[l][i] -= opt.lr * g / (std::sqrt(ms) + opt.eps);
    }
    for (std::size_t i = 0; i < b[l].size(); ++i) {
      double& ms = opt.mean_square.b[l][i];
      const double g = grads.b[l][i];
      ms = opt.decay * ms + (1.0 - opt.decay) * g * g;
      b[l][i] -= opt.lr * g / (std::sqrt(ms) + opt.eps);
    }
  }
  net.bump_revision();
}

std::vector<double> softmax(const std::vector<double>& logits) {
  if (logits.empty()) throw ValidationError("softmax of empty logits");
  const double m = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double sum = 0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - m);
    sum += out[i];
  }
  for (auto& v : out) v /= sum;
  return out;
}

namespace {

void write_doubles(std::ostream& out, const std::vector<double>& v) {
  char buf[48];
  for (double x : v) {
    std::snprintf(buf, sizeof(buf), "%.17g\n", x);
    out << buf;
  }
}

double read_double(std::istream& in) {
  double v;
  if (!(in >> v)) throw FormatError("checkpoint truncated while reading parameters");
  return v;
}

}  // namespace

void save_mlp(std::ostream& out, const Mlp& net) {
  out << "mlp " << net.widths().size() << "\n";
  for (int w : net.widths()) out << w << " ";
  out << "\n";
  for (std::size_t l = 0; l < net.weights().size(); ++l) {
    write_doubles(out, net.weights()[l]);
    write_doubles(out, net.biases()[l]);
  }
}

Mlp load_mlp(std::istream& in) {
  std::string tag;
  std::size_t nwidths = 0;
  if (!(in >> tag >> nwidths) || tag != "mlp")
    throw FormatError("checkpoint does not start with an mlp block");
  if (nwidths < 2 || nwidths > 64) throw FormatError("implausible mlp width count");
  std::vector<int> widths(nwidths);
  for (auto& w : widths)
    if (!(in >> w)) throw FormatError("checkpoint truncated while reading widths");
  Mlp net(widths, 0);
  for (std::size_t l = 0; l < net.weights().size(); ++l) {
    for (auto& v : net.weights()[l]) v = read_double(in);
    for (auto& v : net.biases()[l]) v = read_double(in);
  }
  return net;
}

void save_rmsprop(std::ostream& out, const RmsProp& opt) {
  char buf[96];
  out << "rmsprop\n";
  std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", opt.lr, opt.decay, opt.eps);
  out << buf;
  out << opt.mean_square.w.size() << "\n";
  for (std::size_t l = 0; l < opt.mean_square.w.size(); ++l) {
    out << opt.mean_square.w[l].size() << " " << opt.mean_square.b[l].size() << "\n";
    write_doubles(out, opt.mean_square.w[l]);
    write_doubles(out, opt.mean_square.b[l]);
  }
}

RmsProp load_rmsprop(std::istream& in) {
  std::string tag;
  if (!(in >> tag) || tag != "rmsprop") throw FormatError("missing rmsprop block");
  RmsProp opt;
  if (!(in >> opt.lr >> opt.decay >> opt.eps))
    throw FormatError("checkpoint truncated while reading optimizer hyperparameters");
  std::size_t layers = 0;
  if (!(in >> layers) || layers > 64) throw FormatError("implausible optimizer layer count");
  opt.mean_square.w.resize(layers);
  opt.mean_square.b.resize(layers);
  for (std::size_t l = 0; l < layers; ++l) {
    std::size_t nw = 0, nb = 0;
    if (!(in >> nw >> nb)) throw FormatError("checkpoint truncated in optimizer state");
    opt.mean_square.w[l].resize(nw);
    opt.mean_square.b[l].resize(nb);
    for (auto& v : opt.mean_square.w[l]) v = read_double(in);
    for (auto& v : opt.mean_square.b[l]) v = read_double(in);
  }
  return opt;
}

}  // namespace edgenav
