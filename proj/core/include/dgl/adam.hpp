#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dgl {

enum class OptimizerMode { Adam, Sgd };

struct AdamHyper {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// First-order optimizer over a flat parameter vector. Adam keeps bias-
/// corrected moment estimates; Sgd is plain `p -= lr * g` and exists so tests
/// can predict trajectories by hand.
class Optimizer {
public:
  Optimizer() = default;
  Optimizer(std::size_t n_params, OptimizerMode mode, AdamHyper hyper = {});

  /// Throws DiagnosticError on a non-finite gradient entry.
  void step(std::span<double> params, std::span<const double> grad, double lr);

  OptimizerMode mode() const noexcept { return mode_; }
  std::size_t steps() const noexcept { return t_; }
  std::span<const double> first_moment() const noexcept { return m_; }
  std::span<const double> second_moment() const noexcept { return v_; }

private:
  OptimizerMode mode_ = OptimizerMode::Adam;
  AdamHyper hyper_;
  std::vector<double> m_;
  std::vector<double> v_;
  std::size_t t_ = 0;
  double beta1_pow_ = 1.0;
  double beta2_pow_ = 1.0;
};

} // namespace dgl
