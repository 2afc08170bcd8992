#include "dgl/adam.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "dgl/errors.hpp"

namespace dgl {

Optimizer::Optimizer(std::size_t n_params, OptimizerMode mode, AdamHyper hyper)
    : mode_(mode), hyper_(hyper), m_(n_params, 0.0), v_(n_params, 0.0) {}

void Optimizer::step(std::span<double> params, std::span<const double> grad, double lr) {
  if (params.size() != m_.size() || grad.size() != m_.size()) {
    throw std::invalid_argument("Optimizer::step: size mismatch");
  }
  if (!(lr > 0.0)) {
    throw std::invalid_argument("Optimizer::step: learning rate must be positive");
  }
  for (std::size_t k = 0; k < grad.size(); ++k) {
    if (!std::isfinite(grad[k])) {
      throw DiagnosticError("non-finite gradient at parameter " + std::to_string(k));
    }
  }
  ++t_;
  if (mode_ == OptimizerMode::Sgd) {
    for (std::size_t k = 0; k < params.size(); ++k) {
      params[k] -= lr * grad[k];
    }
    return;
  }
  beta1_pow_ *= hyper_.beta1;
  beta2_pow_ *= hyper_.beta2;
  const double c1 = 1.0 - beta1_pow_;
  const double c2 = 1.0 - beta2_pow_;
  for (std::size_t k = 0; k < params.size(); ++k) {
    m_[k] = hyper_.beta1 * m_[k] + (1.0 - hyper_.beta1) * grad[k];
    v_[k] = hyper_.beta2 * v_[k] + (1.0 - hyper_.beta2) * grad[k] * grad[k];
    const double m_hat = m_[k] / c1;
    const double v_hat = v_[k] / c2;
    params[k] -= lr * m_hat / (std::sqrt(v_hat) + hyper_.epsilon);
  }
}

} // namespace dgl
