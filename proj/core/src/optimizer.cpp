#include "dfcnn/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include "dfcnn/error.hpp"

namespace dfcnn {

OptimizerState make_optimizer_state(std::span<const std::span<double>> params,
                                    double learning_rate, NadamConstants nadam,
                                    PlateauConstants plateau) {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw UsageError("learning rate must be a positive finite number");
  }
  OptimizerState state;
  state.learning_rate = learning_rate;
  state.nadam = nadam;
  state.plateau = plateau;
  for (const auto& p : params) {
    state.first.emplace_back(p.size(), 0.0);
    state.second.emplace_back(p.size(), 0.0);
  }
  return state;
}

void nadam_step(std::span<const std::span<double>> params,
                std::span<const std::span<const double>> grads, OptimizerState& state) {
  if (params.size() != grads.size() || params.size() != state.first.size() ||
      params.size() != state.second.size()) {
    throw ShapeError("nadam: parameter, gradient and moment lists differ in length");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i].size() != grads[i].size() || params[i].size() != state.first[i].size() ||
        params[i].size() != state.second[i].size()) {
      throw ShapeError("nadam: tensor " + std::to_string(i) + " shape mismatch");
    }
  }
  if (!(state.learning_rate > 0.0)) throw UsageError("nadam: learning rate must be positive");

  const NadamConstants& k = state.nadam;
  const double t = static_cast<double>(++state.step);
  const double mu = k.beta1 * (1.0 - 0.5 * std::pow(0.96, t * k.momentum_decay));
  const double mu_next = k.beta1 * (1.0 - 0.5 * std::pow(0.96, (t + 1.0) * k.momentum_decay));
  state.mu_product *= mu;
  const double mu_product_next = state.mu_product * mu_next;
  const double bias_correction2 = 1.0 - std::pow(k.beta2, t);
  const double grad_coef = state.learning_rate * (1.0 - mu) / (1.0 - state.mu_product);
  const double moment_coef = state.learning_rate * mu_next / (1.0 - mu_product_next);

  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& m = state.first[i];
    auto& v = state.second[i];
    for (std::size_t j = 0; j < params[i].size(); ++j) {
      const double g = grads[i][j];
      m[j] = k.beta1 * m[j] + (1.0 - k.beta1) * g;
      v[j] = k.beta2 * v[j] + (1.0 - k.beta2) * g * g;
      const double denom = std::sqrt(v[j] / bias_correction2) + k.epsilon;
      params[i][j] -= grad_coef * g / denom + moment_coef * m[j] / denom;
    }
  }
}

bool plateau_scheduler_step(OptimizerState& state, double current_loss) {
  if (!std::isfinite(current_loss)) throw NumericError("scheduler received a non-finite loss");
  PlateauState& s = state.plateau_state;
  if (current_loss < s.best) {
    s.best = current_loss;
    s.bad_epochs = 0;
    return false;
  }
  if (++s.bad_epochs < state.plateau.patience) return false;
  s.bad_epochs = 0;
  const double reduced = std::max(state.learning_rate * state.plateau.factor, state.plateau.min_lr);
  const bool changed = reduced < state.learning_rate;
  state.learning_rate = std::min(state.learning_rate, reduced);
  return changed;
}

}  // namespace dfcnn
