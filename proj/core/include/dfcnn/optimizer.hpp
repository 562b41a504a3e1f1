#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace dfcnn {

struct NadamConstants {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double momentum_decay = 0.004;

  friend bool operator==(const NadamConstants&, const NadamConstants&) = default;
};

struct PlateauConstants {
  double factor = 0.1;
  std::size_t patience = 10;
  double min_lr = 1e-6;

  friend bool operator==(const PlateauConstants&, const PlateauConstants&) = default;
};

struct PlateauState {
  double best = std::numeric_limits<double>::infinity();
  std::size_t bad_epochs = 0;
};

/**
 * @brief NAdam moments and reduce-on-plateau bookkeeping for one parameter set.
 *
 * first/second hold one moment vector per trainable tensor, in the order the
 * tensors are passed to nadam_step().
 */
struct OptimizerState {
  double learning_rate = 1e-2;
  NadamConstants nadam;
  PlateauConstants plateau;
  PlateauState plateau_state;
  std::uint64_t step = 0;
  double mu_product = 1.0;
  std::vector<std::vector<double>> first;
  std::vector<std::vector<double>> second;
};

/// Zeroed moments shaped like `params`.
OptimizerState make_optimizer_state(std::span<const std::span<double>> params,
                                    double learning_rate, NadamConstants nadam = {},
                                    PlateauConstants plateau = {});

/**
 * Nesterov-accelerated Adam step with momentum-decay schedule
 * mu_t = beta1 * (1 - 0.5 * 0.96^(t * momentum_decay)). Updates params in
 * place and increments state.step.
 */
void nadam_step(std::span<const std::span<double>> params,
                std::span<const std::span<const double>> grads, OptimizerState& state);

/**
 * Tracks the best loss; once `patience` consecutive epochs fail to beat it
 * strictly, multiplies the learning rate by `factor` (floored at min_lr) and
 * resets the counter. Returns true when the rate changed.
 */
bool plateau_scheduler_step(OptimizerState& state, double current_loss);

}  // namespace dfcnn
