#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace fedrank {

/// Downhill simplex settings. The initial simplex is v0 plus v0 + epsilon * e_j.
struct NelderMeadOptions {
  double epsilon = 0.1;
  int max_iter = 500;
  /// Consecutive iterations without a new best loss before stopping.
  int max_stagnation = 10;
  double reflection = 1.0;
  /// Expansion factor; values <= 1 disable expansion.
  double expansion = 2.0;
  double contraction = 0.5;
  double shrinkage = 0.5;

  void validate() const;
};

enum class SimplexOp { Initial, Reflect, Expand, ContractOutside, ContractInside, Shrink };

std::string to_string(SimplexOp op);

struct SimplexStep {
  std::size_t iteration = 0;
  SimplexOp op = SimplexOp::Initial;
  double best_loss = 0.0;
};

struct Simplex {
  std::vector<std::vector<double>> vertices;
  std::vector<double> losses;

  std::size_t dimension() const { return vertices.empty() ? 0 : vertices.front().size(); }
};

struct NelderMeadResult {
  std::vector<double> best;
  double best_loss = 0.0;
  std::size_t iterations = 0;
  bool stagnated = false;
  std::vector<SimplexStep> trace;
  Simplex final_simplex;
};

using LossFunction = std::function<double(std::span<const double>)>;

/// Called after every iteration with the current simplex, sorted best first.
using SimplexObserver = std::function<void(const Simplex&, const SimplexStep&)>;

/// Minimises `loss` from `start`. Throws InternalError if the loss returns a
/// non-finite value.
NelderMeadResult nelder_mead(const LossFunction& loss, std::span<const double> start,
                             const NelderMeadOptions& options,
                             const SimplexObserver& observer = {});

}  // namespace fedrank
