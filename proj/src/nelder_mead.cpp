#include "fedrank/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "fedrank/errors.hpp"

namespace fedrank {
namespace {

using Point = std::vector<double>;

Point along(const Point& from, const Point& to, double t) {
  Point p(from.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = from[i] + t * (to[i] - from[i]);
  return p;
}

double checked(const LossFunction& loss, const Point& p) {
  const double value = loss(p);
  if (!std::isfinite(value)) {
    std::ostringstream msg;
    msg << "loss is not finite (" << value << ") at [";
    for (std::size_t i = 0; i < p.size(); ++i) msg << (i ? ", " : "") << p[i];
    msg << "]";
    throw InternalError(msg.str());
  }
  return value;
}

void sort_simplex(Simplex& s) {
  std::vector<std::size_t> order(s.losses.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return s.losses[a] < s.losses[b]; });
  Simplex sorted;
  for (std::size_t i : order) {
    sorted.vertices.push_back(std::move(s.vertices[i]));
    sorted.losses.push_back(s.losses[i]);
  }
  s = std::move(sorted);
}

}  // namespace

void NelderMeadOptions::validate() const {
  if (!(epsilon > 0.0)) throw InvalidInput("simplex step epsilon must be > 0");
  if (max_iter < 1) throw InvalidInput("max_iter must be >= 1");
  if (max_stagnation < 1) throw InvalidInput("max_stagnation must be >= 1");
  if (!(reflection > 0.0)) throw InvalidInput("reflection coefficient must be > 0");
  if (!(expansion >= 0.0)) throw InvalidInput("expansion coefficient must be >= 0");
  if (!(contraction > 0.0 && contraction < 1.0)) {
    throw InvalidInput("contraction coefficient must be in (0, 1)");
  }
  if (!(shrinkage > 0.0 && shrinkage <= 1.0)) {
    throw InvalidInput("shrinkage coefficient must be in (0, 1]");
  }
}

std::string to_string(SimplexOp op) {
  switch (op) {
    case SimplexOp::Initial: return "initial";
    case SimplexOp::Reflect: return "reflect";
    case SimplexOp::Expand: return "expand";
    case SimplexOp::ContractOutside: return "contract_outside";
    case SimplexOp::ContractInside: return "contract_inside";
    case SimplexOp::Shrink: return "shrink";
  }
  return "unknown";
}

NelderMeadResult nelder_mead(const LossFunction& loss, std::span<const double> start,
                             const NelderMeadOptions& options, const SimplexObserver& observer) {
  options.validate();
  const std::size_t n = start.size();
  if (n == 0) throw InvalidInput("simplex search needs at least one dimension");

  Simplex s;
  s.vertices.emplace_back(start.begin(), start.end());
  for (std::size_t j = 0; j < n; ++j) {
    Point v(start.begin(), start.end());
    v[j] += options.epsilon;
    s.vertices.push_back(std::move(v));
  }
  for (const auto& v : s.vertices) s.losses.push_back(checked(loss, v));
  sort_simplex(s);

  NelderMeadResult result;
  result.trace.push_back({0, SimplexOp::Initial, s.losses.front()});
  int stagnant = 0;

  for (int iter = 1; iter <= options.max_iter; ++iter) {
    const double previous_best = s.losses.front();
    Point centroid(n, 0.0);
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t i = 0; i < n; ++i) centroid[i] += s.vertices[v][i];
    }
    for (auto& c : centroid) c /= static_cast<double>(n);

    const Point& worst = s.vertices[n];
    const double worst_loss = s.losses[n];
    const double second_worst_loss = s.losses[n - 1];

    // Reflection through the centroid of the remaining vertices.
    Point reflected = along(centroid, worst, -options.reflection);
    const double reflected_loss = checked(loss, reflected);
    SimplexOp op = SimplexOp::Reflect;

    if (reflected_loss < s.losses.front()) {
      if (options.expansion > 1.0) {
        Point expanded = along(centroid, reflected, options.expansion);
        const double expanded_loss = checked(loss, expanded);
        if (expanded_loss < reflected_loss) {
          s.vertices[n] = std::move(expanded);
          s.losses[n] = expanded_loss;
          op = SimplexOp::Expand;
        }
      }
      if (op == SimplexOp::Reflect) {
        s.vertices[n] = std::move(reflected);
        s.losses[n] = reflected_loss;
      }
    } else if (reflected_loss < second_worst_loss) {
      s.vertices[n] = std::move(reflected);
      s.losses[n] = reflected_loss;
    } else {
      bool contracted = false;
      if (reflected_loss < worst_loss) {
        Point outside = along(centroid, reflected, options.contraction);
        const double outside_loss = checked(loss, outside);
        if (outside_loss <= reflected_loss) {
          s.vertices[n] = std::move(outside);
          s.losses[n] = outside_loss;
          op = SimplexOp::ContractOutside;
          contracted = true;
        }
      } else {
        Point inside = along(centroid, worst, options.contraction);
        const double inside_loss = checked(loss, inside);
        if (inside_loss < worst_loss) {
          s.vertices[n] = std::move(inside);
          s.losses[n] = inside_loss;
          op = SimplexOp::ContractInside;
          contracted = true;
        }
      }
      if (!contracted) {
        const Point best = s.vertices.front();
        for (std::size_t v = 1; v <= n; ++v) {
          s.vertices[v] = along(best, s.vertices[v], options.shrinkage);
          s.losses[v] = checked(loss, s.vertices[v]);
        }
        op = SimplexOp::Shrink;
      }
    }

    sort_simplex(s);
    result.iterations = static_cast<std::size_t>(iter);
    const SimplexStep step{result.iterations, op, s.losses.front()};
    result.trace.push_back(step);
    if (observer) observer(s, step);

    if (s.losses.front() < previous_best) {
      stagnant = 0;
    } else if (++stagnant >= options.max_stagnation) {
      result.stagnated = true;
      break;
    }
  }

  result.best = s.vertices.front();
  result.best_loss = s.losses.front();
  result.final_simplex = std::move(s);
  return result;
}

}  // namespace fedrank
