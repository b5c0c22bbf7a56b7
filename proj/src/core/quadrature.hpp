#pragma once

#include <functional>
#include <vector>

#include "spectrum.hpp"

namespace sou::quad {

inline constexpr double kRelTol = 1e-8;
inline constexpr int kMaxDepth = 60;

/// Composite rule on the integration domain of a shape: nodes, weights
/// (domain weight folded in) and phi at each node.
struct ShapeRule {
  std::vector<double> x;
  std::vector<double> w;
  std::vector<double> phi;
};

/// Composite 16-point Gauss-Legendre rule on dyadic panels. Panel edges sit
/// at b 2^{-j} toward every endpoint where phi vanishes, down to the depth
/// where phi t_scale < 1e-3; each panel is split into 2^level equal parts.
/// Symmetric shapes integrate [0,1/2] with weight 2.
ShapeRule shape_rule(const ShapeFunction& shape, double t_scale, int level);

/// Integral of h(phi(x)) over [0,1], refining `level` until two successive
/// estimates agree to kRelTol relative. Throws NumericFailure at the cap.
double integrate_shape(const ShapeFunction& shape, double t_scale,
                       const std::function<double(double)>& h);

/// Same convergence loop for integrands that consume whole rules (tensor
/// products). `evaluate(level)` returns the estimate at that level.
double converge_levels(const std::function<double(int)>& evaluate, int max_level, const char* what);

}  // namespace sou::quad
