#include "quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace sou::quad {

namespace {

using Gauss16 = boost::math::quadrature::gauss<double, 16>;

constexpr double kBoundaryLayer = 1e-3;

// Smallest j with phi(edge(j)) * t_scale < kBoundaryLayer.
int boundary_depth(const std::function<double(double)>& phi_at_offset, double width, double t_scale) {
  int j = 1;
  while (j < kMaxDepth && phi_at_offset(width * std::ldexp(1.0, -j)) * t_scale >= kBoundaryLayer) ++j;
  return j;
}

void append_panel(double lo, double hi, int level, double domain_weight, const ShapeFunction& shape,
                  ShapeRule& rule) {
  const auto& abscissa = Gauss16::abscissa();
  const auto& weights = Gauss16::weights();
  const int parts = 1 << level;
  const double h = (hi - lo) / parts;
  for (int p = 0; p < parts; ++p) {
    const double a = lo + h * p;
    const double mid = a + 0.5 * h;
    const double half = 0.5 * h;
    for (std::size_t i = 0; i < abscissa.size(); ++i) {
      for (int sgn : {-1, 1}) {
        if (abscissa[i] == 0.0 && sgn > 0) continue;
        const double x = mid + sgn * half * abscissa[i];
        rule.x.push_back(x);
        rule.w.push_back(domain_weight * half * weights[i]);
        rule.phi.push_back(shape(x));
      }
    }
  }
}

}  // namespace

ShapeRule shape_rule(const ShapeFunction& shape, double t_scale, int level) {
  require(t_scale >= 0.0 && std::isfinite(t_scale), "quadrature scale must be finite and nonnegative");
  const double a = 0.0;
  const double b = shape.symmetric ? 0.5 : 1.0;
  const double domain_weight = shape.symmetric ? 2.0 : 1.0;
  const double width = b - a;

  const double phi_b = shape(b);
  const double phi_max = std::max(shape.max_value(256), phi_b);
  const bool refine_hi = !shape.symmetric && std::abs(phi_b) <= 1e-12 * std::max(phi_max, 1e-300);

  const int depth_lo = boundary_depth([&](double off) { return shape(a + off); }, width, t_scale);
  const int depth_hi =
      refine_hi ? boundary_depth([&](double off) { return shape(b - off); }, width, t_scale) : 0;

  // Split at the midpoint, then dyadic panels toward each refined end.
  std::vector<std::pair<double, double>> panels;
  const double mid = a + 0.5 * width;
  auto dyadic = [&](double end, double toward, int depth) {
    const double span = std::abs(toward - end);
    const double dir = toward > end ? 1.0 : -1.0;
    double outer = end;
    for (int j = 1; j < depth; ++j) {
      const double inner = toward - dir * span * std::ldexp(1.0, -j);
      panels.emplace_back(std::min(outer, inner), std::max(outer, inner));
      outer = inner;
    }
    panels.emplace_back(std::min(outer, toward), std::max(outer, toward));
  };
  dyadic(mid, a, std::max(depth_lo, 1));
  if (refine_hi) {
    dyadic(mid, b, std::max(depth_hi, 1));
  } else {
    panels.emplace_back(mid, b);
  }

  ShapeRule rule;
  for (const auto& [lo, hi] : panels) append_panel(lo, hi, level, domain_weight, shape, rule);
  return rule;
}

double converge_levels(const std::function<double(int)>& evaluate, int max_level, const char* what) {
  double prev = evaluate(0);
  for (int level = 1; level <= max_level; ++level) {
    const double cur = evaluate(level);
    if (std::abs(cur - prev) <= kRelTol * std::abs(cur) || cur == prev) return cur;
    prev = cur;
  }
  std::ostringstream os;
  os.precision(17);
  os << what << ": quadrature did not reach relative tolerance " << kRelTol << " after " << max_level
     << " refinement levels (last estimate " << prev << ")";
  throw NumericFailure(os.str());
}

double integrate_shape(const ShapeFunction& shape, double t_scale,
                       const std::function<double(double)>& h) {
  return converge_levels(
      [&](int level) {
        const auto rule = shape_rule(shape, t_scale, level);
        double sum = 0.0;
        for (std::size_t i = 0; i < rule.x.size(); ++i) sum += rule.w[i] * h(rule.phi[i]);
        return sum;
      },
      8, "shape integral");
}

}  // namespace sou::quad
