#pragma once

// Independent reference values. Nothing here calls into the library: each
// oracle is a closed form or a different numerical route.

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <unsupported/Eigen/MatrixFunctions>
#include <vector>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

/// Dense symmetric eigenvalues of -M, ascending.
inline std::vector<double> neg_eigenvalues(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(-m, Eigen::EigenvaluesOnly);
  return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

/// Laplacian of the n-cycle with spring kappa, assembled by hand.
inline Eigen::MatrixXd cycle_laplacian(int n, double kappa) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    m(i, j) += kappa;
    m(j, i) += kappa;
    m(i, i) -= kappa;
    m(j, j) -= kappa;
  }
  return m;
}

/// e^{-x} I0(x) without overflow: Bessel routine below x = 500, Hankel
/// asymptotic series sum_k ((2k-1)!!)^2 / (k! (8x)^k) / sqrt(2 pi x) above.
inline double scaled_i0(double x) {
  if (x < 500.0) return std::exp(-x) * boost::math::cyl_bessel_i(0, x);
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 8; ++k) {
    term *= (2.0 * k - 1) * (2.0 * k - 1) / (k * 8.0 * x);
    sum += term;
  }
  return sum / std::sqrt(2.0 * pi * x);
}

/// Rouse Laplace integral: 4 sin^2(pi x) = 2 (1 - cos 2 pi x) gives
/// int_0^1 exp(-2 phi s) dx = exp(-4 s) I0(4 s).
inline double rouse_laplace(double s) { return scaled_i0(4.0 * s); }

/// Rouse limit MSD, int_0^t exp(-4s) I0(4s) ds = X e^{-X} (I0(X) + I1(X)) / 4
/// with X = 4t, continued past t = 100 by integrating the scaled series.
inline double rouse_limit_msd(double t) {
  const double cut = 100.0;
  const double x = 4.0 * std::min(t, cut);
  const double head =
      0.25 * x * std::exp(-x) * (boost::math::cyl_bessel_i(0, x) + boost::math::cyl_bessel_i(1, x));
  if (t <= cut) return head;
  boost::math::quadrature::tanh_sinh<double> ts;
  return head + ts.integrate([](double s) { return rouse_laplace(s); }, cut, t);
}

/// int_0^1 exp(-2 s x^rho) dx = gamma_lower(1/rho, 2s) / (rho (2s)^{1/rho}).
inline double power_laplace(double rho, double s) {
  const double a = 1.0 / rho;
  return boost::math::tgamma_lower(a, 2.0 * s) / (rho * std::pow(2.0 * s, a));
}

/// int_0^1 (1 - e^{-2 x t}) / (2x) dx = (gamma + ln 2t + E1(2t)) / 2.
inline double linear_limit_msd(double t) {
  const double z = 2.0 * t;
  return 0.5 * (std::numbers::egamma + std::log(z) + boost::math::expint(1, z));
}

/// Power-shape limit MSD by integrating the Laplace oracle over [0, t].
inline double power_limit_msd(double rho, double t) {
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate([rho](double s) { return s < 1e-12 ? 1.0 : power_laplace(rho, s); }, 0.0, t);
}

/// Bead-averaged MSD from the Frobenius route:
/// E|x(t)|^2 / n = sigma^2 / n int_0^t ||exp(L r)||_F^2 dr.
inline double frobenius_msd(const Eigen::MatrixXd& lap, double sigma, double t) {
  auto integrand = [&](double r) {
    const Eigen::MatrixXd e = (lap * r).exp();
    return e.squaredNorm();
  };
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, t, 10, 1e-13);
  return sigma * sigma * v / static_cast<double>(lap.rows());
}

inline double binomial_mass(int n, int k_lo, int k_hi) {
  double m = 0.0;
  for (int k = k_lo; k <= k_hi; ++k) m += boost::math::binomial_coefficient<double>(n, k);
  return m / std::ldexp(1.0, n);
}

/// Variance of int f d mu_n for coefficients c_k = xi_k / sqrt(n) with iid xi:
/// (m4 - m2^2) / n^2 * sum_k f(k/n)^2.
template <class F>
double random_integral_variance(int n, double m2, double m4, F f) {
  double s = 0.0;
  for (int k = 0; k < n; ++k) s += f(static_cast<double>(k) / n) * f(static_cast<double>(k) / n);
  return (m4 - m2 * m2) * s / (static_cast<double>(n) * n);
}

}  // namespace oracle
