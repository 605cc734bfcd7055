#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace twoaxis {

/// A tolerance that could not be met by an integrator.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QuadTolerance {
  double abs = 1e-10;
  double rel = 1e-6;
  int max_subdivisions = 400;

  double target(double value) const { return std::max(abs, rel * std::abs(value)); }
};

struct OverlapResult {
  double value = 0.0;
  double est_error = 0.0;
  std::size_t n_evals = 0;

  OverlapResult& operator+=(const OverlapResult& other)
  {
    value += other.value;
    est_error += other.est_error;
    n_evals += other.n_evals;
    return *this;
  }

  OverlapResult scaled(double factor) const
  {
    return {value * factor, est_error * std::abs(factor), n_evals};
  }
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule.
inline constexpr std::array<double, 8> kronrod_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kronrod_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gauss_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
};

template <class F>
Panel gauss_kronrod_15(F& f, double a, double b)
{
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f_center = f(center);
  double kronrod = f_center * kronrod_weights[7];
  double gauss = f_center * gauss_weights[3];
  double abs_sum = std::abs(kronrod);
  std::array<double, 7> lower{};
  std::array<double, 7> upper{};
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kronrod_nodes[j];
    lower[j] = f(center - dx);
    upper[j] = f(center + dx);
    const double pair = lower[j] + upper[j];
    kronrod += kronrod_weights[j] * pair;
    abs_sum += kronrod_weights[j] * (std::abs(lower[j]) + std::abs(upper[j]));
    if (j % 2 == 1) {
      gauss += gauss_weights[j / 2] * pair;
    }
  }
  const double mean = 0.5 * kronrod;
  double asc = kronrod_weights[7] * std::abs(f_center - mean);
  for (std::size_t j = 0; j < 7; ++j) {
    asc += kronrod_weights[j] * (std::abs(lower[j] - mean) + std::abs(upper[j] - mean));
  }
  const double h = std::abs(half);
  double error = std::abs((kronrod - gauss) * half);
  asc *= h;
  abs_sum *= h;
  if (asc != 0.0 && error != 0.0) {
    error = asc * std::min(1.0, std::pow(200.0 * error / asc, 1.5));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (abs_sum > std::numeric_limits<double>::min() / (50.0 * eps)) {
    error = std::max(50.0 * eps * abs_sum, error);
  }
  return {a, b, kronrod * half, error};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
/// Throws NumericalError when the tolerance cannot be met.
template <class F>
OverlapResult integrate_adaptive(F&& f, double a, double b, const QuadTolerance& tol = {})
{
  if (a == b) {
    return {};
  }
  std::vector<detail::Panel> panels{detail::gauss_kronrod_15(f, a, b)};
  std::size_t evals = 15;
  auto totals = [&panels] {
    double value = 0.0;
    double error = 0.0;
    for (const auto& p : panels) {
      value += p.value;
      error += p.error;
    }
    return std::pair{value, error};
  };
  auto [value, error] = totals();
  while (error > tol.target(value)) {
    if (static_cast<int>(panels.size()) >= tol.max_subdivisions) {
      throw NumericalError("adaptive quadrature: tolerance not met on [" + std::to_string(a) +
                           ", " + std::to_string(b) + "], estimated error " +
                           std::to_string(error));
    }
    auto worst = std::max_element(panels.begin(), panels.end(),
                                  [](const auto& l, const auto& r) { return l.error < r.error; });
    const double mid = 0.5 * (worst->a + worst->b);
    const auto left = detail::gauss_kronrod_15(f, worst->a, mid);
    const auto right = detail::gauss_kronrod_15(f, mid, worst->b);
    evals += 30;
    *worst = left;
    panels.push_back(right);
    std::tie(value, error) = totals();
  }
  return {value, error, evals};
}

}  // namespace twoaxis
