#pragma once

#include <array>
#include <cmath>
#include <limits>

namespace trustcalc::detail {

// 7-point Gauss / 15-point Kronrod nodes and weights on [-1, 1].
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the centre.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct GaussKronrodResult {
  double integral = 0.0;
  double error = 0.0;
};

template <typename F>
GaussKronrodResult gauss_kronrod_15(F&& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (std::size_t i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double pair = f(centre - dx) + f(centre + dx);
    kronrod += kKronrodWeights[i] * pair;
    if (i % 2 == 1)
      gauss += kGaussWeights[i / 2] * pair;
  }
  return {kronrod * half, std::abs((kronrod - gauss) * half)};
}

template <typename F>
double adaptive_gk_impl(F& f, double a, double b, double tol,
                        GaussKronrodResult whole, int depth) {
  if (whole.error <= tol || depth >= 60 ||
      b - a <= 8 * std::numeric_limits<double>::epsilon() * std::abs(a + b))
    return whole.integral;
  const double mid = 0.5 * (a + b);
  const auto left = gauss_kronrod_15(f, a, mid);
  const auto right = gauss_kronrod_15(f, mid, b);
  return adaptive_gk_impl(f, a, mid, 0.5 * tol, left, depth + 1) +
         adaptive_gk_impl(f, mid, b, 0.5 * tol, right, depth + 1);
}

/// Adaptive Gauss-Kronrod (G7/K15) integration of f over [a, b] with
/// recursive bisection until the Kronrod/Gauss difference is below the
/// absolute tolerance allotted to each subinterval.
template <typename F>
double integrate_adaptive(F f, double a, double b, double abs_tol) {
  if (!(b > a))
    return 0.0;
  return adaptive_gk_impl(f, a, b, abs_tol, gauss_kronrod_15(f, a, b), 0);
}

} // namespace trustcalc::detail
