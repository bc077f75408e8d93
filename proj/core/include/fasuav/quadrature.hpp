#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <queue>
#include <span>

namespace fasuav::quadrature {

struct Options {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_subdivisions = 4000;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  long evaluations = 0;
  bool converged = false;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
inline constexpr std::array<double, 8> kXk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
inline constexpr std::array<double, 8> kWk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
// Gauss weights for the odd Kronrod nodes (1, 3, 5) and the centre.
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gauss_kronrod(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = fc * kWk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXk[j];
    const double s = f(c - dx) + f(c + dx);
    kronrod += kWk[j] * s;
    if (j % 2 == 1) gauss += kWg[j / 2] * s;
  }
  kronrod *= h;
  gauss *= h;
  return {a, b, kronrod, std::fabs(kronrod - gauss)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (G7/K15) integration of `f` over the
/// consecutive intervals defined by `points` (at least two, increasing).
/// The segment with the largest error estimate is bisected until the total
/// error is within max(abs_tol, rel_tol * |value|).
template <class F>
  requires std::invocable<F&, double>
Result integrate(F&& f, std::span<const double> points, const Options& opt = {}) {
  std::priority_queue<detail::Segment> heap;
  Result out;
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (!(points[i + 1] > points[i])) continue;
    auto seg = detail::gauss_kronrod(f, points[i], points[i + 1]);
    out.evaluations += 15;
    total += seg.value;
    total_err += seg.error;
    heap.push(seg);
  }
  int splits = 0;
  while (!heap.empty() && total_err > std::max(opt.abs_tol, opt.rel_tol * std::fabs(total))) {
    if (splits >= opt.max_subdivisions) {
      out.value = total;
      out.error = total_err;
      return out;
    }
    const auto worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // interval collapsed to adjacent doubles; nothing left to refine
      out.value = total;
      out.error = total_err;
      return out;
    }
    heap.pop();
    auto left = detail::gauss_kronrod(f, worst.a, mid);
    auto right = detail::gauss_kronrod(f, mid, worst.b);
    out.evaluations += 30;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++splits;
  }
  // Re-sum to shed the drift of the running updates.
  total = 0.0;
  total_err = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    total_err += heap.top().error;
    heap.pop();
  }
  out.value = total;
  out.error = total_err;
  out.converged = true;
  return out;
}

template <class F>
  requires std::invocable<F&, double>
Result integrate(F&& f, double a, double b, const Options& opt = {}) {
  const std::array<double, 2> pts = {a, b};
  return integrate(f, std::span<const double>(pts), opt);
}

}  // namespace fasuav::quadrature
