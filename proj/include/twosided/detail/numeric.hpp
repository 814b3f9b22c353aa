#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

namespace twosided::detail {

/// Derivative of f at x with step rel_step * max(1, |x|). Falls back to a
/// second-order one-sided stencil when the central stencil would leave
/// [lower, upper].
template <class F>
double numeric_slope(const F& f, double x, double rel_step = 1e-6,
                     double lower = -std::numeric_limits<double>::infinity(),
                     double upper = std::numeric_limits<double>::infinity()) {
  const double h = rel_step * std::max(1.0, std::abs(x));
  if (x - h < lower) {
    return (-3.0 * f(x) + 4.0 * f(x + h) - f(x + 2.0 * h)) / (2.0 * h);
  }
  if (x + h > upper) {
    return (3.0 * f(x) - 4.0 * f(x - h) + f(x - 2.0 * h)) / (2.0 * h);
  }
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

namespace simpson_impl {

template <class F>
double recurse(const F& f, double a, double b, double fa, double fm, double fb,
               double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace simpson_impl

/// Adaptive Simpson quadrature of f over [a, b].
template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol = 1e-10,
                        int max_depth = 50) {
  if (b <= a) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_impl::recurse(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

/// Sign-change root of f on [a, b] by bisection down to adjacent doubles.
/// Returns nullopt when f(a) and f(b) share a sign.
template <class F>
std::optional<double> bisect_root(const F& f, double a, double b, int max_iter = 200) {
  double fa = f(a);
  const double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) return std::nullopt;
  for (int i = 0; i < max_iter; ++i) {
    const double m = 0.5 * (a + b);
    if (!(m > a && m < b)) break;
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm > 0.0) == (fa > 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

struct ScalarMax {
  double x;
  double value;
};

/// Golden-section maximization of a unimodal f on [lo, hi]; stops when the
/// bracket is narrower than tol. The better of the interior point and the
/// two endpoints is returned so a monotone f lands on its boundary.
template <class F>
ScalarMax golden_section_max(const F& f, double lo, double hi, double tol) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    // Bracket stopped shrinking in floating point.
    if (!(c > a) || !(d < b)) break;
  }
  ScalarMax best = fc >= fd ? ScalarMax{c, fc} : ScalarMax{d, fd};
  for (double edge : {lo, hi}) {
    if (edge == a || edge == b) {
      const double fe = f(edge);
      if (fe > best.value) best = {edge, fe};
    }
  }
  return best;
}

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each index
/// is visited exactly once; callers write results into pre-sized storage
/// so output order never depends on scheduling. body must not throw.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, const Body& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < count; i += threads) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace twosided::detail
