#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace discoflux {

/// Thrown when adaptive quadrature exhausts its panel budget.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved_error() const { return achieved_; }

 private:
  double achieved_;
};

template <typename T>
struct QuadratureResult {
  T value{};
  double error = 0.0;
  int evaluations = 0;
};

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 0.0;
  int max_panels = 200000;
  /// Upper bound on panel width as a function of position; <= 0 means uncapped.
  std::function<double(double)> max_width;
};

namespace detail {

// 7-point Gauss / 15-point Kronrod nodes on [-1, 1].
inline constexpr std::array<double, 8> kronrod_x = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kronrod_w = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gauss_w = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

template <typename T, typename F>
QuadratureResult<T> gauss_kronrod_15(F&& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const T fc = f(c);
  T kronrod = fc * kronrod_w[7];
  T gauss = fc * gauss_w[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kronrod_x[j];
    const T f1 = f(c - dx);
    const T f2 = f(c + dx);
    kronrod += (f1 + f2) * kronrod_w[j];
    if (j % 2 == 1) gauss += (f1 + f2) * gauss_w[j / 2];
  }
  QuadratureResult<T> r;
  r.value = kronrod * h;
  r.error = magnitude((kronrod - gauss) * h);
  r.evaluations = 15;
  return r;
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (G7/K15) quadrature of f over [a, b].
///
/// The interval is first cut into panels no wider than options.max_width(x)
/// (used to keep each panel inside a fraction of the local oscillation length),
/// then the panel with the largest error estimate is bisected until the
/// summed estimate meets max(abs_tol, rel_tol * |value|).
template <typename T, typename F>
QuadratureResult<T> integrate(F&& f, double a, double b, const QuadratureOptions& options = {}) {
  struct Panel {
    double a, b;
    QuadratureResult<T> r;
    bool operator<(const Panel& other) const { return r.error < other.r.error; }
  };

  std::vector<double> edges{a};
  if (options.max_width) {
    double x = a;
    while (x < b) {
      const double w = options.max_width(x);
      x = (w > 0.0) ? std::min(b, x + w) : b;
      edges.push_back(x);
      if (static_cast<int>(edges.size()) > options.max_panels) {
        throw QuadratureError("quadrature: initial panel count exceeds budget", 0.0);
      }
    }
  } else {
    edges.push_back(b);
  }

  std::priority_queue<Panel> heap;
  QuadratureResult<T> total;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    Panel p{edges[i], edges[i + 1], detail::gauss_kronrod_15<T>(f, edges[i], edges[i + 1])};
    total.value += p.r.value;
    total.error += p.r.error;
    total.evaluations += p.r.evaluations;
    heap.push(p);
  }

  auto target = [&] { return std::max(options.abs_tol, options.rel_tol * detail::magnitude(total.value)); };
  while (total.error > target()) {
    if (static_cast<int>(heap.size()) >= options.max_panels) {
      throw QuadratureError("quadrature: panel budget exhausted", total.error);
    }
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      throw QuadratureError("quadrature: panel width reached machine precision", total.error);
    }
    Panel left{worst.a, mid, detail::gauss_kronrod_15<T>(f, worst.a, mid)};
    Panel right{mid, worst.b, detail::gauss_kronrod_15<T>(f, mid, worst.b)};
    total.value += left.r.value + right.r.value - worst.r.value;
    total.error += left.r.error + right.r.error - worst.r.error;
    total.evaluations += 30;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum to shed the drift of the running updates.
  T value{};
  double error = 0.0;
  while (!heap.empty()) {
    value += heap.top().r.value;
    error += heap.top().r.error;
    heap.pop();
  }
  total.value = value;
  total.error = error;
  return total;
}

}  // namespace discoflux
