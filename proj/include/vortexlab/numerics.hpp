#pragma once

// Self-contained numerical kernels: adaptive Gauss-Kronrod quadrature and
// complete elliptic integrals via the arithmetic-geometric mean.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <type_traits>
#include <vector>
#include <utility>

namespace vortexlab::num {

namespace detail {

// (G7, K15) node/weight pair on [-1, 1]. Nodes are the positive Kronrod
// abscissae; Gauss points are the odd-indexed ones plus the midpoint.
inline constexpr std::array<double, 8> kronrod_nodes = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kronrod_weights = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr std::array<double, 4> gauss_weights = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class T>
inline double max_abs(const T& v) {
  if constexpr (std::is_floating_point_v<T>) {
    return std::abs(v);
  } else {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
}

template <class T>
inline void axpy(T& acc, double w, const T& v) {
  if constexpr (std::is_floating_point_v<T>) {
    acc += w * v;
  } else {
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * v[i];
  }
}

template <class T>
inline T zero_like() {
  if constexpr (std::is_floating_point_v<T>) {
    return 0.0;
  } else {
    T z{};
    z.fill(0.0);
    return z;
  }
}

template <class T, class F>
struct gk_panel {
  T integral;
  double err;

  gk_panel(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    T kron = zero_like<T>();
    T gauss = zero_like<T>();
    const T fc = f(c);
    axpy(kron, kronrod_weights[7], fc);
    axpy(gauss, gauss_weights[3], fc);
    for (int i = 0; i < 7; ++i) {
      const double dx = h * kronrod_nodes[i];
      const T flo = f(c - dx);
      const T fhi = f(c + dx);
      T fsum = flo;
      axpy(fsum, 1.0, fhi);
      axpy(kron, kronrod_weights[i], fsum);
      if (i % 2 == 1) axpy(gauss, gauss_weights[i / 2], fsum);
    }
    if constexpr (std::is_floating_point_v<T>) {
      integral = h * kron;
      err = std::abs(h * (kron - gauss));
    } else {
      integral = kron;
      double e = 0.0;
      for (std::size_t i = 0; i < kron.size(); ++i) {
        integral[i] = h * kron[i];
        e = std::max(e, std::abs(h * (kron[i] - gauss[i])));
      }
      err = e;
    }
  }
};

}  // namespace detail

/// Adaptive Gauss-Kronrod (G7, K15) integration of f over [a, b] to absolute
/// tolerance abs_tol, splitting the worst interval first (max-heap) under one
/// global error budget. T may be double or std::array<double, N>; for arrays
/// the error is controlled in the max norm, so one pass can integrate several
/// related integrands sharing the expensive part of the evaluation.
/// Deterministic: the same inputs always produce the same panel set.
template <class T = double, class F>
T integrate_adaptive(F f, double a, double b, double abs_tol,
                     int max_panels = 40000) {
  struct segment {
    double a, b, err;
    T val;
  };
  const auto by_err = [](const segment& x, const segment& y) {
    return x.err < y.err;
  };
  auto make = [&](double lo, double hi) {
    const detail::gk_panel<T, F> p(f, lo, hi);
    return segment{lo, hi, p.err, p.integral};
  };

  std::vector<segment> heap, done;
  heap.reserve(64);
  heap.push_back(make(a, b));
  double total_err = heap.front().err;
  const double width_floor = 1e-14 * std::abs(b - a);
  int panels = 1;

  while (total_err > abs_tol && !heap.empty() && panels < max_panels) {
    std::pop_heap(heap.begin(), heap.end(), by_err);
    const segment s = heap.back();
    heap.pop_back();
    if (s.b - s.a < width_floor || s.err == 0.0) {
      done.push_back(s);  // roundoff floor: cannot be improved further
      continue;
    }
    const double mid = 0.5 * (s.a + s.b);
    const segment left = make(s.a, mid);
    const segment right = make(mid, s.b);
    total_err += left.err + right.err - s.err;
    ++panels;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), by_err);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), by_err);
  }

  // accumulate in spatial order so the result does not depend on the
  // subdivision history
  done.insert(done.end(), heap.begin(), heap.end());
  std::sort(done.begin(), done.end(),
            [](const segment& x, const segment& y) { return x.a < y.a; });
  T acc = detail::zero_like<T>();
  for (const segment& s : done) detail::axpy(acc, 1.0, s.val);
  return acc;
}

/// Complete elliptic integrals K(m) and E(m) in the parameter convention
/// m = k^2 in [0, 1), computed with the arithmetic-geometric mean, which
/// converges quadratically and is accurate to machine precision.
struct elliptic_ke {
  double k;  ///< first kind
  double e;  ///< second kind
};

inline elliptic_ke complete_elliptic(double m) {
  constexpr double pi = 3.14159265358979323846;
  if (m < 0.0 || m >= 1.0) return {std::numeric_limits<double>::quiet_NaN(),
                                   std::numeric_limits<double>::quiet_NaN()};
  double a = 1.0;
  double b = std::sqrt(1.0 - m);
  double c2_sum = 0.5 * m;  // 2^{n-1} c_n^2 accumulated, starting at c_0 = k
  double pow2 = 1.0;
  for (int iter = 0; iter < 64; ++iter) {
    const double c = 0.5 * (a - b);
    if (std::abs(c) <= 0.5 * std::numeric_limits<double>::epsilon() * a) break;
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
    c2_sum += pow2 * c * c;
    pow2 *= 2.0;
  }
  const double k = pi / (2.0 * a);
  return {k, k * (1.0 - c2_sum)};
}

}  // namespace vortexlab::num
