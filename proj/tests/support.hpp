#pragma once

#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "tbgeo/linalg.hpp"

namespace tbgtest {

using tbg::Mat;
using tbg::Vec;

using ScalarFn = std::function<double(const Vec&)>;

inline double fd_partial(const ScalarFn& f, Vec x, int i, double h = 1e-5) {
  x[i] += h;
  double fp = f(x);
  x[i] -= 2.0 * h;
  double fm = f(x);
  return (fp - fm) / (2.0 * h);
}

inline Vec fd_grad(const ScalarFn& f, const Vec& x, double h = 1e-5) {
  Vec g(x.size());
  for (int i = 0; i < x.size(); ++i) g[i] = fd_partial(f, x, i, h);
  return g;
}

inline Mat fd_hess(const ScalarFn& f, const Vec& x, double h = 1e-4) {
  const int m = static_cast<int>(x.size());
  Mat H(m, m);
  double f0 = f(x);
  for (int i = 0; i < m; ++i) {
    Vec xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    H(i, i) = (f(xp) - 2.0 * f0 + f(xm)) / (h * h);
    for (int j = i + 1; j < m; ++j) {
      Vec a = x, b = x, c = x, d = x;
      a[i] += h; a[j] += h;
      b[i] += h; b[j] -= h;
      c[i] -= h; c[j] += h;
      d[i] -= h; d[j] -= h;
      H(i, j) = H(j, i) = (f(a) - f(b) - f(c) + f(d)) / (4.0 * h * h);
    }
  }
  return H;
}

inline double rel_err(double got, double ref) {
  return std::abs(got - ref) / std::max(1.0, std::abs(ref));
}

inline double rel_err(const Vec& got, const Vec& ref) {
  return (got - ref).cwiseAbs().maxCoeff() / std::max(1.0, ref.cwiseAbs().maxCoeff());
}

inline double rel_err(const Mat& got, const Mat& ref) {
  return (got - ref).cwiseAbs().maxCoeff() / std::max(1.0, ref.cwiseAbs().maxCoeff());
}

// Uniform sample from a coordinate box, shrunk slightly toward its center so
// finite-difference probes stay inside the domain.
inline Vec sample_box(std::mt19937_64& rng, const std::vector<std::pair<double, double>>& dom,
                      double shrink = 0.9) {
  Vec x(static_cast<int>(dom.size()));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (size_t i = 0; i < dom.size(); ++i) {
    double c = 0.5 * (dom[i].first + dom[i].second);
    double r = 0.5 * (dom[i].second - dom[i].first) * shrink;
    x[static_cast<int>(i)] = c + r * u(rng);
  }
  return x;
}

// Fiber sample with components in [-1,1], resampled until |v| is not tiny.
inline Vec sample_fiber(std::mt19937_64& rng, int m) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vec v(m);
  do {
    for (int i = 0; i < m; ++i) v[i] = u(rng);
  } while (v.norm() < 0.3);
  return v;
}

} // namespace tbgtest
