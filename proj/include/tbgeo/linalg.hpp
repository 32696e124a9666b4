#pragma once

#include <Eigen/Dense>
#include <vector>

namespace tbg {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Dense rank-3 / rank-4 tensors over a single small dimension n (n <= 8 here).
struct Ten3 {
  int n = 0;
  std::vector<double> a;
  Ten3() = default;
  explicit Ten3(int n_) : n(n_), a(static_cast<size_t>(n_) * n_ * n_, 0.0) {}
  double& operator()(int i, int j, int k) { return a[(static_cast<size_t>(i) * n + j) * n + k]; }
  double operator()(int i, int j, int k) const { return a[(static_cast<size_t>(i) * n + j) * n + k]; }
};

struct Ten4 {
  int n = 0;
  std::vector<double> a;
  Ten4() = default;
  explicit Ten4(int n_) : n(n_), a(static_cast<size_t>(n_) * n_ * n_ * n_, 0.0) {}
  double& operator()(int i, int j, int k, int l) {
    return a[((static_cast<size_t>(i) * n + j) * n + k) * n + l];
  }
  double operator()(int i, int j, int k, int l) const {
    return a[((static_cast<size_t>(i) * n + j) * n + k) * n + l];
  }
};

inline double max_abs(const Ten3& t) {
  double m = 0.0;
  for (double v : t.a) m = std::max(m, std::abs(v));
  return m;
}

inline double max_abs(const Ten4& t) {
  double m = 0.0;
  for (double v : t.a) m = std::max(m, std::abs(v));
  return m;
}

} // namespace tbg
