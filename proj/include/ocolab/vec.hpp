#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace ocolab {

// Decision-space dimension is small (1..16); fixed-capacity storage keeps
// the hot loops allocation-free.
constexpr int kMaxDim = 16;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;

inline bool all_finite(const Vec& v) {
  for (int i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) return false;
  }
  return true;
}

inline double lp_norm(const Vec& v, double p) {
  if (p == 2.0) return v.norm();
  if (std::isinf(p)) return v.lpNorm<Eigen::Infinity>();
  if (p == 1.0) return v.lpNorm<1>();
  double s = 0.0;
  for (int i = 0; i < v.size(); ++i) s += std::pow(std::abs(v[i]), p);
  return std::pow(s, 1.0 / p);
}

// Holder conjugate: 1/p + 1/q = 1.
inline double dual_exponent(double p) {
  if (p == 1.0) return std::numeric_limits<double>::infinity();
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

inline Vec make_vec(std::initializer_list<double> xs) {
  Vec v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace ocolab
