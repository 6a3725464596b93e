#include "ocolab/loss.hpp"

#include <cmath>

namespace ocolab {

LossFn LossFn::linear(Vec g) {
  if (!all_finite(g)) throw GeometryError("linear loss: non-finite gradient");
  LossFn f;
  f.kind = Kind::Linear;
  f.dim = static_cast<int>(g.size());
  f.g = std::move(g);
  return f;
}

LossFn LossFn::quadratic(Vec theta, double alpha) {
  if (alpha <= 0.0 || !all_finite(theta)) throw GeometryError("quadratic loss: alpha > 0 required");
  LossFn f;
  f.kind = Kind::Quadratic;
  f.dim = static_cast<int>(theta.size());
  f.theta = std::move(theta);
  f.alpha = alpha;
  return f;
}

LossFn LossFn::squared_linear(Vec a, double b) {
  if (!all_finite(a)) throw GeometryError("squared-linear loss: non-finite a");
  LossFn f;
  f.kind = Kind::SquaredLinear;
  f.dim = static_cast<int>(a.size());
  f.a = std::move(a);
  f.b = b;
  return f;
}

double LossFn::value(const Vec& x) const {
  if (static_cast<int>(x.size()) != dim) throw DimensionMismatch("loss value: dim mismatch");
  switch (kind) {
    case Kind::Linear:
      return g.dot(x);
    case Kind::Quadratic:
      return 0.5 * alpha * (x - theta).squaredNorm();
    case Kind::SquaredLinear: {
      const double r = a.dot(x) - b;
      return r * r;
    }
  }
  return 0.0;
}

Vec LossFn::gradient(const Vec& x) const {
  if (static_cast<int>(x.size()) != dim) throw DimensionMismatch("loss gradient: dim mismatch");
  switch (kind) {
    case Kind::Linear:
      return g;
    case Kind::Quadratic:
      return alpha * (x - theta);
    case Kind::SquaredLinear:
      return 2.0 * (a.dot(x) - b) * a;
  }
  return Vec::Zero(dim);
}

double LossFn::lipschitz_bound(const FeasibleSet& K) const {
  if (K.dim() != dim) throw DimensionMismatch("lipschitz_bound: dim mismatch");
  switch (kind) {
    case Kind::Linear:
      return g.norm();
    case Kind::Quadratic:
      return alpha * (theta.norm() + K.max_norm2());
    case Kind::SquaredLinear: {
      const double reach = std::max(K.support(a), K.support(-a));
      return 2.0 * (reach + std::abs(b)) * a.norm();
    }
  }
  return 0.0;
}

}  // namespace ocolab
