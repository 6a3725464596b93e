#include "ocolab/convexity.hpp"

#include <cmath>
#include <sstream>

namespace ocolab {

namespace {

constexpr double kTol = 1e-9;

// Signed inclusion margin: >= 0 iff pt in K, measured on the constraint
// natural scale.
double containment_margin(const FeasibleSet& K, const Vec& pt) {
  switch (K.kind()) {
    case FeasibleSet::Kind::EuclideanBall:
      return K.ball_radius() - (pt - K.ball_center()).norm();
    case FeasibleSet::Kind::AxisEllipsoid: {
      double s = 0.0;
      for (int i = 0; i < K.dim(); ++i) {
        const double r = pt[i] / K.semi_axes()[i];
        s += r * r;
      }
      return (1.0 - std::sqrt(s)) * K.semi_axes().minCoeff();
    }
    case FeasibleSet::Kind::LpBall:
      return K.ball_radius() - lp_norm(pt, K.native_p());
    case FeasibleSet::Kind::Box: {
      double m = std::numeric_limits<double>::infinity();
      for (int i = 0; i < K.dim(); ++i) {
        m = std::min({m, pt[i] - K.box_lo()[i], K.box_hi()[i] - pt[i]});
      }
      return m;
    }
    case FeasibleSet::Kind::Simplex: {
      double m = pt.minCoeff();
      m = std::min(m, -std::abs(pt.sum() - K.simplex_scale()));
      return m;
    }
  }
  return 0.0;
}

Vec native_unit(const FeasibleSet& K, Rng& rng) {
  Vec z = rng.normal_vec(K.dim());
  double n = K.native_norm(z);
  if (n < 1e-12) {
    z = Vec::Zero(K.dim());
    z[0] = 1.0;
    n = 1.0;
  }
  return z / n;
}

Vec biased_sample(const FeasibleSet& K, Rng& rng) {
  return rng.bernoulli(0.5) ? K.sample_boundary(rng) : K.sample_interior(rng);
}

std::string describe(const char* what, const Vec& x, const Vec& y, double theta, double margin) {
  std::ostringstream os;
  os << what << " violated: margin=" << margin << " theta=" << theta << " x=[";
  for (int i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
  os << "] y=[";
  for (int i = 0; i < y.size(); ++i) os << (i ? "," : "") << y[i];
  os << "]";
  return os.str();
}

}  // namespace

WitnessResult uniform_convexity_witness(const FeasibleSet& K, double kappa, double q,
                                        NormTag norm, int trials, std::uint64_t seed) {
  if (trials < 1) throw GeometryError("uniform_convexity_witness: trials >= 1");
  if (norm == NormTag::NativeLp && K.kind() != FeasibleSet::Kind::LpBall) {
    throw GeometryError("uniform_convexity_witness: lp norm tag requires an lp ball");
  }
  if (norm == NormTag::Euclidean && K.kind() == FeasibleSet::Kind::LpBall &&
      K.native_p() != 2.0) {
    throw GeometryError("uniform_convexity_witness: euclidean tag unsupported for p != 2 balls");
  }
  Rng rng(seed);
  WitnessResult res;
  res.trials_run = trials;
  for (int t = 0; t < trials; ++t) {
    const Vec x = biased_sample(K, rng);
    const Vec y = biased_sample(K, rng);
    const double theta = rng.uniform();
    const Vec z = native_unit(K, rng);
    const double bump = theta * (1.0 - theta) * kappa * std::pow(K.native_norm(x - y), q);
    const Vec pt = theta * x + (1.0 - theta) * y + bump * z;
    const double margin = containment_margin(K, pt);
    if (margin < res.worst_margin) res.worst_margin = margin;
    if (margin < -kTol && res.ok) {
      res.ok = false;
      res.violation = describe("chord-ball inclusion", x, y, theta, margin);
    }

    // Support-point inequality on the same trial budget.
    Vec g = rng.normal_vec(K.dim());
    if (g.norm() < 1e-12) g[0] = 1.0;
    const Vec y2 = biased_sample(K, rng);
    const Vec ystar = K.linear_minimizer(g);
    const double lhs = (-g).dot(ystar - y2);
    const double rhs =
        0.25 * kappa * std::pow(K.native_norm(y2 - ystar), q) * K.native_dual_norm(g);
    const double slack = lhs - rhs;
    if (slack < res.worst_margin) res.worst_margin = slack;
    if (slack < -kTol && res.ok) {
      res.ok = false;
      res.violation = describe("support-point inequality", y2, ystar, 0.0, slack);
    }
  }
  return res;
}

WitnessResult support_inequality_witness(const FeasibleSet& K, double kappa, double q,
                                         int trials, std::uint64_t seed) {
  Rng rng(seed);
  WitnessResult res;
  res.trials_run = trials;
  for (int t = 0; t < trials; ++t) {
    Vec g = rng.normal_vec(K.dim());
    if (g.norm() < 1e-12) g[0] = 1.0;
    const Vec y = biased_sample(K, rng);
    const Vec ystar = K.linear_minimizer(g);
    const double lhs = (-g).dot(ystar - y);
    const double rhs = 0.25 * kappa * std::pow(K.native_norm(y - ystar), q) * K.native_dual_norm(g);
    const double slack = lhs - rhs;
    if (slack < res.worst_margin) res.worst_margin = slack;
    if (slack < -kTol && res.ok) {
      res.ok = false;
      res.violation = describe("support-point inequality", y, ystar, 0.0, slack);
    }
  }
  return res;
}

double inclusion_kappa(const FeasibleSet& K) {
  switch (K.kind()) {
    case FeasibleSet::Kind::EuclideanBall:
      return 0.5 / K.ball_radius();
    case FeasibleSet::Kind::LpBall: {
      const double p = K.native_p();
      if (p < 2.0) throw GeometryError("inclusion_kappa: lp ball needs p >= 2");
      return std::pow(2.0, 2.0 - p) / p * std::pow(K.ball_radius(), 1.0 - p);
    }
    case FeasibleSet::Kind::AxisEllipsoid: {
      // Conservative: map to the worst-curvature enclosing ball.
      const double amax = K.semi_axes().maxCoeff();
      const double amin = K.semi_axes().minCoeff();
      return 0.5 * amin / (amax * amax);
    }
    default:
      throw GeometryError("inclusion_kappa: set is not uniformly convex");
  }
}

}  // namespace ocolab
