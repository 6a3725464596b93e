#include "ocolab/feasible_set.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ocolab {

namespace {

// Projections and support points are pulled a hair inside the constraint so
// that contains() holds under exact floating-point comparison.
constexpr double kInwardNudge = 1.0 - 1e-12;

double pow_abs(double x, double e) { return std::pow(std::abs(x), e); }

}  // namespace

FeasibleSet FeasibleSet::euclidean_ball(Vec center, double radius) {
  if (radius <= 0.0 || !all_finite(center) || center.size() < 1) {
    throw GeometryError("euclidean_ball: radius must be positive and center finite");
  }
  FeasibleSet K;
  K.kind_ = Kind::EuclideanBall;
  K.dim_ = static_cast<int>(center.size());
  K.center_ = std::move(center);
  K.radius_ = radius;
  return K;
}

FeasibleSet FeasibleSet::axis_ellipsoid(Vec semi_axes) {
  if (semi_axes.size() < 1 || semi_axes.minCoeff() <= 0.0 || !all_finite(semi_axes)) {
    throw GeometryError("axis_ellipsoid: semi-axes must be positive");
  }
  FeasibleSet K;
  K.kind_ = Kind::AxisEllipsoid;
  K.dim_ = static_cast<int>(semi_axes.size());
  K.semi_axes_ = std::move(semi_axes);
  return K;
}

FeasibleSet FeasibleSet::lp_ball(double p, double radius, int dim) {
  if (p < 1.0 || !std::isfinite(p)) throw GeometryError("lp_ball: p must be >= 1");
  if (radius <= 0.0 || dim < 1) throw GeometryError("lp_ball: bad radius or dim");
  FeasibleSet K;
  K.kind_ = Kind::LpBall;
  K.dim_ = dim;
  K.p_ = p;
  K.radius_ = radius;
  return K;
}

FeasibleSet FeasibleSet::box(Vec lo, Vec hi) {
  if (lo.size() != hi.size() || lo.size() < 1) throw GeometryError("box: dim mismatch");
  for (int i = 0; i < lo.size(); ++i) {
    if (!(lo[i] < hi[i])) throw GeometryError("box: need lo < hi coordinatewise");
  }
  FeasibleSet K;
  K.kind_ = Kind::Box;
  K.dim_ = static_cast<int>(lo.size());
  K.lo_ = std::move(lo);
  K.hi_ = std::move(hi);
  return K;
}

FeasibleSet FeasibleSet::simplex(double scale, int dim) {
  if (scale <= 0.0) throw GeometryError("simplex: scale must be positive");
  if (dim < 2) throw GeometryError("simplex: dim must be >= 2");
  FeasibleSet K;
  K.kind_ = Kind::Simplex;
  K.dim_ = dim;
  K.scale_ = scale;
  return K;
}

FeasibleSet FeasibleSet::w_lambda(double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw GeometryError("w_lambda: lambda in (0,1)");
  Vec a(2);
  a << 1.0, lambda;
  return axis_ellipsoid(std::move(a));
}

const char* FeasibleSet::kind_name() const {
  switch (kind_) {
    case Kind::EuclideanBall: return "euclidean_ball";
    case Kind::AxisEllipsoid: return "axis_ellipsoid";
    case Kind::LpBall: return "lp_ball";
    case Kind::Box: return "box";
    case Kind::Simplex: return "simplex";
  }
  return "?";
}

void FeasibleSet::check_dim(const Vec& x) const {
  if (static_cast<int>(x.size()) != dim_) {
    throw DimensionMismatch("point dimension does not match feasible set");
  }
}

bool FeasibleSet::contains(const Vec& x) const {
  check_dim(x);
  switch (kind_) {
    case Kind::EuclideanBall:
      return (x - center_).norm() <= radius_;
    case Kind::AxisEllipsoid: {
      double s = 0.0;
      for (int i = 0; i < dim_; ++i) {
        const double r = x[i] / semi_axes_[i];
        s += r * r;
      }
      return s <= 1.0;
    }
    case Kind::LpBall:
      return lp_norm(x, p_) <= radius_;
    case Kind::Box:
      for (int i = 0; i < dim_; ++i) {
        if (x[i] < lo_[i] || x[i] > hi_[i]) return false;
      }
      return true;
    case Kind::Simplex: {
      // The mass-balance equality gets a few ulps of slack; the sign
      // constraints are exact.
      for (int i = 0; i < dim_; ++i) {
        if (x[i] < 0.0) return false;
      }
      return std::abs(x.sum() - scale_) <= 64.0 * std::numeric_limits<double>::epsilon() * scale_;
    }
  }
  return false;
}

Vec FeasibleSet::project(const Vec& z) const {
  check_dim(z);
  if (!all_finite(z)) throw GeometryError("project: non-finite input");
  if (contains(z)) return z;
  switch (kind_) {
    case Kind::EuclideanBall: {
      Vec d = z - center_;
      return center_ + d * (radius_ * kInwardNudge / d.norm());
    }
    case Kind::AxisEllipsoid: {
      // Lagrange scalar equation sum a_i^2 z_i^2 / (a_i^2 + mu)^2 = 1,
      // monotone decreasing in mu; bisection on [0, upper].
      const Vec& a = semi_axes_;
      auto constraint = [&](double mu) {
        double s = 0.0;
        for (int i = 0; i < dim_; ++i) {
          const double ai2 = a[i] * a[i];
          const double t = a[i] * z[i] / (ai2 + mu);
          s += t * t;
        }
        return s - 1.0;
      };
      double lo = 0.0;
      double hi = 0.0;
      for (int i = 0; i < dim_; ++i) hi = std::max(hi, std::abs(a[i] * z[i]));
      // At mu = ||a o z||_2 the sum is <= 1, so [0, hi] brackets the root.
      hi = std::max(hi, 1e-12);
      int iters = 0;
      while (hi - lo > 1e-12 * std::max(1.0, hi) && iters < 200) {
        const double mid = 0.5 * (lo + hi);
        if (constraint(mid) > 0.0) {
          lo = mid;
        } else {
          hi = mid;
        }
        ++iters;
      }
      const double mu = 0.5 * (lo + hi);
      Vec y(dim_);
      for (int i = 0; i < dim_; ++i) {
        const double ai2 = a[i] * a[i];
        y[i] = ai2 * z[i] / (ai2 + mu);
      }
      double s = 0.0;
      for (int i = 0; i < dim_; ++i) {
        const double r = y[i] / a[i];
        s += r * r;
      }
      if (s > 1.0) y *= kInwardNudge / std::sqrt(s);
      return y;
    }
    case Kind::LpBall: {
      if (p_ == 2.0) return z * (radius_ * kInwardNudge / z.norm());
      if (p_ == 1.0) {
        // Duchi et al. style sort-based projection onto the l1 ball.
        Vec u(dim_);
        for (int i = 0; i < dim_; ++i) u[i] = std::abs(z[i]);
        std::vector<double> s(u.data(), u.data() + dim_);
        std::sort(s.begin(), s.end(), std::greater<double>());
        double cum = 0.0, theta = 0.0;
        for (int j = 0; j < dim_; ++j) {
          cum += s[j];
          const double cand = (cum - radius_) / (j + 1);
          if (cand < s[j]) theta = cand;
        }
        Vec y(dim_);
        for (int i = 0; i < dim_; ++i) {
          const double m = std::max(0.0, u[i] - theta);
          y[i] = std::copysign(m, z[i]);
        }
        return y;
      }
      // p > 1: KKT system y_i + nu * p * y_i^{p-1} = |z_i| (y_i >= 0),
      // outer bisection on nu, inner damped fixed-point (guarded Newton)
      // per coordinate.
      Vec u(dim_);
      for (int i = 0; i < dim_; ++i) u[i] = std::abs(z[i]);
      auto solve_y = [&](double nu, Vec& y) {
        for (int i = 0; i < dim_; ++i) {
          if (u[i] == 0.0) {
            y[i] = 0.0;
            continue;
          }
          double yi = std::min(u[i], radius_);
          for (int it = 0; it < 80; ++it) {
            const double g = yi + nu * p_ * pow_abs(yi, p_ - 1.0) - u[i];
            const double gp = 1.0 + nu * p_ * (p_ - 1.0) * pow_abs(std::max(yi, 1e-300), p_ - 2.0);
            double step = g / gp;
            double next = yi - step;
            if (next < 0.0) next = 0.5 * yi;
            if (next > u[i]) next = 0.5 * (yi + u[i]);
            if (std::abs(next - yi) <= 1e-16 * std::max(1.0, yi)) {
              yi = next;
              break;
            }
            yi = next;
          }
          y[i] = yi;
        }
      };
      Vec y(dim_);
      double lo = 0.0, hi = 1.0;
      for (int expand = 0; expand < 200; ++expand) {
        solve_y(hi, y);
        if (lp_norm(y, p_) <= radius_) break;
        hi *= 2.0;
        if (expand == 199) throw GeometryError("lp projection: multiplier bracket failed");
      }
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        solve_y(mid, y);
        if (lp_norm(y, p_) > radius_) {
          lo = mid;
        } else {
          hi = mid;
        }
        if (hi - lo <= 1e-14 * std::max(1.0, hi)) break;
      }
      solve_y(hi, y);
      const double n = lp_norm(y, p_);
      if (n > 0.0) y *= radius_ * kInwardNudge / std::max(n, radius_);
      // KKT residual certificate: constraint activity within 1e-8.
      if (std::abs(lp_norm(y, p_) - radius_) > 1e-8 * std::max(1.0, radius_)) {
        throw GeometryError("lp projection: KKT residual above tolerance");
      }
      Vec out(dim_);
      for (int i = 0; i < dim_; ++i) out[i] = std::copysign(y[i], z[i]);
      return out;
    }
    case Kind::Box: {
      Vec y(dim_);
      for (int i = 0; i < dim_; ++i) y[i] = std::clamp(z[i], lo_[i], hi_[i]);
      return y;
    }
    case Kind::Simplex: {
      // Held-Wolfe-Crowder sort-based projection onto {x >= 0, sum = scale}.
      std::vector<double> s(z.data(), z.data() + dim_);
      std::sort(s.begin(), s.end(), std::greater<double>());
      double cum = 0.0;
      double theta = 0.0;
      for (int j = 0; j < dim_; ++j) {
        cum += s[j];
        const double cand = (cum - scale_) / (j + 1);
        if (s[j] - cand > 0.0) theta = cand;
      }
      Vec y(dim_);
      for (int i = 0; i < dim_; ++i) y[i] = std::max(0.0, z[i] - theta);
      return y;
    }
  }
  throw GeometryError("project: unreachable");
}

Vec FeasibleSet::linear_minimizer(const Vec& theta) const {
  check_dim(theta);
  if (!all_finite(theta)) throw GeometryError("linear_minimizer: non-finite direction");
  const double nt = theta.norm();
  if (nt == 0.0) return canonical_center();
  switch (kind_) {
    case Kind::EuclideanBall:
      return center_ - theta * (radius_ * kInwardNudge / nt);
    case Kind::AxisEllipsoid: {
      double s = 0.0;
      for (int i = 0; i < dim_; ++i) {
        const double t = semi_axes_[i] * theta[i];
        s += t * t;
      }
      s = std::sqrt(s);
      Vec x(dim_);
      for (int i = 0; i < dim_; ++i) {
        x[i] = -semi_axes_[i] * semi_axes_[i] * theta[i] * kInwardNudge / s;
      }
      return x;
    }
    case Kind::LpBall: {
      if (p_ == 1.0) {
        int best = 0;
        for (int i = 1; i < dim_; ++i) {
          if (std::abs(theta[i]) > std::abs(theta[best])) best = i;
        }
        Vec x = Vec::Zero(dim_);
        x[best] = -std::copysign(radius_, theta[best]);
        return x;
      }
      const double ps = dual_exponent(p_);
      // Holder equality case: |x_i| proportional to |theta_i|^{ps-1}.
      Vec w(dim_);
      for (int i = 0; i < dim_; ++i) w[i] = pow_abs(theta[i], ps - 1.0);
      const double n = lp_norm(w, p_);
      Vec x(dim_);
      for (int i = 0; i < dim_; ++i) {
        x[i] = -std::copysign(radius_ * kInwardNudge * w[i] / n, theta[i]);
      }
      return x;
    }
    case Kind::Box: {
      Vec x(dim_);
      for (int i = 0; i < dim_; ++i) {
        if (theta[i] > 0.0) {
          x[i] = lo_[i];
        } else if (theta[i] < 0.0) {
          x[i] = hi_[i];
        } else {
          x[i] = 0.5 * (lo_[i] + hi_[i]);
        }
      }
      return x;
    }
    case Kind::Simplex: {
      int best = 0;
      for (int i = 1; i < dim_; ++i) {
        if (theta[i] < theta[best]) best = i;
      }
      Vec x = Vec::Zero(dim_);
      x[best] = scale_;
      return x;
    }
  }
  throw GeometryError("linear_minimizer: unreachable");
}

double FeasibleSet::diameter() const {
  switch (kind_) {
    case Kind::EuclideanBall:
      return 2.0 * radius_;
    case Kind::AxisEllipsoid:
      return 2.0 * semi_axes_.maxCoeff();
    case Kind::LpBall:
      // Euclidean diameter; for p > 2 the all-ones corner direction wins.
      return 2.0 * radius_ * std::max(1.0, std::pow(static_cast<double>(dim_), 0.5 - 1.0 / p_));
    case Kind::Box:
      return (hi_ - lo_).norm();
    case Kind::Simplex:
      return scale_ * std::sqrt(2.0);
  }
  return 0.0;
}

Vec FeasibleSet::canonical_center() const {
  switch (kind_) {
    case Kind::EuclideanBall:
      return center_;
    case Kind::AxisEllipsoid:
    case Kind::LpBall:
      return Vec::Zero(dim_);
    case Kind::Box:
      return 0.5 * (lo_ + hi_);
    case Kind::Simplex:
      return Vec::Constant(dim_, scale_ / dim_);
  }
  return Vec::Zero(dim_);
}

double FeasibleSet::support(const Vec& theta) const {
  check_dim(theta);
  switch (kind_) {
    case Kind::EuclideanBall:
      return theta.dot(center_) + radius_ * theta.norm();
    case Kind::AxisEllipsoid: {
      double s = 0.0;
      for (int i = 0; i < dim_; ++i) {
        const double t = semi_axes_[i] * theta[i];
        s += t * t;
      }
      return std::sqrt(s);
    }
    case Kind::LpBall:
      return radius_ * lp_norm(theta, dual_exponent(p_));
    case Kind::Box: {
      double s = 0.0;
      for (int i = 0; i < dim_; ++i) s += std::max(theta[i] * lo_[i], theta[i] * hi_[i]);
      return s;
    }
    case Kind::Simplex:
      return scale_ * theta.maxCoeff();
  }
  return 0.0;
}

double FeasibleSet::max_norm2() const {
  switch (kind_) {
    case Kind::EuclideanBall:
      return center_.norm() + radius_;
    case Kind::AxisEllipsoid:
      return semi_axes_.maxCoeff();
    case Kind::LpBall:
      return radius_ * std::max(1.0, std::pow(static_cast<double>(dim_), 0.5 - 1.0 / p_));
    case Kind::Box: {
      double s = 0.0;
      for (int i = 0; i < dim_; ++i) s += std::max(lo_[i] * lo_[i], hi_[i] * hi_[i]);
      return std::sqrt(s);
    }
    case Kind::Simplex:
      return scale_;
  }
  return 0.0;
}

double FeasibleSet::native_p() const { return kind_ == Kind::LpBall ? p_ : 2.0; }

double FeasibleSet::native_norm(const Vec& v) const { return lp_norm(v, native_p()); }

double FeasibleSet::native_dual_norm(const Vec& v) const {
  return lp_norm(v, dual_exponent(native_p()));
}

double FeasibleSet::xi() const {
  if (kind_ == Kind::LpBall && p_ > 2.0) {
    return std::pow(static_cast<double>(dim_), 0.5 - 1.0 / p_);
  }
  return 1.0;
}

std::optional<UniformConvexity> FeasibleSet::uniform_convexity() const {
  switch (kind_) {
    case Kind::EuclideanBall:
      return UniformConvexity{1.0 / radius_, 2.0, NormTag::Euclidean};
    case Kind::AxisEllipsoid: {
      // Principal-curvature strong convexity: min a_i / max a_i^2.
      const double amax = semi_axes_.maxCoeff();
      const double amin = semi_axes_.minCoeff();
      return UniformConvexity{amin / (amax * amax), 2.0, NormTag::Euclidean};
    }
    case Kind::LpBall:
      if (p_ >= 2.0) return UniformConvexity{1.0 / p_, p_, NormTag::NativeLp};
      return std::nullopt;
    case Kind::Box:
    case Kind::Simplex:
      return std::nullopt;
  }
  return std::nullopt;
}

Vec FeasibleSet::boundary_point(const Vec& dir) const {
  check_dim(dir);
  const double n2 = dir.norm();
  if (n2 == 0.0) throw GeometryError("boundary_point: zero direction");
  switch (kind_) {
    case Kind::EuclideanBall:
      return center_ + dir * (radius_ / n2);
    case Kind::AxisEllipsoid: {
      Vec x(dim_);
      for (int i = 0; i < dim_; ++i) x[i] = semi_axes_[i] * dir[i] / n2;
      return x;
    }
    case Kind::LpBall:
      return dir * (radius_ / lp_norm(dir, p_));
    case Kind::Box: {
      const Vec c = canonical_center();
      double t = 0.0;
      for (int i = 0; i < dim_; ++i) {
        const double h = 0.5 * (hi_[i] - lo_[i]);
        t = std::max(t, std::abs(dir[i]) / h);
      }
      return c + dir / t;
    }
    case Kind::Simplex: {
      // Relative boundary: zero out the coordinate the direction pushes
      // down the most, renormalize mass over the rest.
      Vec x = canonical_center();
      int worst = 0;
      for (int i = 1; i < dim_; ++i) {
        if (dir[i] < dir[worst]) worst = i;
      }
      x[worst] = 0.0;
      const double s = x.sum();
      if (s > 0.0) x *= scale_ / s;
      // Mix in the direction within the simplex plane, then re-project.
      Vec y = x + dir - Vec::Constant(dim_, dir.sum() / dim_);
      return project(y);
    }
  }
  throw GeometryError("boundary_point: unreachable");
}

double FeasibleSet::boundary_residual(const Vec& u) const {
  check_dim(u);
  switch (kind_) {
    case Kind::EuclideanBall:
      return std::abs((u - center_).norm() - radius_);
    case Kind::AxisEllipsoid: {
      double s = 0.0;
      for (int i = 0; i < dim_; ++i) {
        const double r = u[i] / semi_axes_[i];
        s += r * r;
      }
      return std::abs(std::sqrt(s) - 1.0) * semi_axes_.minCoeff();
    }
    case Kind::LpBall:
      return std::abs(lp_norm(u, p_) - radius_);
    case Kind::Box: {
      double outside = 0.0;
      double inside = std::numeric_limits<double>::infinity();
      for (int i = 0; i < dim_; ++i) {
        outside = std::max({outside, lo_[i] - u[i], u[i] - hi_[i]});
        inside = std::min({inside, u[i] - lo_[i], hi_[i] - u[i]});
      }
      return outside > 0.0 ? outside : inside;
    }
    case Kind::Simplex: {
      // On the relative boundary iff the mass balance holds and some
      // coordinate is zero.
      const double mass = std::abs(u.sum() - scale_);
      return std::max(mass, std::abs(u.minCoeff()));
    }
  }
  return 0.0;
}

Vec FeasibleSet::sample_interior(Rng& rng) const {
  switch (kind_) {
    case Kind::EuclideanBall: {
      Vec s = rng.normal_vec(dim_);
      const double n = s.norm();
      const double r = radius_ * std::pow(rng.uniform(), 1.0 / dim_);
      return center_ + s * (r / std::max(n, 1e-300));
    }
    case Kind::AxisEllipsoid: {
      Vec s = rng.normal_vec(dim_);
      const double n = s.norm();
      const double r = std::pow(rng.uniform(), 1.0 / dim_);
      Vec x(dim_);
      for (int i = 0; i < dim_; ++i) x[i] = semi_axes_[i] * s[i] * r / std::max(n, 1e-300);
      return x;
    }
    case Kind::LpBall: {
      // Rejection from the bounding box; fine for the small dims in use.
      for (int it = 0; it < 10000; ++it) {
        Vec x(dim_);
        for (int i = 0; i < dim_; ++i) x[i] = rng.uniform(-radius_, radius_);
        if (lp_norm(x, p_) <= radius_) return x;
      }
      return sample_boundary(rng);
    }
    case Kind::Box: {
      Vec x(dim_);
      for (int i = 0; i < dim_; ++i) x[i] = rng.uniform(lo_[i], hi_[i]);
      return x;
    }
    case Kind::Simplex: {
      Vec e(dim_);
      for (int i = 0; i < dim_; ++i) e[i] = -std::log(std::max(rng.uniform(), 1e-300));
      return e * (scale_ / e.sum());
    }
  }
  return canonical_center();
}

Vec FeasibleSet::sample_boundary(Rng& rng) const {
  if (kind_ == Kind::Simplex) {
    // Relative boundary: a random facet (one coordinate zero).
    Vec x = sample_interior(rng);
    const int drop = static_cast<int>(rng.uniform() * dim_) % dim_;
    x[drop] = 0.0;
    const double s = x.sum();
    if (s > 0.0) x *= scale_ / s;
    return x;
  }
  Vec dir = rng.normal_vec(dim_);
  if (dir.norm() == 0.0) dir[0] = 1.0;
  return boundary_point(dir);
}

std::vector<Vec> FeasibleSet::vertices() const {
  std::vector<Vec> out;
  if (kind_ == Kind::Box) {
    if (dim_ > 16) return out;
    const std::size_t n = std::size_t{1} << dim_;
    out.reserve(n);
    for (std::size_t mask = 0; mask < n; ++mask) {
      Vec v(dim_);
      for (int i = 0; i < dim_; ++i) v[i] = (mask >> i) & 1 ? hi_[i] : lo_[i];
      out.push_back(std::move(v));
    }
  } else if (kind_ == Kind::Simplex) {
    out.reserve(dim_);
    for (int i = 0; i < dim_; ++i) {
      Vec v = Vec::Zero(dim_);
      v[i] = scale_;
      out.push_back(std::move(v));
    }
  }
  return out;
}

MahalanobisResult mahalanobis_project(const FeasibleSet& K, const Vec& z, const Mat& M,
                                      const Vec* warm_start, double gap_tol, int max_iters) {
  if (M.rows() != K.dim() || M.cols() != K.dim()) {
    throw DimensionMismatch("mahalanobis_project: matrix dimension mismatch");
  }
  MahalanobisResult res;
  if (K.contains(z)) {
    res.point = z;
    res.converged = true;
    return res;
  }
  // Identity (or scaled identity) reduces to the Euclidean projection.
  bool scaled_identity = true;
  const double m00 = M(0, 0);
  for (int i = 0; i < K.dim() && scaled_identity; ++i) {
    for (int j = 0; j < K.dim(); ++j) {
      const double want = i == j ? m00 : 0.0;
      if (std::abs(M(i, j) - want) > 1e-15 * std::max(1.0, std::abs(m00))) {
        scaled_identity = false;
        break;
      }
    }
  }
  if (scaled_identity && m00 > 0.0) {
    res.point = K.project(z);
    res.converged = true;
    return res;
  }

  Vec x = warm_start != nullptr ? *warm_start : K.canonical_center();
  Vec grad(K.dim()), s(K.dim()), d(K.dim());
  for (int it = 0; it < max_iters; ++it) {
    grad.noalias() = 2.0 * (M * (x - z));
    s = K.linear_minimizer(grad);
    d = x - s;
    const double gap = grad.dot(d);
    res.gap = gap;
    res.iterations = it;
    if (gap <= gap_tol) {
      res.converged = true;
      break;
    }
    const double den = 2.0 * d.dot(M * d);
    const double step = den > 0.0 ? std::min(1.0, gap / den) : 1.0;
    x -= step * d;
  }
  res.point = std::move(x);
  return res;
}

}  // namespace ocolab
