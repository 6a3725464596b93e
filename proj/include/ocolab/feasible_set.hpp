#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ocolab/rng.hpp"
#include "ocolab/vec.hpp"

namespace ocolab {

enum class NormTag { Euclidean, NativeLp };

struct UniformConvexity {
  double kappa = 0.0;  // modulus constant in the chord-ball inclusion
  double q = 2.0;      // power, q >= 2
  NormTag norm = NormTag::Euclidean;
};

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A convex body with projection, linear-minimization, membership and
// diameter oracles. Supported kinds carry closed forms for everything the
// learners and the samplers need.
class FeasibleSet {
 public:
  enum class Kind { EuclideanBall, AxisEllipsoid, LpBall, Box, Simplex };

  static FeasibleSet euclidean_ball(Vec center, double radius);
  // Centered at the origin; semi_axes[i] > 0.
  static FeasibleSet axis_ellipsoid(Vec semi_axes);
  static FeasibleSet lp_ball(double p, double radius, int dim);
  static FeasibleSet box(Vec lo, Vec hi);
  // {x >= 0, sum(x) = scale}, dim >= 2.
  static FeasibleSet simplex(double scale, int dim);

  // The paper's W_lambda: ellipse with semi-axes (1, lambda).
  static FeasibleSet w_lambda(double lambda);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  const char* kind_name() const;

  bool contains(const Vec& x) const;
  Vec project(const Vec& z) const;
  // argmin_{x in K} <theta, x>. theta == 0 returns the canonical center.
  Vec linear_minimizer(const Vec& theta) const;
  double diameter() const;
  Vec canonical_center() const;

  // max_{x in K} <theta, x>, exact closed form (no boundary nudge).
  double support(const Vec& theta) const;
  // max_{x in K} ||x||_2, exact closed form.
  double max_norm2() const;

  // Norm the set is naturally paired with (lp for LpBall, l2 otherwise).
  double native_norm(const Vec& v) const;
  double native_dual_norm(const Vec& v) const;
  double native_p() const;
  // xi >= 1 with ||x||_2 <= xi * ||x||_native for all x.
  double xi() const;
  std::optional<UniformConvexity> uniform_convexity() const;

  // Maps a nonzero direction to a boundary point (full boundary coverage
  // for balls/ellipsoids/lp-balls/boxes as the direction sweeps the sphere).
  Vec boundary_point(const Vec& dir) const;
  // 0 when u sits on the boundary; grows with the distance from it.
  double boundary_residual(const Vec& u) const;

  Vec sample_interior(Rng& rng) const;
  Vec sample_boundary(Rng& rng) const;
  // Exact extreme points for polytope kinds (empty for curved sets).
  std::vector<Vec> vertices() const;

  double ball_radius() const { return radius_; }
  const Vec& ball_center() const { return center_; }
  const Vec& semi_axes() const { return semi_axes_; }
  const Vec& box_lo() const { return lo_; }
  const Vec& box_hi() const { return hi_; }
  double simplex_scale() const { return scale_; }

 private:
  FeasibleSet() = default;
  void check_dim(const Vec& x) const;

  Kind kind_ = Kind::EuclideanBall;
  int dim_ = 0;
  Vec center_;
  double radius_ = 0.0;
  Vec semi_axes_;
  double p_ = 2.0;
  Vec lo_, hi_;
  double scale_ = 0.0;
};

struct MahalanobisResult {
  Vec point;
  double gap = 0.0;   // Frank-Wolfe duality gap at exit
  int iterations = 0;
  bool converged = false;
};

// argmin_{x in K} (x-z)' M (x-z) via Frank-Wolfe over the set's linear
// minimization oracle. M must be symmetric positive definite. An optional
// warm start (must lie in K) speeds up repeated calls.
MahalanobisResult mahalanobis_project(const FeasibleSet& K, const Vec& z, const Mat& M,
                                      const Vec* warm_start = nullptr,
                                      double gap_tol = 1e-8, int max_iters = 200);

}  // namespace ocolab
