#include "ocolab/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace ocolab {

namespace {

constexpr double kDivergenceFactor = 1e6;
constexpr int kAngles2d = 4096;
constexpr int kRandomDirs = 65536;
constexpr int kRefineStarts = 64;

// Objective over boundary points; +inf encodes a divergent ratio.
struct RatioObjective {
  const FeasibleSet* K;
  Vec u;
  Vec ghat;
  bool maximize;  // true: enclosing-radius sup; false: gamma-star inf

  // r(x) = ||x-u||^2 / (2 <ghat, x-u>) for the sup form,
  // r2(x) = <ghat, x-u> / ||x-u||^2 for the inf form.
  double eval_point(const Vec& x) const {
    const Vec d = x - u;
    const double nd2 = d.squaredNorm();
    if (nd2 < 1e-24) return maximize ? 0.0 : std::numeric_limits<double>::infinity();
    const double den = ghat.dot(d);
    if (maximize) {
      if (den <= 0.0) {
        return nd2 > 1e-18 ? std::numeric_limits<double>::infinity() : 0.0;
      }
      return nd2 / (2.0 * den);
    }
    return den / nd2;
  }

  double eval_dir(const Vec& dir) const { return eval_point(K->boundary_point(dir)); }
};

Vec angle_dir(double phi) {
  Vec d(2);
  d << std::cos(phi), std::sin(phi);
  return d;
}

// Golden-section polish of a 1-D objective on [a, b].
double golden_refine(const std::function<double(double)>& f, double a, double b, bool maximize,
                     double* arg_best) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && (b - a) > 1e-14; ++it) {
    const bool pick_c = maximize ? (fc > fd) : (fc < fd);
    if (pick_c) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  const double mid = 0.5 * (a + b);
  if (arg_best != nullptr) *arg_best = mid;
  return f(mid);
}

// Minimal Nelder-Mead over direction space (d > 2 refinement).
double nelder_mead_dir(const RatioObjective& obj, const Vec& start, bool maximize) {
  const int n = static_cast<int>(start.size());
  auto value = [&](const Vec& v) {
    Vec d = v;
    const double nn = d.norm();
    if (nn < 1e-12) return maximize ? 0.0 : std::numeric_limits<double>::infinity();
    const double r = obj.eval_dir(d);
    return maximize ? -r : r;  // NM minimizes
  };
  std::vector<Vec> simplex;
  std::vector<double> fvals;
  simplex.push_back(start);
  fvals.push_back(value(start));
  for (int i = 0; i < n; ++i) {
    Vec v = start;
    v[i] += 0.05 * std::max(1.0, start.norm());
    simplex.push_back(v);
    fvals.push_back(value(v));
  }
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<int> order(simplex.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return fvals[a] < fvals[b]; });
    std::vector<Vec> s2;
    std::vector<double> f2;
    for (int idx : order) {
      s2.push_back(simplex[idx]);
      f2.push_back(fvals[idx]);
    }
    simplex = s2;
    fvals = f2;
    if (std::abs(fvals.back() - fvals.front()) < 1e-15 * std::max(1.0, std::abs(fvals.front()))) break;
    Vec centroid = Vec::Zero(n);
    for (std::size_t i = 0; i + 1 < simplex.size(); ++i) centroid += simplex[i];
    centroid /= static_cast<double>(simplex.size() - 1);
    const Vec& worst = simplex.back();
    Vec refl = centroid + (centroid - worst);
    double fr = value(refl);
    if (fr < fvals.front()) {
      Vec exp_ = centroid + 2.0 * (centroid - worst);
      const double fe = value(exp_);
      if (fe < fr) {
        simplex.back() = exp_;
        fvals.back() = fe;
      } else {
        simplex.back() = refl;
        fvals.back() = fr;
      }
    } else if (fr < fvals[fvals.size() - 2]) {
      simplex.back() = refl;
      fvals.back() = fr;
    } else {
      Vec con = centroid + 0.5 * (worst - centroid);
      const double fcn = value(con);
      if (fcn < fvals.back()) {
        simplex.back() = con;
        fvals.back() = fcn;
      } else {
        for (std::size_t i = 1; i < simplex.size(); ++i) {
          simplex[i] = simplex.front() + 0.5 * (simplex[i] - simplex.front());
          fvals[i] = value(simplex[i]);
        }
      }
    }
  }
  double best = fvals.front();
  return maximize ? -best : best;
}

struct ScanResult {
  double best = 0.0;
  bool divergent = false;
};

// Sweeps boundary samples (plus polytope vertices and a shrinking
// neighborhood of the anchor) and refines around the best candidate.
ScanResult scan_boundary(const FeasibleSet& K, const Vec& u, const Vec& ghat, bool maximize,
                         double half_space_tol) {
  RatioObjective obj{&K, u, ghat, maximize};
  ScanResult out;
  out.best = maximize ? 0.0 : std::numeric_limits<double>::infinity();
  auto absorb = [&](double v) {
    if (std::isinf(v) && maximize) {
      out.divergent = true;
      return;
    }
    if (maximize) {
      out.best = std::max(out.best, v);
    } else if (std::isfinite(v)) {
      out.best = std::min(out.best, v);
    }
  };

  auto check_halfspace = [&](const Vec& x) {
    if (ghat.dot(x - u) < -half_space_tol) {
      throw SpherePrecondition(
          "min_enclosing_sphere_facing: gradient does not face the set "
          "(found x in K with <g, x-u> < -tolerance)");
    }
  };

  const int d = K.dim();
  if (d == 2 && K.kind() != FeasibleSet::Kind::Simplex) {
    double best_phi = 0.0;
    bool have_phi = false;
    for (int i = 0; i < kAngles2d; ++i) {
      const double phi = 2.0 * M_PI * i / kAngles2d;
      const Vec x = K.boundary_point(angle_dir(phi));
      check_halfspace(x);
      const double v = obj.eval_point(x);
      if (std::isinf(v) && maximize) {
        out.divergent = true;
        continue;
      }
      const bool better = maximize ? v > out.best : v < out.best;
      if (better) {
        out.best = v;
        best_phi = phi;
        have_phi = true;
      }
    }
    if (have_phi) {
      const double window = 2.0 * (2.0 * M_PI / kAngles2d);
      auto f = [&](double phi) { return obj.eval_dir(angle_dir(phi)); };
      const double refined = golden_refine(f, best_phi - window, best_phi + window, maximize, nullptr);
      absorb(refined);
    }
  } else {
    Rng rng(0x0C01ABu);
    std::vector<std::pair<double, Vec>> top;
    for (int i = 0; i < kRandomDirs; ++i) {
      Vec dir = rng.normal_vec(d);
      if (dir.norm() < 1e-12) continue;
      const Vec x = K.boundary_point(dir);
      check_halfspace(x);
      const double v = obj.eval_point(x);
      if (std::isinf(v) && maximize) {
        out.divergent = true;
        continue;
      }
      const bool better = maximize ? v > out.best : v < out.best;
      if (better) out.best = v;
      top.emplace_back(maximize ? -v : v, dir);
    }
    std::sort(top.begin(), top.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    const int starts = std::min<int>(kRefineStarts, static_cast<int>(top.size()));
    for (int i = 0; i < starts; ++i) {
      const double refined = nelder_mead_dir(obj, top[i].second, maximize);
      absorb(refined);
    }
  }

  // Exact extreme points dominate the quasiconvex ratio on polytopes.
  for (const Vec& v : K.vertices()) {
    check_halfspace(v);
    absorb(obj.eval_point(v));
  }
  if (K.kind() == FeasibleSet::Kind::Simplex) {
    Rng rng(0x51137u);
    for (int i = 0; i < 4096; ++i) {
      const Vec x = K.sample_boundary(rng);
      check_halfspace(x);
      absorb(obj.eval_point(x));
    }
  }

  // Shrinking neighborhood of the anchor: the infimum may be approached
  // only in the limit toward u.
  if (d == 2 && K.kind() != FeasibleSet::Kind::Simplex) {
    const Vec cu = u;
    double phi_u = std::atan2(cu[1], cu[0]);
    if (K.kind() == FeasibleSet::Kind::AxisEllipsoid) {
      phi_u = std::atan2(cu[1] / K.semi_axes()[1], cu[0] / K.semi_axes()[0]);
    }
    for (double eps = 1e-1; eps > 1e-12; eps *= 0.5) {
      for (double s : {-1.0, 1.0}) {
        const Vec x = K.boundary_point(angle_dir(phi_u + s * eps));
        absorb(obj.eval_point(x));
      }
    }
  }
  return out;
}

}  // namespace

SphereFacing min_enclosing_sphere_facing(const FeasibleSet& K, const Vec& u, const Vec& g) {
  if (static_cast<int>(u.size()) != K.dim() || static_cast<int>(g.size()) != K.dim()) {
    throw DimensionMismatch("min_enclosing_sphere_facing: dimension mismatch");
  }
  if (g.norm() == 0.0) throw SpherePrecondition("min_enclosing_sphere_facing: zero gradient");
  if (K.boundary_residual(u) > 1e-9) {
    throw SpherePrecondition("min_enclosing_sphere_facing: anchor not on the boundary");
  }
  const Vec ghat = g / g.norm();
  const double tol = 1e-9 * std::max(1.0, K.diameter());
  const ScanResult scan = scan_boundary(K, u, ghat, /*maximize=*/true, tol);

  SphereFacing out;
  if (scan.divergent || scan.best > kDivergenceFactor * K.diameter()) {
    out.enclosed = false;
    return out;
  }
  out.enclosed = true;
  out.radius = scan.best;
  out.center = u + out.radius * ghat;
  return out;
}

double gamma_star(const FeasibleSet& K, const Vec& x_star, const Vec& grad) {
  if (static_cast<int>(x_star.size()) != K.dim() || static_cast<int>(grad.size()) != K.dim()) {
    throw DimensionMismatch("gamma_star: dimension mismatch");
  }
  if (grad.norm() == 0.0) throw SpherePrecondition("gamma_star: zero gradient");
  if (K.boundary_residual(x_star) > 1e-9) {
    throw SpherePrecondition("gamma_star: x_star not on the boundary");
  }
  const Vec ghat = grad / grad.norm();
  const double tol = 1e-9 * std::max(1.0, K.diameter());
  const ScanResult scan = scan_boundary(K, x_star, ghat, /*maximize=*/false, tol);
  if (!std::isfinite(scan.best)) return 0.0;
  const double gamma = grad.norm() * std::max(scan.best, 0.0);
  return gamma;
}

}  // namespace ocolab
