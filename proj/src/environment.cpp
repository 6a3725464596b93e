#include "ocolab/environment.hpp"

#include <cmath>

namespace ocolab {

namespace {

Vec growth_vec(double sign, double L) {
  Vec g(2);
  g << sign, -L;
  return g;
}

}  // namespace

Environment Environment::stochastic_linear(Vec mean, RademacherNoise noise) {
  if (!all_finite(mean)) throw GeometryError("stochastic_linear: non-finite mean");
  if (noise.amplitudes.size() != mean.size()) {
    throw DimensionMismatch("stochastic_linear: noise dimension mismatch");
  }
  Environment e;
  e.kind_ = Kind::StochasticLinear;
  e.dim_ = static_cast<int>(mean.size());
  e.mean_ = std::move(mean);
  e.noise_ = std::move(noise);
  return e;
}

Environment Environment::beta_bernoulli_growth(double k, double L) {
  if (k <= 0.0) throw GeometryError("beta_bernoulli_growth: k > 0 required");
  if (!(L > 0.0 && L < 1.0)) throw GeometryError("beta_bernoulli_growth: L in (0,1) required");
  Environment e;
  e.kind_ = Kind::BetaBernoulliGrowth;
  e.dim_ = 2;
  e.k_ = k;
  e.L_ = L;
  return e;
}

Environment Environment::corrupted_growth(double k, double L, double lambda, double C) {
  if (k <= 0.0) throw GeometryError("corrupted_growth: k > 0 required");
  if (!(L > 0.0 && L < 1.0)) throw GeometryError("corrupted_growth: L in (0,1) required");
  if (!(lambda > 0.0 && lambda < 1.0)) throw GeometryError("corrupted_growth: lambda in (0,1)");
  if (C < 1.0 / (lambda * L)) {
    throw InvariantViolation("corrupted_growth: requires C >= 1/(lambda*L)");
  }
  Environment e;
  e.kind_ = Kind::CorruptedGrowth;
  e.dim_ = 2;
  e.k_ = k;
  e.L_ = L;
  e.lambda_ = lambda;
  e.C_ = C;
  // lambda * L_hat = sqrt(lambda L / C)
  e.L_hat_ = std::sqrt(lambda * L / C) / lambda;
  e.tau_ = static_cast<long>(std::ceil(C / (lambda * L)));
  return e;
}

Environment Environment::alternating_adversary(double first, double amplitude) {
  if (amplitude <= 0.0) throw GeometryError("alternating_adversary: amplitude > 0");
  Environment e;
  e.kind_ = Kind::AlternatingAdversary;
  e.dim_ = 1;
  e.first_ = first;
  e.amplitude_ = amplitude;
  return e;
}

Environment Environment::stochastic_quadratic(Vec theta_mean, double alpha,
                                              RademacherNoise noise) {
  if (alpha <= 0.0) throw GeometryError("stochastic_quadratic: alpha > 0 required");
  if (noise.amplitudes.size() != theta_mean.size()) {
    throw DimensionMismatch("stochastic_quadratic: noise dimension mismatch");
  }
  Environment e;
  e.kind_ = Kind::StochasticQuadratic;
  e.dim_ = static_cast<int>(theta_mean.size());
  e.theta_mean_ = std::move(theta_mean);
  e.alpha_ = alpha;
  e.noise_ = std::move(noise);
  return e;
}

Environment Environment::stochastic_squared_linear(Vec a, double b, bool sign_flip) {
  if (!all_finite(a) || a.size() < 1) throw GeometryError("stochastic_squared_linear: bad a");
  Environment e;
  e.kind_ = Kind::StochasticSquaredLinear;
  e.dim_ = static_cast<int>(a.size());
  e.a_ = std::move(a);
  e.b_ = b;
  e.sign_flip_ = sign_flip;
  return e;
}

const char* Environment::kind_name() const {
  switch (kind_) {
    case Kind::StochasticLinear: return "stochastic_linear";
    case Kind::BetaBernoulliGrowth: return "beta_bernoulli_growth";
    case Kind::CorruptedGrowth: return "corrupted_growth";
    case Kind::AlternatingAdversary: return "alternating_adversary";
    case Kind::StochasticQuadratic: return "stochastic_quadratic";
    case Kind::StochasticSquaredLinear: return "stochastic_squared_linear";
  }
  return "?";
}

void Environment::reset(std::uint64_t seed, long horizon) {
  rng_.emplace(seed);
  corruption_used_ = 0.0;
  P_ = 0.5;
  if (kind_ == Kind::BetaBernoulliGrowth || kind_ == Kind::CorruptedGrowth) {
    P_ = rng_->beta(k_, k_);
  }
  if (kind_ == Kind::CorruptedGrowth) {
    if (horizon <= 0) throw InvariantViolation("corrupted_growth: reset requires the horizon");
    const double lamL = lambda_ * L_;
    if (static_cast<double>(horizon) < C_ / (lamL * lamL)) {
      throw InvariantViolation("corrupted_growth: requires T >= C/(lambda*L)^2");
    }
  }
}

RoundLoss Environment::sample_round(long t, const Vec& x_t) {
  if (!rng_.has_value()) throw InvariantViolation("environment used before reset()");
  if (t < 1) throw InvariantViolation("round index starts at 1");
  (void)x_t;  // only the fixed adversary pattern is supported (no adaptivity)
  switch (kind_) {
    case Kind::StochasticLinear: {
      Vec g = mean_;
      for (int i = 0; i < dim_; ++i) {
        const double amp = noise_.amplitudes[i];
        if (amp != 0.0) g[i] += rng_->sign() * amp;
      }
      LossFn f = LossFn::linear(std::move(g));
      return RoundLoss{f, f};
    }
    case Kind::BetaBernoulliGrowth: {
      const double sign = rng_->bernoulli(P_) ? 1.0 : -1.0;
      LossFn f = LossFn::linear(growth_vec(sign, L_));
      return RoundLoss{f, f};
    }
    case Kind::CorruptedGrowth: {
      const double sign = rng_->bernoulli(P_) ? 1.0 : -1.0;
      LossFn clean = LossFn::linear(growth_vec(sign, L_));
      if (t <= tau_) {
        LossFn corrupted = LossFn::linear(growth_vec(sign, L_hat_));
        // sup over W_lambda of |<g - g_clean, x>| = |L - L_hat| * lambda.
        corruption_used_ += std::abs(L_ - L_hat_) * lambda_;
        if (corruption_used_ > C_ * (1.0 + 1e-12)) {
          throw InvariantViolation("corrupted_growth: corruption budget exceeded");
        }
        return RoundLoss{corrupted, clean};
      }
      return RoundLoss{clean, clean};
    }
    case Kind::AlternatingAdversary: {
      Vec g(1);
      if (t == 1) {
        g[0] = first_;
      } else {
        g[0] = (t % 2 == 0) ? amplitude_ : -amplitude_;
      }
      LossFn f = LossFn::linear(std::move(g));
      return RoundLoss{f, std::nullopt};
    }
    case Kind::StochasticQuadratic: {
      Vec th = theta_mean_;
      for (int i = 0; i < dim_; ++i) {
        const double amp = noise_.amplitudes[i];
        if (amp != 0.0) th[i] += rng_->sign() * amp;
      }
      LossFn f = LossFn::quadratic(std::move(th), alpha_);
      return RoundLoss{f, f};
    }
    case Kind::StochasticSquaredLinear: {
      Vec a = a_;
      if (sign_flip_ && rng_->sign() < 0.0) a = -a;
      LossFn f = LossFn::squared_linear(std::move(a), b_);
      return RoundLoss{f, f};
    }
  }
  throw InvariantViolation("sample_round: unreachable");
}

std::optional<LossFn> Environment::mean_function() const {
  switch (kind_) {
    case Kind::StochasticLinear:
      return LossFn::linear(mean_);
    case Kind::BetaBernoulliGrowth:
    case Kind::CorruptedGrowth:
      // E[2X - 1] = E[2P - 1] = 0 for Beta(k, k); clean mean for corrupted.
      return LossFn::linear(growth_vec(0.0, L_));
    case Kind::AlternatingAdversary:
      return std::nullopt;
    case Kind::StochasticQuadratic:
      // Constant offset from the theta noise cancels in regret differences.
      return LossFn::quadratic(theta_mean_, alpha_);
    case Kind::StochasticSquaredLinear:
      // Under the symmetric sign flip E[f](x) = (<a,x>)^2 + b^2.
      return LossFn::squared_linear(a_, sign_flip_ ? 0.0 : b_);
  }
  return std::nullopt;
}

std::optional<LossFn> Environment::realized_mean() const {
  if (kind_ == Kind::BetaBernoulliGrowth || kind_ == Kind::CorruptedGrowth) {
    if (!rng_.has_value()) throw InvariantViolation("realized_mean before reset()");
    return LossFn::linear(growth_vec(2.0 * P_ - 1.0, L_));
  }
  return mean_function();
}

double Environment::gradient_bound(const FeasibleSet& K) const {
  switch (kind_) {
    case Kind::StochasticLinear: {
      double s = 0.0;
      for (int i = 0; i < dim_; ++i) {
        const double v = std::abs(mean_[i]) + std::abs(noise_.amplitudes[i]);
        s += v * v;
      }
      return std::sqrt(s);
    }
    case Kind::BetaBernoulliGrowth:
      return std::sqrt(1.0 + L_ * L_);
    case Kind::CorruptedGrowth:
      return std::sqrt(1.0 + L_ * L_);  // L_hat <= L
    case Kind::AlternatingAdversary:
      return std::max(std::abs(first_), amplitude_);
    case Kind::StochasticQuadratic: {
      double worst_theta = 0.0;
      for (int i = 0; i < dim_; ++i) {
        const double v = std::abs(theta_mean_[i]) + std::abs(noise_.amplitudes[i]);
        worst_theta += v * v;
      }
      return alpha_ * (std::sqrt(worst_theta) + K.max_norm2());
    }
    case Kind::StochasticSquaredLinear:
      return LossFn::squared_linear(a_, b_).lipschitz_bound(K);
  }
  return 0.0;
}

std::vector<std::pair<Vec, double>> Environment::gradient_support() const {
  std::vector<std::pair<Vec, double>> out;
  switch (kind_) {
    case Kind::BetaBernoulliGrowth:
    case Kind::CorruptedGrowth:
      // Marginal law of a single round: P(X=1) = E[P] = 1/2.
      out.emplace_back(growth_vec(1.0, L_), 0.5);
      out.emplace_back(growth_vec(-1.0, L_), 0.5);
      return out;
    case Kind::StochasticLinear: {
      std::vector<int> active;
      for (int i = 0; i < dim_; ++i) {
        if (noise_.amplitudes[i] != 0.0) active.push_back(i);
      }
      if (active.size() > 16) throw GeometryError("gradient_support: too many noise coordinates");
      const std::size_t n = std::size_t{1} << active.size();
      const double p = 1.0 / static_cast<double>(n);
      for (std::size_t mask = 0; mask < n; ++mask) {
        Vec g = mean_;
        for (std::size_t j = 0; j < active.size(); ++j) {
          const double s = (mask >> j) & 1 ? 1.0 : -1.0;
          g[active[j]] += s * noise_.amplitudes[active[j]];
        }
        out.emplace_back(std::move(g), p);
      }
      return out;
    }
    default:
      throw GeometryError("gradient_support: not a linear environment");
  }
}

double growth_margin(const std::vector<Vec>& grads, double L) {
  if (grads.empty()) throw GeometryError("growth_margin: empty trace");
  Vec sum = Vec::Zero(grads.front().size());
  double margin = std::numeric_limits<double>::infinity();
  long t = 0;
  for (const Vec& g : grads) {
    sum += g;
    ++t;
    margin = std::min(margin, sum.norm() - static_cast<double>(t) * L);
  }
  return margin;
}

double corruption_budget_used(const std::vector<RoundLoss>& trace, const FeasibleSet& K,
                              double budget) {
  double used = 0.0;
  for (const RoundLoss& r : trace) {
    if (!r.clean.has_value()) continue;
    if (r.loss.kind != LossFn::Kind::Linear || r.clean->kind != LossFn::Kind::Linear) {
      throw GeometryError("corruption_budget_used: only linear pairs supported");
    }
    const Vec delta = r.loss.g - r.clean->g;
    if (delta.norm() == 0.0) continue;
    used += std::max(K.support(delta), K.support(-delta));
  }
  if (used > budget * (1.0 + 1e-12)) {
    throw InvariantViolation("corruption budget exceeded");
  }
  return used;
}

OptimalPoint optimal_point_of(const LossFn& mean, const FeasibleSet& K) {
  OptimalPoint out;
  switch (mean.kind) {
    case LossFn::Kind::Linear:
      out.x_star = K.linear_minimizer(mean.g);
      out.grad_star = mean.g;
      return out;
    case LossFn::Kind::Quadratic:
      out.x_star = K.project(mean.theta);
      out.grad_star = mean.gradient(out.x_star);
      return out;
    case LossFn::Kind::SquaredLinear: {
      // Minimize (<a,x> - b)^2: walk the segment between the two support
      // points of a; the minimizing inner product is the clamp of b.
      const Vec x_lo = K.linear_minimizer(mean.a);
      const Vec x_hi = K.linear_minimizer(-mean.a);
      const double lo = mean.a.dot(x_lo);
      const double hi = mean.a.dot(x_hi);
      const double target = std::clamp(mean.b, lo, hi);
      const double t = hi > lo ? (target - lo) / (hi - lo) : 0.0;
      out.x_star = (1.0 - t) * x_lo + t * x_hi;
      out.grad_star = mean.gradient(out.x_star);
      return out;
    }
  }
  throw GeometryError("optimal_point: unreachable");
}

OptimalPoint optimal_point(const Environment& env, const FeasibleSet& K) {
  const auto mean = env.mean_function();
  if (!mean.has_value()) throw GeometryError("optimal_point: environment has no mean function");
  return optimal_point_of(*mean, K);
}

}  // namespace ocolab
