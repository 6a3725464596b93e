#pragma once

#include <optional>
#include <vector>

#include "ocolab/feasible_set.hpp"
#include "ocolab/loss.hpp"
#include "ocolab/rng.hpp"

namespace ocolab {

struct InvariantViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Per-coordinate independent sign noise: g = mean + sum_i eps_i amp_i e_i.
struct RademacherNoise {
  Vec amplitudes;  // zero = no noise on that coordinate
};

struct RoundLoss {
  LossFn loss;                    // what the learner suffers
  std::optional<LossFn> clean;    // pre-corruption loss, when meaningful
};

// Loss-sequence generators: i.i.d. stochastic families, the Bernoulli
// growth construction (with the latent mixture draw), its corrupted
// variant, and the deterministic alternating adversary.
class Environment {
 public:
  enum class Kind {
    StochasticLinear,
    BetaBernoulliGrowth,
    CorruptedGrowth,
    AlternatingAdversary,
    StochasticQuadratic,
    StochasticSquaredLinear,
  };

  static Environment stochastic_linear(Vec mean, RademacherNoise noise);
  static Environment beta_bernoulli_growth(double k, double L);
  // Requires K = W_lambda; C >= 1/(lambda L) checked here, the horizon
  // bound T >= C/(lambda L)^2 checked at reset.
  static Environment corrupted_growth(double k, double L, double lambda, double C);
  static Environment alternating_adversary(double first, double amplitude);
  static Environment stochastic_quadratic(Vec theta_mean, double alpha, RademacherNoise noise);
  static Environment stochastic_squared_linear(Vec a, double b, bool sign_flip);

  Kind kind() const { return kind_; }
  const char* kind_name() const;
  int dim() const { return dim_; }

  // Starts a run: seeds the RNG, draws latent variables, resets accounting.
  // horizon is required for CorruptedGrowth validation.
  void reset(std::uint64_t seed, long horizon = 0);

  RoundLoss sample_round(long t, const Vec& x_t);

  // E[f_t] over all randomness (latent mixture included); closed form.
  std::optional<LossFn> mean_function() const;
  // Mean conditioned on this run's latent draws (equals mean_function for
  // i.i.d. kinds); for the corrupted kind this is the clean conditional
  // mean. Valid after reset().
  std::optional<LossFn> realized_mean() const;

  // Exact bound on sup_K ||grad f_t||_2 over the support of the generator.
  double gradient_bound(const FeasibleSet& K) const;

  double corruption_budget() const { return C_; }
  double corruption_used() const { return corruption_used_; }
  double corrupted_L_hat() const { return L_hat_; }
  long corrupted_tau() const { return tau_; }
  double growth_L() const { return L_; }
  double latent_p() const { return P_; }

  // Finite gradient support for linear kinds (value, probability) pairs.
  std::vector<std::pair<Vec, double>> gradient_support() const;

 private:
  Environment() = default;

  Kind kind_ = Kind::StochasticLinear;
  int dim_ = 0;
  // stochastic linear / quadratic / squared-linear
  Vec mean_;
  RademacherNoise noise_;
  Vec theta_mean_;
  double alpha_ = 1.0;
  Vec a_;
  double b_ = 0.0;
  bool sign_flip_ = false;
  // growth constructions
  double k_ = 1.0;
  double L_ = 0.0;
  double lambda_ = 0.0;
  double C_ = 0.0;
  double L_hat_ = 0.0;
  long tau_ = 0;
  // adversary
  double first_ = 0.0;
  double amplitude_ = 0.0;
  // run state
  std::optional<Rng> rng_;
  double P_ = 0.5;
  double corruption_used_ = 0.0;
};

// min_t (||g_1 + ... + g_t||_2 - t L) over all prefixes.
double growth_margin(const std::vector<Vec>& grads, double L);

// Sum over rounds of sup_{x in K} |f_t(x) - ftilde_t(x)|, exact for linear
// pairs via the support function. Throws InvariantViolation above budget.
double corruption_budget_used(const std::vector<RoundLoss>& trace, const FeasibleSet& K,
                              double budget);

// argmin of the mean loss over K plus its gradient there.
struct OptimalPoint {
  Vec x_star;
  Vec grad_star;
};
OptimalPoint optimal_point(const Environment& env, const FeasibleSet& K);
OptimalPoint optimal_point_of(const LossFn& mean, const FeasibleSet& K);

}  // namespace ocolab
