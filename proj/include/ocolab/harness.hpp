#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ocolab/environment.hpp"
#include "ocolab/learner.hpp"

namespace ocolab {

struct LearnerSpec {
  enum class Kind { Ogd, Ftl, Ons, Universal } kind = Kind::Universal;
  OgdSchedule ogd_schedule = OgdSchedule::General;
  double alpha = 0.0;       // ogd strongly-convex schedule / ftl quadratic
  Ftl::Mode ftl_mode = Ftl::Mode::Linear;
  double ons_gamma = 0.5;
  double ons_epsilon = 1.0;
  const char* name() const;
};

struct ExperimentConfig {
  FeasibleSet set;
  Environment env;
  LearnerSpec learner;
  std::vector<long> horizons;   // increasing
  int seed_count = 32;
  std::uint64_t base_seed = 0;
  std::string out_dir;          // empty = no files
  void validate() const;        // throws ConfigError on bad shape
};

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct CheckpointRow {
  long t = 0;
  double cum_pseudo_regret = 0.0;
  double cum_realized_regret = 0.0;  // NaN when no hindsight closed form
  double dist_to_opt_sq = 0.0;       // instantaneous ||x_t - x_star||^2
};

// One (horizon, seed) run.
struct RunStats {
  long T = 0;
  std::uint64_t seed = 0;
  std::vector<CheckpointRow> checkpoints;
  double pseudo_regret = 0.0;      // at T, vs the run's realized mean
  double realized_regret = 0.0;    // at T, vs the hindsight minimizer
  double v_t = 0.0;                // sum ||x_t - x_ref||^2
  double inner_vs_ref = 0.0;       // sum <g_t, x_t - x_ref>
  double grad_star_inner = 0.0;    // sum <grad_ref, x_t - x_ref>
  double bound61 = 0.0;
  double growth_margin = std::numeric_limits<double>::infinity();
  double corruption_used = 0.0;
  Vec x_ref;                       // realized optimum (or hindsight for adversarial)
  Vec grad_ref;
};

struct HorizonSummary {
  long T = 0;
  double mean_pseudo_regret = 0.0;
  double se_pseudo_regret = 0.0;
  double mean_realized_regret = 0.0;
  double max_bound61 = 0.0;
};

struct ExperimentResult {
  std::vector<HorizonSummary> summary;                 // one row per horizon
  std::vector<std::vector<RunStats>> runs;             // [horizon][seed]
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Worker count: OCO_LAB_THREADS overrides the hardware default.
int worker_threads();

std::unique_ptr<Learner> make_learner(const LearnerSpec& spec, const FeasibleSet& K, double G,
                                      long T);

struct GrowthFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// OLS of log(mean regret) on log T; requires >= 4 positive points.
GrowthFit fit_growth_exponent(const std::vector<std::pair<long, double>>& curve);

// sum <g_t, x_t - x_star> / (G sqrt(V_T log T) + G D log T), natural logs,
// clamped to 0 for nonpositive numerators; T >= 2 required.
double bound61_ratio(double inner_sum, double v_t, double G, double D, long T);

struct BernsteinReport {
  bool holds = true;
  double worst_slack = std::numeric_limits<double>::infinity();
};

// Checks E[(⟨g, x - x_star⟩)^2] <= B <g_mean, x - x_star> + 1e-9 over
// boundary-grid plus random interior samples of K; the expectation is the
// exact closed form over the environment's finite gradient support.
BernsteinReport bernstein_check(const Environment& env, const FeasibleSet& K, double B_claim,
                                int samples);

// Best fixed decision against a recorded loss sequence (all linear or all
// equal-alpha quadratic).
Vec hindsight_minimizer(const std::vector<LossFn>& losses, const FeasibleSet& K);

}  // namespace ocolab
