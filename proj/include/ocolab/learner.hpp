#pragma once

#include <memory>
#include <vector>

#include "ocolab/feasible_set.hpp"
#include "ocolab/vec.hpp"

namespace ocolab {

// Gradient-feedback online learner: predict x_t, then update with the
// gradient observed at x_t (which must be this learner's own prediction).
class Learner {
 public:
  virtual ~Learner() = default;
  virtual Vec predict() const = 0;
  virtual void update(const Vec& g, const Vec& x_t) = 0;
  virtual const char* name() const = 0;
};

enum class OgdSchedule { General, StronglyConvex };

class Ogd : public Learner {
 public:
  Ogd(FeasibleSet K, double G, OgdSchedule schedule, double alpha = 0.0);
  Vec predict() const override { return x_; }
  void update(const Vec& g, const Vec& x_t) override;
  const char* name() const override { return "ogd"; }

 private:
  FeasibleSet K_;
  double G_, D_, alpha_;
  OgdSchedule schedule_;
  Vec x_;
  long t_ = 0;
};

// Follow the leader with closed-form leaders: linear losses (gradient sum)
// or equal-alpha quadratics (running theta mean recovered from gradients).
class Ftl : public Learner {
 public:
  enum class Mode { Linear, Quadratic };
  explicit Ftl(FeasibleSet K, Mode mode = Mode::Linear, double alpha = 1.0);
  Vec predict() const override;
  void update(const Vec& g, const Vec& x_t) override;
  const char* name() const override { return "ftl"; }
  const Vec& gradient_sum() const { return theta_sum_; }

 private:
  FeasibleSet K_;
  Mode mode_;
  double alpha_;
  Vec theta_sum_;   // linear mode
  Vec theta_acc_;   // quadratic mode
  long n_ = 0;
};

// Online Newton step with a rank-one inverse update and Frank-Wolfe
// Mahalanobis projections.
class Ons : public Learner {
 public:
  Ons(FeasibleSet K, double gamma, double epsilon = 1.0);
  Vec predict() const override { return x_; }
  void update(const Vec& g, const Vec& x_t) override;
  const char* name() const override { return "ons"; }

 private:
  FeasibleSet K_;
  double gamma_;
  Mat A_, A_inv_;
  Vec x_;
};

// Universal learner: a learning-rate grid of surrogate experts (one Newton
// expert on the exp-concave surrogate and one descent expert on the
// strongly convex surrogate per rate, plus a worst-case descent expert)
// aggregated by rate-tilted exponential weights.
class Universal : public Learner {
 public:
  Universal(FeasibleSet K, double G, long T);
  Vec predict() const override;
  void update(const Vec& g, const Vec& x_t) override;
  const char* name() const override { return "universal"; }

  int expert_count() const { return static_cast<int>(experts_.size()); }
  int rate_levels() const { return levels_; }
  double grid_rate(int level) const;
  // (C_sc, C_sc', C_ec, C_ec', C_g) used to label bound checks.
  struct BoundConstants {
    double c_sc, c_sc_prime, c_ec, c_ec_prime, c_g;
  };
  BoundConstants bound_constants() const;
  const std::vector<double>& log_weights() const { return logw_; }
  // Surrogate losses at the meta's own point (diagnostics/tests).
  double exp_concave_surrogate_at(double eta, const Vec& g, const Vec& x_t, const Vec& x) const;
  double strongly_convex_surrogate_at(double eta, const Vec& g, const Vec& x_t, const Vec& x) const;

 private:
  struct Expert {
    enum class Type { Newton, StronglyConvexDescent, Plain } type;
    double eta;
    Vec x;
    // Newton state
    Mat A, A_inv;
    double gamma = 0.0;
    long t = 0;
  };

  void descend_weights(const Vec& g, const Vec& x_t);

  FeasibleSet K_;
  double G_, D_;
  long T_;
  int levels_ = 0;
  std::vector<Expert> experts_;
  std::vector<double> logw_;
};

struct LearnerError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace ocolab
