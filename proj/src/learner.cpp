#include "ocolab/learner.hpp"

#include <cmath>

namespace ocolab {

Ogd::Ogd(FeasibleSet K, double G, OgdSchedule schedule, double alpha)
    : K_(std::move(K)), G_(G), D_(K_.diameter()), alpha_(alpha), schedule_(schedule) {
  if (G_ <= 0.0) throw LearnerError("ogd: G > 0 required");
  if (schedule_ == OgdSchedule::StronglyConvex && alpha_ <= 0.0) {
    throw LearnerError("ogd: strongly convex schedule requires alpha > 0");
  }
  x_ = K_.canonical_center();
}

void Ogd::update(const Vec& g, const Vec& x_t) {
  (void)x_t;
  if (!all_finite(g)) throw LearnerError("ogd: non-finite gradient");
  ++t_;
  const double eta = schedule_ == OgdSchedule::General
                         ? D_ / (G_ * std::sqrt(static_cast<double>(t_)))
                         : 1.0 / (alpha_ * static_cast<double>(t_));
  x_ = K_.project(x_ - eta * g);
}

Ftl::Ftl(FeasibleSet K, Mode mode, double alpha) : K_(std::move(K)), mode_(mode), alpha_(alpha) {
  if (mode_ == Mode::Quadratic && alpha_ <= 0.0) {
    throw LearnerError("ftl: quadratic mode requires alpha > 0");
  }
  theta_sum_ = Vec::Zero(K_.dim());
  theta_acc_ = Vec::Zero(K_.dim());
}

Vec Ftl::predict() const {
  if (mode_ == Mode::Linear) return K_.linear_minimizer(theta_sum_);
  if (n_ == 0) return K_.canonical_center();
  return K_.project(theta_acc_ / static_cast<double>(n_));
}

void Ftl::update(const Vec& g, const Vec& x_t) {
  if (!all_finite(g)) throw LearnerError("ftl: non-finite gradient");
  if (mode_ == Mode::Linear) {
    theta_sum_ += g;
  } else {
    // Recover theta_t from the quadratic gradient alpha (x_t - theta_t).
    theta_acc_ += x_t - g / alpha_;
    ++n_;
  }
}

Ons::Ons(FeasibleSet K, double gamma, double epsilon) : K_(std::move(K)), gamma_(gamma) {
  if (gamma_ <= 0.0 || epsilon <= 0.0) throw LearnerError("ons: gamma, epsilon > 0 required");
  const int d = K_.dim();
  A_ = Mat::Identity(d, d) * epsilon;
  A_inv_ = Mat::Identity(d, d) / epsilon;
  x_ = K_.canonical_center();
}

void Ons::update(const Vec& g, const Vec& x_t) {
  (void)x_t;
  if (!all_finite(g)) throw LearnerError("ons: non-finite gradient");
  A_ += g * g.transpose();
  const Vec Ag = A_inv_ * g;
  A_inv_ -= (Ag * Ag.transpose()) / (1.0 + g.dot(Ag));
  const Vec z = x_ - (1.0 / gamma_) * (A_inv_ * g);
  x_ = mahalanobis_project(K_, z, A_, &x_).point;
}

Universal::Universal(FeasibleSet K, double G, long T)
    : K_(std::move(K)), G_(G), D_(K_.diameter()), T_(T) {
  if (G_ <= 0.0 || T_ < 1) throw LearnerError("universal: G > 0 and T >= 1 required");
  if (D_ <= 0.0) throw LearnerError("universal: degenerate set (zero diameter)");
  const int d = K_.dim();
  levels_ = static_cast<int>(std::ceil(0.5 * std::log2(static_cast<double>(T_)))) + 1;
  const Vec x0 = K_.canonical_center();
  for (int i = 0; i < levels_; ++i) {
    const double eta = std::pow(2.0, -i) / (5.0 * G_ * D_);
    Expert newton;
    newton.type = Expert::Type::Newton;
    newton.eta = eta;
    newton.x = x0;
    newton.A = Mat::Identity(d, d);       // epsilon = 1
    newton.A_inv = Mat::Identity(d, d);
    const double g_surr = eta * G_ * (1.0 + 2.0 * eta * G_ * D_);
    newton.gamma = 0.5 * std::min(1.0 / (4.0 * g_surr * D_), 1.0);
    experts_.push_back(std::move(newton));

    Expert sc;
    sc.type = Expert::Type::StronglyConvexDescent;
    sc.eta = eta;
    sc.x = x0;
    experts_.push_back(std::move(sc));
  }
  Expert plain;
  plain.type = Expert::Type::Plain;
  plain.eta = 1.0 / (5.0 * G_ * D_ * std::sqrt(static_cast<double>(T_)));
  plain.x = x0;
  experts_.push_back(std::move(plain));

  logw_.assign(experts_.size(), -std::log(static_cast<double>(experts_.size())));
}

double Universal::grid_rate(int level) const {
  return std::pow(2.0, -level) / (5.0 * G_ * D_);
}

Universal::BoundConstants Universal::bound_constants() const {
  const double d = static_cast<double>(K_.dim());
  return BoundConstants{G_, G_ * D_, std::sqrt(d), G_ * D_ + d, 1.0};
}

double Universal::exp_concave_surrogate_at(double eta, const Vec& g, const Vec& x_t,
                                           const Vec& x) const {
  const double u = g.dot(x_t - x);
  return -eta * u + eta * eta * u * u;
}

double Universal::strongly_convex_surrogate_at(double eta, const Vec& g, const Vec& x_t,
                                               const Vec& x) const {
  const double u = g.dot(x_t - x);
  return -eta * u + eta * eta * G_ * G_ * (x - x_t).squaredNorm();
}

Vec Universal::predict() const {
  // Rate-tilted weighted average: x = sum w_E eta_E x_E / sum w_E eta_E.
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < experts_.size(); ++i) {
    m = std::max(m, logw_[i] + std::log(experts_[i].eta));
  }
  Vec x = Vec::Zero(K_.dim());
  double total = 0.0;
  for (std::size_t i = 0; i < experts_.size(); ++i) {
    const double w = std::exp(logw_[i] + std::log(experts_[i].eta) - m);
    x += w * experts_[i].x;
    total += w;
  }
  return x / total;
}

void Universal::descend_weights(const Vec& g, const Vec& x_t) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < experts_.size(); ++i) {
    Expert& e = experts_[i];
    const double u = g.dot(x_t - e.x);
    double loss = 0.0;
    switch (e.type) {
      case Expert::Type::Newton:
        loss = -e.eta * u + e.eta * e.eta * u * u;
        break;
      case Expert::Type::StronglyConvexDescent:
        loss = -e.eta * u + e.eta * e.eta * G_ * G_ * (e.x - x_t).squaredNorm();
        break;
      case Expert::Type::Plain:
        // Constant quadratic penalty keeps the exponential-weights
        // potential bounded for the linear surrogate.
        loss = -e.eta * u + e.eta * e.eta * G_ * G_ * D_ * D_;
        break;
    }
    logw_[i] -= loss;
    m = std::max(m, logw_[i]);
  }
  double z = 0.0;
  for (double lw : logw_) z += std::exp(lw - m);
  const double shift = m + std::log(z);
  for (double& lw : logw_) lw -= shift;
}

void Universal::update(const Vec& g, const Vec& x_t) {
  if (!all_finite(g)) throw LearnerError("universal: non-finite gradient");
  if (static_cast<int>(g.size()) != K_.dim()) throw DimensionMismatch("universal: dim mismatch");
  descend_weights(g, x_t);
  for (Expert& e : experts_) {
    ++e.t;
    switch (e.type) {
      case Expert::Type::Newton: {
        const double u = g.dot(x_t - e.x);
        const Vec grad = (e.eta - 2.0 * e.eta * e.eta * u) * g;
        e.A += grad * grad.transpose();
        const Vec Ag = e.A_inv * grad;
        e.A_inv -= (Ag * Ag.transpose()) / (1.0 + grad.dot(Ag));
        const Vec z = e.x - (1.0 / e.gamma) * (e.A_inv * grad);
        e.x = mahalanobis_project(K_, z, e.A, &e.x).point;
        break;
      }
      case Expert::Type::StronglyConvexDescent: {
        const Vec grad = e.eta * g + 2.0 * e.eta * e.eta * G_ * G_ * (e.x - x_t);
        const double step =
            1.0 / (2.0 * e.eta * e.eta * G_ * G_ * static_cast<double>(e.t));
        e.x = K_.project(e.x - step * grad);
        break;
      }
      case Expert::Type::Plain: {
        const double step = D_ / (G_ * std::sqrt(static_cast<double>(e.t)));
        e.x = K_.project(e.x - step * g);
        break;
      }
    }
  }
}

}  // namespace ocolab
