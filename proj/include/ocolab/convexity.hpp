#pragma once

#include <cstdint>
#include <string>

#include "ocolab/feasible_set.hpp"

namespace ocolab {

struct WitnessResult {
  bool ok = true;
  // Most negative margin seen across all checks (negative = violation).
  double worst_margin = std::numeric_limits<double>::infinity();
  std::string violation;  // description of the first failing sample
  int trials_run = 0;
};

// Randomized refuter for (kappa, q)-uniform convexity w.r.t. the set's
// native norm. Each trial draws x, y in K (boundary-biased), theta in [0,1]
// and a native-norm unit z, and checks the chord-ball inclusion
//   theta x + (1-theta) y + theta (1-theta) kappa ||x-y||^q z in K,
// plus the support-point inequality
//   <-g, y*-y> >= (kappa/4) ||y-y*||^q ||g||_dual,  y* = argmin_K <g, .>.
// Violations beyond 1e-9 flip ok to false.
WitnessResult uniform_convexity_witness(const FeasibleSet& K, double kappa, double q,
                                        NormTag norm, int trials, std::uint64_t seed = 7);

// Same refuter restricted to the support-point inequality.
WitnessResult support_inequality_witness(const FeasibleSet& K, double kappa, double q,
                                         int trials, std::uint64_t seed = 7);

// Exact constant for the chord-ball inclusion on the supported curved sets
// (1/(2r) for a Euclidean r-ball, 2^{2-p}/p * r^{1-p} for an lp ball).
double inclusion_kappa(const FeasibleSet& K);

}  // namespace ocolab
