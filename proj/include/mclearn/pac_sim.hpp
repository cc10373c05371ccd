#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mclearn/hypothesis.hpp"
#include "mclearn/learners.hpp"
#include "mclearn/rng.hpp"

namespace mclearn {

struct DistributionAtom {
  Instance x = 0;
  Label y = 0;
  double p = 0;
};

// A finite distribution over instance-label pairs, stored as atoms in
// canonical (x, y) order. Construction merges duplicate pairs, drops zero
// entries, and validates: probabilities non-negative, support inside
// [0,d) x [0,k), total within 1e-12 of 1.
class DiscreteDistribution {
 public:
  DiscreteDistribution(int d, int k, std::vector<DistributionAtom> entries);

  int domain_size() const { return d_; }
  int label_count() const { return k_; }
  const std::vector<DistributionAtom>& atoms() const { return atoms_; }
  std::vector<double> instance_marginals() const;
  std::vector<double> label_marginals() const;

 private:
  int d_;
  int k_;
  std::vector<DistributionAtom> atoms_;
};

// {"d": int, "k": int, "entries": [[x, y, p], ...]}
DiscreteDistribution parse_distribution_json(const std::string& text);
DiscreteDistribution load_distribution_json(const std::string& path);

// Exact mass of {(x, y) : h(x) != y}.
double true_error(const Hypothesis& h, const DiscreteDistribution& dist);

// Exact min over the class of true_error.
double approximation_error(const HypothesisClass& h, const DiscreteDistribution& dist);

// m inverse-CDF draws over the canonical atom order; reproducible per seed.
LabeledSample draw_sample(const DiscreteDistribution& dist, int m, Rng& rng);
LabeledSample draw_sample(const DiscreteDistribution& dist, int m, std::uint64_t seed);

// The hard instance marginal for lower bounds: instance 0 carries 1-2e, the
// remaining d-1 instances carry 2e/(d-1) each; labels are f0's. Requires
// 0 < epsilon < 1/2 and d >= 2 (the lower-bound guarantee itself is stated
// for epsilon < 1/12, but the distribution is well-formed up to 1/2).
DiscreteDistribution badlb_distribution(const Hypothesis& f0, int k, double epsilon);

// 95% Wilson score interval for a binomial rate.
struct WilsonInterval {
  double lower = 0;
  double upper = 1;
};
WilsonInterval wilson95(int successes, int trials);

// One Monte-Carlo estimate of Pr(excess error > epsilon) at sample size m:
// per-trial streams are split as root.split(m).split(trial), excess error is
// measured against the exact true_error and approximation_error.
struct FailureRateProbe {
  int m = 0;
  int failures = 0;
  int trials = 0;
  double rate = 0;
  WilsonInterval ci;
};
FailureRateProbe probe_failure_rate(const ErmPolicy& policy, const HypothesisClass& h,
                                    const DiscreteDistribution& dist, double epsilon, int m,
                                    int trials, std::uint64_t seed);

struct SampleComplexityEstimate {
  double epsilon = 0;
  double delta = 0;
  int m_hat = 0;              // smallest tested m whose Wilson upper bound <= delta
  bool exceeded_m_max = false;  // search hit m_max without passing; m_hat = m_max
  int m_max = 0;
  double failure_rate_at_m = 0;
  WilsonInterval ci_at_m;
  int trials = 0;
  std::uint64_t seed = 0;
  std::vector<FailureRateProbe> probes;  // audit trail, in probing order
};

// Doubling-then-bisection search for the sample complexity at (epsilon,
// delta). Requires trials >= 100; never throws on non-convergence — the
// exceeded_m_max flag reports it.
SampleComplexityEstimate estimate_sample_complexity(const ErmPolicy& policy,
                                                    const HypothesisClass& h,
                                                    const DiscreteDistribution& dist,
                                                    double epsilon, double delta, int trials,
                                                    std::uint64_t seed, int m_max = 4096);

// Exact Pr(total mass of the instances missed by m i.i.d. draws > epsilon),
// by subset inclusion-exclusion over the instance power set (masses.size()
// capped at 20).
double missing_mass_exceeds_probability(const std::vector<double>& masses, int m,
                                        double epsilon);

struct ChernBound {
  double gamma = 0;
  double log_raw = 0;  // natural log of the raw bound
  double raw = 0;      // may overflow to inf in the vacuous regime
  double bound = 1;    // raw clamped to [0, 1]
};

// gamma = alpha^2 / sum(phat^2); bound = (8 k e / gamma^2)^(gamma / 2),
// evaluated in log space. Requires alpha in (0, 1], phat summing to 1
// (tolerance 1e-9) with k = phat.size().
ChernBound chern_substitute_bound(double alpha, const std::vector<double>& phat);

struct BijectionExperimentReport {
  int trials = 0;
  double alpha = 0;
  int count = 0;                   // bijections with approximation error >= 1 - alpha
  std::optional<double> fraction;  // empty when trials == 0
  ChernBound chern;                // from the distribution's label marginals
  std::uint64_t seed = 0;
};

// Samples uniform label bijections phi (seeded Fisher-Yates, one split
// stream per trial), relabels the class, and reports how often the exact
// approximation error reaches 1 - alpha. The distribution must be balanced:
// every label marginal <= 10/k.
BijectionExperimentReport random_bijection_experiment(const HypothesisClass& h,
                                                      const DiscreteDistribution& dist,
                                                      double alpha, int trials,
                                                      std::uint64_t seed);

}  // namespace mclearn
