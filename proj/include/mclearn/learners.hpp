#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "mclearn/budget.hpp"
#include "mclearn/dimensions.hpp"
#include "mclearn/hypothesis.hpp"

namespace mclearn {

// A labeled sample; order is irrelevant to every learner here, and the
// exhaustive enumerations below keep samples in canonical (x, y) order.
using LabeledSample = std::vector<std::pair<Instance, Label>>;

std::size_t empirical_errors(const Hypothesis& f, const LabeledSample& s);
void validate_sample(const HypothesisClass& h, const LabeledSample& s);
std::size_t min_empirical_errors(const HypothesisClass& h, const LabeledSample& s);

enum class ErmKind { generic, bad, good_observed_labels, symmetric_z };

// Which empirical-risk minimizer to run, plus its parameters. `witness`
// drives the adversarial minimizer; `z` is the relabeling pool of the
// symmetric learner; `defaults` are labels the observed-labels learner may
// always emit (e.g. the subset-pointer sentinel).
struct ErmPolicy {
  ErmKind kind = ErmKind::generic;
  std::optional<GShatterWitness> witness;
  std::vector<Label> z;
  std::vector<Label> defaults;
};

// Every learner's result is a verified empirical-error minimizer; `fallback`
// reports that the policy's special construction was infeasible for this
// sample and the generic minimizer was returned instead.
struct ErmResult {
  Hypothesis hypothesis;
  bool fallback = false;
};

// Canonically-first hypothesis minimizing empirical error.
ErmResult erm_generic(const HypothesisClass& h, const LabeledSample& s);

// Minimizer that agrees with the witness function on sampled witness
// instances and disagrees on unsampled ones, when that is achievable by a
// global minimizer; generic otherwise.
ErmResult erm_bad(const HypothesisClass& h, const LabeledSample& s, const GShatterWitness& w);

// Canonically-first minimizer whose range is contained in the sample's
// labels plus `defaults`; generic (flagged) when no minimizer qualifies.
ErmResult erm_good_observed_labels(const HypothesisClass& h, const LabeledSample& s,
                                   const std::vector<Label>& defaults);

// For a label-symmetric class and a realizable sample: a consistent
// hypothesis whose range lies in labels(s) plus z, obtained by relabeling a
// consistent hypothesis's unobserved output labels into z (a label bijection
// keeps the result in the class). Falls back, flagged, when the sample is
// unrealizable or no consistent hypothesis relabels successfully.
ErmResult erm_symmetric(const HypothesisClass& h, const LabeledSample& s,
                        const std::vector<Label>& z);

ErmResult run_erm(const ErmPolicy& policy, const HypothesisClass& h, const LabeledSample& s);

enum class SampleMode { realizable, agnostic };

// Algorithm-dependent growth function: the maximum, over size-2m samples
// (labels from the class when realizable, arbitrary when agnostic), of the
// number of distinct restrictions to the sample's instances of the policy's
// outputs across all size-m index sub-samples. Exhaustive and exact.
int growth_function(const ErmPolicy& policy, const HypothesisClass& h, int m, SampleMode mode,
                    const Budget& budget = {});

// Same outer maximization over size-2m samples, of the size of the union of
// the policy's output ranges across every proper sub-sample (the empty
// sub-sample included, on which learners return the canonical first
// minimizer).
int essential_range(const ErmPolicy& policy, const HypothesisClass& h, int m, SampleMode mode,
                    const Budget& budget = {});

// Monte-Carlo variants: certified lower bounds (max over sampled S).
int growth_function_mc(const ErmPolicy& policy, const HypothesisClass& h, int m, SampleMode mode,
                       int trials, std::uint64_t seed);
int essential_range_mc(const ErmPolicy& policy, const HypothesisClass& h, int m, SampleMode mode,
                       int trials, std::uint64_t seed);

// Double-sampling generalization bounds at sample size m and growth value pi.
struct BoundReport {
  int m = 0;
  double pi = 0;
  double delta = 0;
  double realizable_bound = 0;  // 12 ln(2 pi / delta) / m
  double agnostic_bound = 0;    // sqrt(32 ln((4 pi + 4) / delta) / m)
};
BoundReport double_sampling_bound(int m, double pi, double delta);

// The growth bound pi = (2m)^dn * r^(2 dn) plugged into the double-sampling
// bound of the requested mode, evaluated in log space.
double restricted_range_bound(int dn, int m, int r, double delta, SampleMode mode);

}  // namespace mclearn
