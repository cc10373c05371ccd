#include "mclearn/learners.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "internal_util.hpp"
#include "mclearn/errors.hpp"
#include "mclearn/rng.hpp"

namespace mclearn {

using detail::fmt;

std::size_t empirical_errors(const Hypothesis& f, const LabeledSample& s) {
  std::size_t e = 0;
  for (const auto& [x, y] : s)
    if (f(x) != y) ++e;
  return e;
}

void validate_sample(const HypothesisClass& h, const LabeledSample& s) {
  for (const auto& [x, y] : s) {
    if (x < 0 || x >= h.domain_size())
      throw argument_error(fmt("sample instance %d outside [0, %d)", x, h.domain_size()));
    if (y < 0 || y >= h.label_count())
      throw argument_error(fmt("sample label %d outside [0, %d)", y, h.label_count()));
  }
}

std::size_t min_empirical_errors(const HypothesisClass& h, const LabeledSample& s) {
  std::size_t best = s.size() + 1;
  for (const Hypothesis& f : h.hypotheses()) best = std::min(best, empirical_errors(f, s));
  return best;
}

ErmResult erm_generic(const HypothesisClass& h, const LabeledSample& s) {
  validate_sample(h, s);
  std::size_t best_err = s.size() + 1;
  std::size_t best = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const std::size_t e = empirical_errors(h[i], s);
    if (e < best_err) {
      best_err = e;
      best = i;
      if (e == 0) break;
    }
  }
  return ErmResult{h[best], false};
}

ErmResult erm_bad(const HypothesisClass& h, const LabeledSample& s, const GShatterWitness& w) {
  validate_sample(h, s);
  if (!verify_g_shatter(h, w)) throw argument_error("erm_bad: witness fails verification");

  // sampled witness instances, and the consistency gate with the witness
  // function on them
  std::vector<bool> sampled(w.set.size(), false);
  bool consistent = true;
  for (const auto& [x, y] : s)
    for (std::size_t i = 0; i < w.set.size(); ++i)
      if (w.set[i] == x) {
        sampled[i] = true;
        if (y != w.f[i]) consistent = false;
      }

  if (consistent) {
    // canonically-first empirical minimizer among hypotheses matching the
    // adversarial pattern: agree with the witness function exactly on the
    // sampled witness instances
    const Hypothesis* best = nullptr;
    std::size_t best_err = s.size() + 1;
    for (const Hypothesis& g : h.hypotheses()) {
      bool match = true;
      for (std::size_t i = 0; i < w.set.size() && match; ++i)
        match = (g(w.set[i]) == w.f[i]) == sampled[i];
      if (!match) continue;
      const std::size_t e = empirical_errors(g, s);
      if (e < best_err) {
        best_err = e;
        best = &g;
      }
    }
    // G-shattering guarantees the pattern is realized by someone
    if (best != nullptr && best_err == min_empirical_errors(h, s)) return ErmResult{*best, false};
  }
  auto res = erm_generic(h, s);
  res.fallback = true;
  return res;
}

ErmResult erm_good_observed_labels(const HypothesisClass& h, const LabeledSample& s,
                                   const std::vector<Label>& defaults) {
  validate_sample(h, s);
  for (Label y : defaults)
    if (y < 0 || y >= h.label_count())
      throw argument_error(fmt("default label %d outside [0, %d)", y, h.label_count()));

  std::vector<bool> allowed(static_cast<std::size_t>(h.label_count()), false);
  for (const auto& [x, y] : s) {
    (void)x;
    allowed[static_cast<std::size_t>(y)] = true;
  }
  for (Label y : defaults) allowed[static_cast<std::size_t>(y)] = true;

  const std::size_t target = min_empirical_errors(h, s);
  for (const Hypothesis& g : h.hypotheses()) {
    bool ok = true;
    for (Label y : g.table)
      if (!allowed[static_cast<std::size_t>(y)]) {
        ok = false;
        break;
      }
    if (ok && empirical_errors(g, s) == target) return ErmResult{g, false};
  }
  auto res = erm_generic(h, s);
  res.fallback = true;
  return res;
}

ErmResult erm_symmetric(const HypothesisClass& h, const LabeledSample& s,
                        const std::vector<Label>& z) {
  validate_sample(h, s);
  if (!is_symmetric(h)) throw argument_error("erm_symmetric: class is not label-symmetric");
  if (z.empty()) throw argument_error("erm_symmetric: relabeling pool must be non-empty");
  std::vector<bool> in_z(static_cast<std::size_t>(h.label_count()), false);
  for (Label y : z) {
    if (y < 0 || y >= h.label_count())
      throw argument_error(fmt("erm_symmetric: pool label %d outside [0, %d)", y,
                               h.label_count()));
    if (in_z[static_cast<std::size_t>(y)])
      throw argument_error(fmt("erm_symmetric: pool label %d repeated", y));
    in_z[static_cast<std::size_t>(y)] = true;
  }

  const int k = h.label_count();
  std::vector<bool> in_sample(static_cast<std::size_t>(k), false);
  for (const auto& [x, y] : s) {
    (void)x;
    in_sample[static_cast<std::size_t>(y)] = true;
  }

  for (const Hypothesis& g : h.hypotheses()) {
    if (empirical_errors(g, s) != 0) continue;
    // relabel g's outputs outside the sample labels into the pool: identity
    // on sample labels; pool outputs already in the pool stay fixed; the
    // rest take the smallest unused pool labels
    std::vector<Label> pi(static_cast<std::size_t>(k), -1);
    std::vector<bool> used(static_cast<std::size_t>(k), false);
    for (Label y = 0; y < k; ++y)
      if (in_sample[static_cast<std::size_t>(y)]) {
        pi[static_cast<std::size_t>(y)] = y;
        used[static_cast<std::size_t>(y)] = true;
      }
    std::vector<Label> range_out;  // g's output labels needing a pool slot
    for (Label y : g.table)
      if (pi[static_cast<std::size_t>(y)] == -1) range_out.push_back(y);
    std::sort(range_out.begin(), range_out.end());
    range_out.erase(std::unique(range_out.begin(), range_out.end()), range_out.end());
    bool ok = true;
    for (Label y : range_out)
      if (in_z[static_cast<std::size_t>(y)] && !used[static_cast<std::size_t>(y)]) {
        pi[static_cast<std::size_t>(y)] = y;
        used[static_cast<std::size_t>(y)] = true;
      }
    for (Label y : range_out) {
      if (pi[static_cast<std::size_t>(y)] != -1) continue;
      Label slot = -1;
      for (Label c : z)
        if (!used[static_cast<std::size_t>(c)]) {
          slot = c;
          break;
        }
      if (slot == -1) {
        ok = false;
        break;
      }
      pi[static_cast<std::size_t>(y)] = slot;
      used[static_cast<std::size_t>(slot)] = true;
    }
    if (!ok) continue;
    // complete pi to a bijection; unassigned labels take unused slots in order
    std::vector<Label> free;
    for (Label y = 0; y < k; ++y)
      if (!used[static_cast<std::size_t>(y)]) free.push_back(y);
    std::size_t fi = 0;
    for (Label y = 0; y < k; ++y)
      if (pi[static_cast<std::size_t>(y)] == -1) pi[static_cast<std::size_t>(y)] = free[fi++];

    std::vector<Label> table(g.table.size());
    for (std::size_t x = 0; x < table.size(); ++x)
      table[x] = pi[static_cast<std::size_t>(g.table[x])];
    Hypothesis out{std::move(table)};
    if (!h.contains(out))
      throw invariant_error("erm_symmetric: relabeled hypothesis left the symmetric class");
    return ErmResult{out, false};
  }
  auto res = erm_generic(h, s);
  res.fallback = true;
  return res;
}

ErmResult run_erm(const ErmPolicy& policy, const HypothesisClass& h, const LabeledSample& s) {
  switch (policy.kind) {
    case ErmKind::generic:
      return erm_generic(h, s);
    case ErmKind::bad:
      if (!policy.witness) throw argument_error("bad policy requires a witness");
      return erm_bad(h, s, *policy.witness);
    case ErmKind::good_observed_labels:
      return erm_good_observed_labels(h, s, policy.defaults);
    case ErmKind::symmetric_z:
      return erm_symmetric(h, s, policy.z);
  }
  throw argument_error("unknown policy kind");
}

// ---------------------------------------------------------------------------
// Exhaustive growth instrumentation
// ---------------------------------------------------------------------------

namespace {

// nondecreasing sequences of length `len` over [0, count): multisets
bool next_multiset(std::vector<int>& v, int count) {
  const int len = static_cast<int>(v.size());
  int i = len - 1;
  while (i >= 0 && v[i] == count - 1) --i;
  if (i < 0) return false;
  const int nv = v[i] + 1;
  for (int j = i; j < len; ++j) v[j] = nv;
  return true;
}

bool next_combination_idx(std::vector<int>& c, int n) {
  const int s = static_cast<int>(c.size());
  int i = s - 1;
  while (i >= 0 && c[i] == n - s + i) --i;
  if (i < 0) return false;
  ++c[i];
  for (int j = i + 1; j < s; ++j) c[j] = c[j - 1] + 1;
  return true;
}

struct GrowthAccumulator {
  bool want_growth;  // restriction count over size-m sub-samples; else the
                     // union of output ranges over all proper sub-samples
  const Budget* budget = nullptr;  // charged per learner invocation when set
  std::uint64_t calls = 0;
  int value = 0;

  Hypothesis invoke(const ErmPolicy& policy, const HypothesisClass& h, const LabeledSample& sub) {
    if (budget != nullptr && ++calls > budget->max_enum_samples)
      throw budget_error(fmt("sample enumeration exceeded max_enum_samples=%llu",
                             static_cast<unsigned long long>(budget->max_enum_samples)));
    return run_erm(policy, h, sub).hypothesis;
  }

  void consume(const ErmPolicy& policy, const HypothesisClass& h, const LabeledSample& sample,
               int m) {
    const int two_m = 2 * m;
    if (want_growth) {
      std::vector<Instance> xs;
      for (const auto& [x, y] : sample) {
        (void)y;
        xs.push_back(x);
      }
      std::sort(xs.begin(), xs.end());
      xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

      std::set<std::vector<Label>> restrictions;
      std::vector<int> pick(m);
      for (int i = 0; i < m; ++i) pick[i] = i;
      LabeledSample sub(m);
      do {
        for (int i = 0; i < m; ++i) sub[static_cast<std::size_t>(i)] = sample[pick[i]];
        const Hypothesis out = invoke(policy, h, sub);
        std::vector<Label> sig(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) sig[i] = out(xs[i]);
        restrictions.insert(std::move(sig));
      } while (next_combination_idx(pick, two_m));
      value = std::max(value, static_cast<int>(restrictions.size()));
      return;
    }
    // essential range: union over every proper sub-sample, the empty one
    // included (on which the learner returns the canonical first minimizer)
    if (two_m >= 31)
      throw budget_error("essential range enumerates all proper sub-samples; m too large");
    std::set<Label> range_union;
    const std::uint32_t full_mask = (1u << two_m) - 1;
    for (std::uint32_t mask = 0; mask < full_mask; ++mask) {
      LabeledSample sub;
      for (int i = 0; i < two_m; ++i)
        if (mask & (1u << i)) sub.push_back(sample[static_cast<std::size_t>(i)]);
      const Hypothesis out = invoke(policy, h, sub);
      for (Label y : out.table) range_union.insert(y);
    }
    value = std::max(value, static_cast<int>(range_union.size()));
  }
};

// enumerate all size-2m samples of the requested mode and fold them into acc
void enumerate_samples(const ErmPolicy& policy, const HypothesisClass& h, int m, SampleMode mode,
                       GrowthAccumulator& acc) {
  if (m < 1) throw argument_error("growth instrumentation requires m >= 1");
  const int two_m = 2 * m;
  if (mode == SampleMode::agnostic) {
    // multisets over the (x, y) pair space, in canonical pair order
    const int cells = h.domain_size() * h.label_count();
    std::vector<int> v(two_m, 0);
    LabeledSample sample(two_m);
    do {
      for (int i = 0; i < two_m; ++i)
        sample[static_cast<std::size_t>(i)] = {v[i] / h.label_count(), v[i] % h.label_count()};
      acc.consume(policy, h, sample, m);
    } while (next_multiset(v, cells));
    return;
  }

  // realizable: instance multisets, labeled by each distinct class behavior
  std::vector<int> xs(two_m, 0);
  do {
    std::set<std::vector<Label>> labelings;
    for (const Hypothesis& f : h.hypotheses()) {
      std::vector<Label> lab(two_m);
      for (int i = 0; i < two_m; ++i) lab[static_cast<std::size_t>(i)] = f(xs[i]);
      labelings.insert(std::move(lab));
    }
    LabeledSample sample(two_m);
    for (const auto& lab : labelings) {
      for (int i = 0; i < two_m; ++i)
        sample[static_cast<std::size_t>(i)] = {xs[i], lab[static_cast<std::size_t>(i)]};
      acc.consume(policy, h, sample, m);
    }
  } while (next_multiset(xs, h.domain_size()));
}

LabeledSample random_sample(const ErmPolicy& policy, const HypothesisClass& h, int m,
                            SampleMode mode, Rng& rng) {
  (void)policy;
  LabeledSample sample(2 * static_cast<std::size_t>(m));
  if (mode == SampleMode::realizable) {
    const Hypothesis& f = h[rng.below(h.size())];
    for (auto& [x, y] : sample) {
      x = static_cast<Instance>(rng.below(h.domain_size()));
      y = f(x);
    }
  } else {
    for (auto& [x, y] : sample) {
      x = static_cast<Instance>(rng.below(h.domain_size()));
      y = static_cast<Label>(rng.below(h.label_count()));
    }
  }
  std::sort(sample.begin(), sample.end());
  return sample;
}

}  // namespace

int growth_function(const ErmPolicy& policy, const HypothesisClass& h, int m, SampleMode mode,
                    const Budget& budget) {
  GrowthAccumulator acc{true, &budget};
  enumerate_samples(policy, h, m, mode, acc);
  return acc.value;
}

int essential_range(const ErmPolicy& policy, const HypothesisClass& h, int m, SampleMode mode,
                    const Budget& budget) {
  GrowthAccumulator acc{false, &budget};
  enumerate_samples(policy, h, m, mode, acc);
  return acc.value;
}

int growth_function_mc(const ErmPolicy& policy, const HypothesisClass& h, int m, SampleMode mode,
                       int trials, std::uint64_t seed) {
  if (m < 1 || trials < 1) throw argument_error("growth_function_mc: need m >= 1, trials >= 1");
  GrowthAccumulator acc{true};
  Rng root(seed);
  for (int t = 0; t < trials; ++t) {
    Rng tr = root.split(static_cast<std::uint64_t>(t));
    acc.consume(policy, h, random_sample(policy, h, m, mode, tr), m);
  }
  return acc.value;
}

int essential_range_mc(const ErmPolicy& policy, const HypothesisClass& h, int m, SampleMode mode,
                       int trials, std::uint64_t seed) {
  if (m < 1 || trials < 1) throw argument_error("essential_range_mc: need m >= 1, trials >= 1");
  GrowthAccumulator acc{false};
  Rng root(seed);
  for (int t = 0; t < trials; ++t) {
    Rng tr = root.split(static_cast<std::uint64_t>(t));
    acc.consume(policy, h, random_sample(policy, h, m, mode, tr), m);
  }
  return acc.value;
}

BoundReport double_sampling_bound(int m, double pi, double delta) {
  if (m < 1) throw argument_error("double_sampling_bound: m must be >= 1");
  if (!(pi >= 1)) throw argument_error("double_sampling_bound: pi must be >= 1");
  if (!(delta > 0 && delta < 1))
    throw argument_error("double_sampling_bound: delta must lie in (0, 1)");
  BoundReport r;
  r.m = m;
  r.pi = pi;
  r.delta = delta;
  r.realizable_bound = 12.0 * std::log(2.0 * pi / delta) / m;
  r.agnostic_bound = std::sqrt(32.0 * std::log((4.0 * pi + 4.0) / delta) / m);
  return r;
}

double restricted_range_bound(int dn, int m, int r, double delta, SampleMode mode) {
  if (dn < 0 || m < 1 || r < 1) throw argument_error("restricted_range_bound: need dn >= 0, m >= 1, r >= 1");
  if (!(delta > 0 && delta < 1))
    throw argument_error("restricted_range_bound: delta must lie in (0, 1)");
  // log pi = dn ln(2m) + 2 dn ln(r); the bounds need ln(2 pi / delta) and
  // ln((4 pi + 4) / delta), evaluated without materializing pi
  const double log_pi = dn * std::log(2.0 * m) + 2.0 * dn * std::log(static_cast<double>(r));
  if (mode == SampleMode::realizable)
    return 12.0 * (std::log(2.0) + log_pi - std::log(delta)) / m;
  // ln(4 pi + 4) = ln 4 + ln(pi + 1)
  const double log_pi_plus_1 =
      log_pi > 700 ? log_pi + std::log1p(std::exp(-log_pi)) : std::log1p(std::exp(log_pi));
  return std::sqrt(32.0 * (std::log(4.0) + log_pi_plus_1 - std::log(delta)) / m);
}

}  // namespace mclearn
