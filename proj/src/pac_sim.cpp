#include "mclearn/pac_sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "internal_util.hpp"
#include "mclearn/errors.hpp"

namespace mclearn {

using detail::fmt;

DiscreteDistribution::DiscreteDistribution(int d, int k, std::vector<DistributionAtom> entries)
    : d_(d), k_(k) {
  if (d < 1 || k < 1) throw argument_error("distribution needs d >= 1 and k >= 1");
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  double total = 0;
  for (const auto& a : entries) {
    if (a.x < 0 || a.x >= d || a.y < 0 || a.y >= k)
      throw argument_error(fmt("distribution atom (%d, %d) outside [0, %d) x [0, %d)", a.x, a.y,
                               d, k));
    if (!(a.p >= 0)) throw argument_error(fmt("atom (%d, %d) has negative mass", a.x, a.y));
    total += a.p;
    if (!atoms_.empty() && atoms_.back().x == a.x && atoms_.back().y == a.y)
      atoms_.back().p += a.p;
    else
      atoms_.push_back(a);
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw argument_error(fmt("distribution mass %.15f not within 1e-12 of 1", total));
  atoms_.erase(
      std::remove_if(atoms_.begin(), atoms_.end(), [](const auto& a) { return a.p == 0; }),
      atoms_.end());
}

std::vector<double> DiscreteDistribution::instance_marginals() const {
  std::vector<double> out(static_cast<std::size_t>(d_), 0.0);
  for (const auto& a : atoms_) out[static_cast<std::size_t>(a.x)] += a.p;
  return out;
}

std::vector<double> DiscreteDistribution::label_marginals() const {
  std::vector<double> out(static_cast<std::size_t>(k_), 0.0);
  for (const auto& a : atoms_) out[static_cast<std::size_t>(a.y)] += a.p;
  return out;
}

DiscreteDistribution parse_distribution_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw argument_error(fmt("distribution JSON: %s", e.what()));
  }
  if (!doc.is_object() || !doc.contains("d") || !doc.contains("k") || !doc.contains("entries"))
    throw argument_error("distribution JSON needs keys d, k, entries");
  if (!doc["d"].is_number_integer() || !doc["k"].is_number_integer() ||
      !doc["entries"].is_array())
    throw argument_error("distribution JSON: d and k must be integers, entries an array");
  std::vector<DistributionAtom> atoms;
  for (const auto& e : doc["entries"]) {
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() ||
        !e[1].is_number_integer() || !e[2].is_number())
      throw argument_error("distribution JSON: each entry must be [x, y, p]");
    atoms.push_back({e[0].get<Instance>(), e[1].get<Label>(), e[2].get<double>()});
  }
  return DiscreteDistribution(doc["d"].get<int>(), doc["k"].get<int>(), std::move(atoms));
}

DiscreteDistribution load_distribution_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw argument_error(fmt("cannot open %s", path.c_str()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_distribution_json(buf.str());
}

namespace {

void check_shapes(const Hypothesis& h, const DiscreteDistribution& dist) {
  if (static_cast<int>(h.table.size()) != dist.domain_size())
    throw argument_error(fmt("hypothesis domain %d vs distribution domain %d",
                             static_cast<int>(h.table.size()), dist.domain_size()));
  for (Label y : h.table)
    if (y < 0 || y >= dist.label_count())
      throw argument_error(fmt("hypothesis label %d outside distribution's [0, %d)", y,
                               dist.label_count()));
}

void check_shapes(const HypothesisClass& h, const DiscreteDistribution& dist) {
  if (h.domain_size() != dist.domain_size() || h.label_count() != dist.label_count())
    throw argument_error(fmt("class shape (%d, %d) vs distribution shape (%d, %d)",
                             h.domain_size(), h.label_count(), dist.domain_size(),
                             dist.label_count()));
}

}  // namespace

double true_error(const Hypothesis& h, const DiscreteDistribution& dist) {
  check_shapes(h, dist);
  double err = 0;
  for (const auto& a : dist.atoms())
    if (h(a.x) != a.y) err += a.p;
  return err;
}

double approximation_error(const HypothesisClass& h, const DiscreteDistribution& dist) {
  check_shapes(h, dist);
  double best = 2.0;
  for (const Hypothesis& f : h.hypotheses()) best = std::min(best, true_error(f, dist));
  return best;
}

LabeledSample draw_sample(const DiscreteDistribution& dist, int m, Rng& rng) {
  if (m < 0) throw argument_error("draw_sample: m must be >= 0");
  std::vector<double> cdf;
  cdf.reserve(dist.atoms().size());
  double acc = 0;
  for (const auto& a : dist.atoms()) {
    acc += a.p;
    cdf.push_back(acc);
  }
  LabeledSample s;
  s.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const double u = rng.next_double();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const std::size_t idx =
        it == cdf.end() ? dist.atoms().size() - 1
                        : static_cast<std::size_t>(std::distance(cdf.begin(), it));
    const auto& a = dist.atoms()[idx];
    s.push_back({a.x, a.y});
  }
  return s;
}

LabeledSample draw_sample(const DiscreteDistribution& dist, int m, std::uint64_t seed) {
  Rng rng(seed);
  return draw_sample(dist, m, rng);
}

DiscreteDistribution badlb_distribution(const Hypothesis& f0, int k, double epsilon) {
  const int d = static_cast<int>(f0.table.size());
  if (d < 2) throw argument_error("badlb_distribution: needs at least 2 instances");
  // the lower-bound theorem's guarantee holds for epsilon < 1/12; the
  // distribution itself only needs the instance-0 mass 1-2e to stay positive
  if (!(epsilon > 0 && epsilon < 0.5))
    throw argument_error("badlb_distribution: epsilon must lie in (0, 1/2)");
  std::vector<DistributionAtom> atoms;
  atoms.push_back({0, f0(0), 1.0 - 2.0 * epsilon});
  for (Instance x = 1; x < d; ++x) atoms.push_back({x, f0(x), 2.0 * epsilon / (d - 1)});
  return DiscreteDistribution(d, k, std::move(atoms));
}

WilsonInterval wilson95(int successes, int trials) {
  if (trials < 1 || successes < 0 || successes > trials)
    throw argument_error("wilson95: need 0 <= successes <= trials, trials >= 1");
  constexpr double z = 1.959964;
  const double n = trials;
  const double phat = successes / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (phat + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  WilsonInterval w;
  w.lower = std::max(0.0, center - half);
  w.upper = std::min(1.0, center + half);
  return w;
}

FailureRateProbe probe_failure_rate(const ErmPolicy& policy, const HypothesisClass& h,
                                    const DiscreteDistribution& dist, double epsilon, int m,
                                    int trials, std::uint64_t seed) {
  check_shapes(h, dist);
  if (m < 1 || trials < 1) throw argument_error("probe_failure_rate: need m >= 1, trials >= 1");
  if (!(epsilon > 0)) throw argument_error("probe_failure_rate: epsilon must be positive");
  const double approx = approximation_error(h, dist);
  Rng root(seed);
  Rng probe_stream = root.split(static_cast<std::uint64_t>(m));
  int failures = 0;
  for (int t = 0; t < trials; ++t) {
    Rng tr = probe_stream.split(static_cast<std::uint64_t>(t));
    const LabeledSample s = draw_sample(dist, m, tr);
    const Hypothesis out = run_erm(policy, h, s).hypothesis;
    if (true_error(out, dist) - approx > epsilon) ++failures;
  }
  FailureRateProbe p;
  p.m = m;
  p.failures = failures;
  p.trials = trials;
  p.rate = static_cast<double>(failures) / trials;
  p.ci = wilson95(failures, trials);
  return p;
}

SampleComplexityEstimate estimate_sample_complexity(const ErmPolicy& policy,
                                                    const HypothesisClass& h,
                                                    const DiscreteDistribution& dist,
                                                    double epsilon, double delta, int trials,
                                                    std::uint64_t seed, int m_max) {
  check_shapes(h, dist);
  if (trials < 100) throw argument_error("estimate_sample_complexity: trials must be >= 100");
  if (!(delta > 0 && delta < 1))
    throw argument_error("estimate_sample_complexity: delta must lie in (0, 1)");
  if (m_max < 1) throw argument_error("estimate_sample_complexity: m_max must be >= 1");

  SampleComplexityEstimate est;
  est.epsilon = epsilon;
  est.delta = delta;
  est.m_max = m_max;
  est.trials = trials;
  est.seed = seed;

  auto probe = [&](int m) -> const FailureRateProbe& {
    est.probes.push_back(probe_failure_rate(policy, h, dist, epsilon, m, trials, seed));
    return est.probes.back();
  };
  auto passes = [&](const FailureRateProbe& p) { return p.ci.upper <= delta; };

  int lo = 0;  // largest failing m seen (0 = none)
  int hi = 0;  // smallest passing m seen (0 = none)
  int m = 1;
  for (;;) {
    const auto& p = probe(m);
    if (passes(p)) {
      hi = m;
      break;
    }
    lo = m;
    if (m >= m_max) break;
    m = std::min(2 * m, m_max);
  }
  if (hi == 0) {
    est.exceeded_m_max = true;
    est.m_hat = m_max;
  } else {
    while (hi - lo > 1) {
      const int mid = lo + (hi - lo) / 2;
      if (passes(probe(mid)))
        hi = mid;
      else
        lo = mid;
    }
    est.m_hat = hi;
  }
  for (const auto& p : est.probes)
    if (p.m == est.m_hat) {
      est.failure_rate_at_m = p.rate;
      est.ci_at_m = p.ci;
    }
  return est;
}

double missing_mass_exceeds_probability(const std::vector<double>& masses, int m,
                                        double epsilon) {
  const int d = static_cast<int>(masses.size());
  if (d < 1) throw argument_error("missing_mass: needs at least one instance");
  if (d > 20) throw budget_error("missing_mass: instance count capped at 20");
  if (m < 0) throw argument_error("missing_mass: m must be >= 0");
  double total = 0;
  for (double p : masses) {
    if (!(p >= 0)) throw argument_error("missing_mass: masses must be non-negative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw argument_error(fmt("missing_mass: masses sum to %.12f, expected 1", total));

  const std::size_t size = std::size_t{1} << d;
  std::vector<double> f(size);
  std::vector<double> mass(size);
  for (std::size_t set = 0; set < size; ++set) {
    double s = 0;
    for (int i = 0; i < d; ++i)
      if (set & (std::size_t{1} << i)) s += masses[static_cast<std::size_t>(i)];
    mass[set] = s;
    f[set] = std::pow(1.0 - std::min(1.0, s), m);
  }
  // f[set] = Pr(no draw lands in set) = Pr(set is entirely missed); invert
  // over the superset lattice so f[set] = Pr(missed set is exactly this one)
  for (int b = 0; b < d; ++b)
    for (std::size_t set = 0; set < size; ++set)
      if (!(set & (std::size_t{1} << b))) f[set] -= f[set | (std::size_t{1} << b)];
  double out = 0;
  for (std::size_t set = 0; set < size; ++set)
    if (mass[set] > epsilon) out += f[set];
  return std::min(1.0, std::max(0.0, out));
}

ChernBound chern_substitute_bound(double alpha, const std::vector<double>& phat) {
  if (!(alpha > 0 && alpha <= 1)) throw argument_error("chern bound: alpha must lie in (0, 1]");
  if (phat.empty()) throw argument_error("chern bound: empty frequency table");
  double total = 0;
  double sumsq = 0;
  for (double p : phat) {
    if (!(p >= 0)) throw argument_error("chern bound: frequencies must be non-negative");
    total += p;
    sumsq += p * p;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw argument_error(fmt("chern bound: frequencies sum to %.12f, expected 1", total));
  const double k = static_cast<double>(phat.size());
  ChernBound b;
  b.gamma = alpha * alpha / sumsq;
  b.log_raw = (b.gamma / 2.0) * (std::log(8.0 * k) + 1.0 - 2.0 * std::log(b.gamma));
  b.raw = std::exp(b.log_raw);
  b.bound = b.log_raw >= 0 ? 1.0 : std::exp(b.log_raw);
  return b;
}

BijectionExperimentReport random_bijection_experiment(const HypothesisClass& h,
                                                      const DiscreteDistribution& dist,
                                                      double alpha, int trials,
                                                      std::uint64_t seed) {
  check_shapes(h, dist);
  if (!(alpha > 0 && alpha <= 1))
    throw argument_error("bijection experiment: alpha must lie in (0, 1]");
  if (trials < 0) throw argument_error("bijection experiment: trials must be >= 0");
  const int k = h.label_count();
  const auto marginals = dist.label_marginals();
  for (Label y = 0; y < k; ++y)
    if (marginals[static_cast<std::size_t>(y)] > 10.0 / k + 1e-12)
      throw argument_error(fmt("bijection experiment: label %d has marginal %.6f > 10/k = %.6f",
                               y, marginals[static_cast<std::size_t>(y)], 10.0 / k));

  BijectionExperimentReport rep;
  rep.trials = trials;
  rep.alpha = alpha;
  rep.seed = seed;
  rep.chern = chern_substitute_bound(alpha, marginals);

  Rng root(seed);
  std::vector<Label> phi(static_cast<std::size_t>(k));
  for (int t = 0; t < trials; ++t) {
    Rng tr = root.split(static_cast<std::uint64_t>(t));
    for (Label y = 0; y < k; ++y) phi[static_cast<std::size_t>(y)] = y;
    for (int i = k - 1; i >= 1; --i)
      std::swap(phi[static_cast<std::size_t>(i)],
                phi[static_cast<std::size_t>(tr.below(static_cast<std::uint64_t>(i) + 1))]);
    std::vector<Hypothesis> relabeled;
    relabeled.reserve(h.size());
    for (const Hypothesis& f : h.hypotheses()) {
      std::vector<Label> table(f.table.size());
      for (std::size_t x = 0; x < table.size(); ++x)
        table[x] = phi[static_cast<std::size_t>(f.table[x])];
      relabeled.push_back(Hypothesis{std::move(table)});
    }
    const HypothesisClass relabeled_class(h.domain_size(), k, std::move(relabeled));
    if (approximation_error(relabeled_class, dist) + 1e-12 >= 1.0 - alpha) ++rep.count;
  }
  if (trials > 0) rep.fraction = static_cast<double>(rep.count) / trials;
  return rep;
}

}  // namespace mclearn
