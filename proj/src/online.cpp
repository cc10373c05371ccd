#include "mclearn/online.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "internal_util.hpp"
#include "mclearn/errors.hpp"

namespace mclearn {

using detail::fmt;

std::string transcript_to_jsonl(const OnlineTranscript& t) {
  std::string out;
  for (std::size_t i = 0; i < t.rounds.size(); ++i) {
    const OnlineRound& r = t.rounds[i];
    nlohmann::ordered_json line;
    line["round"] = static_cast<int>(i);
    line["x"] = r.x;
    line["prediction"] = r.prediction;
    line["truth"] = r.truth;
    line["mistake"] = r.mistake;
    out += line.dump();
    out += '\n';
  }
  return out;
}

std::string sequence_to_jsonl(const LabeledSequence& s) {
  std::string out;
  for (const auto& [x, y] : s) {
    nlohmann::ordered_json line;
    line["x"] = x;
    line["y"] = y;
    out += line.dump();
    out += '\n';
  }
  return out;
}

LabeledSequence parse_sequence_jsonl(const std::string& text) {
  LabeledSequence out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw argument_error(fmt("sequence line %d: %s", lineno, e.what()));
    }
    if (!doc.is_object() || !doc.contains("x") || !doc.contains("y") ||
        !doc["x"].is_number_integer() || !doc["y"].is_number_integer())
      throw argument_error(fmt("sequence line %d: need integer keys x and y", lineno));
    out.emplace_back(doc["x"].get<Instance>(), doc["y"].get<Label>());
  }
  return out;
}

SoaStepResult soa_step(LdimCache& cache, const MemberMask& v, Instance x) {
  if (v.none()) throw protocol_error("soa_step: empty version space (unrealizable feed)");
  const int d = cache.base().domain_size();
  const int k = cache.base().label_count();
  if (x < 0 || x >= d) throw argument_error(fmt("soa_step: instance %d outside [0, %d)", x, d));
  SoaStepResult r;
  r.dim = cache.eval(v);
  r.subclass_dims.assign(static_cast<std::size_t>(k), -1);
  int best = -2;
  int at_full_dim = 0;
  for (Label y = 0; y < k; ++y) {
    const int dy = cache.eval(v & cache.members_with(x, y));
    r.subclass_dims[static_cast<std::size_t>(y)] = dy;
    if (dy == r.dim) ++at_full_dim;
    if (dy > best) {
      best = dy;
      r.prediction = y;
    }
  }
  if (at_full_dim > 1)
    throw invariant_error(
        fmt("soa_step: %d labels keep dimension %d at instance %d", at_full_dim, r.dim, x));
  return r;
}

namespace {

void check_point(const HypothesisClass& h, Instance x, Label y, const char* who) {
  if (x < 0 || x >= h.domain_size() || y < 0 || y >= h.label_count())
    throw argument_error(fmt("%s: pair (%d, %d) outside [0, %d) x [0, %d)", who, x, y,
                             h.domain_size(), h.label_count()));
}

}  // namespace

SoaLearner::SoaLearner(const HypothesisClass& h, LdimCache* shared) : h_(&h) {
  if (h.size() == 0) throw argument_error("SoaLearner: class is empty");
  if (shared) {
    if (!(shared->base() == h))
      throw argument_error("SoaLearner: shared cache was built over a different class");
    cache_ = shared;
  } else {
    owned_ = std::make_unique<LdimCache>(h);
    cache_ = owned_.get();
  }
  v_ = cache_->full();
}

Label SoaLearner::predict(Instance x) { return soa_step(*cache_, v_, x).prediction; }

void SoaLearner::observe(Instance x, Label y) {
  check_point(*h_, x, y, "SoaLearner::observe");
  v_ = v_ & cache_->members_with(x, y);
}

FirstConsistentLearner::FirstConsistentLearner(const HypothesisClass& h)
    : h_(&h), alive_(h.size(), true) {
  if (h.size() == 0) throw argument_error("FirstConsistentLearner: class is empty");
}

Label FirstConsistentLearner::predict(Instance x) {
  if (x < 0 || x >= h_->domain_size())
    throw argument_error(fmt("FirstConsistentLearner: instance %d outside [0, %d)", x,
                             h_->domain_size()));
  for (std::size_t i = 0; i < alive_.size(); ++i)
    if (alive_[i]) return (*h_)[i](x);
  return (*h_)[0](x);  // inconsistent history; fall back to the canonical first
}

void FirstConsistentLearner::observe(Instance x, Label y) {
  check_point(*h_, x, y, "FirstConsistentLearner::observe");
  for (std::size_t i = 0; i < alive_.size(); ++i)
    if (alive_[i] && (*h_)[i](x) != y) alive_[i] = false;
}

MajorityLearner::MajorityLearner(const HypothesisClass& h) : h_(&h), alive_(h.size(), true) {
  if (h.size() == 0) throw argument_error("MajorityLearner: class is empty");
}

Label MajorityLearner::predict(Instance x) {
  if (x < 0 || x >= h_->domain_size())
    throw argument_error(fmt("MajorityLearner: instance %d outside [0, %d)", x, h_->domain_size()));
  std::vector<int> votes(static_cast<std::size_t>(h_->label_count()), 0);
  for (std::size_t i = 0; i < alive_.size(); ++i)
    if (alive_[i]) ++votes[static_cast<std::size_t>((*h_)[i](x))];
  Label best = 0;
  for (Label y = 1; y < h_->label_count(); ++y)
    if (votes[static_cast<std::size_t>(y)] > votes[static_cast<std::size_t>(best)]) best = y;
  return best;
}

void MajorityLearner::observe(Instance x, Label y) {
  check_point(*h_, x, y, "MajorityLearner::observe");
  for (std::size_t i = 0; i < alive_.size(); ++i)
    if (alive_[i] && (*h_)[i](x) != y) alive_[i] = false;
}

OnlineTranscript soa_run(const HypothesisClass& h, const LabeledSequence& sequence,
                         LdimCache* shared) {
  if (h.size() == 0) throw argument_error("soa_run: class is empty");
  std::unique_ptr<LdimCache> owned;
  LdimCache* cache = shared;
  if (cache) {
    if (!(cache->base() == h))
      throw argument_error("soa_run: shared cache was built over a different class");
  } else {
    owned = std::make_unique<LdimCache>(h);
    cache = owned.get();
  }

  MemberMask check = cache->full();
  for (std::size_t t = 0; t < sequence.size(); ++t) {
    const auto [x, y] = sequence[t];
    check_point(h, x, y, "soa_run");
    check = check & cache->members_with(x, y);
    if (check.none())
      throw protocol_error(
          fmt("sequence not realizable: no hypothesis is consistent through round %d",
              static_cast<int>(t)));
  }

  OnlineTranscript out;
  out.learner = "soa";
  MemberMask v = cache->full();
  for (const auto& [x, y] : sequence) {
    const Label pred = soa_step(*cache, v, x).prediction;
    const OnlineRound r{x, pred, y, pred != y};
    out.mistakes += r.mistake ? 1 : 0;
    out.rounds.push_back(r);
    v = v & cache->members_with(x, y);
  }
  return out;
}

AdversaryResult realizable_adversary(const HypothesisClass& h, OnlineLearner& learner,
                                     const Budget& budget) {
  if (h.size() == 0) throw argument_error("realizable_adversary: class is empty");
  const TreeResult lr = littlestone_dim(h, budget);
  const int k = h.label_count();
  AdversaryResult out;
  std::size_t node = 0;
  for (int level = 0; level < lr.dim; ++level) {
    const Instance x = lr.tree.node_instance[node];
    const Label pred = learner.predict(x);
    if (pred < 0 || pred >= k)
      throw protocol_error(fmt("learner predicted %d outside [0, %d)", pred, k));
    const auto& e = lr.tree.edge_labels[node];
    int j;  // branch whose edge label differs from the prediction, lowest first
    if (e[0] != pred && e[1] != pred)
      j = e[0] <= e[1] ? 0 : 1;
    else
      j = e[0] == pred ? 1 : 0;
    const Label y = e[static_cast<std::size_t>(j)];
    learner.observe(x, y);
    out.sequence.emplace_back(x, y);
    if (pred != y) ++out.mistakes;
    node = 2 * node + 1 + static_cast<std::size_t>(j);
  }
  for (const Hypothesis& f : h.hypotheses()) {
    bool ok = true;
    for (const auto& [x, y] : out.sequence)
      if (f(x) != y) {
        ok = false;
        break;
      }
    if (ok) {
      out.consistent = f;
      return out;
    }
  }
  throw invariant_error("realizable_adversary: walked a path no hypothesis realizes");
}

std::uint64_t agnostic_expert_count(int ld, int T, int k) {
  if (ld < 0 || T < 0 || k < 1)
    throw argument_error("agnostic_expert_count: need ld >= 0, T >= 0, k >= 1");
  const std::uint64_t sat = UINT64_MAX;
  const int jmax = std::min(ld, T);
  unsigned __int128 total = 0;
  std::uint64_t comb = 1;  // C(T, j)
  std::uint64_t kpow = 1;  // k^j
  for (int j = 0;; ++j) {
    total += static_cast<unsigned __int128>(comb) * kpow;
    if (total > sat) return sat;
    if (j == jmax) break;
    const unsigned __int128 next_comb =
        static_cast<unsigned __int128>(comb) * static_cast<std::uint64_t>(T - j) /
        static_cast<std::uint64_t>(j + 1);
    const unsigned __int128 next_kpow =
        static_cast<unsigned __int128>(kpow) * static_cast<std::uint64_t>(k);
    if (next_comb > sat || next_kpow > sat) return sat;
    comb = static_cast<std::uint64_t>(next_comb);
    kpow = static_cast<std::uint64_t>(next_kpow);
  }
  return static_cast<std::uint64_t>(total);
}

std::vector<ExpertSpec> build_agnostic_experts(const HypothesisClass& h, int T,
                                               const Budget& budget, LdimCache* shared) {
  if (h.size() == 0) throw argument_error("build_agnostic_experts: class is empty");
  if (T < 1) throw argument_error("build_agnostic_experts: need T >= 1");
  std::unique_ptr<LdimCache> owned;
  LdimCache* cache = shared;
  if (cache) {
    if (!(cache->base() == h))
      throw argument_error("build_agnostic_experts: shared cache was built over a different class");
  } else {
    owned = std::make_unique<LdimCache>(h, budget);
    cache = owned.get();
  }
  const int ld = cache->eval(cache->full());
  const int k = h.label_count();
  const std::uint64_t n = agnostic_expert_count(ld, T, k);
  if (n == UINT64_MAX || n > budget.max_expert_count)
    throw budget_error(fmt("max_expert_count: %llu experts for ld=%d, T=%d, k=%d exceed %llu",
                           static_cast<unsigned long long>(n), ld, T, k,
                           static_cast<unsigned long long>(budget.max_expert_count)));

  std::vector<ExpertSpec> out;
  out.reserve(n);
  const int jmax = std::min(ld, T);
  for (int j = 0; j <= jmax; ++j) {
    std::vector<int> idx(static_cast<std::size_t>(j));
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      ExpertSpec spec;
      spec.rounds = idx;
      spec.labels.assign(static_cast<std::size_t>(j), 0);
      while (true) {
        out.push_back(spec);
        int p = j - 1;  // odometer: last position fastest
        while (p >= 0 && spec.labels[static_cast<std::size_t>(p)] == k - 1) {
          spec.labels[static_cast<std::size_t>(p)] = 0;
          --p;
        }
        if (p < 0) break;
        ++spec.labels[static_cast<std::size_t>(p)];
      }
      // next size-j subset of [T], lexicographic
      int p = j - 1;
      while (p >= 0 && idx[static_cast<std::size_t>(p)] == T - j + p) --p;
      if (p < 0) break;
      ++idx[static_cast<std::size_t>(p)];
      for (int q = p + 1; q < j; ++q)
        idx[static_cast<std::size_t>(q)] = idx[static_cast<std::size_t>(q - 1)] + 1;
    }
  }
  if (out.size() != n)
    throw invariant_error(fmt("expert enumeration produced %llu specs, count formula says %llu",
                              static_cast<unsigned long long>(out.size()),
                              static_cast<unsigned long long>(n)));
  return out;
}

ImitatorExpert::ImitatorExpert(const ExpertSpec& spec, LdimCache& cache)
    : spec_(&spec), cache_(&cache), v_(cache.full()) {
  if (spec.rounds.size() != spec.labels.size())
    throw argument_error("ImitatorExpert: rounds and labels must pair up");
  for (std::size_t i = 1; i < spec.rounds.size(); ++i)
    if (spec.rounds[i] <= spec.rounds[i - 1])
      throw argument_error("ImitatorExpert: rounds must be strictly increasing");
  for (const Label y : spec.labels)
    if (y < 0 || y >= cache.base().label_count())
      throw argument_error(fmt("ImitatorExpert: label %d outside [0, %d)", y,
                               cache.base().label_count()));
  if (!spec.rounds.empty() && spec.rounds.front() < 0)
    throw argument_error("ImitatorExpert: rounds must be non-negative");
}

Label ImitatorExpert::advance(Instance x) {
  if (x < 0 || x >= cache_->base().domain_size())
    throw argument_error(fmt("ImitatorExpert: instance %d outside [0, %d)", x,
                             cache_->base().domain_size()));
  Label pred;
  if (next_override_ < spec_->rounds.size() && spec_->rounds[next_override_] == t_) {
    pred = spec_->labels[next_override_];
    ++next_override_;
  } else if (v_.none()) {
    pred = 0;  // imitated space ran dry under its own corrections
  } else {
    pred = soa_step(*cache_, v_, x).prediction;
  }
  v_ = v_ & cache_->members_with(x, pred);  // updates with its OWN prediction
  ++t_;
  return pred;
}

LeaReport lea_run(const std::vector<std::vector<Label>>& advice, const LabeledSequence& sequence,
                  std::uint64_t seed) {
  const std::size_t n = advice.size();
  const std::size_t T = sequence.size();
  if (n == 0) throw argument_error("lea_run: need at least one expert");
  if (T == 0) throw argument_error("lea_run: need at least one round");
  for (std::size_t i = 0; i < n; ++i)
    if (advice[i].size() != T)
      throw argument_error(fmt("lea_run: expert %d gives %d advice entries for %d rounds",
                               static_cast<int>(i), static_cast<int>(advice[i].size()),
                               static_cast<int>(T)));

  LeaReport rep;
  rep.expert_count = static_cast<int>(n);
  rep.eta = std::sqrt(8.0 * std::log(static_cast<double>(n)) / static_cast<double>(T));
  rep.expert_losses.assign(n, 0);
  rep.transcript.learner = "lea";
  rep.transcript.seed = seed;

  Rng rng(seed);
  std::vector<double> weights(n);
  for (std::size_t t = 0; t < T; ++t) {
    const auto [x, y] = sequence[t];
    // shift by the min loss so the weights stay in (0, 1]
    const int min_loss = *std::min_element(rep.expert_losses.begin(), rep.expert_losses.end());
    double total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      weights[i] = std::exp(-rep.eta * (rep.expert_losses[i] - min_loss));
      total += weights[i];
    }
    const double u = rng.next_double() * total;
    std::size_t pick = n - 1;
    double acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += weights[i];
      if (u < acc) {
        pick = i;
        break;
      }
    }
    const Label pred = advice[pick][t];
    const OnlineRound r{x, pred, y, pred != y};
    rep.transcript.mistakes += r.mistake ? 1 : 0;
    rep.transcript.rounds.push_back(r);
    for (std::size_t i = 0; i < n; ++i)
      if (advice[i][t] != y) ++rep.expert_losses[i];
  }
  rep.best_expert_loss = *std::min_element(rep.expert_losses.begin(), rep.expert_losses.end());
  return rep;
}

AgnosticRunReport agnostic_online_run(const HypothesisClass& h, const LabeledSequence& sequence,
                                      std::uint64_t seed, const Budget& budget) {
  if (h.size() == 0) throw argument_error("agnostic_online_run: class is empty");
  const int T = static_cast<int>(sequence.size());
  if (T < 1) throw argument_error("agnostic_online_run: need at least one round");
  for (const auto& [x, y] : sequence) check_point(h, x, y, "agnostic_online_run");

  LdimCache cache(h, budget);
  AgnosticRunReport rep;
  rep.littlestone = cache.eval(cache.full());
  const std::vector<ExpertSpec> specs = build_agnostic_experts(h, T, budget, &cache);

  std::vector<std::vector<Label>> advice(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    ImitatorExpert e(specs[i], cache);
    advice[i].reserve(static_cast<std::size_t>(T));
    for (const auto& [x, y] : sequence) advice[i].push_back(e.advance(x));
  }
  rep.lea = lea_run(advice, sequence, seed);

  int best = T + 1;
  for (const Hypothesis& f : h.hypotheses()) {
    int loss = 0;
    for (const auto& [x, y] : sequence) loss += f(x) != y ? 1 : 0;
    best = std::min(best, loss);
  }
  rep.best_hypothesis_loss = best;
  rep.regret_bound = std::sqrt(0.5 * rep.littlestone * T *
                               std::log(static_cast<double>(T) * h.label_count()));
  return rep;
}

}  // namespace mclearn
