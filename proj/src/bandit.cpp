#include "mclearn/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "internal_util.hpp"
#include "mclearn/errors.hpp"

namespace mclearn {

using detail::fmt;

namespace {

MemberMask andnot(const MemberMask& a, const MemberMask& b) {
  MemberMask r;
  for (int i = 0; i < 4; ++i) r.w[static_cast<std::size_t>(i)] =
      a.w[static_cast<std::size_t>(i)] & ~b.w[static_cast<std::size_t>(i)];
  return r;
}

}  // namespace

std::string bandit_transcript_to_jsonl(const BanditTranscript& t) {
  std::string out;
  for (std::size_t i = 0; i < t.rounds.size(); ++i) {
    const BanditRound& r = t.rounds[i];
    nlohmann::ordered_json line;
    line["round"] = static_cast<int>(i);
    line["x"] = r.x;
    line["guess"] = r.guess;
    line["correct"] = r.correct;
    out += line.dump();
    out += '\n';
  }
  return out;
}

std::vector<BanditRound> parse_bandit_rounds_jsonl(const std::string& text) {
  std::vector<BanditRound> out;
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
      throw argument_error(fmt("bandit round line %d: %s", lineno, e.what()));
    }
    if (!doc.is_object() || !doc.contains("x") || !doc.contains("guess") ||
        !doc.contains("correct") || !doc["x"].is_number_integer() ||
        !doc["guess"].is_number_integer() || !doc["correct"].is_boolean())
      throw argument_error(
          fmt("bandit round line %d: need integer x, integer guess, boolean correct", lineno));
    out.push_back({doc["x"].get<Instance>(), doc["guess"].get<Label>(),
                   doc["correct"].get<bool>()});
  }
  return out;
}

bool HiddenLabelingOracle::query(Instance x, Label guess) {
  if (x < 0 || x >= static_cast<Instance>(f_.table.size()))
    throw argument_error(fmt("hidden labeling oracle: instance %d outside [0, %d)", x,
                             static_cast<int>(f_.table.size())));
  return f_(x) == guess;
}

bool ReplayOracle::query(Instance x, Label guess) {
  if (next_ >= rounds_.size())
    throw protocol_error(fmt("replay oracle: query %d past the end of the recording",
                             static_cast<int>(next_)));
  const BanditRound& r = rounds_[next_];
  if (r.x != x || r.guess != guess)
    throw protocol_error(fmt("replay oracle: round %d recorded (x=%d, guess=%d), got (x=%d, "
                             "guess=%d)",
                             static_cast<int>(next_), r.x, r.guess, x, guess));
  ++next_;
  return r.correct;
}

BsoaStepResult bsoa_step(BldimCache& cache, const MemberMask& v, Instance x) {
  if (v.none()) throw protocol_error("bsoa_step: empty version space (inconsistent oracle)");
  const int d = cache.base().domain_size();
  const int k = cache.base().label_count();
  if (x < 0 || x >= d) throw argument_error(fmt("bsoa_step: instance %d outside [0, %d)", x, d));
  BsoaStepResult r;
  r.dim = cache.eval(v);
  r.subclass_dims.assign(static_cast<std::size_t>(k), 0);
  int best = INT32_MAX;
  for (Label y = 0; y < k; ++y) {
    const int dy = cache.eval(andnot(v, cache.members_with(x, y)));
    r.subclass_dims[static_cast<std::size_t>(y)] = dy;
    if (dy < best) {
      best = dy;
      r.guess = y;
    }
  }
  if (best >= r.dim)
    throw invariant_error(
        fmt("bsoa_step: no label shrinks dimension %d at instance %d", r.dim, x));
  return r;
}

BsoaLearner::BsoaLearner(const HypothesisClass& h, BldimCache* shared,
                         bool filter_correct_guesses)
    : h_(&h), filter_(filter_correct_guesses) {
  if (h.size() == 0) throw argument_error("BsoaLearner: class is empty");
  if (shared) {
    if (!(shared->base() == h))
      throw argument_error("BsoaLearner: shared cache was built over a different class");
    cache_ = shared;
  } else {
    owned_ = std::make_unique<BldimCache>(h);
    cache_ = owned_.get();
  }
  v_ = cache_->full();
}

Label BsoaLearner::predict(Instance x) { return bsoa_step(*cache_, v_, x).guess; }

void BsoaLearner::observe(Instance x, Label guess, bool correct) {
  if (x < 0 || x >= h_->domain_size() || guess < 0 || guess >= h_->label_count())
    throw argument_error(fmt("BsoaLearner::observe: pair (%d, %d) outside [0, %d) x [0, %d)", x,
                             guess, h_->domain_size(), h_->label_count()));
  if (!correct)
    v_ = andnot(v_, cache_->members_with(x, guess));
  else if (filter_)
    v_ = v_ & cache_->members_with(x, guess);
}

BanditTranscript bsoa_run(const HypothesisClass& h, const std::vector<Instance>& xs,
                          BanditOracle& oracle, BldimCache* shared,
                          bool filter_correct_guesses) {
  BsoaLearner learner(h, shared, filter_correct_guesses);
  BanditTranscript out;
  out.learner = learner.name();
  for (std::size_t t = 0; t < xs.size(); ++t) {
    const Instance x = xs[t];
    const Label guess = learner.predict(x);
    const bool correct = oracle.query(x, guess);
    learner.observe(x, guess, correct);
    out.rounds.push_back({x, guess, correct});
    out.mistakes += correct ? 0 : 1;
    if (learner.version_space().none())
      throw protocol_error(
          fmt("round %d: feedback contradicts every hypothesis (oracle %s inconsistent)",
              static_cast<int>(t), oracle.name()));
  }
  return out;
}

BanditAdversaryResult bandit_adversary(const HypothesisClass& h, BanditLearner& learner,
                                       const Budget& budget) {
  if (h.size() == 0) throw argument_error("bandit_adversary: class is empty");
  const BanditTreeResult br = bandit_littlestone_dim(h, budget);
  const int k = h.label_count();
  BanditAdversaryResult out;
  out.transcript.learner = learner.name();
  std::size_t node = 0;
  for (int level = 0; level < br.dim; ++level) {
    const Instance x = br.tree.node_instance[node];
    const Label guess = learner.predict(x);
    if (guess < 0 || guess >= k)
      throw protocol_error(fmt("learner guessed %d outside [0, %d)", guess, k));
    learner.observe(x, guess, false);
    out.transcript.rounds.push_back({x, guess, false});
    ++out.transcript.mistakes;
    node = node * static_cast<std::size_t>(k) + static_cast<std::size_t>(guess) + 1;
  }
  for (const Hypothesis& f : h.hypotheses()) {
    bool ok = true;
    for (const BanditRound& r : out.transcript.rounds)
      if (f(r.x) == r.guess) {
        ok = false;
        break;
      }
    if (ok) {
      out.consistent = f;
      return out;
    }
  }
  throw invariant_error("bandit_adversary: walked a path no hypothesis avoids");
}

BatchBanditResult bandit_batch_learner(const HypothesisClass& h,
                                       const std::vector<Instance>& instances,
                                       BanditOracle& oracle, const ErmPolicy& policy,
                                       std::uint64_t seed) {
  if (h.size() == 0) throw argument_error("bandit_batch_learner: class is empty");
  const int d = h.domain_size();
  const int k = h.label_count();
  for (const Instance x : instances)
    if (x < 0 || x >= d)
      throw argument_error(fmt("bandit_batch_learner: instance %d outside [0, %d)", x, d));
  BatchBanditResult out;
  Rng rng(seed);
  for (const Instance x : instances) {
    const Label guess = static_cast<Label>(rng.below(static_cast<std::uint64_t>(k)));
    if (oracle.query(x, guess)) out.filtered.push_back({x, guess});
  }
  const ErmResult erm = run_erm(policy, h, out.filtered);
  out.hypothesis = erm.hypothesis;
  out.erm_fallback = erm.fallback;
  return out;
}

int batch_sample_size(int k, int m_full, double delta) {
  if (k < 1) throw argument_error("batch_sample_size: need k >= 1");
  if (m_full < 0) throw argument_error("batch_sample_size: need m_full >= 0");
  if (!(delta > 0 && delta < 1))
    throw argument_error("batch_sample_size: need delta in (0, 1)");
  return static_cast<int>(
      std::ceil(3.0 * k * m_full + 1.5 * std::log(2.0 / delta)));
}

PbiReport online_pbi(const HypothesisClass& h, const Budget& budget) {
  if (h.size() == 0) throw argument_error("online_pbi: class is empty");
  PbiReport rep;
  LdimCache lcache(h, budget);
  BldimCache bcache(h, budget);
  rep.littlestone = lcache.eval(lcache.full());
  rep.bandit_littlestone = bcache.eval(bcache.full());
  const int k = h.label_count();
  rep.reference_bound = 4.0 * k * std::log2(static_cast<double>(k));
  if (rep.littlestone >= 1) {
    rep.defined = true;
    rep.ratio = static_cast<double>(rep.bandit_littlestone) / rep.littlestone;
  }
  return rep;
}

}  // namespace mclearn
