#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mclearn/budget.hpp"
#include "mclearn/dimensions.hpp"
#include "mclearn/hypothesis.hpp"
#include "mclearn/learners.hpp"
#include "mclearn/rng.hpp"

namespace mclearn {

struct BanditRound {
  Instance x = 0;
  Label guess = 0;
  bool correct = false;  // the only label information a wrong guess reveals
};

struct BanditTranscript {
  std::vector<BanditRound> rounds;
  int mistakes = 0;  // wrong guesses
  std::string learner;
  std::optional<std::uint64_t> seed;
};

// One JSON object per line: {"round":t,"x":..,"guess":..,"correct":..}.
// parse_bandit_rounds_jsonl reads the same format back for replay.
std::string bandit_transcript_to_jsonl(const BanditTranscript& t);
std::vector<BanditRound> parse_bandit_rounds_jsonl(const std::string& text);

// Answers (x, guess) -> "was that the true label?" per a single hidden source
// fixed for the oracle's lifetime.
class BanditOracle {
 public:
  virtual ~BanditOracle() = default;
  virtual bool query(Instance x, Label guess) = 0;
  virtual const char* name() const = 0;
};

class HiddenLabelingOracle : public BanditOracle {
 public:
  explicit HiddenLabelingOracle(Hypothesis f) : f_(std::move(f)) {}
  bool query(Instance x, Label guess) override;
  const char* name() const override { return "hidden_labeling"; }
  const Hypothesis& hidden() const { return f_; }

 private:
  Hypothesis f_;
};

// Replays recorded rounds in order; a query whose (x, guess) deviates from
// the recording, or that runs past it, is a protocol error.
class ReplayOracle : public BanditOracle {
 public:
  explicit ReplayOracle(std::vector<BanditRound> rounds) : rounds_(std::move(rounds)) {}
  bool query(Instance x, Label guess) override;
  const char* name() const override { return "replay"; }
  std::size_t remaining() const { return rounds_.size() - next_; }

 private:
  std::vector<BanditRound> rounds_;
  std::size_t next_ = 0;
};

// Bandit-feedback learners: guess, then learn only whether the guess was
// correct.
class BanditLearner {
 public:
  virtual ~BanditLearner() = default;
  virtual Label predict(Instance x) = 0;
  virtual void observe(Instance x, Label guess, bool correct) = 0;
  virtual const char* name() const = 0;
};

// One step of the bandit version-space rule: per label y, the bandit
// dimension of {f in V : f(x) != y}; the guess is the lowest label minimizing
// it. Checks that some label strictly shrinks the dimension.
struct BsoaStepResult {
  Label guess = 0;
  int dim = 0;                     // bandit dimension of v itself
  std::vector<int> subclass_dims;  // indexed by label
};
BsoaStepResult bsoa_step(BldimCache& cache, const MemberMask& v, Instance x);

// On a wrong guess keeps {f : f(x) != guess}. On a correct guess the true
// label is known, so by default it also keeps only {f : f(x) = guess}; the
// stated update rule leaves V unchanged there, exposed via
// filter_correct_guesses=false and bounded empirically only.
class BsoaLearner : public BanditLearner {
 public:
  explicit BsoaLearner(const HypothesisClass& h, BldimCache* shared = nullptr,
                       bool filter_correct_guesses = true);

  Label predict(Instance x) override;  // protocol error when the space is empty
  void observe(Instance x, Label guess, bool correct) override;
  const char* name() const override { return filter_ ? "bsoa" : "bsoa_unfiltered"; }
  const MemberMask& version_space() const { return v_; }

 private:
  const HypothesisClass* h_;
  std::unique_ptr<BldimCache> owned_;
  BldimCache* cache_;
  MemberMask v_;
  bool filter_;
};

// Reference guessers for adversary experiments.
class ConstantGuesser : public BanditLearner {
 public:
  explicit ConstantGuesser(Label y) : y_(y) {}
  Label predict(Instance) override { return y_; }
  void observe(Instance, Label, bool) override {}
  const char* name() const override { return "constant"; }

 private:
  Label y_;
};

class RoundRobinGuesser : public BanditLearner {
 public:
  explicit RoundRobinGuesser(int k) : k_(k) {}
  Label predict(Instance) override { return static_cast<Label>(t_ % k_); }
  void observe(Instance, Label, bool) override { ++t_; }
  const char* name() const override { return "round_robin"; }

 private:
  int k_;
  int t_ = 0;
};

// Runs BSOA over the instance sequence against the oracle. The version space
// emptying mid-run means the oracle contradicted every hypothesis: protocol
// error naming the round.
BanditTranscript bsoa_run(const HypothesisClass& h, const std::vector<Instance>& xs,
                          BanditOracle& oracle, BldimCache* shared = nullptr,
                          bool filter_correct_guesses = true);

struct BanditAdversaryResult {
  BanditTranscript transcript;  // every answer is "wrong"
  Hypothesis consistent;        // differs from every guess at its round
};

// Walks a verified bandit shattered tree of depth bandit_littlestone_dim(h):
// feeds the node instance, answers "wrong" to whatever the learner guesses,
// and descends the edge labeled with that guess. Forces one mistake per level
// on any deterministic learner.
BanditAdversaryResult bandit_adversary(const HypothesisClass& h, BanditLearner& learner,
                                       const Budget& budget = {});

struct BatchBanditResult {
  Hypothesis hypothesis;
  LabeledSample filtered;  // the confirmed (x, guess) pairs, in draw order
  bool erm_fallback = false;
};

// The batch reduction: guesses a uniform label per instance (stream seeded by
// `seed`), keeps the pairs the oracle confirms, and runs the given
// full-information ERM on them. An empty filtered sample is legal.
BatchBanditResult bandit_batch_learner(const HypothesisClass& h,
                                       const std::vector<Instance>& instances,
                                       BanditOracle& oracle, const ErmPolicy& policy,
                                       std::uint64_t seed);

// Sample size the reduction needs so the filtered sample reaches m_full with
// probability 1 - delta/2: ceil(3k * m_full + 1.5 * ln(2/delta)).
int batch_sample_size(int k, int m_full, double delta);

// Price of bandit information in the online protocols, with the 4k*log2(k)
// reference bound attached; undefined (not an error) when L-Dim = 0.
struct PbiReport {
  int littlestone = 0;
  int bandit_littlestone = 0;
  bool defined = false;
  double ratio = 0;            // bandit_littlestone / littlestone when defined
  double reference_bound = 0;  // 4 k log2(k)
};
PbiReport online_pbi(const HypothesisClass& h, const Budget& budget = {});

}  // namespace mclearn
