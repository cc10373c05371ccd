#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mclearn/budget.hpp"
#include "mclearn/dimensions.hpp"
#include "mclearn/hypothesis.hpp"
#include "mclearn/rng.hpp"

namespace mclearn {

using LabeledSequence = std::vector<std::pair<Instance, Label>>;

struct OnlineRound {
  Instance x = 0;
  Label prediction = 0;
  Label truth = 0;
  bool mistake = false;
};

struct OnlineTranscript {
  std::vector<OnlineRound> rounds;
  int mistakes = 0;
  std::string learner;
  std::optional<std::uint64_t> seed;  // set for randomized learners
};

// One JSON object per line: {"round":t,"x":..,"prediction":..,"truth":..,
// "mistake":..} for transcripts, {"x":..,"y":..} for sequences.
std::string transcript_to_jsonl(const OnlineTranscript& t);
std::string sequence_to_jsonl(const LabeledSequence& s);
LabeledSequence parse_sequence_jsonl(const std::string& text);

// Deterministic full-information learners share this protocol: predict, then
// observe the revealed label for the same instance.
class OnlineLearner {
 public:
  virtual ~OnlineLearner() = default;
  virtual Label predict(Instance x) = 0;
  virtual void observe(Instance x, Label y) = 0;
  virtual const char* name() const = 0;
};

// One step of the version-space algorithm: per-label subclass dimensions
// (empty subclass scores -1) and the lowest label attaining the maximum.
// Also checks that at most one label keeps the full dimension of v.
struct SoaStepResult {
  Label prediction = 0;
  int dim = 0;                     // littlestone dimension of v itself
  std::vector<int> subclass_dims;  // indexed by label
};
SoaStepResult soa_step(LdimCache& cache, const MemberMask& v, Instance x);

class SoaLearner : public OnlineLearner {
 public:
  // Uses `shared` when given (it must be a cache over h), otherwise builds
  // its own cache.
  explicit SoaLearner(const HypothesisClass& h, LdimCache* shared = nullptr);

  Label predict(Instance x) override;  // protocol error when the space is empty
  void observe(Instance x, Label y) override;
  const char* name() const override { return "soa"; }
  const MemberMask& version_space() const { return v_; }

 private:
  const HypothesisClass* h_;
  std::unique_ptr<LdimCache> owned_;
  LdimCache* cache_;
  MemberMask v_;
};

// Reference deterministic learners for adversary experiments.
class ConstantLearner : public OnlineLearner {
 public:
  explicit ConstantLearner(Label y) : y_(y) {}
  Label predict(Instance) override { return y_; }
  void observe(Instance, Label) override {}
  const char* name() const override { return "constant"; }

 private:
  Label y_;
};

// Predicts with the canonically first hypothesis consistent with history.
class FirstConsistentLearner : public OnlineLearner {
 public:
  explicit FirstConsistentLearner(const HypothesisClass& h);
  Label predict(Instance x) override;
  void observe(Instance x, Label y) override;
  const char* name() const override { return "first_consistent"; }

 private:
  const HypothesisClass* h_;
  std::vector<bool> alive_;
};

// Predicts the label most hypotheses in the version space assign (lowest
// label on ties).
class MajorityLearner : public OnlineLearner {
 public:
  explicit MajorityLearner(const HypothesisClass& h);
  Label predict(Instance x) override;
  void observe(Instance x, Label y) override;
  const char* name() const override { return "majority"; }

 private:
  const HypothesisClass* h_;
  std::vector<bool> alive_;
};

// Runs SOA over a sequence after checking it is realizable (protocol error
// names the first round where no hypothesis remains consistent).
OnlineTranscript soa_run(const HypothesisClass& h, const LabeledSequence& sequence,
                         LdimCache* shared = nullptr);

struct AdversaryResult {
  LabeledSequence sequence;  // instance and revealed answer per round
  int mistakes = 0;          // of the opposing learner; equals sequence length
  Hypothesis consistent;     // canonically first hypothesis matching every answer
};

// Walks a verified shattered tree of depth littlestone_dim(h): feeds the node
// instance, answers with the lowest edge label differing from the learner's
// prediction, and descends that branch. Forces one mistake per level on any
// deterministic learner.
AdversaryResult realizable_adversary(const HypothesisClass& h, OnlineLearner& learner,
                                     const Budget& budget = {});

// An expert for the agnostic reduction: mistake rounds and the labels to
// force there, sorted by round.
struct ExpertSpec {
  std::vector<int> rounds;
  std::vector<Label> labels;
};

// Exact expert count sum over j <= ld of C(T, j) * k^j, saturating at
// UINT64_MAX. The budget check always uses this exact sum, never the looser
// (Tk)^ld estimate, which the sum can exceed when ld <= 1.
std::uint64_t agnostic_expert_count(int ld, int T, int k);

// All imitator experts for horizon T: every round subset of size <= LD(h)
// crossed with every labeling (LD <= 1 gets no special casing). Deterministic
// order: subset size ascending, subsets lexicographic, labelings as base-k
// odometers. Count checked against budget.max_expert_count.
std::vector<ExpertSpec> build_agnostic_experts(const HypothesisClass& h, int T,
                                               const Budget& budget = {},
                                               LdimCache* shared = nullptr);

// Replays the version-space algorithm but substitutes the spec's label on its
// listed rounds, and always updates with its OWN prediction; it never sees
// the true labels. If its version space empties it predicts label 0 from
// then on.
class ImitatorExpert {
 public:
  ImitatorExpert(const ExpertSpec& spec, LdimCache& cache);
  Label advance(Instance x);  // call once per round, in order

 private:
  const ExpertSpec* spec_;
  LdimCache* cache_;
  MemberMask v_;
  int t_ = 0;
  std::size_t next_override_ = 0;
};

struct LeaReport {
  OnlineTranscript transcript;    // learner "lea", seed recorded
  double eta = 0;                 // sqrt(8 ln(N) / T)
  int expert_count = 0;
  std::vector<int> expert_losses;  // cumulative, after the last round
  int best_expert_loss = 0;
};

// Exponential-weights forecaster over precomputed advice[expert][round]; at
// each round an expert index is sampled with probability proportional to
// exp(-eta * loss_so_far) and its advice is played.
LeaReport lea_run(const std::vector<std::vector<Label>>& advice,
                  const LabeledSequence& sequence, std::uint64_t seed);

struct AgnosticRunReport {
  LeaReport lea;
  int littlestone = 0;
  int best_hypothesis_loss = 0;  // exact min over h of sequence mistakes
  double regret_bound = 0;       // sqrt(0.5 * LD * T * ln(T * k))
};

// The agnostic reduction end to end: builds the imitator experts, runs the
// forecaster, and reports the realized loss against the best hypothesis and
// the theoretical regret bound.
AgnosticRunReport agnostic_online_run(const HypothesisClass& h, const LabeledSequence& sequence,
                                      std::uint64_t seed, const Budget& budget = {});

}  // namespace mclearn
