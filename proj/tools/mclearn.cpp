#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mclearn/bandit.hpp"
#include "mclearn/budget.hpp"
#include "mclearn/dimensions.hpp"
#include "mclearn/errors.hpp"
#include "mclearn/hypothesis.hpp"
#include "mclearn/learners.hpp"
#include "mclearn/online.hpp"
#include "mclearn/pac_sim.hpp"
#include "mclearn/rng.hpp"

using json = nlohmann::ordered_json;
using namespace mclearn;

namespace {

std::string fmt(const char* f, auto... args) {
  char buf[320];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string num(double v) { return fmt("%.17g", v); }

// ---------------------------------------------------------------------------
// shared plumbing
// ---------------------------------------------------------------------------

struct CommonOpts {
  std::string generator;
  std::string class_file;
  int d = 1;
  int k = 2;
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string out;
  int workers = 1;
};

// The class options; gap runs on the subset-pointer family only and skips them.
void add_class_opts(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--generator", o.generator, "built-in family: full | cantor | constants")
      ->check(CLI::IsMember({"full", "cantor", "constants"}));
  cmd->add_option("--class-file", o.class_file, "HCLASS v1 file to load");
  cmd->add_option("--d", o.d, "domain size for --generator")->check(CLI::PositiveNumber);
  cmd->add_option("--k", o.k, "label count for --generator (ignored by cantor)")
      ->check(CLI::PositiveNumber);
}

void add_run_opts(CLI::App* cmd, CommonOpts& o, bool csv_allowed) {
  cmd->add_option("--seed", o.seed, "root seed (default 0)");
  cmd->add_option("--format", o.format,
                  csv_allowed ? "json | csv (default json)" : "json (default)")
      ->check(CLI::IsMember(csv_allowed ? std::vector<std::string>{"json", "csv"}
                                        : std::vector<std::string>{"json"}));
  cmd->add_option("--out", o.out, "write the report here instead of stdout");
  cmd->add_option("--workers", o.workers,
                  "worker hint; output is identical for every value")
      ->check(CLI::PositiveNumber);
}

HypothesisClass load_class(const CommonOpts& o, const Budget& budget) {
  if (!o.class_file.empty() && !o.generator.empty())
    throw argument_error("--generator and --class-file are mutually exclusive");
  if (!o.class_file.empty()) return load_hclass(o.class_file);
  if (o.generator == "full") return build_full_class(o.d, o.k, budget);
  if (o.generator == "cantor") return build_cantor_class(o.d, budget);
  if (o.generator == "constants") return build_constants_class(o.d, o.k, budget);
  throw argument_error("one of --generator or --class-file is required");
}

json class_config(const CommonOpts& o) {
  json c;
  c["generator"] = o.generator;
  c["class_file"] = o.class_file;
  c["d"] = o.d;
  c["k"] = o.k;
  return c;
}

// The resolved experiment config embedded in every report. --workers is an
// execution hint, not an experiment parameter: output is identical for every
// value, so it stays out of the report.
json run_config(const CommonOpts& o) {
  json c;
  c["seed"] = o.seed;
  c["format"] = o.format;
  return c;
}

json report_skeleton(const char* command, json config) {
  json r;
  r["schema"] = "report_v1";
  r["command"] = command;
  r["config"] = std::move(config);
  return r;
}

void write_text(const std::string& text, const CommonOpts& o) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw argument_error(fmt("cannot open %s for writing", o.out.c_str()));
  f << text;
}

void emit_report(const json& report, const CommonOpts& o) {
  write_text(report.dump(2) + "\n", o);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw argument_error(fmt("cannot open %s for writing", path.c_str()));
  f << text;
}

json hypothesis_json(const Hypothesis& h) { return json(h.table); }

json transcript_json(const OnlineTranscript& t) {
  json rounds = json::array();
  for (std::size_t i = 0; i < t.rounds.size(); ++i) {
    const OnlineRound& r = t.rounds[i];
    json line;
    line["round"] = static_cast<int>(i);
    line["x"] = r.x;
    line["prediction"] = r.prediction;
    line["truth"] = r.truth;
    line["mistake"] = r.mistake;
    rounds.push_back(std::move(line));
  }
  json out;
  out["learner"] = t.learner;
  if (t.seed) out["seed"] = *t.seed;
  out["mistakes"] = t.mistakes;
  out["rounds"] = std::move(rounds);
  return out;
}

json bandit_transcript_json(const BanditTranscript& t) {
  json rounds = json::array();
  for (std::size_t i = 0; i < t.rounds.size(); ++i) {
    const BanditRound& r = t.rounds[i];
    json line;
    line["round"] = static_cast<int>(i);
    line["x"] = r.x;
    line["guess"] = r.guess;
    line["correct"] = r.correct;
    rounds.push_back(std::move(line));
  }
  json out;
  out["learner"] = t.learner;
  if (t.seed) out["seed"] = *t.seed;
  out["mistakes"] = t.mistakes;
  out["rounds"] = std::move(rounds);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw argument_error(fmt("cannot open %s", path.c_str()));
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return text;
}

// ---------------------------------------------------------------------------
// dims
// ---------------------------------------------------------------------------

struct DimsOpts {
  CommonOpts common;
};

int cmd_dims(const DimsOpts& o, const Budget& budget) {
  const HypothesisClass h = load_class(o.common, budget);
  const int k = h.label_count();

  json results;
  results["class"] = {{"d", h.domain_size()}, {"k", k}, {"size", h.size()}};

  // Each dimension degrades independently on its own enumeration budget; the
  // values that are computable are still reported exactly.
  std::optional<int> dn, dg, vc, ld, bld;

  json jn;
  try {
    const NatarajanResult r = natarajan_dim(h, budget);
    dn = r.dim;
    jn["value"] = r.dim;
    jn["witness"] = {{"set", r.witness.set}, {"f1", r.witness.f1}, {"f2", r.witness.f2}};
  } catch (const budget_error& e) {
    jn["status"] = "budget_exceeded";
    jn["note"] = e.what();
  }
  results["natarajan"] = std::move(jn);

  json jg;
  try {
    const GraphResult r = graph_dim(h, budget);
    dg = r.dim;
    jg["value"] = r.dim;
    jg["witness"] = {{"set", r.witness.set}, {"f", r.witness.f}};
  } catch (const budget_error& e) {
    jg["status"] = "budget_exceeded";
    jg["note"] = e.what();
  }
  results["graph"] = std::move(jg);

  if (k == 2) {
    json jv;
    try {
      vc = vc_dim(h, budget);
      jv["value"] = *vc;
    } catch (const budget_error& e) {
      jv["status"] = "budget_exceeded";
      jv["note"] = e.what();
    }
    results["vc"] = std::move(jv);
  }

  json jl;
  try {
    const TreeResult r = littlestone_dim(h, budget);
    ld = r.dim;
    jl["value"] = r.dim;
    json edges = json::array();
    for (const auto& e : r.tree.edge_labels) edges.push_back({e[0], e[1]});
    jl["witness"] = {{"depth", r.tree.depth},
                     {"node_instance", r.tree.node_instance},
                     {"edge_labels", std::move(edges)}};
  } catch (const budget_error& e) {
    jl["status"] = "budget_exceeded";
    jl["note"] = e.what();
  }
  results["littlestone"] = std::move(jl);

  json jb;
  try {
    BldimCache cache(h, budget);
    bld = cache.eval(cache.full());
    jb["value"] = *bld;
    try {
      const BanditTreeResult r = bandit_littlestone_dim(h, budget, &cache);
      jb["witness"] = {{"arity", r.tree.arity},
                       {"depth", r.tree.depth},
                       {"node_instance", r.tree.node_instance}};
    } catch (const budget_error& e) {
      jb["witness_note"] = e.what();  // the value above is still exact
    }
  } catch (const budget_error& e) {
    jb["status"] = "budget_exceeded";
    jb["note"] = e.what();
  }
  results["bandit_littlestone"] = std::move(jb);

  if (dn && dg) {
    const int factor =
        k >= 2 ? static_cast<int>(std::ceil(4.67 * std::log2(static_cast<double>(k)))) : 0;
    json je;
    je["natarajan"] = *dn;
    je["graph"] = *dg;
    je["factor"] = factor;
    je["bound"] = factor * *dn;
    je["holds"] = (*dn <= *dg) && (*dg <= factor * *dn);
    results["dimension_chain"] = std::move(je);
  }

  json config = class_config(o.common);
  {
    const json rc = run_config(o.common);
    for (const auto& [key, val] : rc.items()) config[key] = val;
  }
  json report = report_skeleton("dims", std::move(config));
  report["results"] = std::move(results);

  if (o.common.format == "csv") {
    auto cell = [](const std::optional<int>& v) { return v ? std::to_string(*v) : ""; };
    std::string csv =
        "command,generator,class_file,d,k,size,seed,natarajan,graph,vc,littlestone,"
        "bandit_littlestone,chain_holds\n";
    csv += fmt("dims,%s,%s,%d,%d,%d,%llu,%s,%s,%s,%s,%s,%s\n", o.common.generator.c_str(),
               o.common.class_file.c_str(), h.domain_size(), k, static_cast<int>(h.size()),
               static_cast<unsigned long long>(o.common.seed), cell(dn).c_str(),
               cell(dg).c_str(), cell(vc).c_str(), cell(ld).c_str(), cell(bld).c_str(),
               report["results"].contains("dimension_chain")
                   ? (report["results"]["dimension_chain"]["holds"].get<bool>() ? "true"
                                                                                : "false")
                   : "");
    write_text(csv, o.common);
  } else {
    emit_report(report, o.common);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// gap
// ---------------------------------------------------------------------------

struct GapOpts {
  CommonOpts common;
  int d = 8;
  double epsilon = 0.2;
  double delta = 0.1;
  int trials = 2000;
  int m_max = 4096;
};

json probe_json(const FailureRateProbe& p) {
  json j;
  j["m"] = p.m;
  j["failures"] = p.failures;
  j["trials"] = p.trials;
  j["rate"] = p.rate;
  j["ci"] = {{"lower", p.ci.lower}, {"upper", p.ci.upper}};
  return j;
}

json estimate_json(const SampleComplexityEstimate& e) {
  json j;
  j["m_hat"] = e.m_hat;
  j["exceeded_m_max"] = e.exceeded_m_max;
  j["m_max"] = e.m_max;
  j["failure_rate_at_m_hat"] = e.failure_rate_at_m;
  j["ci_at_m_hat"] = {{"lower", e.ci_at_m.lower}, {"upper", e.ci_at_m.upper}};
  json probes = json::array();
  for (const auto& p : e.probes) probes.push_back(probe_json(p));
  j["probes"] = std::move(probes);
  return j;
}

int cmd_gap(const GapOpts& o, const Budget& budget) {
  if (!(o.epsilon > 0 && o.epsilon < 0.5))
    throw argument_error("gap: --epsilon must lie in (0, 0.5)");
  if (!(o.delta > 0 && o.delta < 1)) throw argument_error("gap: --delta must lie in (0, 1)");
  if (o.d < 2) throw argument_error("gap: --d must be at least 2");
  if (o.trials < 100) throw argument_error("gap: --trials must be at least 100");

  const HypothesisClass h = build_cantor_class(o.d, budget);
  const Label star = cantor_star_label(o.d);
  Hypothesis f0;  // the empty-set pointer: every instance maps to the sentinel
  f0.table.assign(static_cast<std::size_t>(o.d), star);
  const DiscreteDistribution dist = badlb_distribution(f0, h.label_count(), o.epsilon);

  ErmPolicy good;
  good.kind = ErmKind::good_observed_labels;
  good.defaults = {star};
  ErmPolicy bad;
  bad.kind = ErmKind::bad;
  GShatterWitness w;
  for (int x = 0; x < o.d; ++x) w.set.push_back(x);
  w.f.assign(static_cast<std::size_t>(o.d), star);
  bad.witness = w;

  const int reference_m =
      static_cast<int>(std::ceil((1.0 / o.epsilon) * std::log(1.0 / o.delta)));

  const Rng root(o.common.seed);
  const auto good_est = estimate_sample_complexity(good, h, dist, o.epsilon, o.delta, o.trials,
                                                   root.split(1).key(), o.m_max);
  const auto bad_est = estimate_sample_complexity(bad, h, dist, o.epsilon, o.delta, o.trials,
                                                  root.split(2).key(), o.m_max);
  const auto good_ref = probe_failure_rate(good, h, dist, o.epsilon, reference_m, o.trials,
                                           root.split(3).key());
  const auto bad_ref = probe_failure_rate(bad, h, dist, o.epsilon, reference_m, o.trials,
                                          root.split(4).key());
  const double bad_exact_ref =
      missing_mass_exceeds_probability(dist.instance_marginals(), reference_m, o.epsilon);
  const double only_x0_term = std::pow(1.0 - 2.0 * o.epsilon, reference_m);

  json config;
  config["d"] = o.d;
  config["epsilon"] = o.epsilon;
  config["delta"] = o.delta;
  config["trials"] = o.trials;
  config["m_max"] = o.m_max;
  {
    const json rc = run_config(o.common);
    for (const auto& [key, val] : rc.items()) config[key] = val;
  }

  json results;
  results["reference_m"] = reference_m;
  json jg = estimate_json(good_est);
  jg["at_reference_m"] = probe_json(good_ref);
  results["observed_labels_learner"] = std::move(jg);
  json jb = estimate_json(bad_est);
  jb["at_reference_m"] = probe_json(bad_ref);
  jb["exact_failure_at_reference_m"] = bad_exact_ref;
  jb["only_first_instance_term"] = only_x0_term;
  results["adversarial_learner"] = std::move(jb);
  results["m_hat_ratio"] =
      static_cast<double>(bad_est.m_hat) / static_cast<double>(good_est.m_hat);
  results["ratio_is_lower_bound"] = bad_est.exceeded_m_max;
  results["intervals_disjoint_at_reference_m"] = good_ref.ci.upper < bad_ref.ci.lower;

  json report = report_skeleton("gap", std::move(config));
  report["results"] = std::move(results);

  if (o.common.format == "csv") {
    std::string csv =
        "command,d,epsilon,delta,trials,seed,reference_m,good_m_hat,good_exceeded,bad_m_hat,"
        "bad_exceeded,good_rate_at_reference,bad_rate_at_reference,bad_exact_at_reference,"
        "m_hat_ratio,intervals_disjoint\n";
    csv += fmt("gap,%d,%s,%s,%d,%llu,%d,%d,%s,%d,%s,%s,%s,%s,%s,%s\n", o.d,
               num(o.epsilon).c_str(), num(o.delta).c_str(), o.trials,
               static_cast<unsigned long long>(o.common.seed), reference_m, good_est.m_hat,
               good_est.exceeded_m_max ? "true" : "false", bad_est.m_hat,
               bad_est.exceeded_m_max ? "true" : "false", num(good_ref.rate).c_str(),
               num(bad_ref.rate).c_str(), num(bad_exact_ref).c_str(),
               num(static_cast<double>(bad_est.m_hat) / good_est.m_hat).c_str(),
               good_ref.ci.upper < bad_ref.ci.lower ? "true" : "false");
    write_text(csv, o.common);
  } else {
    emit_report(report, o.common);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// online
// ---------------------------------------------------------------------------

struct OnlineOpts {
  CommonOpts common;
  std::string learner = "soa";
  Label label = 0;
  std::string adversary;      // "tree" when set
  std::string sequence_file;  // labeled rounds to play
  bool agnostic = false;
  std::string transcript_out;
  std::string sequence_out;
};

std::unique_ptr<OnlineLearner> make_online_learner(const OnlineOpts& o,
                                                   const HypothesisClass& h) {
  if (o.learner == "soa") return std::make_unique<SoaLearner>(h);
  if (o.learner == "first_consistent") return std::make_unique<FirstConsistentLearner>(h);
  if (o.learner == "majority") return std::make_unique<MajorityLearner>(h);
  if (o.learner == "constant") {
    if (o.label < 0 || o.label >= h.label_count())
      throw argument_error(fmt("--label %d outside [0, %d)", o.label, h.label_count()));
    return std::make_unique<ConstantLearner>(o.label);
  }
  throw argument_error(fmt("unknown --learner %s", o.learner.c_str()));
}

// Records the protocol as seen by the adversary, so any learner yields a
// transcript without a second run.
struct RecordingLearner : OnlineLearner {
  explicit RecordingLearner(OnlineLearner& inner) : inner_(&inner) {}
  Label predict(Instance x) override { return last_ = inner_->predict(x); }
  void observe(Instance x, Label y) override {
    inner_->observe(x, y);
    transcript.rounds.push_back({x, last_, y, last_ != y});
    transcript.mistakes += last_ != y ? 1 : 0;
  }
  const char* name() const override { return inner_->name(); }

  OnlineLearner* inner_;
  Label last_ = 0;
  OnlineTranscript transcript;
};

OnlineTranscript run_online_learner(OnlineLearner& learner, const HypothesisClass& h,
                                    const LabeledSequence& seq) {
  OnlineTranscript t;
  t.learner = learner.name();
  for (const auto& [x, y] : seq) {
    if (x < 0 || x >= h.domain_size() || y < 0 || y >= h.label_count())
      throw argument_error(fmt("sequence pair (%d, %d) outside [0, %d) x [0, %d)", x, y,
                               h.domain_size(), h.label_count()));
    const Label pred = learner.predict(x);
    learner.observe(x, y);
    t.rounds.push_back({x, pred, y, pred != y});
    t.mistakes += pred != y ? 1 : 0;
  }
  return t;
}

int cmd_online(const OnlineOpts& o, const Budget& budget) {
  const HypothesisClass h = load_class(o.common, budget);
  const int modes = (o.adversary.empty() ? 0 : 1) + (o.sequence_file.empty() ? 0 : 1);
  if (modes > 1 && !o.agnostic)
    throw argument_error("online: pick one of --adversary or --sequence-file");
  if (o.agnostic && o.sequence_file.empty())
    throw argument_error("online: --agnostic needs --sequence-file");

  json config = class_config(o.common);
  config["learner"] = o.learner;
  config["label"] = o.label;
  config["adversary"] = o.adversary;
  config["sequence_file"] = o.sequence_file;
  config["agnostic"] = o.agnostic;
  {
    const json rc = run_config(o.common);
    for (const auto& [key, val] : rc.items()) config[key] = val;
  }

  json results;
  OnlineTranscript transcript;
  LabeledSequence sequence;

  if (o.agnostic) {
    sequence = parse_sequence_jsonl(read_file(o.sequence_file));
    const AgnosticRunReport rep =
        agnostic_online_run(h, sequence, o.common.seed, budget);
    transcript = rep.lea.transcript;
    results["littlestone"] = rep.littlestone;
    results["expert_count"] = rep.lea.expert_count;
    results["eta"] = rep.lea.eta;
    results["realized_loss"] = rep.lea.transcript.mistakes;
    results["best_expert_loss"] = rep.lea.best_expert_loss;
    results["best_hypothesis_loss"] = rep.best_hypothesis_loss;
    results["regret"] = rep.lea.transcript.mistakes - rep.best_hypothesis_loss;
    results["regret_bound"] = rep.regret_bound;
    results["bound_note"] = "the bound is on the expected loss over seeds";
    results["transcript"] = transcript_json(transcript);
  } else if (!o.sequence_file.empty()) {
    sequence = parse_sequence_jsonl(read_file(o.sequence_file));
    LdimCache cache(h, budget);
    const int ld = cache.eval(cache.full());
    if (o.learner == "soa") {
      transcript = soa_run(h, sequence, &cache);
    } else {
      const auto learner = make_online_learner(o, h);
      transcript = run_online_learner(*learner, h, sequence);
    }
    results["littlestone"] = ld;
    results["mistakes"] = transcript.mistakes;
    results["mistake_bound"] = ld;
    results["bound_ok"] = transcript.mistakes <= ld;
    results["transcript"] = transcript_json(transcript);
  } else {
    // default: the shattered-tree adversary against the chosen learner
    const auto learner = make_online_learner(o, h);
    RecordingLearner rec(*learner);
    const AdversaryResult res = realizable_adversary(h, rec, budget);
    transcript = rec.transcript;
    sequence = res.sequence;
    results["littlestone"] = static_cast<int>(res.sequence.size());
    results["forced_mistakes"] = res.mistakes;
    results["mistake_bound"] = static_cast<int>(res.sequence.size());
    results["bound_ok"] = res.mistakes <= static_cast<int>(res.sequence.size());
    results["consistent_hypothesis"] = hypothesis_json(res.consistent);
    results["sequence"] = [&] {
      json arr = json::array();
      for (const auto& [x, y] : res.sequence) arr.push_back({{"x", x}, {"y", y}});
      return arr;
    }();
    results["transcript"] = transcript_json(transcript);
  }

  if (!o.transcript_out.empty()) write_file(o.transcript_out, transcript_to_jsonl(transcript));
  if (!o.sequence_out.empty()) write_file(o.sequence_out, sequence_to_jsonl(sequence));

  json report = report_skeleton("online", std::move(config));
  report["results"] = std::move(results);
  emit_report(report, o.common);
  return 0;
}

// ---------------------------------------------------------------------------
// bandit
// ---------------------------------------------------------------------------

struct BanditOpts {
  CommonOpts common;
  std::string learner = "bsoa";
  Label label = 0;
  std::string adversary;
  std::string replay_file;
  int hidden_index = -1;
  std::string sequence_file;
  bool pbi = false;
  std::string transcript_out;
};

std::unique_ptr<BanditLearner> make_bandit_learner(const BanditOpts& o,
                                                   const HypothesisClass& h) {
  if (o.learner == "bsoa") return std::make_unique<BsoaLearner>(h);
  if (o.learner == "bsoa_unfiltered")
    return std::make_unique<BsoaLearner>(h, nullptr, false);
  if (o.learner == "constant") {
    if (o.label < 0 || o.label >= h.label_count())
      throw argument_error(fmt("--label %d outside [0, %d)", o.label, h.label_count()));
    return std::make_unique<ConstantGuesser>(o.label);
  }
  if (o.learner == "round_robin") return std::make_unique<RoundRobinGuesser>(h.label_count());
  throw argument_error(fmt("unknown --learner %s", o.learner.c_str()));
}

BanditTranscript run_bandit_learner(BanditLearner& learner, const HypothesisClass& h,
                                    const std::vector<Instance>& xs, BanditOracle& oracle) {
  BanditTranscript t;
  t.learner = learner.name();
  for (const Instance x : xs) {
    if (x < 0 || x >= h.domain_size())
      throw argument_error(fmt("instance %d outside [0, %d)", x, h.domain_size()));
    const Label guess = learner.predict(x);
    const bool correct = oracle.query(x, guess);
    learner.observe(x, guess, correct);
    t.rounds.push_back({x, guess, correct});
    t.mistakes += correct ? 0 : 1;
  }
  return t;
}

int cmd_bandit(const BanditOpts& o, const Budget& budget) {
  const HypothesisClass h = load_class(o.common, budget);

  json config = class_config(o.common);
  config["learner"] = o.learner;
  config["label"] = o.label;
  config["adversary"] = o.adversary;
  config["replay_file"] = o.replay_file;
  config["hidden_index"] = o.hidden_index;
  config["sequence_file"] = o.sequence_file;
  config["pbi"] = o.pbi;
  {
    const json rc = run_config(o.common);
    for (const auto& [key, val] : rc.items()) config[key] = val;
  }

  json results;
  BanditTranscript transcript;

  if (o.pbi) {
    const PbiReport rep = online_pbi(h, budget);
    results["littlestone"] = rep.littlestone;
    results["bandit_littlestone"] = rep.bandit_littlestone;
    results["defined"] = rep.defined;
    if (rep.defined)
      results["ratio"] = rep.ratio;
    else
      results["ratio"] = nullptr;
    results["reference_bound"] = rep.reference_bound;
  } else if (!o.replay_file.empty()) {
    const auto rounds = parse_bandit_rounds_jsonl(read_file(o.replay_file));
    std::vector<Instance> xs;
    for (const auto& r : rounds) xs.push_back(r.x);
    ReplayOracle oracle(rounds);
    BldimCache cache(h, budget);
    const int bld = cache.eval(cache.full());
    if (o.learner == "bsoa" || o.learner == "bsoa_unfiltered") {
      transcript = bsoa_run(h, xs, oracle, &cache, o.learner == "bsoa");
    } else {
      const auto learner = make_bandit_learner(o, h);
      transcript = run_bandit_learner(*learner, h, xs, oracle);
    }
    results["bandit_littlestone"] = bld;
    results["mistakes"] = transcript.mistakes;
    results["mistake_bound"] = bld;
    results["bound_ok"] = transcript.mistakes <= bld;
    results["transcript"] = bandit_transcript_json(transcript);
  } else if (o.hidden_index >= 0) {
    if (o.sequence_file.empty())
      throw argument_error("bandit: --hidden-index needs --sequence-file for the instances");
    if (o.hidden_index >= static_cast<int>(h.size()))
      throw argument_error(fmt("--hidden-index %d outside [0, %d)", o.hidden_index,
                               static_cast<int>(h.size())));
    const auto seq = parse_sequence_jsonl(read_file(o.sequence_file));
    std::vector<Instance> xs;  // labels in the file are ignored; the oracle answers
    for (const auto& [x, y] : seq) xs.push_back(x);
    HiddenLabelingOracle oracle(h[static_cast<std::size_t>(o.hidden_index)]);
    BldimCache cache(h, budget);
    const int bld = cache.eval(cache.full());
    if (o.learner == "bsoa" || o.learner == "bsoa_unfiltered") {
      transcript = bsoa_run(h, xs, oracle, &cache, o.learner == "bsoa");
    } else {
      const auto learner = make_bandit_learner(o, h);
      transcript = run_bandit_learner(*learner, h, xs, oracle);
    }
    results["bandit_littlestone"] = bld;
    results["mistakes"] = transcript.mistakes;
    results["mistake_bound"] = bld;
    results["bound_ok"] = transcript.mistakes <= bld;
    results["transcript"] = bandit_transcript_json(transcript);
  } else {
    const auto learner = make_bandit_learner(o, h);
    const BanditAdversaryResult res = bandit_adversary(h, *learner, budget);
    transcript = res.transcript;
    const int bld = static_cast<int>(res.transcript.rounds.size());
    results["bandit_littlestone"] = bld;
    results["forced_mistakes"] = res.transcript.mistakes;
    results["mistake_bound"] = bld;
    results["bound_ok"] = res.transcript.mistakes <= bld;
    results["consistent_hypothesis"] = hypothesis_json(res.consistent);
    results["transcript"] = bandit_transcript_json(transcript);
  }

  if (!o.transcript_out.empty())
    write_file(o.transcript_out, bandit_transcript_to_jsonl(transcript));

  json report = report_skeleton("bandit", std::move(config));
  report["results"] = std::move(results);
  emit_report(report, o.common);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact desk-scale laboratory for multiclass learnability"};
  app.require_subcommand(1);

  DimsOpts dims;
  CLI::App* dims_cmd = app.add_subcommand("dims", "batch and online dimensions of a class");
  add_class_opts(dims_cmd, dims.common);
  add_run_opts(dims_cmd, dims.common, true);

  GapOpts gap;
  CLI::App* gap_cmd = app.add_subcommand(
      "gap", "good-vs-bad ERM sample-complexity gap on the subset-pointer family");
  gap_cmd->add_option("--d", gap.d, "domain size (default 8)")->check(CLI::PositiveNumber);
  gap_cmd->add_option("--epsilon", gap.epsilon, "excess-error target (default 0.2)");
  gap_cmd->add_option("--delta", gap.delta, "confidence target (default 0.1)");
  gap_cmd->add_option("--trials", gap.trials, "Monte-Carlo trials per probe (default 2000)");
  gap_cmd->add_option("--m-max", gap.m_max, "search cap (default 4096)")
      ->check(CLI::PositiveNumber);
  add_run_opts(gap_cmd, gap.common, true);

  OnlineOpts online;
  CLI::App* online_cmd =
      app.add_subcommand("online", "full-information protocol: adversary, replay, agnostic");
  add_class_opts(online_cmd, online.common);
  online_cmd->add_option("--learner", online.learner,
                         "soa | first_consistent | majority | constant (default soa)")
      ->check(CLI::IsMember({"soa", "first_consistent", "majority", "constant"}));
  online_cmd->add_option("--label", online.label, "label for --learner constant (default 0)");
  online_cmd->add_option("--adversary", online.adversary,
                         "play against the shattered-tree adversary (the default mode)")
      ->check(CLI::IsMember({"tree"}));
  online_cmd->add_option("--sequence-file", online.sequence_file,
                         "JSONL rounds {\"x\":..,\"y\":..} to play through");
  online_cmd->add_flag("--agnostic", online.agnostic,
                       "expert reduction over --sequence-file");
  online_cmd->add_option("--transcript-out", online.transcript_out,
                         "also write the transcript as JSONL");
  online_cmd->add_option("--sequence-out", online.sequence_out,
                         "also write the played sequence as JSONL for replay");
  add_run_opts(online_cmd, online.common, false);

  BanditOpts bandit;
  CLI::App* bandit_cmd =
      app.add_subcommand("bandit", "bandit protocol: adversary, hidden labeling, replay, pbi");
  add_class_opts(bandit_cmd, bandit.common);
  bandit_cmd->add_option("--learner", bandit.learner,
                         "bsoa | bsoa_unfiltered | constant | round_robin (default bsoa)")
      ->check(CLI::IsMember({"bsoa", "bsoa_unfiltered", "constant", "round_robin"}));
  bandit_cmd->add_option("--label", bandit.label, "label for --learner constant (default 0)");
  bandit_cmd->add_option("--adversary", bandit.adversary,
                         "play against the bandit-tree adversary (the default mode)")
      ->check(CLI::IsMember({"tree"}));
  bandit_cmd->add_option("--replay-file", bandit.replay_file,
                         "JSONL rounds {\"x\",\"guess\",\"correct\"} to replay as the oracle");
  bandit_cmd->add_option("--hidden-index", bandit.hidden_index,
                         "run against the hypothesis at this canonical index");
  bandit_cmd->add_option("--sequence-file", bandit.sequence_file,
                         "instances for --hidden-index (labels in the file are ignored)");
  bandit_cmd->add_flag("--pbi", bandit.pbi, "report the price of bandit information only");
  bandit_cmd->add_option("--transcript-out", bandit.transcript_out,
                         "also write the transcript as JSONL");
  add_run_opts(bandit_cmd, bandit.common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const Budget budget = Budget::from_env();
    if (dims_cmd->parsed()) return cmd_dims(dims, budget);
    if (gap_cmd->parsed()) return cmd_gap(gap, budget);
    if (online_cmd->parsed()) return cmd_online(online, budget);
    if (bandit_cmd->parsed()) return cmd_bandit(bandit, budget);
    std::cerr << "error: no subcommand\n";
    return 1;
  } catch (const argument_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const budget_error& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return 2;
  } catch (const protocol_error& e) {
    std::cerr << "protocol error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
}
