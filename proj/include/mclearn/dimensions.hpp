#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "mclearn/budget.hpp"
#include "mclearn/hypothesis.hpp"

namespace mclearn {

// ---------------------------------------------------------------------------
// Shattering witnesses. Every search below re-validates its witness against
// the raw definition before returning it.
// ---------------------------------------------------------------------------

struct NShatterWitness {
  std::vector<Instance> set;  // ascending instances
  std::vector<Label> f1, f2;  // pointwise-disagreeing tables on `set`
};

struct GShatterWitness {
  std::vector<Instance> set;
  std::vector<Label> f;
};

// Raw definition checks, scanning the whole class per pattern.
bool verify_n_shatter(const HypothesisClass& h, const NShatterWitness& w);
bool verify_g_shatter(const HypothesisClass& h, const GShatterWitness& w);

// Complete binary shattered tree for the sequential game. Nodes are stored in
// level order: node i's children are 2i+1 and 2i+2; the two edge labels of a
// node are distinct. Path condition: for every root-to-leaf path there is
// some h in the class with h(x_i) == y_i along the path.
struct ShatteredTree {
  int depth = 0;
  std::vector<Instance> node_instance;
  std::vector<std::array<Label, 2>> edge_labels;
};
bool verify_littlestone_tree(const HypothesisClass& h, const ShatteredTree& t);

// ---------------------------------------------------------------------------
// Membership bitset over a class's canonical hypothesis order. Online
// dimensions are memoized on these, so those computations cap the class at
// kMaxMemoClass hypotheses (a hard structural cap, reported as budget_error).
// ---------------------------------------------------------------------------

inline constexpr std::size_t kMaxMemoClass = 256;

struct MemberMask {
  std::array<std::uint64_t, 4> w{};

  void set(std::size_t i) { w[i >> 6] |= 1ull << (i & 63); }
  bool test(std::size_t i) const { return (w[i >> 6] >> (i & 63)) & 1; }
  bool none() const { return !(w[0] | w[1] | w[2] | w[3]); }
  int count() const;
  MemberMask operator&(const MemberMask& o) const {
    MemberMask r;
    for (int i = 0; i < 4; ++i) r.w[i] = w[i] & o.w[i];
    return r;
  }
  bool operator==(const MemberMask& o) const { return w == o.w; }
  // Lowest set bit index, or -1 when empty.
  int first() const;
};

MemberMask full_member_mask(std::size_t n);

// ---------------------------------------------------------------------------
// Memoized evaluators for the online dimensions of subclasses of a fixed base
// class. A cache can be shared (across rounds, experts, or parallel runs);
// construct with synchronized=true for concurrent readers with serialized
// writers. Recursions:
//   LD(V)  = max over x and realizable label pairs y1 != y2 of
//            1 + min(LD(V[x->y1]), LD(V[x->y2])),          LD(empty)  = -1
//   BLD(V) = max over x of 1 + min over labels y of
//            BLD({f in V : f(x) != y}),                    BLD(empty) = -1
// ---------------------------------------------------------------------------

class DimCacheBase {
 public:
  DimCacheBase(const HypothesisClass& base, const Budget& budget, bool synchronized);
  virtual ~DimCacheBase() = default;

  const HypothesisClass& base() const { return *base_; }
  const MemberMask& members_with(Instance x, Label y) const {
    return eq_[static_cast<std::size_t>(x) * k_ + static_cast<std::size_t>(y)];
  }
  MemberMask full() const { return full_member_mask(n_); }
  int eval(const MemberMask& members);
  // Distinct labels the members take at x, sorted ascending into `out`
  // (capacity kMaxMemoClass suffices); returns how many.
  int attained_labels(const MemberMask& m, Instance x, Label* out) const;

 protected:
  virtual int compute(const MemberMask& members) = 0;

  const HypothesisClass* base_;
  std::size_t n_;
  int d_, k_;
  std::vector<MemberMask> eq_;  // eq_[x*k + y]: members mapping x to y
  std::vector<Label> vals_;     // vals_[i*d + x] = h_i(x)

 private:
  static constexpr std::size_t kDenseBits = 12;
  static constexpr std::int16_t kUnknown = -32768;

  bool synchronized_;
  std::uint64_t max_entries_;
  std::mutex mu_;
  // Dense table indexed by the low word when the base class is small, hash
  // map on the full mask otherwise.
  std::vector<std::int16_t> dense_;
  struct MaskHash {
    std::size_t operator()(const MemberMask& m) const;
  };
  std::unordered_map<MemberMask, std::int16_t, MaskHash> sparse_;

  bool lookup(const MemberMask& m, int& out);
  bool lookup_unlocked(const MemberMask& m, int& out);
  void store(const MemberMask& m, int value);
  void store_unlocked(const MemberMask& m, int value);
};

class LdimCache : public DimCacheBase {
 public:
  explicit LdimCache(const HypothesisClass& base, const Budget& budget = {},
                     bool synchronized = false);

 protected:
  int compute(const MemberMask& members) override;
};

class BldimCache : public DimCacheBase {
 public:
  explicit BldimCache(const HypothesisClass& base, const Budget& budget = {},
                      bool synchronized = false);

 protected:
  int compute(const MemberMask& members) override;
};

// ---------------------------------------------------------------------------
// Dimension searches. The batch searches enumerate instance subsets by
// ascending size and stop at the first size with no shattered set (shattering
// is closed under subsets); candidate witness functions come from the class's
// own restriction, which is sufficient because the patterns T = S and T = {}
// force both witness functions to lie in H|_S. Ties: lowest size, then
// lexicographically first subset, then first candidate pair in restriction
// order.
// ---------------------------------------------------------------------------

struct NatarajanResult {
  int dim = 0;
  NShatterWitness witness;  // empty set when dim == 0
};

struct GraphResult {
  int dim = 0;
  GShatterWitness witness;
};

struct TreeResult {
  int dim = 0;
  ShatteredTree tree;
};

NatarajanResult natarajan_dim(const HypothesisClass& h, const Budget& budget = {});
GraphResult graph_dim(const HypothesisClass& h, const Budget& budget = {});

// Binary classes only (k == 2); equals both batch dimensions there.
int vc_dim(const HypothesisClass& h, const Budget& budget = {});

// Sequential online dimension, with a witness tree of arity 2. Pass a cache
// to share memoized subclass values across calls.
TreeResult littlestone_dim(const HypothesisClass& h, const Budget& budget = {},
                           LdimCache* cache = nullptr);

// Bandit online dimension. The witness tree has arity k and can have k^depth
// paths, so materialization is guarded by budget.max_tree_nodes; the bandit
// tree is returned via its own type below.
struct BanditTree {
  int arity = 0;
  int depth = 0;
  std::vector<Instance> node_instance;  // level order; edge slot j = label j
};
bool verify_bandit_tree(const HypothesisClass& h, const BanditTree& t);

struct BanditTreeResult {
  int dim = 0;
  BanditTree tree;
};
BanditTreeResult bandit_littlestone_dim(const HypothesisClass& h, const Budget& budget = {},
                                        BldimCache* cache = nullptr);

// |H| <= d^dim * k^(2 dim), returned as an exact decimal string.
std::string natarajan_cardinality_bound(int d, int k, int ndim);

}  // namespace mclearn
