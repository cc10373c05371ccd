#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mclearn/budget.hpp"

namespace mclearn {

using Instance = std::int32_t;  // point index in [0, d)
using Label = std::int32_t;     // label index in [0, k)

// A total function [d] -> [k], stored as its value table.
struct Hypothesis {
  std::vector<Label> table;

  Label operator()(Instance x) const { return table[static_cast<std::size_t>(x)]; }
  bool operator==(const Hypothesis& o) const { return table == o.table; }
  bool operator<(const Hypothesis& o) const { return table < o.table; }
};

// A finite class of total functions [d] -> [k]. Tables are deduplicated and
// kept in lexicographic order, so hypothesis indices are canonical and every
// "first minimizer" / "lowest index" tie-break below is well defined.
class HypothesisClass {
 public:
  HypothesisClass(int d, int k, std::vector<Hypothesis> hypotheses);

  int domain_size() const { return d_; }
  int label_count() const { return k_; }
  std::size_t size() const { return hypotheses_.size(); }
  const Hypothesis& operator[](std::size_t i) const { return hypotheses_[i]; }
  const std::vector<Hypothesis>& hypotheses() const { return hypotheses_; }

  bool contains(const Hypothesis& h) const;
  // Canonical index, or -1 when absent.
  std::ptrdiff_t index_of(const Hypothesis& h) const;

  bool operator==(const HypothesisClass& o) const {
    return d_ == o.d_ && k_ == o.k_ && hypotheses_ == o.hypotheses_;
  }

 private:
  int d_;
  int k_;
  std::vector<Hypothesis> hypotheses_;
};

// All k^d total functions.
HypothesisClass build_full_class(int d, int k, const Budget& budget = {});

// Subset-pointer class over [d]: labels encode each A subseteq [d] as the
// bitmask of A (labels 0 .. 2^d-1) plus the sentinel label 2^d for "not in the
// set". Hypothesis f_A maps x to A's mask if x is in A and to the sentinel
// otherwise; there is one hypothesis per subset A, so the class has 2^d
// members over k = 2^d + 1 labels.
HypothesisClass build_cantor_class(int d, const Budget& budget = {});
Label cantor_star_label(int d);

// All k constant functions over [d].
HypothesisClass build_constants_class(int d, int k, const Budget& budget = {});

// Restriction H|_S: tables re-indexed to |S| positions in ascending original
// order, deduplicated. S is treated as a set (duplicates collapse).
HypothesisClass restrict_class(const HypothesisClass& h, std::vector<Instance> s);

// Closure of H under all k! label bijections.
HypothesisClass symmetrize(const HypothesisClass& h, const Budget& budget = {});

// True iff H is closed under label bijections; checked via the k-1 adjacent
// transpositions, which generate the symmetric group.
bool is_symmetric(const HypothesisClass& h);

// Text format "HCLASS v1": first line `d k n`, then n lines of d
// space-separated labels. Parse errors carry 1-based line numbers.
std::string to_hclass_text(const HypothesisClass& h);
HypothesisClass parse_hclass_text(const std::string& text);
void save_hclass(const HypothesisClass& h, const std::string& path);
HypothesisClass load_hclass(const std::string& path);

}  // namespace mclearn
