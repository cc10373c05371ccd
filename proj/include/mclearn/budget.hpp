#pragma once

#include <cstdint>

namespace mclearn {

// Enumeration and memoization caps. Exceeding a cap raises budget_error with
// the budget's name; nothing ever truncates silently. MCLEARN_BUDGET=<n>
// overrides the count-valued caps with a single knob.
struct Budget {
  std::uint64_t max_class_size = 1ull << 20;   // hypotheses per class (build_full_class, symmetrize)
  int max_cantor_domain = 16;                  // build_cantor_class: labels are d-bit masks
  int max_symmetrize_labels = 8;               // symmetrize walks all k! label bijections
  int max_search_domain = 20;                  // subset enumeration in dimension search
  std::uint64_t max_enum_samples = 1ull << 22; // exhaustive growth/essential-range sample count
  std::uint64_t max_memo_entries = 1ull << 22; // online-dimension memo tables
  std::uint64_t max_tree_nodes = 1ull << 20;   // materialized shattered trees
  std::uint64_t max_expert_count = 1ull << 21; // agnostic expert construction

  static Budget from_env();  // reads MCLEARN_BUDGET if set
};

}  // namespace mclearn
