#include "mclearn/hypothesis.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mclearn/errors.hpp"
#include "internal_util.hpp"

namespace mclearn {

using detail::fmt;

HypothesisClass::HypothesisClass(int d, int k, std::vector<Hypothesis> hypotheses)
    : d_(d), k_(k), hypotheses_(std::move(hypotheses)) {
  if (d_ < 1) throw argument_error("HypothesisClass: domain size must be >= 1");
  if (k_ < 1) throw argument_error("HypothesisClass: label count must be >= 1");
  if (hypotheses_.empty()) throw argument_error("HypothesisClass: class must be non-empty");
  for (const Hypothesis& h : hypotheses_) {
    if (static_cast<int>(h.table.size()) != d_)
      throw argument_error(fmt("HypothesisClass: table has %zu entries, expected %d",
                               h.table.size(), d_));
    for (Label y : h.table)
      if (y < 0 || y >= k_)
        throw argument_error(fmt("HypothesisClass: label %d outside [0, %d)", y, k_));
  }
  std::sort(hypotheses_.begin(), hypotheses_.end());
  hypotheses_.erase(std::unique(hypotheses_.begin(), hypotheses_.end()), hypotheses_.end());
}

bool HypothesisClass::contains(const Hypothesis& h) const {
  return std::binary_search(hypotheses_.begin(), hypotheses_.end(), h);
}

std::ptrdiff_t HypothesisClass::index_of(const Hypothesis& h) const {
  auto it = std::lower_bound(hypotheses_.begin(), hypotheses_.end(), h);
  if (it == hypotheses_.end() || !(*it == h)) return -1;
  return it - hypotheses_.begin();
}

HypothesisClass build_full_class(int d, int k, const Budget& budget) {
  if (d < 1 || k < 1) throw argument_error("build_full_class: need d >= 1 and k >= 1");
  std::uint64_t count = 1;
  for (int i = 0; i < d; ++i) {
    if (count > budget.max_class_size / static_cast<std::uint64_t>(k))
      throw budget_error(fmt("build_full_class: k^d exceeds max_class_size=%llu",
                             static_cast<unsigned long long>(budget.max_class_size)));
    count *= static_cast<std::uint64_t>(k);
  }
  std::vector<Hypothesis> hs;
  hs.reserve(count);
  std::vector<Label> table(d, 0);
  // Odometer with position 0 most significant keeps the output lexicographic.
  while (true) {
    hs.push_back(Hypothesis{table});
    int pos = d - 1;
    while (pos >= 0 && table[pos] == k - 1) table[pos--] = 0;
    if (pos < 0) break;
    ++table[pos];
  }
  return HypothesisClass(d, k, std::move(hs));
}

Label cantor_star_label(int d) { return static_cast<Label>(1) << d; }

HypothesisClass build_cantor_class(int d, const Budget& budget) {
  if (d < 1) throw argument_error("build_cantor_class: need d >= 1");
  if (d > budget.max_cantor_domain)
    throw budget_error(fmt("build_cantor_class: d=%d exceeds max_cantor_domain=%d", d,
                           budget.max_cantor_domain));
  if ((1ull << d) > budget.max_class_size)
    throw budget_error(fmt("build_cantor_class: 2^d exceeds max_class_size=%llu",
                           static_cast<unsigned long long>(budget.max_class_size)));
  const Label star = cantor_star_label(d);
  std::vector<Hypothesis> hs;
  hs.reserve(1u << d);
  for (Label a = 0; a < star; ++a) {
    std::vector<Label> table(d);
    for (int x = 0; x < d; ++x) table[x] = ((a >> x) & 1) ? a : star;
    hs.push_back(Hypothesis{std::move(table)});
  }
  return HypothesisClass(d, star + 1, std::move(hs));
}

HypothesisClass build_constants_class(int d, int k, const Budget& budget) {
  if (d < 1 || k < 1) throw argument_error("build_constants_class: need d >= 1 and k >= 1");
  if (static_cast<std::uint64_t>(k) > budget.max_class_size)
    throw budget_error(fmt("build_constants_class: k exceeds max_class_size=%llu",
                           static_cast<unsigned long long>(budget.max_class_size)));
  std::vector<Hypothesis> hs;
  hs.reserve(k);
  for (Label y = 0; y < k; ++y) hs.push_back(Hypothesis{std::vector<Label>(d, y)});
  return HypothesisClass(d, k, std::move(hs));
}

HypothesisClass restrict_class(const HypothesisClass& h, std::vector<Instance> s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  if (s.empty()) throw argument_error("restrict_class: instance set must be non-empty");
  for (Instance x : s)
    if (x < 0 || x >= h.domain_size())
      throw argument_error(fmt("restrict_class: instance %d outside [0, %d)", x, h.domain_size()));
  std::vector<Hypothesis> hs;
  hs.reserve(h.size());
  for (const Hypothesis& f : h.hypotheses()) {
    std::vector<Label> table(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) table[i] = f(s[i]);
    hs.push_back(Hypothesis{std::move(table)});
  }
  return HypothesisClass(static_cast<int>(s.size()), h.label_count(), std::move(hs));
}

HypothesisClass symmetrize(const HypothesisClass& h, const Budget& budget) {
  const int k = h.label_count();
  if (k > budget.max_symmetrize_labels)
    throw budget_error(fmt("symmetrize: k=%d exceeds max_symmetrize_labels=%d", k,
                           budget.max_symmetrize_labels));
  std::uint64_t kfact = 1;
  for (int i = 2; i <= k; ++i) kfact *= static_cast<std::uint64_t>(i);
  if (kfact > budget.max_class_size / h.size())
    throw budget_error(fmt("symmetrize: k! * |H| exceeds max_class_size=%llu",
                           static_cast<unsigned long long>(budget.max_class_size)));

  std::vector<Label> perm(k);
  for (int i = 0; i < k; ++i) perm[i] = i;
  std::vector<Hypothesis> hs;
  hs.reserve(kfact * h.size());
  do {
    for (const Hypothesis& f : h.hypotheses()) {
      std::vector<Label> table(f.table.size());
      for (std::size_t x = 0; x < table.size(); ++x) table[x] = perm[f.table[x]];
      hs.push_back(Hypothesis{std::move(table)});
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return HypothesisClass(h.domain_size(), k, std::move(hs));
}

bool is_symmetric(const HypothesisClass& h) {
  const int k = h.label_count();
  std::vector<Label> table;
  for (int i = 0; i + 1 < k; ++i) {
    for (const Hypothesis& f : h.hypotheses()) {
      table = f.table;
      for (Label& y : table) {
        if (y == i) y = i + 1;
        else if (y == i + 1) y = i;
      }
      if (!h.contains(Hypothesis{table})) return false;
    }
  }
  return true;
}

std::string to_hclass_text(const HypothesisClass& h) {
  std::ostringstream out;
  out << h.domain_size() << ' ' << h.label_count() << ' ' << h.size() << '\n';
  for (const Hypothesis& f : h.hypotheses()) {
    for (std::size_t x = 0; x < f.table.size(); ++x) {
      if (x) out << ' ';
      out << f.table[x];
    }
    out << '\n';
  }
  return out.str();
}

namespace {

std::vector<long long> parse_int_line(const std::string& line, int lineno) {
  std::istringstream in(line);
  std::vector<long long> vals;
  long long v;
  while (in >> v) vals.push_back(v);
  std::string rest;
  if (in.bad() || (in.clear(), in >> rest))
    throw argument_error(fmt("HCLASS line %d: expected only integers", lineno));
  return vals;
}

}  // namespace

HypothesisClass parse_hclass_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;

  if (!std::getline(in, line)) throw argument_error("HCLASS line 1: missing header `d k n`");
  ++lineno;
  auto header = parse_int_line(line, lineno);
  if (header.size() != 3)
    throw argument_error(fmt("HCLASS line %d: header must be `d k n`", lineno));
  const long long d = header[0], k = header[1], n = header[2];
  if (d < 1 || d > 1'000'000 || k < 1 || k > 1'000'000'000 || n < 1 || n > 100'000'000)
    throw argument_error(fmt("HCLASS line %d: header values out of range", lineno));

  std::vector<Hypothesis> hs;
  hs.reserve(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) {
    if (!std::getline(in, line))
      throw argument_error(fmt("HCLASS line %d: expected %lld hypothesis rows, found %lld",
                               lineno + 1, n, i));
    ++lineno;
    auto vals = parse_int_line(line, lineno);
    if (static_cast<long long>(vals.size()) != d)
      throw argument_error(fmt("HCLASS line %d: expected %lld labels, found %zu", lineno, d,
                               vals.size()));
    std::vector<Label> table(vals.size());
    for (std::size_t x = 0; x < vals.size(); ++x) {
      if (vals[x] < 0 || vals[x] >= k)
        throw argument_error(fmt("HCLASS line %d: label %lld outside [0, %lld)", lineno,
                                 vals[x], k));
      table[x] = static_cast<Label>(vals[x]);
    }
    hs.push_back(Hypothesis{std::move(table)});
  }
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.find_first_not_of(" \t\r") != std::string::npos)
      throw argument_error(fmt("HCLASS line %d: trailing content after %lld rows", lineno, n));
  }
  return HypothesisClass(static_cast<int>(d), static_cast<int>(k), std::move(hs));
}

void save_hclass(const HypothesisClass& h, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw argument_error("save_hclass: cannot open " + path);
  out << to_hclass_text(h);
  if (!out) throw argument_error("save_hclass: write failed for " + path);
}

HypothesisClass load_hclass(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw argument_error("load_hclass: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_hclass_text(buf.str());
}

Budget Budget::from_env() {
  Budget b;
  if (const char* env = std::getenv("MCLEARN_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || v == 0)
      throw argument_error("MCLEARN_BUDGET must be a positive integer");
    b.max_class_size = v;
    b.max_enum_samples = v;
    b.max_memo_entries = v;
    b.max_tree_nodes = v;
    b.max_expert_count = v;
  }
  return b;
}

}  // namespace mclearn
