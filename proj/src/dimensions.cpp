#include "mclearn/dimensions.hpp"

#include <algorithm>
#include <bit>
#include <climits>
#include <optional>

#include <boost/multiprecision/cpp_int.hpp>

#include "internal_util.hpp"
#include "mclearn/errors.hpp"
#include "mclearn/rng.hpp"

namespace mclearn {

using detail::fmt;

// ---------------------------------------------------------------------------
// MemberMask
// ---------------------------------------------------------------------------

int MemberMask::count() const {
  return std::popcount(w[0]) + std::popcount(w[1]) + std::popcount(w[2]) + std::popcount(w[3]);
}

int MemberMask::first() const {
  for (int i = 0; i < 4; ++i)
    if (w[i]) return i * 64 + std::countr_zero(w[i]);
  return -1;
}

MemberMask full_member_mask(std::size_t n) {
  MemberMask m;
  for (std::size_t i = 0; i < n / 64; ++i) m.w[i] = ~0ull;
  if (n % 64) m.w[n / 64] = (1ull << (n % 64)) - 1;
  return m;
}

namespace {

MemberMask andnot(const MemberMask& a, const MemberMask& b) {
  MemberMask r;
  for (int i = 0; i < 4; ++i) r.w[i] = a.w[i] & ~b.w[i];
  return r;
}

template <class F>
void for_each_member(const MemberMask& m, F f) {
  for (int wi = 0; wi < 4; ++wi) {
    std::uint64_t w = m.w[wi];
    while (w) {
      f(wi * 64 + std::countr_zero(w));
      w &= w - 1;
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Memoized evaluators
// ---------------------------------------------------------------------------

std::size_t DimCacheBase::MaskHash::operator()(const MemberMask& m) const {
  std::uint64_t h = 0x9E3779B97F4A7C15ull;
  for (std::uint64_t v : m.w) h = mix64(h + v);
  return static_cast<std::size_t>(h);
}

DimCacheBase::DimCacheBase(const HypothesisClass& base, const Budget& budget, bool synchronized)
    : base_(&base),
      n_(base.size()),
      d_(base.domain_size()),
      k_(base.label_count()),
      synchronized_(synchronized),
      max_entries_(budget.max_memo_entries) {
  if (n_ > kMaxMemoClass)
    throw budget_error(fmt("online-dimension memo supports at most %zu hypotheses; class has %zu",
                           kMaxMemoClass, n_));
  const std::uint64_t cells = static_cast<std::uint64_t>(d_) * static_cast<std::uint64_t>(k_);
  if (cells > budget.max_memo_entries)
    throw budget_error(fmt("online-dimension membership table needs d*k=%llu cells, over "
                           "max_memo_entries=%llu",
                           static_cast<unsigned long long>(cells),
                           static_cast<unsigned long long>(max_entries_)));
  eq_.assign(cells, MemberMask{});
  vals_.resize(n_ * static_cast<std::size_t>(d_));
  for (std::size_t i = 0; i < n_; ++i) {
    const Hypothesis& h = base[i];
    for (int x = 0; x < d_; ++x) {
      vals_[i * d_ + x] = h.table[x];
      eq_[static_cast<std::size_t>(x) * k_ + h.table[x]].set(i);
    }
  }
  if (n_ <= kDenseBits) dense_.assign(std::size_t{1} << n_, kUnknown);
}

bool DimCacheBase::lookup(const MemberMask& m, int& out) {
  if (synchronized_) {
    std::lock_guard<std::mutex> lock(mu_);
    return lookup_unlocked(m, out);
  }
  return lookup_unlocked(m, out);
}

bool DimCacheBase::lookup_unlocked(const MemberMask& m, int& out) {
  if (!dense_.empty()) {
    const std::int16_t v = dense_[m.w[0]];
    if (v == kUnknown) return false;
    out = v;
    return true;
  }
  auto it = sparse_.find(m);
  if (it == sparse_.end()) return false;
  out = it->second;
  return true;
}

void DimCacheBase::store(const MemberMask& m, int value) {
  if (synchronized_) {
    std::lock_guard<std::mutex> lock(mu_);
    store_unlocked(m, value);
  } else {
    store_unlocked(m, value);
  }
}

void DimCacheBase::store_unlocked(const MemberMask& m, int value) {
  if (!dense_.empty()) {
    dense_[m.w[0]] = static_cast<std::int16_t>(value);
    return;
  }
  if (sparse_.size() >= max_entries_)
    throw budget_error(fmt("online-dimension memo exceeded max_memo_entries=%llu",
                           static_cast<unsigned long long>(max_entries_)));
  sparse_.emplace(m, static_cast<std::int16_t>(value));
}

int DimCacheBase::eval(const MemberMask& m) {
  if (m.none()) return -1;
  int v;
  if (lookup(m, v)) return v;
  v = compute(m);
  store(m, v);
  return v;
}

int DimCacheBase::attained_labels(const MemberMask& m, Instance x, Label* out) const {
  int cnt = 0;
  for_each_member(m, [&](int i) { out[cnt++] = vals_[static_cast<std::size_t>(i) * d_ + x]; });
  std::sort(out, out + cnt);
  return static_cast<int>(std::unique(out, out + cnt) - out);
}

LdimCache::LdimCache(const HypothesisClass& base, const Budget& budget, bool synchronized)
    : DimCacheBase(base, budget, synchronized) {}

int LdimCache::compute(const MemberMask& m) {
  const int n = m.count();
  if (n == 1) return 0;
  const int cap = std::bit_width(static_cast<unsigned>(n)) - 1;
  Label labs[kMaxMemoClass];
  int best = 0;
  for (Instance x = 0; x < d_; ++x) {
    const int cnt = attained_labels(m, x, labs);
    if (cnt < 2) continue;
    // max over label pairs of 1 + min of the two values == 1 + second-largest
    int top1 = INT_MIN, top2 = INT_MIN;
    for (int i = 0; i < cnt; ++i) {
      const int v = eval(m & members_with(x, labs[i]));
      if (v > top1) {
        top2 = top1;
        top1 = v;
      } else if (v > top2) {
        top2 = v;
      }
    }
    if (1 + top2 > best) best = 1 + top2;
    if (best == cap) return best;
  }
  return best;
}

BldimCache::BldimCache(const HypothesisClass& base, const Budget& budget, bool synchronized)
    : DimCacheBase(base, budget, synchronized) {}

int BldimCache::compute(const MemberMask& m) {
  // Labels never attained at x leave the subclass unchanged and are therefore
  // never the minimum (the dimension is monotone under inclusion), so the min
  // runs over attained labels only.
  const int cap = m.count() - 1;
  Label labs[kMaxMemoClass];
  int best = 0;
  for (Instance x = 0; x < d_; ++x) {
    const int cnt = attained_labels(m, x, labs);
    int vmin = INT_MAX;
    for (int i = 0; i < cnt; ++i) {
      vmin = std::min(vmin, eval(andnot(m, members_with(x, labs[i]))));
      if (vmin < 0) break;
    }
    if (1 + vmin > best) best = 1 + vmin;
    if (best == cap) return best;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Witness verification (raw definitions; scans the whole class per pattern)
// ---------------------------------------------------------------------------

namespace {

bool valid_instance_set(const HypothesisClass& h, const std::vector<Instance>& set) {
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (set[i] < 0 || set[i] >= h.domain_size()) return false;
    if (i > 0 && set[i] <= set[i - 1]) return false;
  }
  return true;
}

bool labels_in_range(const HypothesisClass& h, const std::vector<Label>& f) {
  for (Label y : f)
    if (y < 0 || y >= h.label_count()) return false;
  return true;
}

}  // namespace

bool verify_n_shatter(const HypothesisClass& h, const NShatterWitness& w) {
  const std::size_t s = w.set.size();
  if (w.f1.size() != s || w.f2.size() != s) return false;
  if (!valid_instance_set(h, w.set) || !labels_in_range(h, w.f1) || !labels_in_range(h, w.f2))
    return false;
  for (std::size_t i = 0; i < s; ++i)
    if (w.f1[i] == w.f2[i]) return false;
  if (s >= 26) return false;  // 2^s patterns would be unverifiable
  for (std::uint32_t t = 0; t < (1u << s); ++t) {
    bool found = false;
    for (const Hypothesis& g : h.hypotheses()) {
      bool ok = true;
      for (std::size_t i = 0; i < s && ok; ++i)
        ok = g(w.set[i]) == (((t >> i) & 1) ? w.f1[i] : w.f2[i]);
      if (ok) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

bool verify_g_shatter(const HypothesisClass& h, const GShatterWitness& w) {
  const std::size_t s = w.set.size();
  if (w.f.size() != s) return false;
  if (!valid_instance_set(h, w.set) || !labels_in_range(h, w.f)) return false;
  if (s >= 26) return false;
  for (std::uint32_t t = 0; t < (1u << s); ++t) {
    bool found = false;
    for (const Hypothesis& g : h.hypotheses()) {
      bool ok = true;
      for (std::size_t i = 0; i < s && ok; ++i) {
        const bool agree = g(w.set[i]) == w.f[i];
        ok = agree == (((t >> i) & 1) != 0);
      }
      if (ok) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

namespace {

bool class_satisfies(const HypothesisClass& h, const std::vector<std::pair<Instance, Label>>& cons,
                     bool equal) {
  for (const Hypothesis& g : h.hypotheses()) {
    bool ok = true;
    for (const auto& [x, y] : cons) {
      if ((g(x) == y) != equal) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

bool verify_ld_paths(const HypothesisClass& h, const ShatteredTree& t, std::size_t node, int depth,
                     std::vector<std::pair<Instance, Label>>& path) {
  if (depth == 0) return class_satisfies(h, path, true);
  for (int j = 0; j < 2; ++j) {
    path.emplace_back(t.node_instance[node], t.edge_labels[node][j]);
    const bool ok = verify_ld_paths(h, t, node * 2 + 1 + j, depth - 1, path);
    path.pop_back();
    if (!ok) return false;
  }
  return true;
}

bool verify_bl_paths(const HypothesisClass& h, const BanditTree& t, std::size_t node, int depth,
                     std::vector<std::pair<Instance, Label>>& path) {
  if (depth == 0) return class_satisfies(h, path, false);
  for (int j = 0; j < t.arity; ++j) {
    path.emplace_back(t.node_instance[node], static_cast<Label>(j));
    const bool ok = verify_bl_paths(h, t, node * static_cast<std::size_t>(t.arity) + j + 1,
                                    depth - 1, path);
    path.pop_back();
    if (!ok) return false;
  }
  return true;
}

}  // namespace

bool verify_littlestone_tree(const HypothesisClass& h, const ShatteredTree& t) {
  if (t.depth < 0) return false;
  const std::size_t nodes = (std::size_t{1} << t.depth) - 1;
  if (t.node_instance.size() != nodes || t.edge_labels.size() != nodes) return false;
  for (std::size_t i = 0; i < nodes; ++i) {
    if (t.node_instance[i] < 0 || t.node_instance[i] >= h.domain_size()) return false;
    const auto& e = t.edge_labels[i];
    if (e[0] == e[1]) return false;
    if (e[0] < 0 || e[0] >= h.label_count() || e[1] < 0 || e[1] >= h.label_count()) return false;
  }
  std::vector<std::pair<Instance, Label>> path;
  return verify_ld_paths(h, t, 0, t.depth, path);
}

bool verify_bandit_tree(const HypothesisClass& h, const BanditTree& t) {
  if (t.depth < 0 || t.arity != h.label_count()) return false;
  std::size_t nodes = 0;
  for (int level = 0; level < t.depth; ++level)
    nodes = nodes * static_cast<std::size_t>(t.arity) + 1;
  if (t.node_instance.size() != nodes) return false;
  for (Instance x : t.node_instance)
    if (x < 0 || x >= h.domain_size()) return false;
  std::vector<std::pair<Instance, Label>> path;
  return verify_bl_paths(h, t, 0, t.depth, path);
}

// ---------------------------------------------------------------------------
// Batch dimension searches
// ---------------------------------------------------------------------------

namespace {

// Distinct restrictions of the class to `sub` (ascending instances), written
// as row indices into `flat` (stride s), in lexicographic table order.
struct RestrictionSet {
  std::vector<Label> flat;      // n rows of s labels
  std::vector<int> rows;        // indices of distinct rows, lex order
  int s = 0;

  const Label* row(int r) const { return flat.data() + static_cast<std::size_t>(rows[r]) * s; }
  int size() const { return static_cast<int>(rows.size()); }

  void build(const HypothesisClass& h, const Instance* sub, int s_in) {
    s = s_in;
    const std::size_t n = h.size();
    flat.resize(n * s);
    for (std::size_t i = 0; i < n; ++i)
      for (int j = 0; j < s; ++j) flat[i * s + j] = h[i](sub[j]);
    rows.resize(n);
    for (std::size_t i = 0; i < n; ++i) rows[i] = static_cast<int>(i);
    auto less = [&](int a, int b) {
      const Label* pa = flat.data() + static_cast<std::size_t>(a) * s;
      const Label* pb = flat.data() + static_cast<std::size_t>(b) * s;
      return std::lexicographical_compare(pa, pa + s, pb, pb + s);
    };
    auto eq = [&](int a, int b) {
      const Label* pa = flat.data() + static_cast<std::size_t>(a) * s;
      const Label* pb = flat.data() + static_cast<std::size_t>(b) * s;
      return std::equal(pa, pa + s, pb);
    };
    std::sort(rows.begin(), rows.end(), less);
    rows.erase(std::unique(rows.begin(), rows.end(), eq), rows.end());
  }
};

// Lexicographic size-s subsets of [0, d). Returns false when exhausted.
bool next_combination(std::vector<Instance>& c, int d) {
  const int s = static_cast<int>(c.size());
  int i = s - 1;
  while (i >= 0 && c[i] == d - s + i) --i;
  if (i < 0) return false;
  ++c[i];
  for (int j = i + 1; j < s; ++j) c[j] = c[j - 1] + 1;
  return true;
}

void init_combination(std::vector<Instance>& c, int s) {
  c.resize(s);
  for (int i = 0; i < s; ++i) c[i] = i;
}

// Tracks which of the 2^s patterns were realized.
struct PatternSet {
  std::vector<std::uint64_t> bits;
  std::uint32_t seen = 0;

  void reset(int s) {
    bits.assign((std::size_t{1} << s) / 64 + 1, 0);
    seen = 0;
  }
  bool add(std::uint32_t p) {
    std::uint64_t& w = bits[p >> 6];
    const std::uint64_t bit = 1ull << (p & 63);
    if (w & bit) return false;
    w |= bit;
    ++seen;
    return true;
  }
};

void check_search_domain(const HypothesisClass& h, const Budget& budget, const char* who) {
  if (h.domain_size() > budget.max_search_domain)
    throw budget_error(fmt("%s: domain %d exceeds max_search_domain=%d", who, h.domain_size(),
                           budget.max_search_domain));
}

}  // namespace

NatarajanResult natarajan_dim(const HypothesisClass& h, const Budget& budget) {
  check_search_domain(h, budget, "natarajan_dim");
  NatarajanResult res;
  RestrictionSet rest;
  PatternSet pat;
  std::vector<Instance> sub;
  for (int s = 1; s <= h.domain_size(); ++s) {
    if (h.size() < (std::uint64_t{1} << s)) break;  // needs 2^s distinct restrictions
    bool found = false;
    init_combination(sub, s);
    do {
      rest.build(h, sub.data(), s);
      const std::uint32_t want = 1u << s;
      if (rest.size() < static_cast<int>(want)) continue;
      for (int a = 0; a < rest.size() && !found; ++a) {
        for (int b = a + 1; b < rest.size() && !found; ++b) {
          const Label* f1 = rest.row(a);
          const Label* f2 = rest.row(b);
          bool disagree = true;
          for (int i = 0; i < s && disagree; ++i) disagree = f1[i] != f2[i];
          if (!disagree) continue;
          pat.reset(s);
          for (int g = 0; g < rest.size() && pat.seen < want; ++g) {
            const Label* gr = rest.row(g);
            std::uint32_t p = 0;
            bool ok = true;
            for (int i = 0; i < s; ++i) {
              if (gr[i] == f1[i]) p |= 1u << i;
              else if (gr[i] != f2[i]) {
                ok = false;
                break;
              }
            }
            if (ok) pat.add(p);
          }
          if (pat.seen == want) {
            found = true;
            res.dim = s;
            res.witness.set.assign(sub.begin(), sub.end());
            res.witness.f1.assign(f1, f1 + s);
            res.witness.f2.assign(f2, f2 + s);
          }
        }
      }
    } while (!found && next_combination(sub, h.domain_size()));
    if (!found) break;
  }
  if (!verify_n_shatter(h, res.witness))
    throw invariant_error("natarajan_dim: witness failed re-validation");
  return res;
}

GraphResult graph_dim(const HypothesisClass& h, const Budget& budget) {
  check_search_domain(h, budget, "graph_dim");
  GraphResult res;
  RestrictionSet rest;
  PatternSet pat;
  std::vector<Instance> sub;
  for (int s = 1; s <= h.domain_size(); ++s) {
    if (h.size() < (std::uint64_t{1} << s)) break;
    bool found = false;
    init_combination(sub, s);
    do {
      rest.build(h, sub.data(), s);
      const std::uint32_t want = 1u << s;
      if (rest.size() < static_cast<int>(want)) continue;
      for (int a = 0; a < rest.size() && !found; ++a) {
        const Label* f = rest.row(a);
        pat.reset(s);
        for (int g = 0; g < rest.size() && pat.seen < want; ++g) {
          const Label* gr = rest.row(g);
          std::uint32_t p = 0;
          for (int i = 0; i < s; ++i)
            if (gr[i] == f[i]) p |= 1u << i;
          pat.add(p);
        }
        if (pat.seen == want) {
          found = true;
          res.dim = s;
          res.witness.set.assign(sub.begin(), sub.end());
          res.witness.f.assign(f, f + s);
        }
      }
    } while (!found && next_combination(sub, h.domain_size()));
    if (!found) break;
  }
  if (!verify_g_shatter(h, res.witness))
    throw invariant_error("graph_dim: witness failed re-validation");
  return res;
}

int vc_dim(const HypothesisClass& h, const Budget& budget) {
  if (h.label_count() != 2)
    throw argument_error(fmt("vc_dim: defined for k == 2 only, class has k=%d", h.label_count()));
  check_search_domain(h, budget, "vc_dim");
  int dim = 0;
  RestrictionSet rest;
  std::vector<Instance> sub;
  for (int s = 1; s <= h.domain_size(); ++s) {
    if (h.size() < (std::uint64_t{1} << s)) break;
    bool found = false;
    init_combination(sub, s);
    do {
      rest.build(h, sub.data(), s);
      if (rest.size() == 1 << s) found = true;
    } while (!found && next_combination(sub, h.domain_size()));
    if (!found) break;
    dim = s;
  }
  return dim;
}

// ---------------------------------------------------------------------------
// Online dimensions with witness trees
// ---------------------------------------------------------------------------

namespace {

void build_ld_tree(LdimCache& cache, ShatteredTree& tree, std::size_t idx, const MemberMask& m,
                   int depth) {
  if (depth == 0) return;
  Label labs[kMaxMemoClass];
  for (Instance x = 0; x < cache.base().domain_size(); ++x) {
    const int cnt = cache.attained_labels(m, x, labs);
    for (int i = 0; i < cnt; ++i) {
      const MemberMask m1 = m & cache.members_with(x, labs[i]);
      if (cache.eval(m1) < depth - 1) continue;
      for (int j = i + 1; j < cnt; ++j) {
        const MemberMask m2 = m & cache.members_with(x, labs[j]);
        if (cache.eval(m2) < depth - 1) continue;
        tree.node_instance[idx] = x;
        tree.edge_labels[idx] = {labs[i], labs[j]};
        build_ld_tree(cache, tree, idx * 2 + 1, m1, depth - 1);
        build_ld_tree(cache, tree, idx * 2 + 2, m2, depth - 1);
        return;
      }
    }
  }
  throw invariant_error("littlestone_dim: tree reconstruction found no shattered branch");
}

void build_bl_tree(BldimCache& cache, BanditTree& tree, std::size_t idx, const MemberMask& m,
                   int depth) {
  if (depth == 0) return;
  Label labs[kMaxMemoClass];
  const int k = cache.base().label_count();
  for (Instance x = 0; x < cache.base().domain_size(); ++x) {
    const int cnt = cache.attained_labels(m, x, labs);
    int vmin = INT_MAX;
    for (int i = 0; i < cnt; ++i)
      vmin = std::min(vmin, cache.eval(andnot(m, cache.members_with(x, labs[i]))));
    if (vmin < depth - 1) continue;
    tree.node_instance[idx] = x;
    for (Label y = 0; y < k; ++y)
      build_bl_tree(cache, tree, idx * static_cast<std::size_t>(k) + y + 1,
                    andnot(m, cache.members_with(x, y)), depth - 1);
    return;
  }
  throw invariant_error("bandit_littlestone_dim: tree reconstruction found no shattered branch");
}

void check_cache_base(const DimCacheBase& cache, const HypothesisClass& h, const char* who) {
  if (&cache.base() != &h && !(cache.base() == h))
    throw argument_error(std::string(who) + ": cache was built for a different class");
}

}  // namespace

TreeResult littlestone_dim(const HypothesisClass& h, const Budget& budget, LdimCache* cache) {
  std::optional<LdimCache> local;
  if (cache == nullptr) {
    local.emplace(h, budget);
    cache = &*local;
  } else {
    check_cache_base(*cache, h, "littlestone_dim");
  }
  const int dim = cache->eval(cache->full());
  TreeResult res;
  res.dim = dim;
  res.tree.depth = dim;
  if (dim > 0) {
    const std::uint64_t nodes = (std::uint64_t{1} << dim) - 1;
    if (nodes > budget.max_tree_nodes)
      throw budget_error(fmt("littlestone_dim: witness tree needs %llu nodes, over "
                             "max_tree_nodes=%llu",
                             static_cast<unsigned long long>(nodes),
                             static_cast<unsigned long long>(budget.max_tree_nodes)));
    res.tree.node_instance.assign(nodes, 0);
    res.tree.edge_labels.assign(nodes, {0, 0});
    build_ld_tree(*cache, res.tree, 0, cache->full(), dim);
  }
  if (!verify_littlestone_tree(h, res.tree))
    throw invariant_error("littlestone_dim: witness tree failed re-validation");
  return res;
}

BanditTreeResult bandit_littlestone_dim(const HypothesisClass& h, const Budget& budget,
                                        BldimCache* cache) {
  std::optional<BldimCache> local;
  if (cache == nullptr) {
    local.emplace(h, budget);
    cache = &*local;
  } else {
    check_cache_base(*cache, h, "bandit_littlestone_dim");
  }
  const int dim = cache->eval(cache->full());
  const int k = h.label_count();
  BanditTreeResult res;
  res.dim = dim;
  res.tree.arity = k;
  res.tree.depth = dim;
  std::uint64_t nodes = 0;
  for (int level = 0; level < dim; ++level) {
    if (nodes > (budget.max_tree_nodes - 1) / static_cast<std::uint64_t>(k))
      throw budget_error(fmt("bandit_littlestone_dim: witness tree of depth %d and arity %d "
                             "exceeds max_tree_nodes=%llu",
                             dim, k, static_cast<unsigned long long>(budget.max_tree_nodes)));
    nodes = nodes * static_cast<std::uint64_t>(k) + 1;
  }
  if (nodes > budget.max_tree_nodes)
    throw budget_error(fmt("bandit_littlestone_dim: witness tree needs %llu nodes, over "
                           "max_tree_nodes=%llu",
                           static_cast<unsigned long long>(nodes),
                           static_cast<unsigned long long>(budget.max_tree_nodes)));
  if (dim > 0) {
    res.tree.node_instance.assign(nodes, 0);
    build_bl_tree(*cache, res.tree, 0, cache->full(), dim);
  }
  if (!verify_bandit_tree(h, res.tree))
    throw invariant_error("bandit_littlestone_dim: witness tree failed re-validation");
  return res;
}

std::string natarajan_cardinality_bound(int d, int k, int ndim) {
  if (d < 1 || k < 1 || ndim < 0)
    throw argument_error("natarajan_cardinality_bound: need d >= 1, k >= 1, ndim >= 0");
  namespace mp = boost::multiprecision;
  const mp::cpp_int v = mp::pow(mp::cpp_int(d), static_cast<unsigned>(ndim)) *
                        mp::pow(mp::cpp_int(k), static_cast<unsigned>(2 * ndim));
  return v.str();
}

}  // namespace mclearn
