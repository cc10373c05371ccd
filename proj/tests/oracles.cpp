#include "oracles.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

using mclearn::HypothesisClass;
using mclearn::Instance;
using mclearn::Label;

namespace oracle {
namespace {

void check_size(const HypothesisClass& h) {
  if (h.size() > 64) throw std::runtime_error("oracle: class exceeds 64 hypotheses");
}

bool next_subset(std::vector<Instance>& c, int d) {
  const int s = static_cast<int>(c.size());
  int i = s - 1;
  while (i >= 0 && c[i] == d - s + i) --i;
  if (i < 0) return false;
  ++c[i];
  for (int j = i + 1; j < s; ++j) c[j] = c[j - 1] + 1;
  return true;
}

// Is `set` N-shattered? Enumerates every pointwise-disagreeing pair
// (f1, f2) in [k]^set x [k]^set via a combined odometer whose per-coordinate
// digit encodes an ordered pair of distinct labels.
bool n_shattered(const HypothesisClass& h, const std::vector<Instance>& set) {
  const int s = static_cast<int>(set.size());
  const int k = h.label_count();
  if (k < 2) return false;
  if (h.size() < (std::uint64_t{1} << s)) return false;  // patterns need 2^s distinct behaviors
  const int pair_count = k * (k - 1);
  std::vector<int> digit(s, 0);
  std::vector<Label> f1(s), f2(s);
  while (true) {
    for (int i = 0; i < s; ++i) {
      const int a = digit[i] / (k - 1);
      const int r = digit[i] % (k - 1);
      f1[i] = a;
      f2[i] = r + (r >= a ? 1 : 0);
    }
    // size guard above forces s <= 6, so the <= 64 patterns fit one word
    const int patterns = 1 << s;
    std::uint64_t seen = 0;
    const std::uint64_t all = (patterns == 64) ? ~0ull : (1ull << patterns) - 1;
    for (const auto& g : h.hypotheses()) {
      std::uint32_t t = 0;
      bool valid = true;
      for (int i = 0; i < s; ++i) {
        const Label v = g(set[i]);
        if (v == f1[i]) t |= 1u << i;
        else if (v != f2[i]) {
          valid = false;
          break;
        }
      }
      if (valid) seen |= 1ull << t;
      if (seen == all) return true;
    }
    int pos = s - 1;
    while (pos >= 0 && digit[pos] == pair_count - 1) digit[pos--] = 0;
    if (pos < 0) return false;
    ++digit[pos];
  }
}

// Is `set` G-shattered? Enumerates every witness f in [k]^set; each
// hypothesis realizes exactly the pattern given by its agreement set with f.
bool g_shattered(const HypothesisClass& h, const std::vector<Instance>& set) {
  const int s = static_cast<int>(set.size());
  const int k = h.label_count();
  if (h.size() < (std::uint64_t{1} << s)) return false;
  std::vector<Label> f(s, 0);
  while (true) {
    const int patterns = 1 << s;
    std::uint64_t seen = 0;
    const std::uint64_t all = (patterns == 64) ? ~0ull : (1ull << patterns) - 1;
    for (const auto& g : h.hypotheses()) {
      std::uint32_t t = 0;
      for (int i = 0; i < s; ++i)
        if (g(set[i]) == f[i]) t |= 1u << i;
      seen |= 1ull << t;
      if (seen == all) return true;
    }
    int pos = s - 1;
    while (pos >= 0 && f[pos] == k - 1) f[pos--] = 0;
    if (pos < 0) return false;
    ++f[pos];
  }
}

template <class Shattered>
int batch_dim(const HypothesisClass& h, Shattered shattered) {
  check_size(h);
  int best = 0;
  for (int s = 1; s <= h.domain_size(); ++s) {
    std::vector<Instance> sub(s);
    for (int i = 0; i < s; ++i) sub[i] = i;
    bool any = false;
    do {
      if (shattered(h, sub)) {
        any = true;
        break;
      }
    } while (next_subset(sub, h.domain_size()));
    if (!any) break;
    best = s;
  }
  return best;
}

// Exhaustive "does a shattered tree of this depth exist" search over member
// bitsets, memoized per (depth, members): dense byte tables for small
// classes, hash maps otherwise.
struct tree_search {
  int d, k, n;
  std::vector<std::uint64_t> eq;  // eq[x*k+y]: members with g(x) == y
  std::uint64_t full;
  bool dense;
  std::vector<std::vector<std::int8_t>> memo_dense;               // [depth][members]
  std::vector<std::unordered_map<std::uint64_t, bool>> memo_map;  // [depth]

  explicit tree_search(const HypothesisClass& h)
      : d(h.domain_size()), k(h.label_count()), n(static_cast<int>(h.size())) {
    check_size(h);
    eq.assign(static_cast<std::size_t>(d) * k, 0);
    for (int i = 0; i < n; ++i)
      for (Instance x = 0; x < d; ++x)
        eq[static_cast<std::size_t>(x) * k + h[static_cast<std::size_t>(i)](x)] |= 1ull << i;
    full = (n == 64) ? ~0ull : (1ull << n) - 1;
    dense = n <= 16;
  }

  std::int8_t* memo_at(int depth, std::uint64_t m) {
    if (static_cast<std::size_t>(depth) >= memo_dense.size()) memo_dense.resize(depth + 1);
    auto& level = memo_dense[static_cast<std::size_t>(depth)];
    if (level.empty()) level.assign(std::size_t{1} << n, -1);
    return &level[m];
  }

  template <class Rec>
  bool memoized(std::uint64_t m, int depth, Rec rec) {
    if (!m) return false;
    if (depth == 0) return true;
    if (dense) {
      std::int8_t* slot = memo_at(depth, m);
      if (*slot >= 0) return *slot != 0;
      const bool r = rec();
      *memo_at(depth, m) = r ? 1 : 0;  // re-fetch: rec() may grow memo_dense
      return r;
    }
    if (static_cast<std::size_t>(depth) >= memo_map.size()) memo_map.resize(depth + 1);
    auto& level = memo_map[static_cast<std::size_t>(depth)];
    auto it = level.find(m);
    if (it != level.end()) return it->second;
    const bool r = rec();
    memo_map[static_cast<std::size_t>(depth)][m] = r;
    return r;
  }

  bool exists_ld(std::uint64_t m, int depth) {
    return memoized(m, depth, [&] {
      for (Instance x = 0; x < d; ++x)
        for (Label y1 = 0; y1 < k; ++y1) {
          const std::uint64_t m1 = m & eq[static_cast<std::size_t>(x) * k + y1];
          if (!m1) continue;
          for (Label y2 = y1 + 1; y2 < k; ++y2) {
            const std::uint64_t m2 = m & eq[static_cast<std::size_t>(x) * k + y2];
            if (!m2) continue;
            if (exists_ld(m1, depth - 1) && exists_ld(m2, depth - 1)) return true;
          }
        }
      return false;
    });
  }

  bool exists_bl(std::uint64_t m, int depth) {
    return memoized(m, depth, [&] {
      for (Instance x = 0; x < d; ++x) {
        bool ok = true;
        for (Label y = 0; y < k; ++y)
          if (!exists_bl(m & ~eq[static_cast<std::size_t>(x) * k + y], depth - 1)) {
            ok = false;
            break;
          }
        if (ok) return true;
      }
      return false;
    });
  }
};

}  // namespace

int natarajan_dim(const HypothesisClass& h) {
  return batch_dim(h, [](const HypothesisClass& hc, const std::vector<Instance>& s) {
    return n_shattered(hc, s);
  });
}

int graph_dim(const HypothesisClass& h) {
  return batch_dim(h, [](const HypothesisClass& hc, const std::vector<Instance>& s) {
    return g_shattered(hc, s);
  });
}

int littlestone_dim(const HypothesisClass& h) {
  tree_search ts(h);
  int t = 0;
  while (ts.exists_ld(ts.full, t + 1)) ++t;
  return t;
}

int bandit_littlestone_dim(const HypothesisClass& h) {
  tree_search ts(h);
  int t = 0;
  while (ts.exists_bl(ts.full, t + 1)) ++t;
  return t;
}

namespace {

using Sample = std::vector<std::pair<Instance, Label>>;

std::size_t errors_of(const HypothesisClass& h, std::size_t i, const Sample& s) {
  std::size_t e = 0;
  for (const auto& [x, y] : s)
    if (h[i](x) != y) ++e;
  return e;
}

// reference minimizers, scanning the class in stored (canonical) order
std::size_t ref_erm_index(RefErm kind, const HypothesisClass& h, const Sample& s,
                          const std::vector<Label>& defaults) {
  std::size_t best = 0;
  std::size_t best_err = errors_of(h, 0, s);
  for (std::size_t i = 1; i < h.size(); ++i) {
    const std::size_t e = errors_of(h, i, s);
    if (e < best_err) {
      best = i;
      best_err = e;
    }
  }
  if (kind == RefErm::generic) return best;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (errors_of(h, i, s) != best_err) continue;
    bool inside = true;
    for (Label out : h[i].table) {
      bool seen = false;
      for (const auto& [x, y] : s) {
        (void)x;
        if (y == out) seen = true;
      }
      for (Label dflt : defaults)
        if (dflt == out) seen = true;
      if (!seen) {
        inside = false;
        break;
      }
    }
    if (inside) return i;
  }
  return best;  // fallback: plain minimizer
}

// fold one concrete 2m-sample into the growth / range statistic
template <typename Fold>
void fold_subsamples(RefErm kind, const HypothesisClass& h, const Sample& s, int m,
                     const std::vector<Label>& defaults, bool all_proper, Fold&& fold) {
  const int n = static_cast<int>(s.size());
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    const int size = __builtin_popcount(mask);
    if (all_proper ? (mask == (1u << n) - 1) : (size != m)) continue;
    Sample sub;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) sub.push_back(s[static_cast<std::size_t>(i)]);
    fold(ref_erm_index(kind, h, sub, defaults));
  }
}

template <typename Stat>
int sup_over_samples(const HypothesisClass& h, int m, bool realizable, Stat&& stat) {
  check_size(h);
  const int two_m = 2 * m;
  int best = 0;
  Sample s(static_cast<std::size_t>(two_m));
  if (realizable) {
    // every hypothesis × every ordered instance tuple
    for (std::size_t fi = 0; fi < h.size(); ++fi) {
      std::vector<int> xs(static_cast<std::size_t>(two_m), 0);
      for (;;) {
        for (int i = 0; i < two_m; ++i) {
          s[static_cast<std::size_t>(i)].first = xs[static_cast<std::size_t>(i)];
          s[static_cast<std::size_t>(i)].second = h[fi](xs[static_cast<std::size_t>(i)]);
        }
        best = std::max(best, stat(s));
        int j = two_m - 1;
        while (j >= 0 && xs[static_cast<std::size_t>(j)] == h.domain_size() - 1) {
          xs[static_cast<std::size_t>(j)] = 0;
          --j;
        }
        if (j < 0) break;
        ++xs[static_cast<std::size_t>(j)];
      }
    }
    return best;
  }
  // every ordered (x, y) tuple
  const int cells = h.domain_size() * h.label_count();
  std::vector<int> v(static_cast<std::size_t>(two_m), 0);
  for (;;) {
    for (int i = 0; i < two_m; ++i) {
      s[static_cast<std::size_t>(i)].first = v[static_cast<std::size_t>(i)] / h.label_count();
      s[static_cast<std::size_t>(i)].second = v[static_cast<std::size_t>(i)] % h.label_count();
    }
    best = std::max(best, stat(s));
    int j = two_m - 1;
    while (j >= 0 && v[static_cast<std::size_t>(j)] == cells - 1) {
      v[static_cast<std::size_t>(j)] = 0;
      --j;
    }
    if (j < 0) break;
    ++v[static_cast<std::size_t>(j)];
  }
  return best;
}

}  // namespace

int growth_function(RefErm kind, const HypothesisClass& h, int m, bool realizable,
                    const std::vector<Label>& defaults) {
  if (m < 1 || m > 8) throw std::runtime_error("oracle: growth m out of range");
  return sup_over_samples(h, m, realizable, [&](const Sample& s) {
    std::vector<Instance> xs;
    for (const auto& [x, y] : s) {
      (void)y;
      if (std::find(xs.begin(), xs.end(), x) == xs.end()) xs.push_back(x);
    }
    std::vector<std::vector<Label>> sigs;
    fold_subsamples(kind, h, s, m, defaults, false, [&](std::size_t idx) {
      std::vector<Label> sig;
      for (Instance x : xs) sig.push_back(h[idx](x));
      if (std::find(sigs.begin(), sigs.end(), sig) == sigs.end()) sigs.push_back(sig);
    });
    return static_cast<int>(sigs.size());
  });
}

int essential_range(RefErm kind, const HypothesisClass& h, int m, bool realizable,
                    const std::vector<Label>& defaults) {
  if (m < 1 || m > 8) throw std::runtime_error("oracle: essential range m out of range");
  return sup_over_samples(h, m, realizable, [&](const Sample& s) {
    std::vector<bool> used(static_cast<std::size_t>(h.label_count()), false);
    fold_subsamples(kind, h, s, m, defaults, true, [&](std::size_t idx) {
      for (Label out : h[idx].table) used[static_cast<std::size_t>(out)] = true;
    });
    int count = 0;
    for (bool b : used)
      if (b) ++count;
    return count;
  });
}

}  // namespace oracle
