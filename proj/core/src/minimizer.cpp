#include "heretic/minimizer.hpp"

#include <algorithm>
#include <bit>
#include <ostream>
#include <unordered_set>

namespace heretic {
namespace {

struct work_limit_error : pipeline_error {
  using pipeline_error::pipeline_error;
};

std::pair<int, int> dnf_size(const boolean_space& sp, const dnf& d) {
  return {static_cast<int>(d.terms.size()), literal_count(sp, d)};
}

// ---------------------------------------------------------------------------
// Exact engine. A term is packed into one word: variable v occupies sizes[v]
// consecutive bits at offsets[v] (the atom budget keeps the total <= 62 bits).
// The assignment space is indexed in mixed radix (variable 0 fastest) and all
// set reasoning happens on assignment-indexed bitsets.

struct packed_space {
  std::vector<int> sizes;
  std::vector<int> offsets;
  std::uint64_t assignments = 1;

  explicit packed_space(const boolean_space& sp) {
    int off = 0;
    for (int v = 0; v < sp.var_count(); ++v) {
      const int s = sp.var(v).size();
      sizes.push_back(s);
      offsets.push_back(off);
      off += s;
      assignments *= static_cast<std::uint64_t>(s);
    }
    if (off > 62) throw pipeline_error("exact minimization: packed value bits exceed 62");
  }

  std::uint64_t var_mask(std::uint64_t w, std::size_t v) const {
    return (w >> offsets[v]) & ((1ULL << sizes[v]) - 1);
  }

  cube unpack(std::uint64_t w) const {
    cube c;
    c.masks.resize(sizes.size());
    for (std::size_t v = 0; v < sizes.size(); ++v) c.masks[v] = var_mask(w, v);
    return c;
  }
};

// Fixed-width bitset over the assignment space.
struct bitvec {
  std::vector<std::uint64_t> w;

  explicit bitvec(std::size_t words = 0, bool ones = false)
      : w(words, ones ? ~0ULL : 0ULL) {}

  void set(std::uint64_t i) { w[i >> 6] |= 1ULL << (i & 63); }
  bool test(std::uint64_t i) const { return w[i >> 6] >> (i & 63) & 1ULL; }

  void and_with(const bitvec& o) {
    for (std::size_t k = 0; k < w.size(); ++k) w[k] &= o.w[k];
  }
  void or_with(const bitvec& o) {
    for (std::size_t k = 0; k < w.size(); ++k) w[k] |= o.w[k];
  }
  // this & o & ~exclude == empty?
  static bool empty_and_not(const bitvec& a, const bitvec& b, const bitvec& on) {
    for (std::size_t k = 0; k < a.w.size(); ++k) {
      if ((a.w[k] & b.w[k] & ~on.w[k]) != 0) return false;
    }
    return true;
  }
};

struct exact_ctx {
  const packed_space& ps;
  std::size_t words;
  bitvec on;
  bitvec valid;                                 // bits < assignments
  std::vector<std::vector<bitvec>> value_bits;  // [var][val]: assignments with var=val
  std::uint64_t on_count = 0;

  exact_ctx(const packed_space& ps_in, const dnf& d)
      : ps(ps_in),
        words((ps_in.assignments + 63) / 64),
        on(words),
        valid(words) {
    value_bits.resize(ps.sizes.size());
    for (std::size_t v = 0; v < ps.sizes.size(); ++v) {
      value_bits[v].assign(static_cast<std::size_t>(ps.sizes[v]), bitvec(words));
    }
    std::vector<int> values(ps.sizes.size(), 0);
    for (std::uint64_t idx = 0; idx < ps.assignments; ++idx) {
      valid.set(idx);
      for (std::size_t v = 0; v < ps.sizes.size(); ++v) {
        value_bits[v][static_cast<std::size_t>(values[v])].set(idx);
      }
      // Mixed-radix increment.
      for (std::size_t v = 0; v < values.size(); ++v) {
        if (++values[v] < ps.sizes[v]) break;
        values[v] = 0;
      }
    }
    // ON-set by set algebra per term: far cheaper than evaluating the DNF at
    // every assignment when the space is large.
    for (const cube& t : d.terms) {
      bitvec admitted = valid;
      for (std::size_t v = 0; v < ps.sizes.size(); ++v) {
        admitted.and_with(mask_union(t.masks[v], v));
      }
      on.or_with(admitted);
    }
    for (std::uint64_t word : on.w) {
      on_count += static_cast<std::uint64_t>(std::popcount(word));
    }
  }

  // OR of value bitsets admitted by `mask` for variable v.
  bitvec mask_union(std::uint64_t mask, std::size_t v) const {
    bitvec out(words);
    while (mask != 0) {
      out.or_with(value_bits[v][static_cast<std::size_t>(std::countr_zero(mask))]);
      mask &= mask - 1;
    }
    return out;
  }

  // OR of value bitsets admitted by the packed term's mask for variable v.
  bitvec var_union(std::uint64_t w, std::size_t v) const {
    return mask_union(ps.var_mask(w, v), v);
  }
};

// All prime implicants, by raising one value bit at a time starting from the
// on-set minterms. Complete because every cube nested between an implicant
// and a containing implicant is itself an implicant. `visit_budget` caps how
// many lattice cubes may be expanded; the implicant lattice can dwarf the
// prime count, so hopeless instances must abort quickly rather than churn.
std::vector<std::uint64_t> prime_implicants(const exact_ctx& ctx, std::size_t visit_budget) {
  const packed_space& ps = ctx.ps;
  if (ctx.on_count > visit_budget) {
    throw work_limit_error("exact minimization exceeded its work limit");
  }

  std::vector<std::uint64_t> frontier;
  std::unordered_set<std::uint64_t> seen;

  std::vector<int> values(ps.sizes.size(), 0);
  for (std::uint64_t idx = 0; idx < ps.assignments; ++idx) {
    if (ctx.on.test(idx)) {
      std::uint64_t w = 0;
      for (std::size_t v = 0; v < ps.sizes.size(); ++v) {
        w |= 1ULL << (ps.offsets[v] + values[v]);
      }
      if (seen.insert(w).second) frontier.push_back(w);
    }
    for (std::size_t v = 0; v < values.size(); ++v) {
      if (++values[v] < ps.sizes[v]) break;
      values[v] = 0;
    }
  }

  const std::size_t nv = ps.sizes.size();
  std::vector<bitvec> prefix(nv + 1, bitvec(ctx.words, true));
  std::vector<bitvec> suffix(nv + 1, bitvec(ctx.words, true));

  std::vector<std::uint64_t> primes;
  std::size_t head = 0;
  while (head < frontier.size()) {
    if (head >= visit_budget) {
      throw work_limit_error("exact minimization exceeded its work limit");
    }
    const std::uint64_t w = frontier[head++];

    // prefix[v] = intersection of admitted sets for variables < v;
    // suffix[v] = the same for variables >= v.
    for (std::size_t v = 0; v < nv; ++v) {
      prefix[v + 1] = prefix[v];
      prefix[v + 1].and_with(ctx.var_union(w, v));
    }
    suffix[nv] = bitvec(ctx.words, true);
    for (std::size_t v = nv; v-- > 0;) {
      suffix[v] = suffix[v + 1];
      suffix[v].and_with(ctx.var_union(w, v));
    }

    bool raised = false;
    for (std::size_t v = 0; v < nv; ++v) {
      const std::uint64_t var_mask = ps.var_mask(w, v);
      bitvec others = prefix[v];
      others.and_with(suffix[v + 1]);
      others.and_with(ctx.valid);
      for (int val = 0; val < ps.sizes[v]; ++val) {
        if (var_mask >> val & 1ULL) continue;
        // The raise keeps an implicant iff the newly added slice is all-on.
        if (!bitvec::empty_and_not(others, ctx.value_bits[v][static_cast<std::size_t>(val)],
                                   ctx.on)) {
          continue;
        }
        raised = true;
        const std::uint64_t cand = w | 1ULL << (ps.offsets[v] + val);
        if (seen.insert(cand).second) frontier.push_back(cand);
      }
    }
    if (!raised) primes.push_back(w);
  }
  std::sort(primes.begin(), primes.end());
  return primes;
}

struct cover_search {
  const std::vector<std::vector<int>>& minterm_cover;  // prime indices per minterm
  const std::vector<int>& prime_literals;
  std::size_t node_budget;
  bool budget_hit = false;
  std::vector<int> current, best;
  int best_count = 0;
  long best_literals = 0;
  std::vector<int> depth;  // how many selected primes cover minterm i
  std::vector<std::vector<std::size_t>> minterms_of_prime;

  cover_search(const std::vector<std::vector<int>>& mc, const std::vector<int>& pl,
               std::size_t budget)
      : minterm_cover(mc), prime_literals(pl), node_budget(budget) {
    depth.assign(mc.size(), 0);
    for (std::size_t i = 0; i < mc.size(); ++i) {
      for (int p : mc[i]) {
        if (minterms_of_prime.size() <= static_cast<std::size_t>(p)) {
          minterms_of_prime.resize(static_cast<std::size_t>(p) + 1);
        }
        minterms_of_prime[static_cast<std::size_t>(p)].push_back(i);
      }
    }
    best_count = static_cast<int>(mc.size()) + 1;
  }

  void run() { search(); }

  void search() {
    if (node_budget == 0) {
      budget_hit = true;
      return;
    }
    --node_budget;

    int pick = -1;
    std::size_t pick_options = SIZE_MAX;
    for (std::size_t i = 0; i < depth.size(); ++i) {
      if (depth[i] > 0) continue;
      if (minterm_cover[i].size() < pick_options) {
        pick_options = minterm_cover[i].size();
        pick = static_cast<int>(i);
      }
    }
    if (pick < 0) {  // everything covered
      const int count = static_cast<int>(current.size());
      long literals = 0;
      for (int p : current) literals += prime_literals[static_cast<std::size_t>(p)];
      if (count < best_count || (count == best_count && literals < best_literals)) {
        best_count = count;
        best_literals = literals;
        best = current;
      }
      return;
    }
    if (static_cast<int>(current.size()) + 1 > best_count) return;

    for (int p : minterm_cover[static_cast<std::size_t>(pick)]) {
      current.push_back(p);
      for (std::size_t i : minterms_of_prime[static_cast<std::size_t>(p)]) ++depth[i];
      search();
      for (std::size_t i : minterms_of_prime[static_cast<std::size_t>(p)]) --depth[i];
      current.pop_back();
      if (budget_hit) return;
    }
  }
};

dnf minimize_exact(const dnf& input, const boolean_space& sp) {
  packed_space ps(sp);
  exact_ctx ctx(ps, input);

  if (ctx.on_count == 0) return dnf::constant_false();
  if (ctx.on_count == ps.assignments) return dnf::constant_true(sp);

  // Each lattice visit costs about 3·nv bitvec passes; the budget keeps the
  // total near a fixed word-operation spend, so large assignment spaces get
  // proportionally fewer visits and abort fast instead of stalling the run.
  const std::size_t nv = std::max<std::size_t>(1, ps.sizes.size());
  const std::size_t visit_budget =
      std::max<std::size_t>(4'096, 200'000'000 / (3 * nv * ctx.words));
  std::vector<std::uint64_t> primes = prime_implicants(ctx, visit_budget);

  std::vector<std::uint64_t> minterms;
  for (std::uint64_t idx = 0; idx < ps.assignments; ++idx) {
    if (ctx.on.test(idx)) minterms.push_back(idx);
  }
  auto covers = [&](std::uint64_t prime, std::uint64_t idx) {
    for (std::size_t v = 0; v < ps.sizes.size(); ++v) {
      const int val = static_cast<int>(idx % static_cast<std::uint64_t>(ps.sizes[v]));
      idx /= static_cast<std::uint64_t>(ps.sizes[v]);
      if ((prime >> (ps.offsets[v] + val) & 1ULL) == 0) return false;
    }
    return true;
  };

  std::vector<std::vector<int>> covering(minterms.size());
  for (std::size_t i = 0; i < minterms.size(); ++i) {
    for (std::size_t p = 0; p < primes.size(); ++p) {
      if (covers(primes[p], minterms[i])) covering[i].push_back(static_cast<int>(p));
    }
  }

  // Essential primes: any minterm covered by exactly one prime forces it.
  std::vector<int> chosen;
  std::vector<bool> prime_used(primes.size(), false);
  std::vector<bool> minterm_done(minterms.size(), false);
  for (std::size_t i = 0; i < minterms.size(); ++i) {
    if (covering[i].size() == 1 && !prime_used[static_cast<std::size_t>(covering[i][0])]) {
      prime_used[static_cast<std::size_t>(covering[i][0])] = true;
      chosen.push_back(covering[i][0]);
    }
  }
  for (std::size_t i = 0; i < minterms.size(); ++i) {
    for (int p : covering[i]) {
      if (prime_used[static_cast<std::size_t>(p)]) {
        minterm_done[i] = true;
        break;
      }
    }
  }

  std::vector<std::vector<int>> residual;
  for (std::size_t i = 0; i < minterms.size(); ++i) {
    if (!minterm_done[i]) residual.push_back(covering[i]);
  }

  std::vector<int> prime_literals;
  prime_literals.reserve(primes.size());
  for (std::uint64_t p : primes) prime_literals.push_back(literal_count(sp, ps.unpack(p)));

  if (!residual.empty()) {
    // Minimum-cover search is reserved for small residuals (it certifies
    // optimality on the tiny spaces the test oracles brute-force); larger
    // residuals go straight to the deterministic greedy cover.
    const bool try_exact_cover = residual.size() <= 64 && primes.size() <= 512;
    cover_search search(residual, prime_literals, try_exact_cover ? 500'000 : 0);
    if (try_exact_cover) search.run();
    std::vector<int> extra;
    if (try_exact_cover && !search.budget_hit &&
        search.best_count <= static_cast<int>(residual.size())) {
      extra = search.best;
    } else {
      // Deterministic greedy fallback: most newly covered minterms, then
      // fewer literals, then lower prime index. Coverage is tracked in
      // residual-indexed bitsets so each round is a popcount sweep.
      const std::size_t rwords = (residual.size() + 63) / 64;
      std::vector<bitvec> coverage(primes.size(), bitvec(rwords));
      for (std::size_t i = 0; i < residual.size(); ++i) {
        for (int p : residual[i]) coverage[static_cast<std::size_t>(p)].set(i);
      }
      bitvec covered(rwords);
      std::size_t left = residual.size();
      while (left > 0) {
        int best_p = -1;
        std::size_t best_gain = 0;
        for (std::size_t p = 0; p < primes.size(); ++p) {
          std::size_t gain = 0;
          for (std::size_t k = 0; k < rwords; ++k) {
            gain += static_cast<std::size_t>(
                std::popcount(coverage[p].w[k] & ~covered.w[k]));
          }
          if (gain > best_gain ||
              (gain > 0 && gain == best_gain && best_p >= 0 &&
               prime_literals[p] < prime_literals[static_cast<std::size_t>(best_p)])) {
            best_gain = gain;
            best_p = static_cast<int>(p);
          }
        }
        if (best_p < 0) break;
        extra.push_back(best_p);
        for (std::size_t k = 0; k < rwords; ++k) {
          const std::uint64_t add =
              coverage[static_cast<std::size_t>(best_p)].w[k] & ~covered.w[k];
          covered.w[k] |= add;
          left -= static_cast<std::size_t>(std::popcount(add));
        }
      }
    }
    for (int p : extra) {
      if (!prime_used[static_cast<std::size_t>(p)]) {
        prime_used[static_cast<std::size_t>(p)] = true;
        chosen.push_back(p);
      }
    }
  }

  dnf out;
  std::sort(chosen.begin(), chosen.end());
  chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
  for (int p : chosen) out.terms.push_back(ps.unpack(primes[static_cast<std::size_t>(p)]));
  out.normalize();
  return out;
}

// ---------------------------------------------------------------------------
// Heuristic engine.

// Is `c` entirely inside the union of `terms`? Recursive multi-valued case
// split with a node budget; running out of budget returns false, which only
// makes the caller skip a rewrite, never changes meaning.
bool cube_covered(const cube& c, const std::vector<cube>& terms, std::size_t* budget) {
  if (*budget == 0) return false;
  --*budget;

  std::vector<cube> live;
  for (const cube& t : terms) {
    if (t.contains(c)) return true;
    cube inter = t;
    bool nonempty = true;
    for (std::size_t v = 0; v < inter.masks.size(); ++v) {
      inter.masks[v] &= c.masks[v];
      if (inter.masks[v] == 0) {
        nonempty = false;
        break;
      }
    }
    if (nonempty) live.push_back(t);
  }
  if (live.empty()) return false;

  // Split on the first variable where c admits several values and some live
  // term restricts the choice; every branch must be covered.
  for (std::size_t v = 0; v < c.masks.size(); ++v) {
    if (std::popcount(c.masks[v]) < 2) continue;
    bool restricted = false;
    for (const cube& t : live) {
      if ((c.masks[v] & ~t.masks[v]) != 0) {
        restricted = true;
        break;
      }
    }
    if (!restricted) continue;
    std::uint64_t m = c.masks[v];
    while (m != 0) {
      cube sub = c;
      sub.masks[v] = m & (~m + 1);  // lowest set bit
      m &= m - 1;
      if (!cube_covered(sub, live, budget)) return false;
    }
    return true;
  }
  // No live term restricts anything inside c, so the first live term admits
  // every value c admits on every variable; it contains c (handled above).
  return true;
}

dnf minimize_heuristic(const dnf& input, const boolean_space& sp) {
  dnf d = input;
  d.absorb();
  if (d.terms.empty()) return d;

  bool changed = true;
  while (changed) {
    changed = false;

    // Adjacent merge: two terms identical except on one variable combine into
    // one with the union mask there.
    for (std::size_t i = 0; i < d.terms.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < d.terms.size() && !changed; ++j) {
        int diff_var = -1;
        bool mergeable = true;
        for (std::size_t v = 0; v < d.terms[i].masks.size(); ++v) {
          if (d.terms[i].masks[v] == d.terms[j].masks[v]) continue;
          if (diff_var >= 0) {
            mergeable = false;
            break;
          }
          diff_var = static_cast<int>(v);
        }
        if (!mergeable || diff_var < 0) continue;
        d.terms[i].masks[static_cast<std::size_t>(diff_var)] |=
            d.terms[j].masks[static_cast<std::size_t>(diff_var)];
        d.terms.erase(d.terms.begin() + static_cast<std::ptrdiff_t>(j));
        changed = true;
      }
    }
    if (changed) {
      d.absorb();
      continue;
    }

    // Redundant-literal elimination: unconstrain a variable when the widened
    // term is already inside the whole cover.
    for (std::size_t i = 0; i < d.terms.size() && !changed; ++i) {
      for (std::size_t v = 0; v < d.terms[i].masks.size() && !changed; ++v) {
        const std::uint64_t full = sp.full_mask(static_cast<int>(v));
        if (d.terms[i].masks[v] == full) continue;
        cube widened = d.terms[i];
        widened.masks[v] = full;
        std::size_t budget = 100'000;
        if (cube_covered(widened, d.terms, &budget)) {
          d.terms[i] = widened;
          changed = true;
        }
      }
    }
    if (changed) d.absorb();
  }
  return d;
}

}  // namespace

dnf minimize(const dnf& input, const boolean_space& sp, minimize_mode mode) {
  dnf base = input;
  for (const cube& t : base.terms) {
    if (t.masks.size() != static_cast<std::size_t>(sp.var_count())) {
      throw pipeline_error("minimize: term width does not match the space");
    }
  }
  base.normalize();

  const bool fits_exact =
      sp.atom_count() <= k_exact_max_atoms && base.terms.size() <= k_exact_max_terms;
  dnf out;
  if (mode == minimize_mode::exact) {
    if (!fits_exact) {
      throw pipeline_error(
          "exact minimization limits exceeded (" + std::to_string(sp.atom_count()) + " atoms, " +
          std::to_string(base.terms.size()) + " terms; limits " +
          std::to_string(k_exact_max_atoms) + "/" + std::to_string(k_exact_max_terms) + ")");
    }
    out = minimize_exact(base, sp);
  } else if (mode == minimize_mode::heuristic) {
    out = minimize_heuristic(base, sp);
  } else {
    if (fits_exact) {
      try {
        out = minimize_exact(base, sp);
      } catch (const work_limit_error&) {
        out = minimize_heuristic(base, sp);
      }
    } else {
      out = minimize_heuristic(base, sp);
    }
  }
  out.normalize();
  // Size contract: never return something larger than the (normalized) input.
  if (dnf_size(sp, out) > dnf_size(sp, base)) return base;
  return out;
}

equivalence_result equivalent(const dnf& a, const dnf& b, const boolean_space& sp,
                              std::uint64_t sample_seed) {
  equivalence_result res;
  const std::uint64_t n = sp.assignment_count();
  const std::uint64_t exhaustive_cap = 1ULL << 20;
  std::vector<int> values(static_cast<std::size_t>(sp.var_count()), 0);
  if (n <= exhaustive_cap) {
    for (std::uint64_t idx = 0; idx < n; ++idx) {
      std::uint64_t x = idx;
      for (int v = 0; v < sp.var_count(); ++v) {
        const std::uint64_t s = static_cast<std::uint64_t>(sp.var(v).size());
        values[static_cast<std::size_t>(v)] = static_cast<int>(x % s);
        x /= s;
      }
      if (a.eval(values) != b.eval(values)) {
        res.equal = false;
        res.witness = values;
        return res;
      }
    }
    return res;
  }
  res.exhaustive = false;
  rng r(mix_seed(sample_seed, 0xe9a1));
  for (int trial = 0; trial < 100'000; ++trial) {
    for (int v = 0; v < sp.var_count(); ++v) {
      values[static_cast<std::size_t>(v)] =
          static_cast<int>(r.below(static_cast<std::size_t>(sp.var(v).size())));
    }
    if (a.eval(values) != b.eval(values)) {
      res.equal = false;
      res.witness = values;
      return res;
    }
  }
  return res;
}

void write_pla(std::ostream& out, const boolean_space& sp, const dnf& d) {
  out << ".mv " << sp.var_count();
  for (int v = 0; v < sp.var_count(); ++v) out << " " << sp.var(v).size();
  out << "\n.p " << d.terms.size() << "\n";
  for (const cube& t : d.terms) {
    for (int v = 0; v < sp.var_count(); ++v) {
      if (v > 0) out << " ";
      for (int k = 0; k < sp.var(v).size(); ++k) {
        out << ((t.masks[static_cast<std::size_t>(v)] >> k & 1ULL) != 0 ? '1' : '0');
      }
    }
    out << "\n";
  }
  out << ".e\n";
}

}  // namespace heretic
