// Two-level simplification: exact prime-implicant covering, the heuristic
// fallback, the size contract, and semantic equivalence checking.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <functional>
#include <map>
#include <sstream>

#include "doctest.h"
#include "heretic/minimizer.hpp"
#include "test_support.hpp"

using namespace heretic;
using test_support::random_dnf;

namespace {

boolean_space binary_space(int vars) {
  boolean_space sp;
  for (int v = 0; v < vars; ++v) sp.add_binary("x" + std::to_string(v), v);
  return sp;
}

// All assignments of the space, odometer order.
std::vector<std::vector<int>> all_assignments(const boolean_space& sp) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(std::size_t(sp.var_count()), 0);
  while (true) {
    out.push_back(cur);
    int v = 0;
    for (; v < sp.var_count(); ++v) {
      if (++cur[std::size_t(v)] < sp.var(v).size()) break;
      cur[std::size_t(v)] = 0;
    }
    if (v == sp.var_count()) break;
  }
  return out;
}

// Minimum number of cubes covering exactly the assignments where `d` is true,
// via dynamic programming over subsets of the ON-set. Only usable for spaces
// with at most ~20 assignments.
int brute_force_min_terms(const dnf& d, const boolean_space& sp) {
  std::vector<std::vector<int>> points = all_assignments(sp);
  REQUIRE(points.size() <= 20);

  std::vector<std::size_t> on;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (d.eval(points[i])) on.push_back(i);
  }
  if (on.empty()) return 0;

  // Enumerate every cube (product of nonempty per-variable value subsets),
  // keep those lying fully inside the ON-set, and record their coverage.
  std::vector<std::uint32_t> implicants;
  cube proto = cube::full(sp);
  std::vector<std::uint64_t> masks(std::size_t(sp.var_count()));
  std::function<void(int)> enumerate = [&](int v) {
    if (v == sp.var_count()) {
      cube c = proto;
      for (int k = 0; k < sp.var_count(); ++k) c.require(k, masks[std::size_t(k)]);
      std::uint32_t covered = 0;
      bool inside = true;
      for (std::size_t i = 0; i < points.size(); ++i) {
        if (!c.matches(points[i])) continue;
        bool is_on = d.eval(points[i]);
        if (!is_on) {
          inside = false;
          break;
        }
        for (std::size_t j = 0; j < on.size(); ++j) {
          if (on[j] == i) covered |= 1u << j;
        }
      }
      if (inside && covered != 0) implicants.push_back(covered);
      return;
    }
    const std::uint64_t full = sp.full_mask(v);
    for (std::uint64_t m = 1; m <= full; ++m) {
      masks[std::size_t(v)] = m;
      enumerate(v + 1);
    }
  };
  enumerate(0);

  // Set-cover DP: dp[s] = fewest implicants covering ON-subset s.
  const std::uint32_t target = on.size() == 32 ? 0xffffffffu : (1u << on.size()) - 1;
  std::vector<int> dp(std::size_t(target) + 1, -1);
  dp[0] = 0;
  for (std::uint32_t s = 0; s <= target; ++s) {
    if (dp[s] < 0 || s == target) continue;
    // Cover the lowest missing ON point next.
    std::uint32_t missing = ~s & target;
    std::uint32_t lowest = missing & (~missing + 1);
    for (std::uint32_t imp : implicants) {
      if ((imp & lowest) == 0) continue;
      std::uint32_t ns = s | imp;
      if (dp[ns] < 0 || dp[ns] > dp[s] + 1) dp[ns] = dp[s] + 1;
    }
  }
  REQUIRE(dp[target] >= 0);
  return dp[target];
}

int term_count(const dnf& d) { return int(d.terms.size()); }

}  // namespace

TEST_CASE("merging adjacent terms drops a decided variable") {
  boolean_space sp = binary_space(2);
  dnf d;
  cube ab = cube::full(sp);
  ab.require_value(0, 1).require_value(1, 1);
  cube a_not_b = cube::full(sp);
  a_not_b.require_value(0, 1).require_value(1, 0);
  d.terms = {ab, a_not_b};

  for (minimize_mode mode : {minimize_mode::exact, minimize_mode::heuristic,
                             minimize_mode::automatic}) {
    dnf m = minimize(d, sp, mode);
    REQUIRE(m.terms.size() == 1);
    CHECK(render_cube(sp, m.terms[0]) == "x0 = 1");
    CHECK(equivalent(m, d, sp).equal);
  }
}

TEST_CASE("a tautology collapses to the constant true") {
  boolean_space sp = binary_space(1);
  dnf d;
  cube pos = cube::full(sp);
  pos.require_value(0, 1);
  cube neg = cube::full(sp);
  neg.require_value(0, 0);
  d.terms = {pos, neg};
  dnf m = minimize(d, sp, minimize_mode::exact);
  CHECK(m.is_true(sp));
  CHECK(m.terms.size() == 1);
}

TEST_CASE("constants pass through untouched") {
  boolean_space sp = binary_space(3);
  CHECK(minimize(dnf::constant_false(), sp).is_false());
  CHECK(minimize(dnf::constant_true(sp), sp).is_true(sp));
}

TEST_CASE("redundant literals are eliminated") {
  // x0 x1 + !x0  simplifies to  x1 + !x0.
  boolean_space sp = binary_space(2);
  dnf d;
  cube both = cube::full(sp);
  both.require_value(0, 1).require_value(1, 1);
  cube not_a = cube::full(sp);
  not_a.require_value(0, 0);
  d.terms = {both, not_a};
  for (minimize_mode mode : {minimize_mode::exact, minimize_mode::heuristic}) {
    dnf m = minimize(d, sp, mode);
    CHECK(equivalent(m, d, sp).equal);
    CHECK(term_count(m) == 2);
    CHECK(literal_count(sp, m) == 2);  // from 3 literals down to 2
  }
}

TEST_CASE("minimization is idempotent") {
  rng r(2024);
  boolean_space sp = binary_space(6);
  for (int trial = 0; trial < 30; ++trial) {
    dnf d = random_dnf(sp, 2 + int(r.below(8)), 0.55, r);
    dnf once = minimize(d, sp, minimize_mode::automatic);
    dnf twice = minimize(once, sp, minimize_mode::automatic);
    CHECK(term_count(twice) == term_count(once));
    CHECK(literal_count(sp, twice) == literal_count(sp, once));
    CHECK(equivalent(once, twice, sp).equal);
  }
}

TEST_CASE("the result is never larger than the input") {
  rng r(515);
  boolean_space sp = binary_space(8);
  for (int trial = 0; trial < 40; ++trial) {
    dnf d = random_dnf(sp, 1 + int(r.below(12)), 0.5, r);
    for (minimize_mode mode : {minimize_mode::exact, minimize_mode::heuristic,
                               minimize_mode::automatic}) {
      dnf m = minimize(d, sp, mode);
      const bool smaller =
          term_count(m) < term_count(d) ||
          (term_count(m) == term_count(d) && literal_count(sp, m) <= literal_count(sp, d));
      CHECK(smaller);
      CHECK(equivalent(m, d, sp).equal);
    }
  }
}

TEST_CASE("exact mode finds provably minimum covers on small spaces") {
  rng r(909);
  for (int trial = 0; trial < 60; ++trial) {
    // Alternate between four binary variables and a mixed 3x2x2 space; both
    // stay within reach of the brute-force covering oracle.
    boolean_space sp;
    if (trial % 2 == 0) {
      sp = binary_space(4);
    } else {
      sp.add_onehot("c", {"r", "g", "b"}, {0, 1, 2});
      sp.add_binary("f", 3);
      sp.add_binary("g", 4);
    }
    dnf d = random_dnf(sp, 1 + int(r.below(6)), 0.6, r);
    dnf m = minimize(d, sp, minimize_mode::exact);
    CHECK(equivalent(m, d, sp).equal);
    CHECK(term_count(m) == brute_force_min_terms(d, sp));
  }
}

TEST_CASE("multi-valued covers minimize across one-hot blocks") {
  // (c = r AND f = 1) OR (c = g AND f = 1) OR (c = b AND f = 1)  ->  f = 1.
  boolean_space sp;
  sp.add_onehot("c", {"r", "g", "b"}, {0, 1, 2});
  sp.add_binary("f", 3);
  dnf d;
  for (int v = 0; v < 3; ++v) {
    cube c = cube::full(sp);
    c.require_value(0, v).require_value(1, 1);
    d.terms.push_back(c);
  }
  dnf m = minimize(d, sp, minimize_mode::exact);
  REQUIRE(m.terms.size() == 1);
  CHECK(render_cube(sp, m.terms[0]) == "f = 1");
}

TEST_CASE("automatic mode survives spaces beyond the exact limits") {
  // 24 binary variables exceed the exact engine's atom budget; the heuristic
  // fallback must still return an equivalent cover.
  rng r(333);
  boolean_space sp = binary_space(24);
  dnf d = random_dnf(sp, 30, 0.3, r);
  dnf m = minimize(d, sp, minimize_mode::automatic);
  equivalence_result eq = equivalent(m, d, sp);
  CHECK(eq.equal);
  CHECK(!eq.exhaustive);  // the space is too large to sweep
  CHECK(term_count(m) <= term_count(d));
}

TEST_CASE("equivalence is reflexive, exhaustive on small spaces, and produces witnesses") {
  boolean_space sp = binary_space(3);
  rng r(61);
  dnf d = random_dnf(sp, 4, 0.5, r);
  equivalence_result self = equivalent(d, d, sp);
  CHECK(self.equal);
  CHECK(self.exhaustive);

  dnf other = d;
  cube extra = cube::full(sp);
  extra.require_value(0, 0).require_value(1, 0).require_value(2, 0);
  if (!d.eval({0, 0, 0})) {
    other.terms.push_back(extra);
    equivalence_result diff = equivalent(d, other, sp);
    CHECK(!diff.equal);
    REQUIRE(diff.witness.size() == 3);
    CHECK(d.eval(diff.witness) != other.eval(diff.witness));
  }
}

TEST_CASE("mismatched term widths are rejected") {
  boolean_space sp = binary_space(3);
  dnf d;
  d.terms.push_back(cube::full(binary_space(2)));
  CHECK_THROWS_AS(minimize(d, sp), pipeline_error);
}

TEST_CASE("exact mode refuses oversized inputs outright") {
  boolean_space sp = binary_space(k_exact_max_atoms + 1);
  rng r(5);
  dnf d = random_dnf(sp, 4, 0.4, r);
  CHECK_THROWS_AS(minimize(d, sp, minimize_mode::exact), pipeline_error);
}

TEST_CASE("covers serialize to the multi-valued PLA layout") {
  boolean_space sp;
  sp.add_onehot("c", {"r", "g", "b"}, {0, 1, 2});
  sp.add_binary("f", 3);
  dnf d;
  cube t = cube::full(sp);
  t.require_value(0, 1).require_value(1, 0);
  d.terms.push_back(t);
  std::ostringstream out;
  write_pla(out, sp, d);
  CHECK(out.str() ==
        ".mv 2 3 2\n"
        ".p 1\n"
        "010 01\n"
        ".e\n");
}
