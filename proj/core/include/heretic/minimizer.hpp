#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "heretic/space.hpp"

namespace heretic {

enum class minimize_mode { exact, heuristic, automatic };

// Exact-mode admission limits: beyond these the exact engine refuses (and
// automatic mode falls back to the heuristic pass).
inline constexpr int k_exact_max_atoms = 16;
inline constexpr std::size_t k_exact_max_terms = 1024;

// Two-level simplification. The result is always equivalent to the input and
// never larger under the (term count, literal count) order. Exact mode
// (prime-implicant enumeration + covering) additionally yields a minimum-term
// cover for small inputs; heuristic mode runs absorption, adjacent-term
// merging, and redundant-literal elimination to a fixpoint. automatic picks
// exact when the input fits its limits, heuristic otherwise.
dnf minimize(const dnf& input, const boolean_space& sp,
             minimize_mode mode = minimize_mode::automatic);

struct equivalence_result {
  bool equal = true;
  bool exhaustive = true;       // false when only sampled assignments were checked
  std::vector<int> witness;     // a distinguishing assignment when equal == false

  explicit operator bool() const { return equal; }
};

// Semantic comparison of two DNFs over the same space: exhaustive when the
// assignment space is small (<= 2^20), seeded sampling otherwise.
equivalence_result equivalent(const dnf& a, const dnf& b, const boolean_space& sp,
                              std::uint64_t sample_seed = 1);

// Multi-valued cover dump, one position per variable value.
void write_pla(std::ostream& out, const boolean_space& sp, const dnf& d);

}  // namespace heretic
