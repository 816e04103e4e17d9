#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <vector>

#include "surfsub/rewrite.hpp"

namespace surfsub {

  using Integer = mpz_class;

  // Cokernel Z^free_rank + Z/torsion[0] + ... with torsion[i] | torsion[i+1]
  // and every torsion coefficient at least 2.
  struct AbelianInvariants {
    std::vector<Integer> torsion;
    std::size_t          free_rank = 0;

    friend bool operator==(AbelianInvariants const&, AbelianInvariants const&) = default;
  };

  // Invariant factors d_1 | d_2 | ... | d_k of m, k = min(rows, cols), all
  // non-negative with the zeros last. Elimination runs in checked 64-bit
  // arithmetic and restarts with GMP integers on overflow.
  std::vector<Integer> smith_diagonal(IntMatrix const& m);

  AbelianInvariants invariants(IntMatrix const& m, std::size_t ambient_cols);

  inline std::size_t betti(AbelianInvariants const& inv) noexcept {
    return inv.free_rank;
  }

  // "Z^2 + Z/2 + Z/6", or "0" for the trivial group.
  std::string format_invariants(AbelianInvariants const& inv);

}  // namespace surfsub
