#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "surfsub/words.hpp"

namespace surfsub {

  // A finitely presented group <x_1..x_rank | relators>. Relators are stored
  // cyclically reduced; trivial relators are dropped on construction.
  class Presentation {
   public:
    Presentation() = default;
    Presentation(int rank, std::vector<Word> relators);

    static Presentation free(int rank) {
      return Presentation(rank, {});
    }

    int rank() const noexcept {
      return _rank;
    }
    std::vector<Word> const& relators() const noexcept {
      return _relators;
    }

    friend bool operator==(Presentation const&, Presentation const&) = default;

   private:
    int               _rank = 0;
    std::vector<Word> _relators;
  };

  Presentation one_relator(int rank, Word const& w);

  // BS(n, m) = <a, b | b^-1 a^n b a^-m>
  Presentation bs(int n, int m);

  // p * F_extra_rank; the new generators are appended after p's.
  Presentation free_product_with_free(Presentation const& p, int extra_rank);

  struct RankReduction {
    Presentation     reduced;
    int              extra_rank = 0;
    std::vector<int> absent;  // original indices of the dropped generators
  };

  // Drops the generators missing from the single relator, packing the
  // remaining ones densely in their original order.
  RankReduction absent_generator_reduction(Presentation const& p);

  // "rank=3; relators=baCBabbABAc,abAB"
  Presentation parse_presentation(std::string_view text);
  std::string  format_presentation(Presentation const& p);

}  // namespace surfsub
