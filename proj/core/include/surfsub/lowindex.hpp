#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "surfsub/presentation.hpp"

namespace surfsub {

  // The action of the generators on the right cosets of a finite index
  // subgroup. Cosets are numbered from 0 and coset 0 is the subgroup itself.
  // Columns are ordered x1, x1^-1, x2, x2^-1, ... (see Letter::column).
  class CosetTable {
   public:
    CosetTable() = default;

    // images[c * 2 * rank + col]; throws InvalidInput unless every column is a
    // permutation and each inverse column undoes its partner.
    CosetTable(int rank, int degree, std::vector<int> images);

    int rank() const noexcept {
      return _rank;
    }
    int degree() const noexcept {
      return _degree;
    }
    int columns() const noexcept {
      return 2 * _rank;
    }
    int at(int coset, int column) const {
      return _images[static_cast<std::size_t>(coset) * columns() + column];
    }
    int image(int coset, Letter x) const {
      return at(coset, x.column());
    }
    // Coset reached from `coset` by reading w left to right.
    int trace(int coset, Word const& w) const;

    std::span<int const> images() const noexcept {
      return _images;
    }

    bool is_transitive() const;

    friend bool operator==(CosetTable const&, CosetTable const&) = default;
    friend auto operator<=>(CosetTable const& a, CosetTable const& b) {
      return a._images <=> b._images;
    }

   private:
    friend class Enumerator;
    int              _rank   = 0;
    int              _degree = 0;
    std::vector<int> _images;
  };

  // Every relator closes at every coset.
  bool satisfies(CosetTable const& t, Presentation const& p);

  // The standard table obtained by renumbering cosets in the order they are
  // first met when scanning rows of the table rebased at `base`.
  CosetTable standardize(CosetTable const& t, int base);

  // Least standardization over all base points: the representative of the
  // conjugacy class of the point stabilizer.
  CosetTable canonical_form(CosetTable const& t);

  // Relabels coset c as perm[c]; perm must be a permutation of 0..degree-1.
  CosetTable relabel(CosetTable const& t, std::span<int const> perm);

  // One line per table: each generator's images, 1-based, comma separated,
  // generators separated by spaces. "2,1 1,2" is the index-2 table of F_2
  // where a swaps and b fixes.
  std::string format_table(CosetTable const& t);
  CosetTable  parse_table(std::string_view line, int rank);

  class BudgetExhausted : public std::runtime_error {
   public:
    explicit BudgetExhausted(std::uint64_t nodes)
        : std::runtime_error("low index enumeration exceeded node budget of "
                             + std::to_string(nodes)),
          _nodes(nodes) {}
    std::uint64_t nodes() const noexcept {
      return _nodes;
    }

   private:
    std::uint64_t _nodes;
  };

  struct EnumerationOptions {
    // Branch assignments attempted before giving up.
    std::uint64_t node_budget = 1'000'000'000;
  };

  struct EnumerationStats {
    std::uint64_t nodes   = 0;
    std::uint64_t emitted = 0;
    bool          stopped = false;  // the visitor asked to stop
  };

  // Return false to stop the enumeration.
  using SubgroupVisitor = std::function<bool(CosetTable const&)>;

  // Visits one canonical table per conjugacy class of subgroups with index in
  // [min_index, max_index], in lexicographic order of the canonical tables.
  // Throws BudgetExhausted if the node budget runs out.
  EnumerationStats for_each_subgroup(Presentation const&       p,
                                     int                       min_index,
                                     int                       max_index,
                                     SubgroupVisitor const&    visit,
                                     EnumerationOptions const& options = {});

  std::vector<CosetTable> low_index_subgroups(Presentation const&       p,
                                              int                       index,
                                              EnumerationOptions const& options = {});

  // counts[i - 1] = number of conjugacy classes of subgroups of index i.
  std::vector<std::uint64_t> class_counts(Presentation const&       p,
                                          int                       up_to,
                                          EnumerationOptions const& options = {});

}  // namespace surfsub
