#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "surfsub/lowindex.hpp"
#include "surfsub/presentation.hpp"

namespace surfsub {

  class IntMatrix {
   public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols)
        : _rows(rows), _cols(cols), _entries(rows * cols, 0) {}
    IntMatrix(std::size_t rows, std::size_t cols, std::vector<std::int64_t> entries);

    std::size_t rows() const noexcept {
      return _rows;
    }
    std::size_t cols() const noexcept {
      return _cols;
    }
    std::int64_t& operator()(std::size_t r, std::size_t c) {
      return _entries[r * _cols + c];
    }
    std::int64_t operator()(std::size_t r, std::size_t c) const {
      return _entries[r * _cols + c];
    }
    std::vector<std::int64_t> const& entries() const noexcept {
      return _entries;
    }

    friend bool operator==(IntMatrix const&, IntMatrix const&) = default;

   private:
    std::size_t               _rows = 0;
    std::size_t               _cols = 0;
    std::vector<std::int64_t> _entries;
  };

  IntMatrix operator*(IntMatrix const& a, IntMatrix const& b);

  // "rows cols\n" followed by one whitespace separated line per row.
  std::string format_matrix(IntMatrix const& m);
  IntMatrix   parse_matrix(std::string_view text);

  // Schreier transversal of a coset table: a breadth-first spanning tree from
  // coset 0, taking columns in order. Edges (coset, generator) off the tree
  // are the free generators of the subgroup; there are
  // degree * (rank - 1) + 1 of them.
  class SchreierGenerators {
   public:
    explicit SchreierGenerators(CosetTable const& t);

    std::size_t size() const noexcept {
      return _count;
    }
    // Index of the Schreier generator for the edge coset --x_g-->, or -1 for
    // a tree edge. Generators are numbered in (coset, generator) order.
    int index(int coset, int generator) const {
      return _index[static_cast<std::size_t>(coset) * _rank + generator - 1];
    }

   private:
    int              _rank;
    std::size_t      _count = 0;
    std::vector<int> _index;
  };

  // Rows are (coset, relator) pairs in coset-major order; row entries are the
  // exponent sums of each Schreier generator in the rewritten relator. The
  // cokernel is the subgroup's abelianization.
  IntMatrix abelianized_relation_matrix(CosetTable const& t, Presentation const& p);

  // The Reidemeister-Schreier presentation on the non-tree Schreier
  // generators. Generator k + 1 of the result is Schreier generator k.
  Presentation subgroup_presentation(CosetTable const& t, Presentation const& p);

}  // namespace surfsub
