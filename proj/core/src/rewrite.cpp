#include "surfsub/rewrite.hpp"

#include <sstream>

namespace surfsub {

  IntMatrix::IntMatrix(std::size_t rows, std::size_t cols, std::vector<std::int64_t> entries)
      : _rows(rows), _cols(cols), _entries(std::move(entries)) {
    if (_entries.size() != rows * cols) {
      throw InvalidInput("matrix dimensions do not match entry count");
    }
  }

  IntMatrix operator*(IntMatrix const& a, IntMatrix const& b) {
    if (a.cols() != b.rows()) {
      throw InvalidInput("matrix product: dimension mismatch");
    }
    IntMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
      for (std::size_t k = 0; k < a.cols(); ++k) {
        if (a(i, k) == 0) {
          continue;
        }
        for (std::size_t j = 0; j < b.cols(); ++j) {
          out(i, j) += a(i, k) * b(k, j);
        }
      }
    }
    return out;
  }

  std::string format_matrix(IntMatrix const& m) {
    std::ostringstream os;
    os << m.rows() << ' ' << m.cols() << '\n';
    for (std::size_t r = 0; r < m.rows(); ++r) {
      for (std::size_t c = 0; c < m.cols(); ++c) {
        os << (c ? " " : "") << m(r, c);
      }
      os << '\n';
    }
    return os.str();
  }

  IntMatrix parse_matrix(std::string_view text) {
    std::istringstream is{std::string(text)};
    std::size_t        rows = 0, cols = 0;
    if (!(is >> rows >> cols)) {
      throw InvalidInput("matrix text: missing dimensions");
    }
    std::vector<std::int64_t> entries(rows * cols);
    for (auto& e : entries) {
      if (!(is >> e)) {
        throw InvalidInput("matrix text: too few entries");
      }
    }
    return IntMatrix(rows, cols, std::move(entries));
  }

  SchreierGenerators::SchreierGenerators(CosetTable const& t)
      : _rank(t.rank()),
        _index(static_cast<std::size_t>(t.degree()) * t.rank(), 0) {
    // 0 = unclassified, -1 = tree
    std::vector<bool> seen(t.degree(), false);
    std::vector<int>  queue{0};
    seen[0] = true;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      int const c = queue[head];
      for (int col = 0; col < t.columns(); ++col) {
        int const d = t.at(c, col);
        if (seen[d]) {
          continue;
        }
        seen[d] = true;
        queue.push_back(d);
        Letter const x = Letter::from_column(col);
        // the tree edge always runs in the positive direction
        int const from = x.sign > 0 ? c : d;
        _index[static_cast<std::size_t>(from) * _rank + x.generator - 1] = -1;
      }
    }
    if (queue.size() != static_cast<std::size_t>(t.degree())) {
      throw InvalidInput("coset table is not transitive");
    }
    int next = 0;
    for (auto& i : _index) {
      if (i == 0) {
        i = next++;
      }
    }
    _count = next;
  }

  namespace {
    void check_table(CosetTable const& t, Presentation const& p) {
      if (t.rank() != p.rank()) {
        throw InvalidInput("coset table rank differs from presentation rank");
      }
      if (!satisfies(t, p)) {
        throw InvalidInput("coset table does not satisfy the relators");
      }
    }

    // Calls f(schreier_index, sign) for every non-tree generator met while
    // reading r from coset c.
    template <typename F>
    void rewrite_from(CosetTable const&         t,
                      SchreierGenerators const& s,
                      int                       c,
                      Word const&               r,
                      F&&                       f) {
      int cur = c;
      for (Letter x : r.letters()) {
        if (x.sign > 0) {
          int const k = s.index(cur, x.generator);
          if (k >= 0) {
            f(k, 1);
          }
          cur = t.image(cur, x);
        } else {
          int const prev = t.image(cur, x);
          int const k    = s.index(prev, x.generator);
          if (k >= 0) {
            f(k, -1);
          }
          cur = prev;
        }
      }
    }
  }  // namespace

  IntMatrix abelianized_relation_matrix(CosetTable const& t, Presentation const& p) {
    check_table(t, p);
    SchreierGenerators const s(t);
    std::size_t const        nrel = p.relators().size();
    IntMatrix                m(static_cast<std::size_t>(t.degree()) * nrel, s.size());
    for (int c = 0; c < t.degree(); ++c) {
      for (std::size_t r = 0; r < nrel; ++r) {
        std::size_t const row = static_cast<std::size_t>(c) * nrel + r;
        rewrite_from(t, s, c, p.relators()[r], [&](int k, int sign) { m(row, k) += sign; });
      }
    }
    return m;
  }

  Presentation subgroup_presentation(CosetTable const& t, Presentation const& p) {
    check_table(t, p);
    SchreierGenerators const s(t);
    std::vector<Word>        relators;
    for (int c = 0; c < t.degree(); ++c) {
      for (auto const& r : p.relators()) {
        std::vector<Letter> letters;
        rewrite_from(t, s, c, r, [&](int k, int sign) { letters.push_back({k + 1, sign}); });
        relators.emplace_back(std::move(letters));
      }
    }
    return Presentation(static_cast<int>(s.size()), std::move(relators));
  }

}  // namespace surfsub
