#include "surfsub/lowindex.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <numeric>
#include <set>

namespace surfsub {

  ////////////////////////////////////////////////////////////////////////
  // CosetTable
  ////////////////////////////////////////////////////////////////////////

  CosetTable::CosetTable(int rank, int degree, std::vector<int> images)
      : _rank(rank), _degree(degree), _images(std::move(images)) {
    if (rank < 0 || degree < 1) {
      throw InvalidInput("coset table needs rank >= 0 and degree >= 1");
    }
    if (_images.size() != static_cast<std::size_t>(degree) * 2 * rank) {
      throw InvalidInput("coset table has " + std::to_string(_images.size())
                         + " entries, expected "
                         + std::to_string(degree * 2 * rank));
    }
    for (int c = 0; c < degree; ++c) {
      for (int col = 0; col < columns(); ++col) {
        int const d = at(c, col);
        if (d < 0 || d >= degree) {
          throw InvalidInput("coset table entry out of range");
        }
        if (at(d, col ^ 1) != c) {
          throw InvalidInput("coset table columns are not mutually inverse");
        }
      }
    }
  }

  int CosetTable::trace(int coset, Word const& w) const {
    for (Letter x : w.letters()) {
      if (x.generator > _rank) {
        throw InvalidInput("word uses a generator beyond the table's rank");
      }
      coset = image(coset, x);
    }
    return coset;
  }

  bool CosetTable::is_transitive() const {
    std::vector<bool> seen(_degree, false);
    std::vector<int>  stack{0};
    seen[0]        = true;
    int reached    = 1;
    while (!stack.empty()) {
      int c = stack.back();
      stack.pop_back();
      for (int col = 0; col < columns(); ++col) {
        int d = at(c, col);
        if (!seen[d]) {
          seen[d] = true;
          ++reached;
          stack.push_back(d);
        }
      }
    }
    return reached == _degree;
  }

  bool satisfies(CosetTable const& t, Presentation const& p) {
    if (t.rank() != p.rank()) {
      return false;
    }
    for (auto const& r : p.relators()) {
      for (int c = 0; c < t.degree(); ++c) {
        if (t.trace(c, r) != c) {
          return false;
        }
      }
    }
    return true;
  }

  CosetTable standardize(CosetTable const& t, int base) {
    int const        n = t.degree(), cols = t.columns();
    std::vector<int> new_of_old(n, -1), old_of_new(n, -1);
    new_of_old[base] = 0;
    old_of_new[0]    = base;
    int              next = 1;
    std::vector<int> images(static_cast<std::size_t>(n) * cols);
    for (int i = 0; i < n; ++i) {
      if (i >= next) {
        throw InvalidInput("standardize: table is not transitive");
      }
      int const old = old_of_new[i];
      for (int col = 0; col < cols; ++col) {
        int v = t.at(old, col);
        if (new_of_old[v] < 0) {
          new_of_old[v]    = next;
          old_of_new[next] = v;
          ++next;
        }
        images[static_cast<std::size_t>(i) * cols + col] = new_of_old[v];
      }
    }
    return CosetTable(t.rank(), n, std::move(images));
  }

  CosetTable canonical_form(CosetTable const& t) {
    CosetTable best = standardize(t, 0);
    for (int c = 1; c < t.degree(); ++c) {
      CosetTable s = standardize(t, c);
      if (s < best) {
        best = std::move(s);
      }
    }
    return best;
  }

  CosetTable relabel(CosetTable const& t, std::span<int const> perm) {
    int const n = t.degree(), cols = t.columns();
    if (perm.size() != static_cast<std::size_t>(n)) {
      throw InvalidInput("relabel: permutation has wrong size");
    }
    std::vector<int> images(static_cast<std::size_t>(n) * cols);
    for (int c = 0; c < n; ++c) {
      for (int col = 0; col < cols; ++col) {
        images[static_cast<std::size_t>(perm[c]) * cols + col] = perm[t.at(c, col)];
      }
    }
    return CosetTable(t.rank(), n, std::move(images));
  }

  std::string format_table(CosetTable const& t) {
    std::string out;
    for (int g = 0; g < t.rank(); ++g) {
      if (g > 0) {
        out += ' ';
      }
      for (int c = 0; c < t.degree(); ++c) {
        if (c > 0) {
          out += ',';
        }
        out += std::to_string(t.at(c, 2 * g) + 1);
      }
    }
    return out;
  }

  CosetTable parse_table(std::string_view line, int rank) {
    std::vector<std::vector<int>> gens;
    std::size_t                   pos = 0;
    while (pos < line.size()) {
      while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) {
        ++pos;
      }
      if (pos >= line.size()) {
        break;
      }
      std::vector<int> images;
      while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) {
        int  v = 0;
        auto [ptr, ec] = std::from_chars(line.data() + pos, line.data() + line.size(), v);
        if (ec != std::errc() || v < 1) {
          throw ParseError("expected a positive coset number", pos + 1);
        }
        images.push_back(v - 1);
        pos = ptr - line.data();
        if (pos < line.size() && line[pos] == ',') {
          ++pos;
        }
      }
      gens.push_back(std::move(images));
    }
    if (static_cast<int>(gens.size()) != rank) {
      throw InvalidInput("table line has " + std::to_string(gens.size())
                         + " generators, expected " + std::to_string(rank));
    }
    int const degree = rank == 0 ? 1 : static_cast<int>(gens[0].size());
    std::vector<int> images(static_cast<std::size_t>(degree) * 2 * rank, -1);
    for (int g = 0; g < rank; ++g) {
      if (static_cast<int>(gens[g].size()) != degree) {
        throw InvalidInput("generators have different numbers of images");
      }
      for (int c = 0; c < degree; ++c) {
        int d = gens[g][c];
        if (d >= degree) {
          throw InvalidInput("coset number exceeds degree");
        }
        images[static_cast<std::size_t>(c) * 2 * rank + 2 * g] = d;
        images[static_cast<std::size_t>(d) * 2 * rank + 2 * g + 1] = c;
      }
    }
    if (std::find(images.begin(), images.end(), -1) != images.end()) {
      throw InvalidInput("generator images are not a permutation");
    }
    return CosetTable(rank, degree, std::move(images));
  }

  ////////////////////////////////////////////////////////////////////////
  // Enumerator
  ////////////////////////////////////////////////////////////////////////

  // Backtracking over standard partial coset tables. The first undefined cell
  // in row-major order is always the one branched on, so every subgroup has
  // exactly one standard table on the search tree; relator tracing closes
  // cells forced by the partial action, and a partial first-in-class test
  // prunes branches whose table cannot be least among its rebasings.
  class Enumerator {
   public:
    Enumerator(Presentation const&       p,
               int                       min_index,
               int                       max_index,
               SubgroupVisitor const&    visit,
               EnumerationOptions const& options)
        : _cols(2 * p.rank()),
          _min(min_index),
          _max(max_index),
          _visit(visit),
          _budget(options.node_budget),
          _table(static_cast<std::size_t>(max_index) * _cols, -1),
          _rotations(_cols),
          _new_of_old(max_index),
          _old_of_new(max_index) {
      _emitted_table._rank   = p.rank();
      std::set<std::vector<int>> seen;
      for (auto const& r : p.relators()) {
        for (Word const& w : {r, r.inverse()}) {
          std::vector<int> cols;
          for (Letter x : w.letters()) {
            cols.push_back(x.column());
          }
          for (std::size_t k = 0; k < cols.size(); ++k) {
            std::vector<int> rot(cols.begin() + k, cols.end());
            rot.insert(rot.end(), cols.begin(), cols.begin() + k);
            if (seen.insert(rot).second) {
              _rotations[rot.front()].push_back(std::move(rot));
            }
          }
        }
      }
    }

    EnumerationStats run() {
      _n = 1;
      try {
        search(0);
      } catch (Stop const&) {
        _stats.stopped = true;
      }
      return _stats;
    }

   private:
    struct Stop {};

    int& cell(int coset, int col) {
      return _table[static_cast<std::size_t>(coset) * _cols + col];
    }

    void assign(int c, int col, int d) {
      cell(c, col)     = d;
      cell(d, col ^ 1) = c;
      _trail.push_back(c * _cols + col);
      _trail.push_back(d * _cols + (col ^ 1));
      _queue.push_back(c * _cols + col);
    }

    void undo(std::size_t mark) {
      while (_trail.size() > mark) {
        _table[_trail.back()] = -1;
        _trail.pop_back();
      }
    }

    // Scans every relator rotation through each newly defined edge. Returns
    // false on a contradiction.
    bool deduce() {
      std::size_t head = 0;
      while (head < _queue.size()) {
        int const c   = _queue[head] / _cols;
        int const col = _queue[head] % _cols;
        ++head;
        for (auto const& rot : _rotations[col]) {
          int const len = static_cast<int>(rot.size());
          int       f   = c;
          int       i   = 0;
          while (i < len) {
            int v = cell(f, rot[i]);
            if (v < 0) {
              break;
            }
            f = v;
            ++i;
          }
          if (i == len) {
            if (f != c) {
              _queue.clear();
              return false;
            }
            continue;
          }
          int b = c;
          int j = len - 1;
          while (j > i) {
            int v = cell(b, rot[j] ^ 1);
            if (v < 0) {
              break;
            }
            b = v;
            --j;
          }
          if (j > i) {
            continue;
          }
          // Exactly one gap: f --rot[i]--> b is forced.
          if (cell(b, rot[i] ^ 1) >= 0) {
            _queue.clear();
            return false;
          }
          assign(f, rot[i], b);
        }
      }
      _queue.clear();
      return true;
    }

    // False only if some rebasing is already certainly smaller.
    bool maybe_least() {
      int const n = _n;
      for (int base = 1; base < n; ++base) {
        std::fill_n(_new_of_old.begin(), n, -1);
        _new_of_old[base] = 0;
        _old_of_new[0]    = base;
        int next          = 1;
        for (int i = 0; i < n; ++i) {
          if (i >= next) {
            goto undetermined;
          }
          int const old = _old_of_new[i];
          for (int col = 0; col < _cols; ++col) {
            int const v = cell(old, col);
            if (v < 0) {
              goto undetermined;
            }
            int w = _new_of_old[v];
            if (w < 0) {
              w                = next++;
              _new_of_old[v]   = w;
              _old_of_new[w]   = v;
            }
            int const t = cell(i, col);
            if (t < 0) {
              goto undetermined;
            }
            if (w < t) {
              return false;
            }
            if (w > t) {
              goto undetermined;
            }
          }
        }
      undetermined:;
      }
      return true;
    }

    void emit() {
      ++_stats.emitted;
      _emitted_table._degree = _n;
      _emitted_table._images.assign(
          _table.begin(), _table.begin() + static_cast<std::ptrdiff_t>(_n) * _cols);
      if (!_visit(_emitted_table)) {
        throw Stop{};
      }
    }

    void search(int from) {
      int const end   = _n * _cols;
      int       first = from;
      while (first < end && _table[first] >= 0) {
        ++first;
      }
      if (first == end) {
        if (_n >= _min) {
          emit();
        }
        return;
      }
      int const r   = first / _cols;
      int const col = first % _cols;
      int const n   = _n;
      for (int d = 0; d <= n && d < _max; ++d) {
        if (d < n && cell(d, col ^ 1) >= 0) {
          continue;
        }
        if (++_stats.nodes > _budget) {
          throw BudgetExhausted(_budget);
        }
        std::size_t const mark = _trail.size();
        if (d == n) {
          _n = n + 1;
        }
        assign(r, col, d);
        if (deduce() && maybe_least()) {
          search(first + 1);
        }
        undo(mark);
        _n = n;
      }
    }

    int                             _cols;
    int                             _min;
    int                             _max;
    SubgroupVisitor const&          _visit;
    std::uint64_t                   _budget;
    std::vector<int>                _table;
    std::vector<std::vector<std::vector<int>>> _rotations;
    std::vector<int>                _trail;
    std::vector<int>                _queue;
    std::vector<int>                _new_of_old;
    std::vector<int>                _old_of_new;
    int                             _n = 1;
    EnumerationStats                _stats;
    CosetTable                      _emitted_table;
  };

  EnumerationStats for_each_subgroup(Presentation const&       p,
                                     int                       min_index,
                                     int                       max_index,
                                     SubgroupVisitor const&    visit,
                                     EnumerationOptions const& options) {
    if (min_index < 1 || max_index < min_index) {
      throw InvalidInput("for_each_subgroup: need 1 <= min_index <= max_index");
    }
    Enumerator e(p, min_index, max_index, visit, options);
    return e.run();
  }

  std::vector<CosetTable> low_index_subgroups(Presentation const&       p,
                                              int                       index,
                                              EnumerationOptions const& options) {
    if (index < 1) {
      throw InvalidInput("low_index_subgroups: index must be positive");
    }
    std::vector<CosetTable> out;
    for_each_subgroup(
        p,
        index,
        index,
        [&out](CosetTable const& t) {
          out.push_back(t);
          return true;
        },
        options);
    return out;
  }

  std::vector<std::uint64_t> class_counts(Presentation const&       p,
                                          int                       up_to,
                                          EnumerationOptions const& options) {
    if (up_to < 1) {
      throw InvalidInput("class_counts: up_to must be positive");
    }
    std::vector<std::uint64_t> counts(up_to, 0);
    for_each_subgroup(
        p,
        1,
        up_to,
        [&counts](CosetTable const& t) {
          ++counts[t.degree() - 1];
          return true;
        },
        options);
    return counts;
  }

}  // namespace surfsub
