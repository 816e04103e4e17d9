#include "surfsub/abelian.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>

namespace surfsub {

  namespace {
    struct Overflow {};

    // Arithmetic policy for the 64-bit pass.
    struct Checked {
      using value_type = std::int64_t;
      static value_type from(std::int64_t x) {
        return x;
      }
      static value_type sub_mul(value_type a, value_type q, value_type b) {
        value_type p, r;
        if (__builtin_mul_overflow(q, b, &p) || __builtin_sub_overflow(a, p, &r)) {
          throw Overflow{};
        }
        return r;
      }
      static value_type add(value_type a, value_type b) {
        value_type r;
        if (__builtin_add_overflow(a, b, &r)) {
          throw Overflow{};
        }
        return r;
      }
      static value_type abs(value_type a) {
        if (a == std::numeric_limits<value_type>::min()) {
          throw Overflow{};
        }
        return a < 0 ? -a : a;
      }
      static value_type quot(value_type a, value_type b) {
        return a / b;
      }
      static Integer to_integer(value_type a) {
        return Integer(static_cast<long>(a));
      }
    };

    struct Big {
      using value_type = Integer;
      static value_type from(std::int64_t x) {
        return Integer(static_cast<long>(x));
      }
      static value_type sub_mul(value_type const& a, value_type const& q, value_type const& b) {
        return a - q * b;
      }
      static value_type add(value_type const& a, value_type const& b) {
        return a + b;
      }
      static value_type abs(value_type const& a) {
        return ::abs(a);
      }
      static value_type quot(value_type const& a, value_type const& b) {
        value_type q;
        mpz_tdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        return q;
      }
      static Integer to_integer(value_type const& a) {
        return a;
      }
    };

    template <typename A>
    std::vector<Integer> smith(IntMatrix const& m) {
      using T              = typename A::value_type;
      std::size_t const R  = m.rows(), C = m.cols();
      std::vector<T>    a(R * C);
      for (std::size_t i = 0; i < R * C; ++i) {
        a[i] = A::from(m.entries()[i]);
      }
      auto at = [&](std::size_t r, std::size_t c) -> T& { return a[r * C + c]; };

      std::size_t const k = std::min(R, C);
      std::size_t       t = 0;
      for (; t < k; ++t) {
        while (true) {
          // Smallest nonzero |entry| in the trailing block; ties go to the
          // lowest row, then the lowest column.
          bool        found = false;
          std::size_t pr = 0, pc = 0;
          T           best{};
          for (std::size_t r = t; r < R; ++r) {
            for (std::size_t c = t; c < C; ++c) {
              if (at(r, c) == 0) {
                continue;
              }
              T v = A::abs(at(r, c));
              if (!found || v < best) {
                found = true;
                best  = v;
                pr    = r;
                pc    = c;
              }
            }
          }
          if (!found) {
            goto done;
          }
          if (pr != t) {
            for (std::size_t c = 0; c < C; ++c) {
              std::swap(at(pr, c), at(t, c));
            }
          }
          if (pc != t) {
            for (std::size_t r = 0; r < R; ++r) {
              std::swap(at(r, pc), at(r, t));
            }
          }
          T const pivot = at(t, t);
          bool    clean = true;
          for (std::size_t r = t + 1; r < R; ++r) {
            if (at(r, t) == 0) {
              continue;
            }
            T const q = A::quot(at(r, t), pivot);
            for (std::size_t c = t; c < C; ++c) {
              at(r, c) = A::sub_mul(at(r, c), q, at(t, c));
            }
            clean = clean && at(r, t) == 0;
          }
          for (std::size_t c = t + 1; c < C; ++c) {
            if (at(t, c) == 0) {
              continue;
            }
            T const q = A::quot(at(t, c), pivot);
            for (std::size_t r = t; r < R; ++r) {
              at(r, c) = A::sub_mul(at(r, c), q, at(r, t));
            }
            clean = clean && at(t, c) == 0;
          }
          if (!clean) {
            continue;  // a smaller remainder is now available as pivot
          }
          // Row and column t are clear; the pivot must divide the rest.
          bool divides = true;
          for (std::size_t r = t + 1; r < R && divides; ++r) {
            for (std::size_t c = t + 1; c < C; ++c) {
              if (at(r, c) != 0 && A::sub_mul(at(r, c), A::quot(at(r, c), pivot), pivot) != 0) {
                for (std::size_t cc = t; cc < C; ++cc) {
                  at(t, cc) = A::add(at(t, cc), at(r, cc));
                }
                divides = false;
                break;
              }
            }
          }
          if (divides) {
            break;
          }
        }
      }
    done:
      std::vector<Integer> d(k, Integer(0));
      for (std::size_t i = 0; i < t; ++i) {
        d[i] = A::to_integer(A::abs(at(i, i)));
      }
      return d;
    }
  }  // namespace

  std::vector<Integer> smith_diagonal(IntMatrix const& m) {
    try {
      return smith<Checked>(m);
    } catch (Overflow const&) {
      return smith<Big>(m);
    }
  }

  AbelianInvariants invariants(IntMatrix const& m, std::size_t ambient_cols) {
    if (m.cols() != ambient_cols) {
      throw InvalidInput("invariants: matrix has " + std::to_string(m.cols())
                         + " columns, expected " + std::to_string(ambient_cols));
    }
    AbelianInvariants out;
    std::size_t       nonzero = 0;
    for (auto const& d : smith_diagonal(m)) {
      if (d != 0) {
        ++nonzero;
        if (d != 1) {
          out.torsion.push_back(d);
        }
      }
    }
    out.free_rank = ambient_cols - nonzero;
    return out;
  }

  std::string format_invariants(AbelianInvariants const& inv) {
    std::string out;
    if (inv.free_rank > 0) {
      out = inv.free_rank == 1 ? "Z" : "Z^" + std::to_string(inv.free_rank);
    }
    for (auto const& d : inv.torsion) {
      out += (out.empty() ? "Z/" : " + Z/") + d.get_str();
    }
    return out.empty() ? "0" : out;
  }

}  // namespace surfsub
