#include "surfsub/words.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>

namespace surfsub {

  namespace {
    bool is_freely_reduced(std::vector<Letter> const& letters) {
      for (std::size_t i = 1; i < letters.size(); ++i) {
        if (letters[i].is_inverse_of(letters[i - 1])) {
          return false;
        }
      }
      return true;
    }

    void check_letter(Letter x, int rank) {
      if (x.generator < 1 || x.generator > rank) {
        throw InvalidInput("generator index " + std::to_string(x.generator)
                           + " outside 1.." + std::to_string(rank));
      }
      if (x.sign != 1 && x.sign != -1) {
        throw InvalidInput("letter sign must be +1 or -1");
      }
    }

    // Free reduction with a stack; assumes letters are already validated.
    std::vector<Letter> reduce_letters(std::span<Letter const> letters) {
      std::vector<Letter> out;
      out.reserve(letters.size());
      for (Letter x : letters) {
        if (!out.empty() && out.back().is_inverse_of(x)) {
          out.pop_back();
        } else {
          out.push_back(x);
        }
      }
      return out;
    }
  }  // namespace

  Word::Word(std::vector<Letter> letters)
      : _letters(std::move(letters)), _reduced(is_freely_reduced(_letters)) {}

  int Word::max_generator() const noexcept {
    int result = 0;
    for (Letter x : _letters) {
      result = std::max(result, x.generator);
    }
    return result;
  }

  Word Word::inverse() const {
    std::vector<Letter> out;
    out.reserve(_letters.size());
    for (auto it = _letters.rbegin(); it != _letters.rend(); ++it) {
      out.push_back(it->inverse());
    }
    return Word(std::move(out));
  }

  Word operator*(Word const& a, Word const& b) {
    std::vector<Letter> joined(a.letters());
    joined.insert(joined.end(), b.letters().begin(), b.letters().end());
    return Word(reduce_letters(joined));
  }

  std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

  Rng Rng::split(std::uint64_t stream) const {
    return Rng(splitmix64(_seed ^ splitmix64(stream)));
  }

  std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) {
      throw InvalidInput("Rng::below requires a positive bound");
    }
    // Largest multiple of bound representable; draws at or above it are
    // rejected.
    std::uint64_t const limit = ~std::uint64_t(0) - (~std::uint64_t(0) % bound);
    std::uint64_t       x;
    do {
      x = _engine();
    } while (x >= limit);
    return x % bound;
  }

  Word free_reduce(std::span<Letter const> letters, int rank) {
    for (Letter x : letters) {
      check_letter(x, rank);
    }
    return Word(reduce_letters(letters));
  }

  Word cyclic_reduce(Word const& w) {
    auto letters = reduce_letters(w.letters());
    std::size_t lo = 0, hi = letters.size();
    while (hi - lo >= 2 && letters[lo].is_inverse_of(letters[hi - 1])) {
      ++lo;
      --hi;
    }
    return Word(std::vector<Letter>(letters.begin() + lo, letters.begin() + hi));
  }

  std::size_t cyclic_length(Word const& w) {
    auto const& letters = w.reduced() ? w.letters() : reduce_letters(w.letters());
    std::size_t lo = 0, hi = letters.size();
    while (hi - lo >= 2 && letters[lo].is_inverse_of(letters[hi - 1])) {
      ++lo;
      --hi;
    }
    return hi - lo;
  }

  Word random_relator(int rank, int raw_length, Rng& rng) {
    if (rank < 1 || raw_length < 0) {
      throw InvalidInput("random_relator needs rank >= 1 and raw_length >= 0");
    }
    std::vector<Letter> raw;
    raw.reserve(raw_length);
    for (int i = 0; i < raw_length; ++i) {
      auto col = static_cast<int>(rng.below(2 * static_cast<std::uint64_t>(rank)));
      raw.push_back(Letter::from_column(col));
    }
    return cyclic_reduce(Word(reduce_letters(raw)));
  }

  std::vector<std::size_t> occurrence_profile(Word const& w, int rank) {
    std::vector<std::size_t> profile(rank, 0);
    for (Letter x : w.letters()) {
      check_letter(x, rank);
      ++profile[x.generator - 1];
    }
    return profile;
  }

  std::vector<std::int64_t> exponent_sums(Word const& w, int rank) {
    std::vector<std::int64_t> sums(rank, 0);
    for (Letter x : w.letters()) {
      check_letter(x, rank);
      sums[x.generator - 1] += x.sign;
    }
    return sums;
  }

  ////////////////////////////////////////////////////////////////////////
  // Whitehead
  ////////////////////////////////////////////////////////////////////////

  std::vector<WhiteheadMove> whitehead_moves(int rank) {
    std::vector<WhiteheadMove> moves;
    if (rank < 2) {
      return moves;
    }
    std::size_t const others = rank - 1;
    for (int col = 0; col < 2 * rank; ++col) {
      Letter const m = Letter::from_column(col);
      // Two bits per non-multiplier generator; skip the identity.
      for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << (2 * others));
           ++mask) {
        WhiteheadMove move{m, std::vector<bool>(rank), std::vector<bool>(rank)};
        std::size_t   k = 0;
        for (int g = 1; g <= rank; ++g) {
          if (g == m.generator) {
            continue;
          }
          move.left[g - 1]  = (mask >> (2 * k)) & 1;
          move.right[g - 1] = (mask >> (2 * k + 1)) & 1;
          ++k;
        }
        moves.push_back(std::move(move));
      }
    }
    return moves;
  }

  Word apply(WhiteheadMove const& move, Word const& w) {
    std::vector<Letter> out;
    out.reserve(3 * w.size());
    Letter const m = move.multiplier;
    for (Letter x : w.letters()) {
      if (x.generator == m.generator) {
        out.push_back(x);
        continue;
      }
      bool const l = move.left[x.generator - 1];
      bool const r = move.right[x.generator - 1];
      if (x.sign > 0) {
        // x -> m^-1? x m?
        if (l) out.push_back(m.inverse());
        out.push_back(x);
        if (r) out.push_back(m);
      } else {
        // x^-1 -> m^-1? x^-1 m?
        if (r) out.push_back(m.inverse());
        out.push_back(x);
        if (l) out.push_back(m);
      }
    }
    return cyclic_reduce(Word(reduce_letters(out)));
  }

  bool is_primitive(Word const& w, int rank) {
    Word current = cyclic_reduce(w);
    if (current.empty()) {
      throw InvalidInput("is_primitive: empty word");
    }
    for (Letter x : current.letters()) {
      check_letter(x, rank);
    }
    auto const moves = whitehead_moves(rank);
    while (current.size() > 1) {
      // Largest reduction wins; ties go to the first move in enumeration
      // order, which is lexicographic in (multiplier column, mask).
      std::size_t best_len = current.size();
      Word        best;
      for (auto const& move : moves) {
        Word image = apply(move, current);
        if (image.size() < best_len) {
          best_len = image.size();
          best     = std::move(image);
        }
      }
      if (best_len == current.size()) {
        return false;
      }
      current = std::move(best);
    }
    return true;
  }

  ////////////////////////////////////////////////////////////////////////
  // Text
  ////////////////////////////////////////////////////////////////////////

  Word parse_word(std::string_view text, int rank) {
    if (rank < 0) {
      throw InvalidInput("rank must be non-negative");
    }
    std::vector<Letter> raw;
    std::size_t         i = 0;
    auto skip_space = [&] {
      while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) {
        ++i;
      }
    };
    skip_space();
    if (i < text.size() && text[i] == '1'
        && text.substr(i).find_first_not_of(" \t\r\n", 1) == std::string_view::npos) {
      return Word();  // "1" is the identity
    }
    while (true) {
      skip_space();
      if (i >= text.size()) {
        break;
      }
      char const c = text[i];
      if (c == '*') {
        if (raw.empty()) {
          throw ParseError("unexpected '*'", i + 1);
        }
        ++i;
        skip_space();
        if (i >= text.size()) {
          throw ParseError("dangling '*'", i + 1);
        }
        continue;
      }
      if (!std::isalpha(static_cast<unsigned char>(c))) {
        throw ParseError(std::string("unexpected character '") + c + "'", i + 1);
      }
      bool const upper = std::isupper(static_cast<unsigned char>(c));
      Letter     x{std::tolower(static_cast<unsigned char>(c)) - 'a' + 1,
               upper ? -1 : 1};
      if (rank > 0 && x.generator > rank) {
        throw ParseError(std::string("letter '") + c + "' exceeds rank "
                             + std::to_string(rank),
                         i + 1);
      }
      ++i;
      long exponent = 1;
      if (i < text.size() && text[i] == '^') {
        std::size_t const start = ++i;
        if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
          ++i;
        }
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
          ++i;
        }
        std::string_view digits = text.substr(start, i - start);
        if (!digits.empty() && digits.front() == '+') {
          digits.remove_prefix(1);
        }
        auto [ptr, ec] = std::from_chars(digits.data(),
                                         digits.data() + digits.size(),
                                         exponent);
        if (ec != std::errc() || ptr != digits.data() + digits.size()) {
          throw ParseError("malformed exponent", start + 1);
        }
      }
      Letter const y = exponent < 0 ? x.inverse() : x;
      for (long k = 0; k < std::labs(exponent); ++k) {
        raw.push_back(y);
      }
    }
    int r = rank;
    if (r == 0) {
      for (Letter x : raw) {
        r = std::max(r, x.generator);
      }
    }
    return free_reduce(raw, std::max(r, 1));
  }

  std::string format_word(Word const& w) {
    std::string out;
    out.reserve(w.size());
    for (Letter x : w.letters()) {
      if (x.generator > 26) {
        throw InvalidInput("word text format supports at most 26 generators");
      }
      char const c = static_cast<char>('a' + x.generator - 1);
      out.push_back(x.sign > 0 ? c
                               : static_cast<char>(std::toupper(
                                   static_cast<unsigned char>(c))));
    }
    return out;
  }

}  // namespace surfsub
