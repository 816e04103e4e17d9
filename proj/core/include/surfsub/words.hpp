#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace surfsub {

  class InvalidInput : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
  };

  // Raised by the text parsers; column is 1-based.
  class ParseError : public InvalidInput {
   public:
    ParseError(std::string const& what, std::size_t column)
        : InvalidInput(what + " (column " + std::to_string(column) + ")"),
          _message(what),
          _column(column) {}

    std::string const& message() const noexcept {
      return _message;
    }

    std::size_t column() const noexcept {
      return _column;
    }

   private:
    std::string _message;
    std::size_t _column;
  };

  // A signed generator. Generators are numbered from 1.
  struct Letter {
    int generator = 1;
    int sign      = 1;

    constexpr Letter inverse() const noexcept {
      return {generator, -sign};
    }

    // Column in a coset table: x1, x1^-1, x2, x2^-1, ...
    constexpr int column() const noexcept {
      return 2 * (generator - 1) + (sign < 0 ? 1 : 0);
    }

    static constexpr Letter from_column(int col) noexcept {
      return {col / 2 + 1, (col & 1) ? -1 : 1};
    }

    constexpr bool is_inverse_of(Letter other) const noexcept {
      return generator == other.generator && sign == -other.sign;
    }

    friend constexpr bool operator==(Letter, Letter) = default;
    friend constexpr auto operator<=>(Letter a, Letter b) noexcept {
      return a.column() <=> b.column();
    }
  };

  class Word {
   public:
    Word() = default;

    // Takes the letters as given; reduced() reports whether they happen to be
    // freely reduced.
    explicit Word(std::vector<Letter> letters);

    std::vector<Letter> const& letters() const noexcept {
      return _letters;
    }
    std::size_t size() const noexcept {
      return _letters.size();
    }
    bool empty() const noexcept {
      return _letters.empty();
    }
    bool reduced() const noexcept {
      return _reduced;
    }
    Letter operator[](std::size_t i) const {
      return _letters[i];
    }

    // Highest generator index appearing, 0 for the empty word.
    int max_generator() const noexcept;

    Word inverse() const;

    friend bool operator==(Word const& a, Word const& b) {
      return a._letters == b._letters;
    }

   private:
    std::vector<Letter> _letters;
    bool                _reduced = true;
  };

  Word operator*(Word const& a, Word const& b);

  // Splittable, seedable generator. Streams are derived by mixing the seed
  // with a stream id through splitmix64, so the same (seed, stream) pair
  // always yields the same sequence regardless of scheduling.
  class Rng {
   public:
    explicit Rng(std::uint64_t seed) : _seed(seed), _engine(seed) {}

    std::uint64_t seed() const noexcept {
      return _seed;
    }
    Rng split(std::uint64_t stream) const;

    // Uniform in [0, bound), by rejection so the result does not depend on
    // the standard library's distribution implementation.
    std::uint64_t below(std::uint64_t bound);

    std::uint64_t operator()() {
      return _engine();
    }

   private:
    std::uint64_t   _seed;
    std::mt19937_64 _engine;
  };

  std::uint64_t splitmix64(std::uint64_t x) noexcept;

  Word free_reduce(std::span<Letter const> letters, int rank);
  Word cyclic_reduce(Word const& w);
  Word random_relator(int rank, int raw_length, Rng& rng);

  std::vector<std::size_t>  occurrence_profile(Word const& w, int rank);
  std::vector<std::int64_t> exponent_sums(Word const& w, int rank);

  // Length of the cyclic reduction of w, without building it.
  std::size_t cyclic_length(Word const& w);

  // Whether the cyclically reduced word w is a member of some free basis of
  // F_rank. Whitehead's algorithm: a primitive word of length > 1 always
  // admits a length-reducing Whitehead automorphism, so greedy reduction
  // either reaches a single letter or gets stuck at a non-primitive minimum.
  bool is_primitive(Word const& w, int rank);

  // One Whitehead automorphism of the second kind: generator g of the
  // multiplier is fixed; every other generator x maps to
  // (left ? m^-1 : 1) x (right ? m : 1).
  struct WhiteheadMove {
    Letter            multiplier;
    std::vector<bool> left;   // indexed by generator - 1
    std::vector<bool> right;  // indexed by generator - 1
  };

  std::vector<WhiteheadMove> whitehead_moves(int rank);
  Word apply(WhiteheadMove const& move, Word const& w);

  // Compact grammar: lowercase = generator, uppercase = inverse; "a^-1*b^2"
  // is also accepted. rank 0 means infer it from the highest letter.
  Word        parse_word(std::string_view text, int rank = 0);
  std::string format_word(Word const& w);

}  // namespace surfsub
