#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>

#include "oracles.hpp"
#include "surfsub/words.hpp"

using namespace surfsub;

namespace {

  Letter const a{1, 1}, A{1, -1}, b{2, 1}, B{2, -1}, c{3, 1}, C{3, -1};

  Word reduce(std::vector<Letter> const& v, int rank = 3) {
    return free_reduce(v, rank);
  }

  std::vector<Letter> random_raw(Rng& rng, int rank, int length) {
    std::vector<Letter> out;
    for (int i = 0; i < length; ++i) {
      out.push_back(Letter::from_column(static_cast<int>(rng.below(2 * rank))));
    }
    return out;
  }

  bool freely_reduced(std::vector<Letter> const& v) {
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      if (v[i].is_inverse_of(v[i + 1])) return false;
    }
    return true;
  }

}  // namespace

TEST_CASE("free_reduce examples") {
  CHECK(reduce({a, A, b}).letters() == std::vector<Letter>{b});
  CHECK(reduce({}).empty());
  CHECK(reduce({a, b, B, a, A, A}).empty());
  CHECK_THROWS_AS(reduce({a, Letter{4, 1}}), InvalidInput);
  CHECK_THROWS_AS(reduce({Letter{0, 1}}), InvalidInput);
}

TEST_CASE("cyclic_reduce examples") {
  CHECK(cyclic_reduce(reduce({a, b, A})).letters() == std::vector<Letter>{b});
  auto const r1 = reduce({b, A, C, B, a, B, B, A, B, A, c});
  CHECK(cyclic_reduce(r1) == r1);
  // Stripping a...A leaves b a B, whose ends still cancel.
  CHECK(cyclic_reduce(reduce({a, b, a, B, A})).letters() == std::vector<Letter>{a});
  CHECK(cyclic_reduce(reduce({a, b, a, B, A, c})) == reduce({a, b, a, B, A, c}));
  CHECK(format_word(r1) == "bACBaBBABAc");
}

TEST_CASE("free_reduce is idempotent and cyclic_reduce shrinks") {
  Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    auto const raw = random_raw(rng, 3, static_cast<int>(rng.below(20)));
    auto const once = reduce(raw);
    CHECK(reduce(once.letters()) == once);
    CHECK(once.letters() == oracle::reduce(raw));
    CHECK(once.reduced());
    CHECK(freely_reduced(once.letters()));

    auto const cyc = cyclic_reduce(once);
    CHECK(cyc.size() <= once.size());
    CHECK(cyc.letters() == oracle::cyclic(raw));
    auto rot = cyc.letters();
    for (std::size_t r = 0; r < rot.size(); ++r) {
      CHECK(freely_reduced(rot));
      std::rotate(rot.begin(), rot.begin() + 1, rot.end());
    }
  }
}

TEST_CASE("random_relator") {
  Rng rng(5);
  double total = 0;
  int const n  = 4000;
  for (int i = 0; i < n; ++i) {
    auto const w = random_relator(3, 18, rng);
    CHECK(w.size() <= 18);
    CHECK(cyclic_reduce(w) == w);
    total += static_cast<double>(w.size());
  }
  // Typically around 14 letters survive.
  CHECK(total / n > 11.0);
  CHECK(total / n < 15.0);

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng r(seed);
    CHECK(random_relator(3, 1, r).size() == 1);
  }
  CHECK_THROWS_AS(random_relator(0, 5, rng), InvalidInput);
}

TEST_CASE("random_relator matches the exact reduced-word distribution") {
  int const  rank = 2, length = 4;
  auto const expected = oracle::reduced_word_distribution(rank, length);
  double     total    = 0;
  for (auto const& [k, v] : expected) total += static_cast<double>(v);

  std::map<std::vector<int>, std::uint64_t> observed;
  int const                                 draws = 200000;
  Rng                                       rng(2024);
  for (int i = 0; i < draws; ++i) {
    std::vector<int> key;
    auto const       w = random_relator(rank, length, rng);
    for (auto l : w.letters()) {
      key.push_back(l.generator * 2 + (l.sign < 0));
    }
    ++observed[key];
  }
  double chi = 0;
  for (auto const& [k, v] : expected) {
    double const e = draws * static_cast<double>(v) / total;
    double const o = static_cast<double>(observed[k]);
    chi += (o - e) * (o - e) / e;
  }
  CHECK(observed.size() == expected.size());
  CHECK(chi < oracle::chi_square_critical(static_cast<double>(expected.size() - 1)));
}

TEST_CASE("occurrence_profile and exponent_sums") {
  CHECK(occurrence_profile(reduce({a, b, A}), 3) == std::vector<std::size_t>{2, 1, 0});
  CHECK(occurrence_profile(parse_word("bACBaBBABAc", 3), 3) == std::vector<std::size_t>{4, 5, 2});
  CHECK(occurrence_profile(Word{}, 3) == std::vector<std::size_t>{0, 0, 0});
  CHECK(exponent_sums(reduce({a, a, B}), 3) == std::vector<std::int64_t>{2, -1, 0});
  CHECK(exponent_sums(parse_word("Baaba^-3", 2), 2) == std::vector<std::int64_t>{-1, 0});

  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    auto const raw = random_raw(rng, 3, 12);
    auto const w   = reduce(raw);
    // Exponent sums survive reduction; occurrences drop in cancelling pairs.
    std::vector<std::int64_t> sums(3, 0);
    for (auto l : raw) sums[l.generator - 1] += l.sign;
    CHECK(exponent_sums(w, 3) == sums);
    auto neg = sums;
    for (auto& s : neg) s = -s;
    CHECK(exponent_sums(w.inverse(), 3) == neg);
    auto const prof = occurrence_profile(w, 3);
    CHECK(std::accumulate(prof.begin(), prof.end(), std::size_t{0}) == w.size());
    CHECK(occurrence_profile(reduce(w.letters()), 3) == prof);
  }
}

TEST_CASE("is_primitive examples") {
  CHECK(is_primitive(parse_word("a", 3), 3));
  CHECK_FALSE(is_primitive(parse_word("aa", 3), 3));
  CHECK_FALSE(is_primitive(parse_word("abaB", 2), 2));
  CHECK(is_primitive(parse_word("abaaB", 2), 2) == oracle::primitive_by_orbit(parse_word("abaaB", 2), 2));
  CHECK(is_primitive(parse_word("ab", 2), 2));
  CHECK(is_primitive(parse_word("aab", 2), 2));
  CHECK_FALSE(is_primitive(parse_word("abAB", 2), 2));
  CHECK_FALSE(is_primitive(parse_word("abABcdCD", 4), 4));
  CHECK_THROWS_AS(is_primitive(Word{}, 2), InvalidInput);
}

TEST_CASE("is_primitive agrees with the Whitehead orbit search") {
  Rng rng(17);
  int primitive = 0;
  for (int trial = 0; trial < 1500; ++trial) {
    int const  rank = 2 + static_cast<int>(rng.below(2));
    auto const w    = cyclic_reduce(reduce(random_raw(rng, rank, 1 + static_cast<int>(rng.below(9))), rank));
    if (w.empty()) continue;
    bool const expected = oracle::primitive_by_orbit(w, rank);
    primitive += expected;
    INFO(format_word(w), " rank ", rank);
    CHECK(is_primitive(w, rank) == expected);
  }
  CHECK(primitive > 100);
}

TEST_CASE("single-occurrence generators make the relator primitive") {
  Rng rng(23);
  int seen = 0;
  for (int trial = 0; seen < 200 && trial < 20000; ++trial) {
    auto const w = random_relator(3, 10, rng);
    if (w.empty()) continue;
    auto const prof = occurrence_profile(w, 3);
    if (std::find(prof.begin(), prof.end(), 1) == prof.end()) continue;
    ++seen;
    CHECK(is_primitive(w, 3));
  }
  CHECK(seen == 200);
}

TEST_CASE("exponent-sum gcd above one rules out primitivity") {
  Rng rng(29);
  int seen = 0;
  for (int trial = 0; trial < 20000 && seen < 200; ++trial) {
    auto const w = random_relator(3, 12, rng);
    if (w.empty()) continue;
    std::int64_t g = 0;
    for (auto s : exponent_sums(w, 3)) g = std::gcd(g, s);
    if (g == 1) continue;
    ++seen;
    CHECK_FALSE(is_primitive(w, 3));
  }
  CHECK(seen == 200);
}

TEST_CASE("Whitehead moves match an independent implementation") {
  // left[g] sends x_g to m^-1 x_g and right[g] to x_g m, results compared as
  // cyclic words.
  Rng        rng(31);
  auto const moves = whitehead_moves(3);
  CHECK(!moves.empty());
  for (int trial = 0; trial < 500; ++trial) {
    auto const  w = cyclic_reduce(reduce(random_raw(rng, 3, 10)));
    auto const& m = moves[rng.below(moves.size())];
    std::vector<int> choice(3, 0);
    for (int g = 0; g < 3; ++g) choice[g] = (m.left[g] ? 1 : 0) + (m.right[g] ? 2 : 0);
    auto const got = apply(m, w);
    CHECK(oracle::cyclic_key(got.letters())
          == oracle::cyclic_key(oracle::whitehead(w.letters(), m.multiplier.inverse(), choice)));
  }
}

TEST_CASE("word text") {
  CHECK(format_word(parse_word("a^-1*b^2")) == "Abb");
  CHECK(parse_word("1").empty());
  CHECK(parse_word("baCBabbABAc").max_generator() == 3);
  CHECK(format_word(parse_word("aA", 1)) == "");
  try {
    parse_word("abd", 3);
    FAIL("expected a parse error");
  } catch (ParseError const& e) {
    CHECK(e.column() == 3);
  }
  CHECK_THROWS_AS(parse_word("a?b"), ParseError);

  Rng rng(37);
  for (int trial = 0; trial < 200; ++trial) {
    auto const w = reduce(random_raw(rng, 5, 15), 5);
    CHECK(parse_word(format_word(w), 5) == w);
  }
}

TEST_CASE("Rng streams") {
  Rng a1(9), a2(9);
  CHECK(a1.split(4).seed() == a2.split(4).seed());
  CHECK(a1.split(4).seed() != a1.split(5).seed());
  CHECK(a1.split(4).seed() == splitmix64(9 ^ splitmix64(4)));
  for (int i = 0; i < 1000; ++i) CHECK(a1.below(7) < 7);
}
