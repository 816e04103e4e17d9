#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "surfsub/classify.hpp"
#include "surfsub/rewrite.hpp"

using namespace surfsub;

namespace {

  using Counts = std::vector<std::uint64_t>;

  ClassifyOptions no_filters() {
    ClassifyOptions o;
    o.occurrence_filter = o.rank_reduction = o.primitivity_filter = false;
    o.free_fingerprint = o.bs_scan = o.descent = false;
    return o;
  }

  std::size_t witness_betti(Presentation const& p, std::string const& table) {
    auto const t = parse_table(table, p.rank());
    REQUIRE(satisfies(t, p));
    auto const m = abelianized_relation_matrix(t, p);
    return betti(invariants(m, m.cols()));
  }

  AbelianInvariants whole_group(Presentation const& p) {
    auto const m = abelianized_relation_matrix(low_index_subgroups(p, 1).front(), p);
    return invariants(m, m.cols());
  }

}  // namespace

TEST_CASE("surface_condition") {
  CHECK(surface_condition(3, 2, 4));
  for (int i = 1; i <= 12; ++i) CHECK_FALSE(surface_condition(3, i, static_cast<std::size_t>(i + 1)));
  CHECK(surface_condition(4, 3, 8));
  CHECK_FALSE(surface_condition(4, 3, 7));
  CHECK(SurfaceCriterion{3, 5}.threshold() == 6);
  CHECK(SurfaceCriterion{4, 5}.threshold() == 11);
  CHECK(SurfaceCriterion{2, 9}.threshold() == 1);
  CHECK_THROWS_AS(surface_condition(1, 1, 5), InvalidInput);
  CHECK_THROWS_AS(surface_condition(3, 0, 5), InvalidInput);

  // Monotone in betti, anti-monotone in index.
  for (int rank = 2; rank <= 5; ++rank) {
    for (int k = 1; k <= 10; ++k) {
      for (std::size_t b = 0; b <= 40; ++b) {
        if (surface_condition(rank, k, b)) {
          CHECK(surface_condition(rank, k, b + 1));
          if (k > 1) CHECK(surface_condition(rank, k - 1, b));
        }
      }
    }
  }
}

TEST_CASE("classify_relator examples") {
  auto const tf = classify_relator(parse_word("abcBc", 3), 3, 6);
  REQUIRE(tf.is<verdict::TriviallyFree>());
  CHECK(tf.as<verdict::TriviallyFree>().generator == 1);
  CHECK(tf.audit.empty());

  auto const g2 = classify_relator(parse_word("abABcdCD", 4), 4, 6);
  REQUIRE(g2.is<verdict::SurfaceDetected>());
  CHECK(g2.as<verdict::SurfaceDetected>().index == 1);
  CHECK(g2.as<verdict::SurfaceDetected>().betti == 4);

  auto const r1 = classify_relator(parse_word("bACBaBBABAc", 3), 3, 5);
  CHECK(r1.is<verdict::Unresolved>());
  CHECK(r1.audit.size() == 5);
  for (auto const& a : r1.audit) CHECK(a.max_betti <= static_cast<std::size_t>(a.index + 1));

  CHECK(classify_relator(parse_word("aab", 3), 3, 4).is<verdict::TriviallyFree>());
  CHECK(classify_relator(parse_word("aabb", 3), 3, 4).is<verdict::RankReducible>());
  auto o = no_filters();
  o.primitivity_filter = true;
  CHECK(classify_relator(parse_word("aab", 2), 2, 4, o).is<verdict::PrimitiveRelator>());
  CHECK_THROWS_AS(classify_relator(Word{}, 3, 4), InvalidInput);
  CHECK_THROWS_AS(classify_relator(parse_word("abAB"), 3, 0), InvalidInput);
}

TEST_CASE("rank reduction recurses") {
  // c absent; <a, b | [a, b]> is Z^2 with betti 2 > 1 at index 1.
  auto const v = classify_relator(parse_word("abAB", 3), 3, 4);
  REQUIRE(v.is<verdict::RankReducible>());
  auto const& r = v.as<verdict::RankReducible>();
  CHECK(r.absent_generators == std::vector<int>{3});
  REQUIRE(r.reduced);
  REQUIRE(r.reduced->is<verdict::SurfaceDetected>());
  CHECK(r.reduced->as<verdict::SurfaceDetected>().index == 1);

  // Only one generator left: nothing to recurse into.
  auto const one = classify_relator(parse_word("aa", 3), 3, 4);
  REQUIRE(one.is<verdict::RankReducible>());
  CHECK_FALSE(one.as<verdict::RankReducible>().reduced);
}

TEST_CASE("the late rank-2 witness") {
  auto const w  = parse_word("BAAbbAAABB", 2);
  auto       o  = ClassifyOptions{};
  o.descent     = false;
  auto const v12 = classify_relator(w, 2, 12, o);
  CHECK(v12.is<verdict::Unresolved>());
  auto const v = classify_relator(w, 2, 13, o);
  REQUIRE(v.is<verdict::SurfaceDetected>());
  auto const& s = v.as<verdict::SurfaceDetected>();
  CHECK(s.index == 13);
  CHECK(s.betti == 2);
  CHECK(witness_betti(one_relator(2, w), s.witness) == 2);
}

TEST_CASE("free_fingerprint") {
  CHECK(free_fingerprint({1, 3, 7, 26}, 3, 4));
  CHECK_FALSE(free_fingerprint({1, 3, 8}, 3, 3));
  CHECK(free_fingerprint({1, 7, 41}, 4, 3));
  CHECK(free_fingerprint({1, 1, 1, 1, 1, 1, 1}, 2, 7));
  CHECK_THROWS_AS(free_fingerprint({1, 3}, 3, 3), InvalidInput);
  CHECK_THROWS_AS(free_group_class_counts(2, 10), InvalidInput);
  CHECK(free_group_class_counts(2, 9) == Counts{1, 3, 7, 26, 97, 624, 4163, 34470, 314493});
  CHECK(free_group_class_counts(3, 6) == Counts{1, 7, 41, 604, 13753, 504243});
}

TEST_CASE("LooksLikeFree only for torsion-free free-like audits") {
  // With the cheap filters off, primitive relators reach the fingerprint.
  ClassifyOptions o;
  o.occurrence_filter = o.primitivity_filter = o.rank_reduction = false;
  Rng rng(53);
  int free_like = 0;
  for (int trial = 0; trial < 150; ++trial) {
    auto const w = random_relator(3, 12, rng);
    if (w.empty()) continue;
    auto const v = classify_relator(w, 3, 5, o);
    if (!v.is<verdict::LooksLikeFree>()) continue;
    ++free_like;
    Counts counts;
    for (auto const& a : v.audit) {
      CHECK(a.torsion_free);
      CHECK(a.max_betti == static_cast<std::size_t>(a.index + 1));
      counts.push_back(a.classes);
    }
    CHECK(free_fingerprint(counts, 3, 5));
  }
  CHECK(free_like > 0);
}

TEST_CASE("bs_candidate_scan") {
  auto const g      = free_product_with_free(bs(2, 3), 1);
  auto const counts = class_counts(g, 4);
  auto const self   = bs_candidate_scan(whole_group(g), counts, 3, 4);
  CHECK(std::find(self.survivors.begin(), self.survivors.end(), std::pair{2, 3}) != self.survivors.end());
  CHECK(self.undetermined.empty());

  AbelianInvariants const two{{Integer(2)}, 2};
  auto const              scan = bs_candidate_scan(two, counts, 3, 1);
  std::vector<std::pair<int, int>> expected;
  for (int n = 1; 2 * n + 2 < 16; ++n) {
    expected.emplace_back(n, n + 2);
    expected.emplace_back(n + 2, n);
  }
  auto got = scan.candidates;
  std::sort(got.begin(), got.end());
  std::sort(expected.begin(), expected.end());
  CHECK(got == expected);

  // No torsion: |n - m| = 1 at free rank 2, n = m at free rank 3.
  for (auto [inv, diff] : {std::pair{AbelianInvariants{{}, 2}, 1}, std::pair{AbelianInvariants{{}, 3}, 0}}) {
    auto const c = bs_candidate_scan(inv, counts, 3, 1).candidates;
    CHECK_FALSE(c.empty());
    for (auto [n, m] : c) CHECK(std::abs(n - m) == diff);
  }
  auto const same = free_product_with_free(bs(3, 3), 1);
  auto const same_scan = bs_candidate_scan(whole_group(same), class_counts(same, 3), 3, 3);
  CHECK(std::find(same_scan.survivors.begin(), same_scan.survivors.end(), std::pair{3, 3}) != same_scan.survivors.end());

  CHECK(bs_candidate_scan(AbelianInvariants{{Integer(2), Integer(2)}, 2}, counts, 3, 4).survivors.empty());
  CHECK_FALSE(bs_candidate_scan(AbelianInvariants{{Integer(2), Integer(2)}, 2}, counts, 3, 4).note.empty());
  CHECK_FALSE(bs_candidate_scan(AbelianInvariants{{}, 1}, counts, 3, 4).note.empty());
}

TEST_CASE("descend_on_repeated_torsion") {
  CHECK(has_repeated_torsion(AbelianInvariants{{Integer(2), Integer(2), Integer(2)}, 0}, 3));
  CHECK_FALSE(has_repeated_torsion(AbelianInvariants{{Integer(2), Integer(2), Integer(4)}, 0}, 3));
  CHECK(has_repeated_torsion(AbelianInvariants{{Integer(2), Integer(2), Integer(4)}, 0}, 2));

  auto const f = Presentation::free(2);
  CHECK_FALSE(descend_on_repeated_torsion(f, low_index_subgroups(f, 3)));
  auto const kb = parse_presentation("rank=2; relators=aabb");
  CHECK_FALSE(descend_on_repeated_torsion(kb, low_index_subgroups(kb, 1)));
  CHECK_THROWS_AS(descend_on_repeated_torsion(kb, {}, 1), InvalidInput);

  // Index 15, then index 2 inside the subgroup.
  auto const p     = parse_presentation("rank=2; relators=baababABBa");
  auto const found = descend_on_repeated_torsion(p, low_index_subgroups(p, 15));
  REQUIRE(found);
  CHECK(has_repeated_torsion(found->invariants, 3));
  CHECK(found->subgroup.rank() == 16);
  auto o    = ClassifyOptions{};
  o.descent = false;
  auto const inner = classify_presentation(found->subgroup, 2, o);
  // Criterion of the original group at index 15 * j: betti > 1 at rank 2.
  bool hit = false;
  for (auto const& a : inner.audit) hit = hit || surface_condition(2, 15 * a.index, a.max_betti);
  CHECK(hit);
}

TEST_CASE("determinism, soundness and filter independence") {
  Rng rng(59);
  int detected = 0;
  for (int trial = 0; trial < 60; ++trial) {
    auto const w = random_relator(3, 14, rng);
    if (w.empty()) continue;
    auto const v1 = classify_relator(w, 3, 4);
    auto const v2 = classify_relator(w, 3, 4);
    CHECK(v1 == v2);
    if (!v1.is<verdict::SurfaceDetected>()) continue;
    ++detected;
    auto const& s = v1.as<verdict::SurfaceDetected>();
    CHECK_FALSE(s.descent);
    CHECK(surface_condition(3, s.index, s.betti));
    CHECK(witness_betti(one_relator(3, w), s.witness) == s.betti);
    CHECK(s.index == static_cast<int>(v1.audit.size()));

    auto const bare = classify_relator(w, 3, 4, no_filters());
    CHECK(bare.outcome == v1.outcome);
  }
  CHECK(detected > 5);
}

TEST_CASE("descent witnesses are sound") {
  auto const p = parse_presentation("rank=3; relators=aCaCaccbbca");
  auto const v = classify_presentation(p, 7);
  REQUIRE(v.is<verdict::SurfaceDetected>());
  auto const& s = v.as<verdict::SurfaceDetected>();
  REQUIRE(s.descent);
  CHECK(s.descent->index == 7);
  CHECK(s.index == 14);
  CHECK(s.betti == 16);
  CHECK(surface_condition(3, s.index, s.betti));
  auto const sub = subgroup_presentation(parse_table(s.descent->table, 3), p);
  CHECK(witness_betti(sub, s.witness) == s.betti);
}

TEST_CASE("budget exhaustion is reported") {
  ClassifyOptions o;
  o.node_budget = 50;
  auto const v  = classify_relator(parse_word("bACBaBBABAc", 3), 3, 6, o);
  REQUIRE(v.is<verdict::Unresolved>());
  CHECK(v.budget_exhausted());
  CHECK(v.as<verdict::Unresolved>().budget_exhausted);
  CHECK(v.audit.back().budget_exhausted);
  CHECK_FALSE(v.resolved());
}
