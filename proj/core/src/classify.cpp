#include "surfsub/classify.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <mutex>

#include "surfsub/rewrite.hpp"

namespace surfsub {

  namespace verdict {
    bool operator==(RankReducible const& a, RankReducible const& b) {
      if (a.absent_generators != b.absent_generators) {
        return false;
      }
      if (!a.reduced || !b.reduced) {
        return !a.reduced && !b.reduced;
      }
      return *a.reduced == *b.reduced;
    }
  }  // namespace verdict

  bool Verdict::budget_exhausted() const noexcept {
    for (auto const& a : audit) {
      if (a.budget_exhausted) {
        return true;
      }
    }
    if (auto const* u = std::get_if<verdict::Unresolved>(&outcome)) {
      return u->budget_exhausted;
    }
    if (auto const* r = std::get_if<verdict::RankReducible>(&outcome)) {
      return r->reduced && r->reduced->budget_exhausted();
    }
    return false;
  }

  std::string verdict_tag(Verdict const& v) {
    struct Tag {
      char const* operator()(verdict::SurfaceDetected const&) const {
        return "SurfaceDetected";
      }
      char const* operator()(verdict::TriviallyFree const&) const {
        return "TriviallyFree";
      }
      char const* operator()(verdict::RankReducible const&) const {
        return "RankReducible";
      }
      char const* operator()(verdict::PrimitiveRelator const&) const {
        return "PrimitiveRelator";
      }
      char const* operator()(verdict::LooksLikeFree const&) const {
        return "LooksLikeFree";
      }
      char const* operator()(verdict::BaumslagCandidates const&) const {
        return "BaumslagCandidates";
      }
      char const* operator()(verdict::Unresolved const&) const {
        return "Unresolved";
      }
    };
    return std::visit(Tag{}, v.outcome);
  }

  bool surface_condition(int rank, int index, std::size_t betti) {
    if (rank < 2 || index < 1) {
      throw InvalidInput("surface_condition needs rank >= 2 and index >= 1");
    }
    return SurfaceCriterion{rank, index}.holds(betti);
  }

  ////////////////////////////////////////////////////////////////////////
  // Free group fingerprint
  ////////////////////////////////////////////////////////////////////////

  std::vector<std::uint64_t> free_group_class_counts(int free_rank, int up_to) {
    static std::vector<std::uint64_t> const f2{1, 3, 7, 26, 97, 624, 4163, 34470, 314493};
    static std::vector<std::uint64_t> const f3{1, 7, 41, 604, 13753, 504243};
    if (up_to < 0) {
      throw InvalidInput("free_group_class_counts: negative length");
    }
    if (free_rank == 1) {
      return std::vector<std::uint64_t>(up_to, 1);
    }
    std::vector<std::uint64_t> const* table = nullptr;
    if (free_rank == 2) {
      table = &f2;
    } else if (free_rank == 3) {
      table = &f3;
    }
    if (table == nullptr || static_cast<std::size_t>(up_to) > table->size()) {
      throw InvalidInput("no stored class counts for F_" + std::to_string(free_rank)
                         + " up to index " + std::to_string(up_to));
    }
    return {table->begin(), table->begin() + up_to};
  }

  bool free_fingerprint(std::vector<std::uint64_t> const& counts, int rank, int up_to) {
    if (up_to < 1 || static_cast<std::size_t>(up_to) > counts.size()) {
      throw InvalidInput("free_fingerprint: counts do not cover 1..up_to");
    }
    auto const expected = free_group_class_counts(rank - 1, up_to);
    return std::equal(expected.begin(), expected.end(), counts.begin());
  }

  namespace {
    int stored_free_depth(int free_rank, int wanted) {
      switch (free_rank) {
        case 1:
          return wanted;
        case 2:
          return std::min(wanted, 9);
        case 3:
          return std::min(wanted, 6);
        default:
          return 0;
      }
    }
  }  // namespace

  ////////////////////////////////////////////////////////////////////////
  // Baumslag-Solitar scan
  ////////////////////////////////////////////////////////////////////////

  namespace {
    // Class counts of F_1 * BS(n, m), filled lazily one index at a time and
    // shared across calls.
    class BsCountCache {
     public:
      // nullopt if the budget ran out.
      std::optional<std::uint64_t> count(int n, int m, int index, std::uint64_t budget) {
        {
          std::lock_guard lock(_mutex);
          auto&           v = _counts[{n, m}];
          if (static_cast<int>(v.size()) >= index) {
            return v[index - 1];
          }
        }
        Presentation const p = free_product_with_free(bs(n, m), 1);
        std::uint64_t      c = 0;
        try {
          c = for_each_subgroup(
                  p, index, index, [](CosetTable const&) { return true; }, {budget})
                  .emitted;
        } catch (BudgetExhausted const&) {
          return std::nullopt;
        }
        std::lock_guard lock(_mutex);
        auto&           v = _counts[{n, m}];
        if (static_cast<int>(v.size()) == index - 1) {
          v.push_back(c);
        }
        return c;
      }

     private:
      std::mutex                                            _mutex;
      std::map<std::pair<int, int>, std::vector<std::uint64_t>> _counts;
    };

    BsCountCache& bs_cache() {
      static BsCountCache cache;
      return cache;
    }
  }  // namespace

  BsScanResult bs_candidate_scan(AbelianInvariants const&          g_invariants,
                                 std::vector<std::uint64_t> const& g_counts,
                                 int                               rank,
                                 int                               up_to,
                                 std::uint64_t                     node_budget) {
    BsScanResult out;
    if (rank != 3) {
      out.note = "shape mismatch: F_1 * BS(n,m) has rank 3";
      return out;
    }
    // F_1 * BS(n, m) abelianizes to Z^3 when n = m and to Z^2 + Z/|n - m|
    // otherwise, the cyclic part vanishing when |n - m| = 1.
    long d = -1;
    if (g_invariants.free_rank == 3 && g_invariants.torsion.empty()) {
      d = 0;
    } else if (g_invariants.free_rank == 2 && g_invariants.torsion.empty()) {
      d = 1;
    } else if (g_invariants.free_rank == 2 && g_invariants.torsion.size() == 1
               && g_invariants.torsion.front().fits_slong_p()) {
      d = g_invariants.torsion.front().get_si();
    }
    if (d < 0) {
      out.note = "shape mismatch: abelianization is neither Z^3 nor Z^2 + cyclic";
      return out;
    }
    if (up_to < 1 || static_cast<std::size_t>(up_to) > g_counts.size()) {
      throw InvalidInput("bs_candidate_scan: counts do not cover 1..up_to");
    }
    for (int n = 1; n < 16; ++n) {
      for (int m = 1; n + m < 16; ++m) {
        if (std::abs(n - m) == d) {
          out.candidates.emplace_back(n, m);
        }
      }
    }
    for (auto [n, m] : out.candidates) {
      bool matches = true, known = true;
      for (int i = 1; i <= up_to && matches; ++i) {
        auto c = bs_cache().count(n, m, i, node_budget);
        if (!c) {
          known = false;
          break;
        }
        matches = *c == g_counts[i - 1];
      }
      if (!known) {
        out.undetermined.emplace_back(n, m);
      } else if (matches) {
        out.survivors.emplace_back(n, m);
      }
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Descent
  ////////////////////////////////////////////////////////////////////////

  bool has_repeated_torsion(AbelianInvariants const& inv, int min_repeats) {
    // torsion is sorted by divisibility, so equal values are adjacent
    std::size_t run = 0;
    for (std::size_t i = 0; i < inv.torsion.size(); ++i) {
      run = (i > 0 && inv.torsion[i] == inv.torsion[i - 1]) ? run + 1 : 1;
      if (run >= static_cast<std::size_t>(min_repeats)) {
        return true;
      }
    }
    return false;
  }

  std::optional<DescentResult> descend_on_repeated_torsion(Presentation const&            p,
                                                           std::vector<CosetTable> const& tables,
                                                           int min_repeats) {
    if (min_repeats < 2) {
      throw InvalidInput("descend_on_repeated_torsion: min_repeats must be at least 2");
    }
    for (std::size_t k = 0; k < tables.size(); ++k) {
      IntMatrix const m   = abelianized_relation_matrix(tables[k], p);
      auto            inv = invariants(m, m.cols());
      if (has_repeated_torsion(inv, min_repeats)) {
        return DescentResult{k, tables[k], std::move(inv), subgroup_presentation(tables[k], p)};
      }
    }
    return std::nullopt;
  }

  ////////////////////////////////////////////////////////////////////////
  // Classification
  ////////////////////////////////////////////////////////////////////////

  namespace {
    using Clock = std::chrono::steady_clock;

    struct Witness {
      int           index   = 0;
      std::size_t   betti   = 0;
      std::uint64_t ordinal = 0;
      std::string   table;
    };

    struct ScanResult {
      std::vector<IndexAudit>            audit;
      std::optional<Witness>             witness;
      std::optional<DescentStep>         descent;
      bool                               budget_exhausted = false;
      std::optional<AbelianInvariants>   whole_group;
    };

    // Enumerates index 1..max_index of p, testing the criterion for
    // (criterion_rank, multiplier * index). Stops at the first witness.
    ScanResult scan(Presentation const&    p,
                    int                    criterion_rank,
                    int                    multiplier,
                    int                    max_index,
                    ClassifyOptions const& options,
                    bool                   watch_descent,
                    ClassifyTimings*       timings) {
      ScanResult out;
      int const  free_betti_rank = p.rank() - 2;
      for (int i = 1; i <= max_index; ++i) {
        auto const    start = Clock::now();
        IndexAudit    audit;
        audit.index           = i;
        std::uint64_t ordinal = 0;
        auto          visit   = [&](CosetTable const& t) {
          IntMatrix const m   = abelianized_relation_matrix(t, p);
          auto            inv = invariants(m, m.cols());
          std::size_t     b   = betti(inv);
          ++audit.classes;
          audit.max_betti    = std::max(audit.max_betti, b);
          audit.torsion_free = audit.torsion_free && inv.torsion.empty();
          audit.free_betti   = audit.free_betti
                             && static_cast<std::int64_t>(b)
                                    == static_cast<std::int64_t>(i) * free_betti_rank + 1;
          if (i == 1) {
            out.whole_group = inv;
          }
          if (watch_descent && !out.descent && has_repeated_torsion(inv, options.min_repeats)) {
            out.descent = DescentStep{i, ordinal, format_table(t)};
          }
          if (SurfaceCriterion{criterion_rank, multiplier * i}.holds(b)) {
            out.witness = Witness{i, b, ordinal, format_table(t)};
            return false;
          }
          ++ordinal;
          return true;
        };
        try {
          auto stats     = for_each_subgroup(p, i, i, visit, {options.node_budget});
          audit.complete = !stats.stopped;
        } catch (BudgetExhausted const&) {
          audit.complete         = false;
          audit.budget_exhausted = true;
          out.budget_exhausted   = true;
        }
        out.audit.push_back(audit);
        if (timings) {
          timings->index_ms.push_back(
              std::chrono::duration<double, std::milli>(Clock::now() - start).count());
        }
        if (out.witness || out.budget_exhausted) {
          break;
        }
      }
      return out;
    }
  }  // namespace

  Verdict classify_presentation(Presentation const&    p,
                                int                    max_index,
                                ClassifyOptions const& options,
                                ClassifyTimings*       timings) {
    if (max_index < 1) {
      throw InvalidInput("classify: max_index must be positive");
    }
    if (p.rank() < 2) {
      throw InvalidInput("classify: rank must be at least 2");
    }
    Verdict    v;
    ScanResult s = scan(p, p.rank(), 1, max_index, options, options.descent, timings);
    v.audit      = s.audit;
    if (s.witness) {
      v.outcome = verdict::SurfaceDetected{
          s.witness->index, s.witness->betti, s.witness->ordinal, s.witness->table, std::nullopt};
      return v;
    }
    if (s.budget_exhausted) {
      v.outcome = verdict::Unresolved{static_cast<int>(s.audit.size()) - 1, true};
      return v;
    }

    if (options.descent && s.descent) {
      CosetTable const   t   = parse_table(s.descent->table, p.rank());
      Presentation const sub = subgroup_presentation(t, p);
      ScanResult         inner =
          scan(sub, p.rank(), s.descent->index, options.descent_max_index, options, false, nullptr);
      if (inner.witness) {
        v.outcome = verdict::SurfaceDetected{s.descent->index * inner.witness->index,
                                             inner.witness->betti,
                                             inner.witness->ordinal,
                                             inner.witness->table,
                                             s.descent};
        return v;
      }
    }

    std::vector<std::uint64_t> counts;
    for (auto const& a : s.audit) {
      counts.push_back(a.classes);
    }

    if (options.free_fingerprint) {
      int const depth = stored_free_depth(p.rank() - 1, max_index);
      bool      clean = depth > 0;
      for (auto const& a : s.audit) {
        clean = clean && a.torsion_free && a.free_betti;
      }
      if (clean && free_fingerprint(counts, p.rank(), depth)) {
        v.outcome = verdict::LooksLikeFree{depth};
        return v;
      }
    }

    if (options.bs_scan && p.rank() == 3 && p.relators().size() == 1 && s.whole_group) {
      int const depth = std::min(options.bs_scan_depth, max_index);
      auto      scan_result =
          bs_candidate_scan(*s.whole_group, counts, p.rank(), depth, options.node_budget);
      if (!scan_result.survivors.empty()) {
        v.outcome = verdict::BaumslagCandidates{scan_result.survivors};
        return v;
      }
    }

    v.outcome = verdict::Unresolved{max_index, false};
    return v;
  }

  Verdict classify_relator(Word const&            w,
                           int                    rank,
                           int                    max_index,
                           ClassifyOptions const& options,
                           ClassifyTimings*       timings) {
    Word const r = cyclic_reduce(free_reduce(w.letters(), rank));
    if (r.empty()) {
      throw InvalidInput("classify_relator: relator is trivial");
    }
    if (rank < 2) {
      throw InvalidInput("classify_relator: rank must be at least 2");
    }
    Verdict v;
    auto const profile = occurrence_profile(r, rank);
    if (options.occurrence_filter) {
      for (int g = 1; g <= rank; ++g) {
        if (profile[g - 1] == 1) {
          v.outcome = verdict::TriviallyFree{g};
          return v;
        }
      }
    }
    if (options.rank_reduction
        && std::find(profile.begin(), profile.end(), 0) != profile.end()) {
      auto                           red = absent_generator_reduction(one_relator(rank, r));
      std::shared_ptr<Verdict const> inner;
      if (red.reduced.rank() >= 2) {
        inner = std::make_shared<Verdict const>(classify_relator(
            red.reduced.relators().front(), red.reduced.rank(), max_index, options, timings));
      }
      v.outcome = verdict::RankReducible{red.absent, std::move(inner)};
      return v;
    }
    if (options.primitivity_filter && is_primitive(r, rank)) {
      v.outcome = verdict::PrimitiveRelator{};
      return v;
    }
    return classify_presentation(one_relator(rank, r), max_index, options, timings);
  }

}  // namespace surfsub
