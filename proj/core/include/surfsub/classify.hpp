#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "surfsub/abelian.hpp"
#include "surfsub/lowindex.hpp"
#include "surfsub/presentation.hpp"
#include "surfsub/words.hpp"

namespace surfsub {

  // Gordon-Wilton: an index-k subgroup of G_n(w) with first Betti number
  // above 1 + k(n - 2) gives a surface subgroup of the double of F_n over w.
  struct SurfaceCriterion {
    int rank  = 3;
    int index = 1;

    std::int64_t threshold() const noexcept {
      return 1 + static_cast<std::int64_t>(index) * (rank - 2);
    }
    bool holds(std::size_t betti) const noexcept {
      return static_cast<std::int64_t>(betti) > threshold();
    }
  };

  bool surface_condition(int rank, int index, std::size_t betti);

  struct ClassifyOptions {
    bool occurrence_filter  = true;
    bool rank_reduction     = true;
    bool primitivity_filter = true;
    bool free_fingerprint   = true;
    bool bs_scan            = true;
    bool descent            = true;
    int  min_repeats        = 3;
    // Index searched inside a subgroup found by the repeated-torsion descent.
    int descent_max_index = 2;
    // Candidate BS groups are compared on class counts up to
    // min(bs_scan_depth, max_index).
    int           bs_scan_depth = 6;
    std::uint64_t node_budget   = 1'000'000'000;

    friend bool operator==(ClassifyOptions const&, ClassifyOptions const&) = default;
  };

  struct IndexAudit {
    int           index            = 0;
    std::uint64_t classes          = 0;
    bool          complete         = true;  // false if stopped at a witness
    std::size_t   max_betti        = 0;
    bool          torsion_free     = true;
    bool          free_betti       = true;  // every betti == index(rank-2)+1
    bool          budget_exhausted = false;

    friend bool operator==(IndexAudit const&, IndexAudit const&) = default;
  };

  // A subgroup chosen for the repeated-torsion descent.
  struct DescentStep {
    int           index         = 0;
    std::uint64_t table_ordinal = 0;
    std::string   table;  // format_table of the subgroup's coset table

    friend bool operator==(DescentStep const&, DescentStep const&) = default;
  };

  struct Verdict;

  namespace verdict {
    struct SurfaceDetected {
      int           index         = 0;
      std::size_t   betti         = 0;
      std::uint64_t table_ordinal = 0;
      std::string   witness;  // format_table of the witness coset table
      // Set when the witness is a subgroup of the descent subgroup; then
      // index is the index in the original group and witness is a table
      // over the descent subgroup's Schreier generators.
      std::optional<DescentStep> descent;

      friend bool operator==(SurfaceDetected const&, SurfaceDetected const&) = default;
    };
    struct TriviallyFree {
      int generator = 0;  // occurs exactly once
      friend bool operator==(TriviallyFree const&, TriviallyFree const&) = default;
    };
    struct RankReducible {
      std::vector<int>               absent_generators;
      std::shared_ptr<Verdict const> reduced;  // null when rank drops below 2
      friend bool operator==(RankReducible const& a, RankReducible const& b);
    };
    struct PrimitiveRelator {
      friend bool operator==(PrimitiveRelator const&, PrimitiveRelator const&) = default;
    };
    struct LooksLikeFree {
      int checked_up_to = 0;
      friend bool operator==(LooksLikeFree const&, LooksLikeFree const&) = default;
    };
    struct BaumslagCandidates {
      std::vector<std::pair<int, int>> pairs;
      friend bool operator==(BaumslagCandidates const&, BaumslagCandidates const&) = default;
    };
    struct Unresolved {
      int  max_index_reached = 0;
      bool budget_exhausted  = false;
      friend bool operator==(Unresolved const&, Unresolved const&) = default;
    };
  }  // namespace verdict

  struct Verdict {
    using Outcome = std::variant<verdict::SurfaceDetected,
                                 verdict::TriviallyFree,
                                 verdict::RankReducible,
                                 verdict::PrimitiveRelator,
                                 verdict::LooksLikeFree,
                                 verdict::BaumslagCandidates,
                                 verdict::Unresolved>;
    Outcome                 outcome;
    std::vector<IndexAudit> audit;

    template <typename T>
    bool is() const noexcept {
      return std::holds_alternative<T>(outcome);
    }
    template <typename T>
    T const& as() const {
      return std::get<T>(outcome);
    }

    // Anything but Unresolved counts as dealt with.
    bool resolved() const noexcept {
      return !is<verdict::Unresolved>();
    }
    // True if the enumeration hit its node budget here or in a nested verdict.
    bool budget_exhausted() const noexcept;

    friend bool operator==(Verdict const&, Verdict const&) = default;
  };

  std::string verdict_tag(Verdict const& v);

  // Wall-clock milliseconds per audited index, filled alongside the verdict.
  struct ClassifyTimings {
    std::vector<double> index_ms;
  };

  // The full pipeline for G_rank(w): occurrence filter, absent generators,
  // primitivity, then low index enumeration up to max_index with the Betti
  // test, and finally the descent, free fingerprint and BS refinements.
  Verdict classify_relator(Word const&            w,
                           int                    rank,
                           int                    max_index,
                           ClassifyOptions const& options = {},
                           ClassifyTimings*       timings = nullptr);

  // The enumeration stage and refinements only, for any presentation.
  Verdict classify_presentation(Presentation const&    p,
                                int                    max_index,
                                ClassifyOptions const& options = {},
                                ClassifyTimings*       timings = nullptr);

  // Class counts of F_rank stored for comparison; F_1 has every count 1.
  // Throws InvalidInput if up_to exceeds what is stored.
  std::vector<std::uint64_t> free_group_class_counts(int free_rank, int up_to);

  // counts agree with the class counts of F_{rank-1} on 1..up_to.
  bool free_fingerprint(std::vector<std::uint64_t> const& counts, int rank, int up_to);

  struct BsScanResult {
    std::vector<std::pair<int, int>> candidates;  // before count filtering
    std::vector<std::pair<int, int>> survivors;
    std::vector<std::pair<int, int>> undetermined;  // budget ran out
    std::string                      note;
  };

  // Pairs (n, m), n, m >= 1, n + m < 16, |n - m| matching the abelianization
  // of G, whose F_1 * BS(n, m) has the same class counts as G up to up_to.
  BsScanResult bs_candidate_scan(AbelianInvariants const&          g_invariants,
                                 std::vector<std::uint64_t> const& g_counts,
                                 int                               rank,
                                 int                               up_to,
                                 std::uint64_t node_budget = 1'000'000'000);

  struct DescentResult {
    std::uint64_t     table_ordinal = 0;
    CosetTable        table;
    AbelianInvariants invariants;
    Presentation      subgroup;
  };

  // Some torsion coefficient repeated at least min_repeats times.
  bool has_repeated_torsion(AbelianInvariants const& inv, int min_repeats);

  // The first table (in the given order) whose subgroup abelianization has a
  // torsion coefficient repeated at least min_repeats times, with the
  // Reidemeister-Schreier presentation of that subgroup.
  std::optional<DescentResult> descend_on_repeated_torsion(Presentation const&            p,
                                                           std::vector<CosetTable> const& tables,
                                                           int min_repeats = 3);

}  // namespace surfsub
