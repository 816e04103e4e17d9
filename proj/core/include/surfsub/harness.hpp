#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "surfsub/classify.hpp"

namespace surfsub {

  struct ExperimentConfig {
    int           rank       = 3;
    int           raw_length = 18;
    int           max_index  = 9;
    std::uint64_t trials     = 50;
    std::uint64_t seed       = 1;
    // Filter toggles, node budget and descent parameters.
    ClassifyOptions options;
    unsigned        threads = 1;
    std::string     output;  // JSONL record stream; empty = in memory only

    // 18 letters and index 9 at rank 3; 14 letters and index 6 at rank 4.
    static ExperimentConfig defaults_for_rank(int rank);

    void validate() const;
  };

  // Applies SURFSUB_NODE_BUDGET and SURFSUB_THREADS when set.
  void apply_environment(ExperimentConfig& cfg);

  struct TrialRecord {
    std::uint64_t       ordinal = 0;
    std::uint64_t       seed    = 0;
    int                 rank    = 0;
    std::string         relator;
    int                 redraws = 0;  // random words that reduced to nothing
    Verdict             verdict;
    std::vector<double> index_ms;
    double              elapsed_ms = 0;

    // Equality of everything except wall-clock timings.
    bool same_result(TrialRecord const& other) const;
  };

  struct RunSummary {
    std::uint64_t                        trials           = 0;
    std::uint64_t                        resolved         = 0;
    std::uint64_t                        unresolved       = 0;
    std::uint64_t                        budget_exhausted = 0;
    std::map<std::string, std::uint64_t> by_verdict;

    double resolved_fraction() const noexcept {
      return trials == 0 ? 0.0 : static_cast<double>(resolved) / static_cast<double>(trials);
    }

    friend bool operator==(RunSummary const&, RunSummary const&) = default;
  };

  // splitmix64(master ^ splitmix64(ordinal)); see Rng::split.
  std::uint64_t trial_seed(std::uint64_t master, std::uint64_t ordinal);

  TrialRecord run_trial(ExperimentConfig const& cfg, std::uint64_t ordinal);

  using RecordSink = std::function<void(TrialRecord const&)>;

  // Runs trials 0..cfg.trials-1. With an output path, records already in the
  // file are kept and their ordinals skipped, new records are appended as
  // they complete, and "<output>.summary.json" is written at the end. The
  // summary covers every record with ordinal < trials.
  RunSummary run_experiment(ExperimentConfig const& cfg, RecordSink const& sink = {});

  TrialRecord classify_one(std::string_view word_text, int rank, ExperimentConfig const& cfg);

  std::vector<std::uint64_t> counts_command(std::string_view          presentation_text,
                                            int                       up_to,
                                            EnumerationOptions const& options = {});

  RunSummary summarize(std::span<TrialRecord const> records);

  std::string verdict_to_json(Verdict const& v);
  Verdict     verdict_from_json(std::string_view text);
  std::string record_to_json(TrialRecord const& r);
  TrialRecord record_from_json(std::string_view line);
  std::string summary_to_json(RunSummary const& s, ExperimentConfig const& cfg);
  std::string config_to_json(ExperimentConfig const& cfg);

  // Reads a record stream. A truncated final line is ignored; any other
  // malformed line throws.
  std::vector<TrialRecord> read_records(std::string const& path);

  void write_csv(std::span<TrialRecord const> records, std::string const& path);

}  // namespace surfsub
