// surfsub: low index subgroup experiments on one-relator groups.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "surfsub/abelian.hpp"
#include "surfsub/classify.hpp"
#include "surfsub/harness.hpp"
#include "surfsub/lowindex.hpp"
#include "surfsub/rewrite.hpp"

namespace {

  constexpr int kExitOk     = 0;
  constexpr int kExitError  = 1;
  constexpr int kExitBudget = 2;

  void add_filter_flags(CLI::App* cmd, surfsub::ClassifyOptions& o) {
    auto toggle = [cmd](std::string const& name, bool& field, std::string const& what) {
      cmd->add_flag("--" + name + ",!--no_" + name, field, what);
    };
    toggle("occurrence_filter", o.occurrence_filter, "single-occurrence generator filter");
    toggle("rank_reduction", o.rank_reduction, "drop generators absent from the relator");
    toggle("primitivity_filter", o.primitivity_filter, "Whitehead primitivity filter");
    toggle("free_fingerprint", o.free_fingerprint, "free group class-count fingerprint");
    toggle("bs_scan", o.bs_scan, "Baumslag-Solitar candidate scan");
    toggle("descent", o.descent, "repeated-torsion descent");
    cmd->add_option("--min_repeats", o.min_repeats, "equal torsion coefficients needed to descend");
    cmd->add_option("--descent_max_index", o.descent_max_index, "index searched in the descent subgroup");
    cmd->add_option("--bs_scan_depth", o.bs_scan_depth, "class-count depth of the BS comparison");
    cmd->add_option("--node_budget", o.node_budget, "enumeration node budget per call");
  }

  std::string join(std::vector<std::uint64_t> const& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      out += (i ? " " : "") + std::to_string(v[i]);
    }
    return out;
  }

}  // namespace

int main(int argc, char** argv) {
  using namespace surfsub;

  CLI::App app{"Low index subgroups, Betti numbers and surface subgroup detection "
               "for one-relator groups"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  apply_environment(cfg);
  bool        rank_given       = false;
  bool        raw_length_given = false;
  bool        max_index_given  = false;
  std::string csv;

  // run
  auto* run = app.add_subcommand("run", "classify a batch of random relators");
  run->add_option_function<int>("--rank", [&](int r) { cfg.rank = r; rank_given = true; }, "number of generators");
  run->add_option_function<int>(
      "--raw_length", [&](int l) { cfg.raw_length = l; raw_length_given = true; }, "letters drawn before reduction");
  run->add_option_function<int>(
      "--max_index", [&](int i) { cfg.max_index = i; max_index_given = true; }, "largest subgroup index searched");
  run->add_option("--trials", cfg.trials, "number of relators");
  run->add_option("--seed", cfg.seed, "master seed");
  run->add_option("--threads", cfg.threads, "trials classified concurrently");
  run->add_option("--output", cfg.output, "JSONL record stream (resumable)");
  run->add_option("--csv", csv, "also export the records as CSV");
  add_filter_flags(run, cfg.options);

  // classify
  std::string word_text;
  int         rank = 0;
  auto*       classify = app.add_subcommand("classify", "classify one relator");
  classify->add_option("word", word_text, "relator, e.g. bACBaBBABAc")->required();
  classify->add_option("--rank", rank, "number of generators (default: inferred)");
  classify->add_option_function<int>(
      "--max_index", [&](int i) { cfg.max_index = i; max_index_given = true; }, "largest subgroup index searched");
  add_filter_flags(classify, cfg.options);

  // counts
  std::string presentation_text;
  int         up_to = 5;
  auto*       counts = app.add_subcommand("counts", "conjugacy classes of subgroups per index");
  counts->add_option("presentation", presentation_text, "e.g. \"rank=2; relators=\"")->required();
  counts->add_option("--up_to", up_to, "largest index")->capture_default_str();
  counts->add_option("--node_budget", cfg.options.node_budget, "enumeration node budget");

  // tables
  int   table_index = 2;
  auto* tables = app.add_subcommand("tables", "dump one canonical coset table per class");
  tables->add_option("presentation", presentation_text)->required();
  tables->add_option("--index", table_index, "subgroup index")->capture_default_str();
  tables->add_option("--node_budget", cfg.options.node_budget, "enumeration node budget");
  bool with_invariants = false;
  tables->add_flag("--invariants", with_invariants, "append each subgroup's abelian invariants");

  // bs-scan
  int   scan_up_to = 6;
  auto* bs_scan = app.add_subcommand("bs-scan", "compare a rank-3 relator with F_1 * BS(n,m)");
  bs_scan->add_option("word", word_text)->required();
  bs_scan->add_option("--up_to", scan_up_to, "class-count depth")->capture_default_str();
  bs_scan->add_option("--node_budget", cfg.options.node_budget, "enumeration node budget");

  // descend
  int   descend_index = 2;
  int   classify_up_to = 0;
  auto* descend = app.add_subcommand("descend", "find a subgroup with repeated torsion");
  descend->add_option("presentation", presentation_text)->required();
  descend->add_option("--index", descend_index, "index of the subgroups scanned")->capture_default_str();
  descend->add_option("--min_repeats", cfg.options.min_repeats)->capture_default_str();
  descend->add_option("--classify_up_to", classify_up_to,
                      "search the subgroup to this index with the criterion of the original group");
  descend->add_option("--node_budget", cfg.options.node_budget, "enumeration node budget");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      if (rank_given) {
        auto const d = ExperimentConfig::defaults_for_rank(cfg.rank);
        if (!raw_length_given) cfg.raw_length = d.raw_length;
        if (!max_index_given) cfg.max_index = d.max_index;
      }
      bool budget_hit = false;
      auto summary    = run_experiment(cfg, [&](TrialRecord const& r) {
        budget_hit = budget_hit || r.verdict.budget_exhausted();
        if (cfg.output.empty()) {
          std::cout << record_to_json(r) << '\n';
        } else {
          std::cerr << r.ordinal << ' ' << r.relator << ' ' << verdict_tag(r.verdict) << '\n';
        }
      });
      if (!csv.empty()) {
        if (cfg.output.empty()) {
          throw InvalidInput("--csv needs --output");
        }
        auto records = read_records(cfg.output);
        write_csv(records, csv);
      }
      std::cout << summary_to_json(summary, cfg) << '\n';
      return budget_hit || summary.budget_exhausted > 0 ? kExitBudget : kExitOk;
    }
    if (*classify) {
      if (rank == 0) {
        rank = std::max(2, parse_word(word_text).max_generator());
      }
      if (!max_index_given) {
        cfg.max_index = ExperimentConfig::defaults_for_rank(rank).max_index;
      }
      auto record = classify_one(word_text, rank, cfg);
      std::cout << record_to_json(record) << '\n';
      return record.verdict.budget_exhausted() ? kExitBudget : kExitOk;
    }
    if (*counts) {
      std::cout << join(counts_command(presentation_text, up_to, {cfg.options.node_budget})) << '\n';
      return kExitOk;
    }
    if (*tables) {
      auto const p = parse_presentation(presentation_text);
      for_each_subgroup(
          p, table_index, table_index,
          [&](CosetTable const& t) {
            std::cout << format_table(t);
            if (with_invariants) {
              auto const m = abelianized_relation_matrix(t, p);
              std::cout << " ; " << format_invariants(invariants(m, m.cols()));
            }
            std::cout << '\n';
            return true;
          },
          {cfg.options.node_budget});
      return kExitOk;
    }
    if (*bs_scan) {
      Word const w = cyclic_reduce(parse_word(word_text, 3));
      auto const p = one_relator(3, w);
      auto const g = class_counts(p, scan_up_to, {cfg.options.node_budget});
      auto const m = abelianized_relation_matrix(low_index_subgroups(p, 1).front(), p);
      auto const result =
          bs_candidate_scan(invariants(m, m.cols()), g, 3, scan_up_to, cfg.options.node_budget);
      std::cout << "counts: " << join(g) << '\n';
      if (!result.note.empty()) {
        std::cout << "note: " << result.note << '\n';
      }
      std::cout << "candidates:";
      for (auto [n, k] : result.candidates) std::cout << " (" << n << ',' << k << ')';
      std::cout << "\nsurvivors:";
      for (auto [n, k] : result.survivors) std::cout << " (" << n << ',' << k << ')';
      std::cout << '\n';
      return result.undetermined.empty() ? kExitOk : kExitBudget;
    }
    if (*descend) {
      auto const p      = parse_presentation(presentation_text);
      auto const found  = descend_on_repeated_torsion(
          p, low_index_subgroups(p, descend_index, {cfg.options.node_budget}), cfg.options.min_repeats);
      if (!found) {
        std::cout << "no subgroup of index " << descend_index << " with "
                  << cfg.options.min_repeats << " equal torsion coefficients\n";
        return kExitOk;
      }
      std::cout << "table: " << format_table(found->table) << '\n'
                << "ordinal: " << found->table_ordinal << '\n'
                << "abelianization: " << format_invariants(found->invariants) << '\n'
                << "subgroup: " << format_presentation(found->subgroup) << '\n';
      if (classify_up_to > 0) {
        for (int j = 1; j <= classify_up_to; ++j) {
          std::size_t best = 0;
          bool        hit  = false;
          for_each_subgroup(
              found->subgroup, j, j,
              [&](CosetTable const& t) {
                auto const m = abelianized_relation_matrix(t, found->subgroup);
                auto const b = betti(invariants(m, m.cols()));
                best         = std::max(best, b);
                if (surface_condition(p.rank(), descend_index * j, b)) {
                  hit = true;
                  return false;
                }
                return true;
              },
              {cfg.options.node_budget});
          std::cout << "subgroup index " << j << " (index " << descend_index * j
                    << " overall): max betti " << best << (hit ? ", surface condition holds" : "")
                    << '\n';
          if (hit) {
            break;
          }
        }
      }
      return kExitOk;
    }
  } catch (BudgetExhausted const& e) {
    std::cerr << "surfsub: " << e.what() << '\n';
    return kExitBudget;
  } catch (std::exception const& e) {
    std::cerr << "surfsub: " << e.what() << '\n';
    return kExitError;
  }
  return kExitOk;
}
