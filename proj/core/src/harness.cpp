#include "surfsub/harness.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace surfsub {

  using json = nlohmann::json;

  namespace {
    using Clock = std::chrono::steady_clock;

    double ms_since(Clock::time_point start) {
      return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    }

    json audit_to_json(IndexAudit const& a) {
      return {{"index", a.index},
              {"classes", a.classes},
              {"complete", a.complete},
              {"max_betti", a.max_betti},
              {"torsion_free", a.torsion_free},
              {"free_betti", a.free_betti},
              {"budget_exhausted", a.budget_exhausted}};
    }

    IndexAudit audit_from_json(json const& j) {
      IndexAudit a;
      a.index            = j.at("index").get<int>();
      a.classes          = j.at("classes").get<std::uint64_t>();
      a.complete         = j.at("complete").get<bool>();
      a.max_betti        = j.at("max_betti").get<std::size_t>();
      a.torsion_free     = j.at("torsion_free").get<bool>();
      a.free_betti       = j.at("free_betti").get<bool>();
      a.budget_exhausted = j.at("budget_exhausted").get<bool>();
      return a;
    }

    json descent_to_json(DescentStep const& d) {
      return {{"index", d.index}, {"table_ordinal", d.table_ordinal}, {"table", d.table}};
    }

    json to_json_value(Verdict const& v) {
      json j;
      j["tag"] = verdict_tag(v);
      std::visit(
          [&j](auto const& o) {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, verdict::SurfaceDetected>) {
              j["index"]         = o.index;
              j["betti"]         = o.betti;
              j["table_ordinal"] = o.table_ordinal;
              j["witness"]       = o.witness;
              j["descent"]       = o.descent ? descent_to_json(*o.descent) : json(nullptr);
            } else if constexpr (std::is_same_v<T, verdict::TriviallyFree>) {
              j["generator"] = o.generator;
            } else if constexpr (std::is_same_v<T, verdict::RankReducible>) {
              j["absent_generators"] = o.absent_generators;
              j["reduced"]           = o.reduced ? to_json_value(*o.reduced) : json(nullptr);
            } else if constexpr (std::is_same_v<T, verdict::LooksLikeFree>) {
              j["checked_up_to"] = o.checked_up_to;
            } else if constexpr (std::is_same_v<T, verdict::BaumslagCandidates>) {
              json pairs = json::array();
              for (auto [n, m] : o.pairs) {
                pairs.push_back({n, m});
              }
              j["pairs"] = pairs;
            } else if constexpr (std::is_same_v<T, verdict::Unresolved>) {
              j["max_index_reached"] = o.max_index_reached;
              j["budget_exhausted"]  = o.budget_exhausted;
            }
          },
          v.outcome);
      json audit = json::array();
      for (auto const& a : v.audit) {
        audit.push_back(audit_to_json(a));
      }
      j["audit"] = audit;
      return j;
    }

    Verdict from_json_value(json const& j) {
      Verdict           v;
      std::string const tag = j.at("tag").get<std::string>();
      if (tag == "SurfaceDetected") {
        verdict::SurfaceDetected s;
        s.index         = j.at("index").get<int>();
        s.betti         = j.at("betti").get<std::size_t>();
        s.table_ordinal = j.at("table_ordinal").get<std::uint64_t>();
        s.witness       = j.at("witness").get<std::string>();
        if (!j.at("descent").is_null()) {
          auto const& d = j.at("descent");
          s.descent     = DescentStep{d.at("index").get<int>(),
                                  d.at("table_ordinal").get<std::uint64_t>(),
                                  d.at("table").get<std::string>()};
        }
        v.outcome = s;
      } else if (tag == "TriviallyFree") {
        v.outcome = verdict::TriviallyFree{j.at("generator").get<int>()};
      } else if (tag == "RankReducible") {
        verdict::RankReducible r;
        r.absent_generators = j.at("absent_generators").get<std::vector<int>>();
        if (!j.at("reduced").is_null()) {
          r.reduced = std::make_shared<Verdict const>(from_json_value(j.at("reduced")));
        }
        v.outcome = r;
      } else if (tag == "PrimitiveRelator") {
        v.outcome = verdict::PrimitiveRelator{};
      } else if (tag == "LooksLikeFree") {
        v.outcome = verdict::LooksLikeFree{j.at("checked_up_to").get<int>()};
      } else if (tag == "BaumslagCandidates") {
        verdict::BaumslagCandidates b;
        for (auto const& p : j.at("pairs")) {
          b.pairs.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
        }
        v.outcome = b;
      } else if (tag == "Unresolved") {
        v.outcome = verdict::Unresolved{j.at("max_index_reached").get<int>(),
                                        j.at("budget_exhausted").get<bool>()};
      } else {
        throw InvalidInput("unknown verdict tag '" + tag + "'");
      }
      for (auto const& a : j.at("audit")) {
        v.audit.push_back(audit_from_json(a));
      }
      return v;
    }

    json options_to_json(ClassifyOptions const& o) {
      return {{"occurrence_filter", o.occurrence_filter},
              {"rank_reduction", o.rank_reduction},
              {"primitivity_filter", o.primitivity_filter},
              {"free_fingerprint", o.free_fingerprint},
              {"bs_scan", o.bs_scan},
              {"descent", o.descent},
              {"min_repeats", o.min_repeats},
              {"descent_max_index", o.descent_max_index},
              {"bs_scan_depth", o.bs_scan_depth},
              {"node_budget", o.node_budget}};
    }

    // The parts of a configuration that determine each record.
    json result_config(ExperimentConfig const& cfg) {
      return {{"rank", cfg.rank},
              {"raw_length", cfg.raw_length},
              {"max_index", cfg.max_index},
              {"seed", cfg.seed},
              {"options", options_to_json(cfg.options)}};
    }
  }  // namespace

  ////////////////////////////////////////////////////////////////////////
  // Configuration
  ////////////////////////////////////////////////////////////////////////

  ExperimentConfig ExperimentConfig::defaults_for_rank(int rank) {
    ExperimentConfig cfg;
    cfg.rank = rank;
    if (rank >= 4) {
      cfg.raw_length = 14;
      cfg.max_index  = 6;
    }
    return cfg;
  }

  void ExperimentConfig::validate() const {
    if (rank < 2) {
      throw InvalidInput("rank must be at least 2");
    }
    if (raw_length < 1) {
      throw InvalidInput("raw_length must be positive");
    }
    if (max_index < 1) {
      throw InvalidInput("max_index must be positive");
    }
    if (threads < 1) {
      throw InvalidInput("threads must be positive");
    }
    if (options.node_budget < 1) {
      throw InvalidInput("node_budget must be positive");
    }
    if (options.min_repeats < 2) {
      throw InvalidInput("min_repeats must be at least 2");
    }
  }

  void apply_environment(ExperimentConfig& cfg) {
    if (char const* b = std::getenv("SURFSUB_NODE_BUDGET")) {
      cfg.options.node_budget = std::stoull(b);
    }
    if (char const* t = std::getenv("SURFSUB_THREADS")) {
      cfg.threads = static_cast<unsigned>(std::stoul(t));
    }
  }

  std::uint64_t trial_seed(std::uint64_t master, std::uint64_t ordinal) {
    return Rng(master).split(ordinal).seed();
  }

  ////////////////////////////////////////////////////////////////////////
  // Records
  ////////////////////////////////////////////////////////////////////////

  bool TrialRecord::same_result(TrialRecord const& other) const {
    return ordinal == other.ordinal && seed == other.seed && rank == other.rank
           && relator == other.relator && redraws == other.redraws
           && verdict == other.verdict;
  }

  std::string verdict_to_json(Verdict const& v) {
    return to_json_value(v).dump();
  }

  Verdict verdict_from_json(std::string_view text) {
    return from_json_value(json::parse(text));
  }

  std::string record_to_json(TrialRecord const& r) {
    json j = {{"ordinal", r.ordinal},
              {"seed", r.seed},
              {"rank", r.rank},
              {"relator", r.relator},
              {"redraws", r.redraws},
              {"verdict", to_json_value(r.verdict)},
              {"index_ms", r.index_ms},
              {"elapsed_ms", r.elapsed_ms}};
    return j.dump();
  }

  TrialRecord record_from_json(std::string_view line) {
    json const  j = json::parse(line);
    TrialRecord r;
    r.ordinal    = j.at("ordinal").get<std::uint64_t>();
    r.seed       = j.at("seed").get<std::uint64_t>();
    r.rank       = j.at("rank").get<int>();
    r.relator    = j.at("relator").get<std::string>();
    r.redraws    = j.at("redraws").get<int>();
    r.verdict    = from_json_value(j.at("verdict"));
    r.index_ms   = j.at("index_ms").get<std::vector<double>>();
    r.elapsed_ms = j.at("elapsed_ms").get<double>();
    // the relator must survive the word grammar
    if (format_word(parse_word(r.relator, r.rank)) != r.relator) {
      throw InvalidInput("record relator does not round-trip: " + r.relator);
    }
    return r;
  }

  std::string config_to_json(ExperimentConfig const& cfg) {
    json j       = result_config(cfg);
    j["trials"]  = cfg.trials;
    j["threads"] = cfg.threads;
    j["output"]  = cfg.output;
    return j.dump();
  }

  std::string summary_to_json(RunSummary const& s, ExperimentConfig const& cfg) {
    json j = {{"trials", s.trials},
              {"resolved", s.resolved},
              {"unresolved", s.unresolved},
              {"budget_exhausted", s.budget_exhausted},
              {"resolved_fraction", s.resolved_fraction()},
              {"by_verdict", s.by_verdict},
              {"config", json::parse(config_to_json(cfg))}};
    return j.dump(2);
  }

  RunSummary summarize(std::span<TrialRecord const> records) {
    RunSummary s;
    for (auto const& r : records) {
      ++s.trials;
      if (r.verdict.resolved()) {
        ++s.resolved;
      } else {
        ++s.unresolved;
      }
      if (r.verdict.budget_exhausted()) {
        ++s.budget_exhausted;
      }
      ++s.by_verdict[verdict_tag(r.verdict)];
    }
    return s;
  }

  std::vector<TrialRecord> read_records(std::string const& path) {
    std::vector<TrialRecord> out;
    std::ifstream            in(path);
    if (!in) {
      return out;
    }
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) {
        continue;
      }
      try {
        out.push_back(record_from_json(line));
      } catch (json::exception const&) {
        if (in.peek() == std::char_traits<char>::eof()) {
          break;  // truncated final line from an interrupted writer
        }
        throw InvalidInput(path + ":" + std::to_string(lineno) + ": malformed record");
      }
    }
    return out;
  }

  void write_csv(std::span<TrialRecord const> records, std::string const& path) {
    std::ofstream out(path);
    if (!out) {
      throw std::runtime_error("cannot open " + path);
    }
    out << "ordinal,seed,rank,relator,verdict,index,betti,max_index_reached,elapsed_ms\n";
    for (auto const& r : records) {
      std::string index, betti, reached;
      if (r.verdict.is<verdict::SurfaceDetected>()) {
        auto const& s = r.verdict.as<verdict::SurfaceDetected>();
        index         = std::to_string(s.index);
        betti         = std::to_string(s.betti);
      }
      if (r.verdict.is<verdict::Unresolved>()) {
        reached = std::to_string(r.verdict.as<verdict::Unresolved>().max_index_reached);
      }
      out << r.ordinal << ',' << r.seed << ',' << r.rank << ',' << r.relator << ','
          << verdict_tag(r.verdict) << ',' << index << ',' << betti << ',' << reached << ','
          << r.elapsed_ms << '\n';
    }
  }

  ////////////////////////////////////////////////////////////////////////
  // Running
  ////////////////////////////////////////////////////////////////////////

  namespace {
    TrialRecord classify_word(Word const& w, int rank, ExperimentConfig const& cfg) {
      TrialRecord     r;
      r.rank      = rank;
      r.relator   = format_word(w);
      auto const      start = Clock::now();
      ClassifyTimings timings;
      r.verdict    = classify_relator(w, rank, cfg.max_index, cfg.options, &timings);
      r.index_ms   = std::move(timings.index_ms);
      r.elapsed_ms = ms_since(start);
      return r;
    }

    void check_config_sidecar(ExperimentConfig const& cfg) {
      std::string const path   = cfg.output + ".config.json";
      json const        wanted = result_config(cfg);
      std::ifstream     in(path);
      if (in) {
        json const have = json::parse(in);
        if (have != wanted) {
          throw InvalidInput(cfg.output + " was produced with a different configuration: "
                             + have.dump());
        }
        return;
      }
      std::ofstream out(path);
      if (!out) {
        throw std::runtime_error("cannot write " + path);
      }
      out << wanted.dump(2) << '\n';
    }

    // Drops a partial trailing line so appends start on a fresh line.
    void repair_tail(std::string const& path) {
      namespace fs = std::filesystem;
      if (!fs::exists(path)) {
        return;
      }
      std::ifstream in(path, std::ios::binary);
      std::string   content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      in.close();
      if (content.empty() || content.back() == '\n') {
        return;
      }
      auto const last = content.find_last_of('\n');
      fs::resize_file(path, last == std::string::npos ? 0 : last + 1);
    }
  }  // namespace

  TrialRecord run_trial(ExperimentConfig const& cfg, std::uint64_t ordinal) {
    std::uint64_t const seed = trial_seed(cfg.seed, ordinal);
    Rng                 rng(seed);
    Word                w;
    int                 redraws = 0;
    // A draw that cancels completely is replaced by the next draw from the
    // same stream.
    while ((w = random_relator(cfg.rank, cfg.raw_length, rng)).empty()) {
      ++redraws;
    }
    TrialRecord r = classify_word(w, cfg.rank, cfg);
    r.ordinal     = ordinal;
    r.seed        = seed;
    r.redraws     = redraws;
    return r;
  }

  RunSummary run_experiment(ExperimentConfig const& cfg, RecordSink const& sink) {
    cfg.validate();
    std::vector<TrialRecord> records;
    std::set<std::uint64_t>  done;
    std::ofstream            out;
    if (!cfg.output.empty()) {
      check_config_sidecar(cfg);
      repair_tail(cfg.output);
      for (auto& r : read_records(cfg.output)) {
        done.insert(r.ordinal);
        records.push_back(std::move(r));
      }
      out.open(cfg.output, std::ios::app);
      if (!out) {
        throw std::runtime_error("cannot open " + cfg.output + " for appending");
      }
    }

    std::vector<std::uint64_t> pending;
    for (std::uint64_t i = 0; i < cfg.trials; ++i) {
      if (!done.contains(i)) {
        pending.push_back(i);
      }
    }

    std::mutex                 writer;
    std::atomic<std::size_t>   next{0};
    std::exception_ptr         failure;
    auto                       worker = [&] {
      while (true) {
        std::size_t const k = next.fetch_add(1);
        if (k >= pending.size()) {
          return;
        }
        try {
          TrialRecord r = run_trial(cfg, pending[k]);
          std::lock_guard lock(writer);
          if (failure) {
            return;
          }
          if (out.is_open()) {
            out << record_to_json(r) << '\n';
            out.flush();
            if (!out) {
              throw std::runtime_error("write to " + cfg.output + " failed");
            }
          }
          if (sink) {
            sink(r);
          }
          records.push_back(std::move(r));
        } catch (...) {
          std::lock_guard lock(writer);
          if (!failure) {
            failure = std::current_exception();
          }
          next = pending.size();
          return;
        }
      }
    };

    unsigned const width = std::min<std::size_t>(cfg.threads, std::max<std::size_t>(pending.size(), 1));
    if (width <= 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < width; ++t) {
        pool.emplace_back(worker);
      }
    }
    if (failure) {
      std::rethrow_exception(failure);
    }

    std::vector<TrialRecord> in_range;
    for (auto& r : records) {
      if (r.ordinal < cfg.trials) {
        in_range.push_back(r);
      }
    }
    RunSummary const summary = summarize(in_range);
    if (!cfg.output.empty()) {
      std::ofstream s(cfg.output + ".summary.json");
      s << summary_to_json(summary, cfg) << '\n';
    }
    return summary;
  }

  TrialRecord classify_one(std::string_view word_text, int rank, ExperimentConfig const& cfg) {
    Word const w = parse_word(word_text, rank);
    if (w.empty()) {
      throw InvalidInput("relator is trivial");
    }
    return classify_word(cyclic_reduce(w), rank, cfg);
  }

  std::vector<std::uint64_t> counts_command(std::string_view          presentation_text,
                                            int                       up_to,
                                            EnumerationOptions const& options) {
    return class_counts(parse_presentation(presentation_text), up_to, options);
  }

}  // namespace surfsub
