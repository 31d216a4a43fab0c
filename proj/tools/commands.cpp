// Copyright 2026 The mgtkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commands.hpp"

#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <fmt/format.h>

#include "mgtkit/attack.hpp"
#include "mgtkit/benchmark.hpp"
#include "mgtkit/bridge.hpp"
#include "mgtkit/report.hpp"
#include "mgtkit/rng.hpp"
#include "mgtkit/text.hpp"

namespace mgt::cli {
namespace fs = std::filesystem;

namespace {

void require_file(const std::string& path, std::string_view what) {
  if (path.empty()) throw UsageError(fmt::format("missing {}", what));
  if (!fs::is_regular_file(path)) {
    throw UsageError(fmt::format("{} '{}' does not exist", what, path));
  }
}

std::vector<DetectorKind> parse_detectors(const RunConfig& cfg) {
  if (cfg.detectors.empty()) throw UsageError("no detector given");
  std::vector<DetectorKind> out;
  try {
    for (const auto& d : cfg.detectors) out.push_back(parse_detector(d));
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return out;
}

std::vector<BackendSpec> parse_backends(const RunConfig& cfg) {
  if (cfg.backends.empty()) throw UsageError("no backend given");
  std::vector<BackendSpec> out;
  try {
    for (const auto& b : cfg.backends) out.push_back(parse_backend_spec(b));
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  for (const auto& b : out) {
    if (!b.corpus.empty()) require_file(b.corpus, "backend corpus");
  }
  return out;
}

void check_run_inputs(const RunConfig& cfg) {
  if (cfg.datasets.empty()) throw UsageError("no dataset given");
  for (const auto& d : cfg.datasets) require_file(d, "dataset");
  if (cfg.out.empty()) throw UsageError("no output directory given");
}

void write_run_config(const RunConfig& cfg) {
  write_file_atomic(fs::path(cfg.out) / "run_config.json", cfg.to_json().dump(2) + "\n");
}

double headline(const EvalReport& r, const std::string& metric) {
  if (metric == "auc") return r.auc;
  if (metric == "accuracy") return r.accuracy;
  if (metric == "precision") return r.precision;
  if (metric == "recall") return r.recall;
  return r.f1;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string file_safe(std::string s) {
  for (char& c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_' && c != '.') c = '_';
  }
  return s;
}

struct Cell {
  std::string dataset;
  DetectorKind detector;
  std::string backend;
  std::optional<EvalReport> report;
  std::optional<EvalReport> filtered;
  std::string error;
};

// Runs `body` for every (dataset, backend, detector) cell. Backends are built
// per dataset because a built-in model without a corpus trains on that
// dataset's training split.
template <typename Body>
std::vector<Cell> run_cells(const RunConfig& cfg, Body body) {
  const auto detectors = parse_detectors(cfg);
  const auto backends = parse_backends(cfg);
  const BenchmarkOptions opts = cfg.benchmark_options();
  std::vector<Cell> cells;
  for (const auto& path : cfg.datasets) {
    const Dataset ds = load_any_dataset(path);
    const auto [train, test] = split(ds, cfg.split_spec());
    const std::size_t first = cells.size();
    for (auto kind : detectors) {
      for (const auto& b : backends) cells.push_back({ds.name, kind, b.label, {}, {}, {}});
    }
    for (std::size_t bi = 0; bi < backends.size(); ++bi) {
      PreparedBackend prepared;
      std::string backend_error;
      try {
        prepared = prepare_backend(backends[bi], train, cfg);
      } catch (const std::exception& e) {
        backend_error = e.what();
      }
      for (std::size_t di = 0; di < detectors.size(); ++di) {
        Cell& cell = cells[first + di * backends.size() + bi];
        if (!prepared.backend) {
          cell.error = backend_error;
          continue;
        }
        try {
          body(cell, prepared.fit_train, test, *prepared.backend, opts);
        } catch (const std::exception& e) {
          cell.error = e.what();
        }
      }
    }
  }
  for (const auto& c : cells) {
    if (!c.error.empty()) {
      std::cerr << fmt::format("error: {} / {} / {}: {}\n", c.dataset,
                               to_string(c.detector), c.backend, c.error);
    }
  }
  return cells;
}

// Rows are (dataset, detector); columns are backends.
std::string render_grid(const RunConfig& cfg, const std::vector<Cell>& cells,
                        const std::function<std::string(const Cell&)>& value) {
  std::vector<std::string> header{"Dataset", "Method"};
  header.insert(header.end(), cfg.backends.begin(), cfg.backends.end());
  TextTable table(header);
  const std::size_t nb = cfg.backends.size();
  for (std::size_t i = 0; i < cells.size(); i += nb) {
    std::vector<std::string> row{cells[i].dataset, std::string(to_string(cells[i].detector))};
    for (std::size_t b = 0; b < nb; ++b) {
      const Cell& c = cells[i + b];
      row.push_back(c.error.empty() ? value(c) : "ERROR");
    }
    table.add_row(std::move(row));
  }
  return table.render();
}

bool any_error(const std::vector<Cell>& cells) {
  for (const auto& c : cells) {
    if (!c.error.empty()) return true;
  }
  return false;
}

}  // namespace

int cmd_synth(const SynthArgs& args) {
  const SyntheticBenchmark b = make_synthetic_benchmark(args.cfg);
  const fs::path out(args.out);
  write_file_atomic(out / "paired.jsonl", to_paired_jsonl(b.dataset));
  auto lines = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& l : v) s += l + '\n';
    return s;
  };
  write_file_atomic(out / "corpus_a.txt", lines(b.corpus_a));
  write_file_atomic(out / "corpus_b.txt", lines(b.corpus_b));
  std::cout << fmt::format("wrote {} pairs to {}\n", args.cfg.pairs, out.string());
  return kExitOk;
}

int cmd_ingest(const IngestArgs& args) {
  require_file(args.input, "input file");
  if (args.bucket_width < 1) throw UsageError("--bucket-width must be >= 1");
  const Dataset raw = load_paired(args.input);
  const Dataset kept = args.min_words > 0 ? filter_min_words(raw, args.min_words) : raw;
  const fs::path out(args.out);
  write_normalized(out / "records.jsonl", kept);

  auto render_hist = [](const Histogram& h) {
    std::string s;
    for (const auto& [bucket, n] : h) s += fmt::format("{}{}:{}", s.empty() ? "" : ",", bucket, n);
    return s;
  };
  const auto hist = word_count_histogram(kept, args.bucket_width);
  std::string stats;
  stats += fmt::format("source={}\n", raw.name);
  stats += fmt::format("records_total={}\n", raw.size());
  stats += fmt::format("records_hwt={}\n", raw.count(Label::HWT));
  stats += fmt::format("records_mgt={}\n", raw.count(Label::MGT));
  stats += fmt::format("min_words={}\n", args.min_words);
  stats += fmt::format("records_after_filter={}\n", kept.size());
  stats += fmt::format("histogram_bucket_width={}\n", args.bucket_width);
  stats += fmt::format("histogram_hwt={}\n", render_hist(hist.at(Label::HWT)));
  stats += fmt::format("histogram_mgt={}\n", render_hist(hist.at(Label::MGT)));
  write_file_atomic(out / "stats.txt", stats);

  RunConfig cfg;
  cfg.command = "ingest";
  cfg.datasets = {args.input};
  cfg.min_words = args.min_words;
  cfg.out = args.out;
  write_run_config(cfg);
  std::cout << stats;
  return kExitOk;
}

int cmd_bench(const RunConfig& cfg) {
  check_run_inputs(cfg);
  write_run_config(cfg);
  const auto cells = run_cells(cfg, [](Cell& cell, const Dataset& train, const Dataset& test,
                                       const Backend& backend, const BenchmarkOptions& opts) {
    cell.report = run_benchmark(train, test, cell.detector, backend, opts);
  });

  const fs::path out(cfg.out);
  std::string csv = "dataset,detector,backend,status," + csv_header() + "\n";
  for (const auto& c : cells) {
    csv += fmt::format("{},{},{},", csv_field(c.dataset), to_string(c.detector),
                       csv_field(c.backend));
    if (c.error.empty()) {
      csv += "OK," + to_csv_row(*c.report) + "\n";
      write_file_atomic(out / "reports" /
                            file_safe(fmt::format("{}__{}__{}.txt", c.dataset,
                                                  to_string(c.detector), c.backend)),
                        to_key_value(*c.report));
    } else {
      csv += "ERROR,,,,,,,,\n";
    }
  }
  write_file_atomic(out / "bench.csv", csv);

  const std::string table = render_grid(
      cfg, cells, [&](const Cell& c) { return format_metric(headline(*c.report, cfg.metric)); });
  const std::string timing = render_grid(cfg, cells, [](const Cell& c) {
    return fmt::format("{:.3f}", c.report->wall_time_seconds);
  });
  write_file_atomic(out / "bench_table.txt",
                    fmt::format("metric: {}\n{}", cfg.metric, table));
  write_file_atomic(out / "timing_table.txt",
                    fmt::format("scoring wall time (seconds)\n{}", timing));
  std::cout << fmt::format("metric: {}\n{}\nscoring wall time (seconds)\n{}", cfg.metric,
                           table, timing);
  return any_error(cells) ? kExitFailure : kExitOk;
}

int cmd_ablate(const RunConfig& cfg) {
  check_run_inputs(cfg);
  if (cfg.max_words < 1) throw UsageError("--max-words must be >= 1");
  write_run_config(cfg);
  const auto cells = run_cells(cfg, [&](Cell& cell, const Dataset& train, const Dataset& test,
                                        const Backend& backend, const BenchmarkOptions& opts) {
    auto [original, filtered] =
        ablate_length(train, test, cell.detector, backend, opts, cfg.max_words);
    cell.report = original;
    cell.filtered = filtered;
  });

  std::string csv =
      "dataset,detector,backend,status,auc_original,auc_filtered,n_original,n_filtered\n";
  TextTable table({"Dataset", "Method", "Backend", "AUC (Original)", "AUC (Filtered)"});
  for (const auto& c : cells) {
    csv += fmt::format("{},{},{},", csv_field(c.dataset), to_string(c.detector),
                       csv_field(c.backend));
    if (c.error.empty()) {
      csv += fmt::format("OK,{},{},{},{}\n", format_metric(c.report->auc),
                         format_metric(c.filtered->auc), c.report->n_pos + c.report->n_neg,
                         c.filtered->n_pos + c.filtered->n_neg);
      table.add_row({c.dataset, std::string(to_string(c.detector)), c.backend,
                     format_metric(c.report->auc), format_metric(c.filtered->auc)});
    } else {
      csv += "ERROR,,,,\n";
      table.add_row({c.dataset, std::string(to_string(c.detector)), c.backend, "ERROR",
                     "ERROR"});
    }
  }
  const fs::path out(cfg.out);
  write_file_atomic(out / "ablate.csv", csv);
  const std::string text =
      fmt::format("test texts filtered to <= {} words\n{}", cfg.max_words, table.render());
  write_file_atomic(out / "ablate_table.txt", text);
  std::cout << text;
  return any_error(cells) ? kExitFailure : kExitOk;
}

int cmd_attack(const RunConfig& cfg) {
  check_run_inputs(cfg);
  if (cfg.datasets.size() != 1 || cfg.detectors.size() != 1 || cfg.backends.size() != 1) {
    throw UsageError("attack takes exactly one dataset, detector and backend");
  }
  if (!cfg.synonyms.empty()) require_file(cfg.synonyms, "synonym file");
  if (!cfg.candidate_corpus.empty()) require_file(cfg.candidate_corpus, "candidate corpus");
  const auto kind = parse_detectors(cfg).front();
  const auto spec = parse_backends(cfg).front();
  AttackConfig attack_cfg = cfg.attack;
  attack_cfg.seed = derive_seed(cfg.seed, "attack");
  try {
    attack_cfg.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  write_run_config(cfg);

  const Dataset ds = load_any_dataset(cfg.datasets.front());
  const auto [train, test] = split(ds, cfg.split_spec());
  const BenchmarkOptions opts = cfg.benchmark_options();
  const auto [backend, fit_train] = prepare_backend(spec, train, cfg);
  const FittedDetector fitted = fit_detector(fit_train, kind, *backend, opts);

  std::optional<NgramModel> own_model;
  const NgramModel* candidate_model = backend->ngram_model();
  if (!candidate_model) {
    std::vector<std::string> texts;
    if (!cfg.candidate_corpus.empty()) {
      texts = read_lines(cfg.candidate_corpus);
    } else {
      for (const auto& r : train.records) texts.push_back(r.text);
    }
    own_model = train_ngram(texts, 3, 1.0);
    candidate_model = &*own_model;
  }
  std::optional<SynonymTable> synonyms;
  if (!cfg.synonyms.empty()) synonyms = SynonymTable::load(cfg.synonyms);
  const CandidateSource source{candidate_model, synonyms ? &*synonyms : nullptr};

  const DetectorFn detector = [&](std::string_view text) {
    return fitted.p_mgt(*backend, text);
  };
  auto [results, stats] = attack_dataset(detector, source, test, attack_cfg, cfg.threads);

  const fs::path out(cfg.out);
  write_file_atomic(out / "attack_results.jsonl", to_jsonl(results));
  write_file_atomic(out / "attack_stats.txt", to_key_value(stats));
  write_file_atomic(out / "attack_stats.csv",
                    fmt::format("dataset,detector,backend,{}\n{},{},{},{}\n",
                                attack_csv_header(), csv_field(ds.name), to_string(kind),
                                csv_field(spec.label), to_csv_row(stats)));
  std::string examples;
  std::size_t shown = 0;
  for (bool want_success : {true, false}) {
    for (const auto& r : results) {
      if (shown >= cfg.examples) break;
      if (r.success == want_success) {
        examples += render_diff(r) + "\n";
        ++shown;
      }
    }
  }
  write_file_atomic(out / "attack_examples.txt", examples);

  TextTable table({"Dataset", "Avg #. Words per Input", "Avg Perturbed Word (%)",
                   "Avg #. Queries", "Attack Success Rate"});
  table.add_row({ds.name, fmt::format("{:.2f}", stats.avg_words_per_input),
                 fmt::format("{:.2f}", stats.avg_perturbed_pct),
                 fmt::format("{:.2f}", stats.avg_queries),
                 fmt::format("{:.3f}", stats.success_rate)});
  std::cout << table.render() << '\n' << examples;
  return kExitOk;
}

int cmd_backend_check(const BackendCheckArgs& args) {
  BackendSpec spec;
  try {
    spec = parse_backend_spec(args.backend);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (spec.kind == BackendSpec::Kind::Builtin) {
    if (spec.corpus.empty()) throw UsageError("built-in backend check needs corpus=PATH");
    require_file(spec.corpus, "backend corpus");
  }
  try {
    const auto backend = make_backend(spec, Dataset{}, args.timeout_seconds);
    const auto& h = backend->handle();
    std::string caps;
    for (const auto& c : h.capability_names()) caps += (caps.empty() ? "" : ",") + c;
    if (h.has(Capability::Score)) {
      const TokenScoring s = score_text(*backend, args.text);
      std::cout << fmt::format("score: {} positions\n", s.size());
    }
    if (h.has(Capability::Classify)) {
      std::cout << fmt::format("classify: p_mgt={}\n",
                               format_metric(external_classifier_score(*backend, args.text)));
    }
    if (!h.has(Capability::Score) && !h.has(Capability::Classify)) {
      throw Error("backend advertises neither score nor classify");
    }
    std::cout << fmt::format("OK {} capabilities: {}\n", h.descriptor, caps);
    return kExitOk;
  } catch (const Error& e) {
    std::cout << "FAIL: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace mgt::cli
