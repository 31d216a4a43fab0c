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

// mgtkit command-line front end.
//
//   mgtkit synth   --out DIR [--seed N] ...
//   mgtkit ingest  --in FILE --out DIR [--min-words N]
//   mgtkit bench   --dataset FILE --detector loglik,rank --backend SPEC --out DIR
//   mgtkit ablate  --dataset FILE --detector loglik --backend SPEC --max-words 25
//   mgtkit attack  --dataset FILE --detector loglik --backend SPEC
//   mgtkit backend-check --backend bridge:"python bridge.py"
//
// Exit status: 0 on success, 1 when any requested work failed, 2 on usage
// errors or missing inputs.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "commands.hpp"
#include "mgtkit/error.hpp"

namespace {

using mgt::cli::RunConfig;

// Flags shared by the run commands, applied over --config.
struct CommonFlags {
  std::string config;
  std::vector<std::string> datasets;
  std::vector<std::string> detectors;
  std::vector<std::string> backends;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::size_t max_words = 25;
  std::string metric;
  std::string out;
  std::size_t perturbations = 10;
  std::vector<CLI::Option*> opts;

  void attach(CLI::App* app) {
    opts.push_back(app->add_option("--config", config, "RunConfig JSON file"));
    opts.push_back(app->add_option("--dataset", datasets, "Dataset file (repeatable)")
                       ->delimiter(','));
    opts.push_back(app->add_option("--detector", detectors,
                                   "loglik, rank, logrank, entropy, gltr, detectgpt, external")
                       ->delimiter(','));
    opts.push_back(app->add_option("--backend", backends,
                                   "builtin:order=3,alpha=1[,corpus=PATH] or bridge:COMMAND"));
    opts.push_back(app->add_option("--seed", seed, "Top-level seed"));
    opts.push_back(app->add_option("--threads", threads, "Worker threads"));
    opts.push_back(app->add_option("--max-words", max_words, "Length filter for ablation"));
    opts.push_back(app->add_option("--metric", metric, "Headline metric for tables")
                       ->check(CLI::IsMember({"f1", "auc", "accuracy", "precision", "recall"})));
    opts.push_back(app->add_option("--out", out, "Output directory"));
    opts.push_back(app->add_option("--perturbations", perturbations,
                                   "DetectGPT perturbations per text"));
  }

  bool given(std::size_t i) const { return opts[i]->count() > 0; }

  RunConfig resolve(const std::string& command) const {
    RunConfig c = config.empty() ? RunConfig{} : RunConfig::load(config);
    c.command = command;
    if (given(1)) c.datasets = datasets;
    if (given(2)) c.detectors = detectors;
    if (given(3)) c.backends = backends;
    if (given(4)) c.seed = seed;
    if (given(5)) c.threads = threads;
    if (given(6)) c.max_words = max_words;
    if (given(7)) c.metric = metric;
    if (given(8)) c.out = out;
    if (given(9)) c.detectgpt.n_perturbations = static_cast<int>(perturbations);
    return c;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Machine-generated text detection benchmark toolkit"};
  app.require_subcommand(1);

  mgt::cli::SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic paired benchmark");
  synth_cmd->add_option("--out", synth.out, "Output directory")->required();
  synth_cmd->add_option("--seed", synth.cfg.seed);
  synth_cmd->add_option("--pairs", synth.cfg.pairs);
  synth_cmd->add_option("--corpus-lines", synth.cfg.corpus_lines);
  synth_cmd->add_option("--vocab", synth.cfg.vocab_size);
  synth_cmd->add_option("--successors", synth.cfg.successors);
  synth_cmd->add_option("--overlap", synth.cfg.overlap);
  synth_cmd->add_option("--noise", synth.cfg.noise);
  synth_cmd->add_option("--hwt-min", synth.cfg.hwt_min_words);
  synth_cmd->add_option("--hwt-max", synth.cfg.hwt_max_words);
  synth_cmd->add_option("--mgt-min", synth.cfg.mgt_min_words);
  synth_cmd->add_option("--mgt-max", synth.cfg.mgt_max_words);
  synth_cmd->add_option("--order", synth.cfg.order);

  mgt::cli::IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Normalize a paired dataset file");
  ingest_cmd->add_option("--in", ingest.input, "Paired JSONL file")->required();
  ingest_cmd->add_option("--out", ingest.out, "Output directory")->required();
  ingest_cmd->add_option("--min-words", ingest.min_words,
                         "Drop pairs with a side shorter than this (0 keeps all)");
  ingest_cmd->add_option("--bucket-width", ingest.bucket_width, "Histogram bucket width");

  CommonFlags bench_flags, ablate_flags, attack_flags;
  auto* bench_cmd = app.add_subcommand("bench", "Detector x backend benchmark");
  bench_flags.attach(bench_cmd);
  auto* ablate_cmd = app.add_subcommand("ablate", "Original vs length-filtered AUC");
  ablate_flags.attach(ablate_cmd);
  auto* attack_cmd = app.add_subcommand("attack", "Word-substitution attack on a fitted detector");
  attack_flags.attach(attack_cmd);
  double max_perturb = 0.2;
  std::size_t candidates = 10;
  std::size_t max_queries = 5000;
  std::string synonyms;
  std::string candidate_corpus;
  auto* o_perturb = attack_cmd->add_option("--max-perturb", max_perturb,
                                           "Largest fraction of words to replace");
  auto* o_cand = attack_cmd->add_option("--candidates", candidates,
                                        "Candidates tried per position");
  auto* o_queries = attack_cmd->add_option("--max-queries", max_queries,
                                           "Detector query cap per record");
  auto* o_syn = attack_cmd->add_option("--synonyms", synonyms,
                                       "Word-pair file used instead of LM candidates");
  auto* o_corpus = attack_cmd->add_option("--candidate-corpus", candidate_corpus,
                                          "Corpus for the candidate LM");

  mgt::cli::BackendCheckArgs check;
  auto* check_cmd = app.add_subcommand("backend-check", "Handshake and probe a backend");
  check_cmd->add_option("--backend", check.backend, "Backend spec")->required();
  check_cmd->add_option("--text", check.text, "Probe text");
  check_cmd->add_option("--timeout", check.timeout_seconds, "Seconds per request");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return mgt::cli::kExitUsage;
  }

  try {
    if (*synth_cmd) return mgt::cli::cmd_synth(synth);
    if (*ingest_cmd) return mgt::cli::cmd_ingest(ingest);
    if (*bench_cmd) return mgt::cli::cmd_bench(bench_flags.resolve("bench"));
    if (*ablate_cmd) return mgt::cli::cmd_ablate(ablate_flags.resolve("ablate"));
    if (*attack_cmd) {
      RunConfig c = attack_flags.resolve("attack");
      if (o_perturb->count()) c.attack.max_perturb_fraction = max_perturb;
      if (o_cand->count()) c.attack.candidates_per_position = candidates;
      if (o_queries->count()) c.attack.max_queries = max_queries;
      if (o_syn->count()) c.synonyms = synonyms;
      if (o_corpus->count()) c.candidate_corpus = candidate_corpus;
      return mgt::cli::cmd_attack(c);
    }
    if (*check_cmd) return mgt::cli::cmd_backend_check(check);
  } catch (const mgt::cli::UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return mgt::cli::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return mgt::cli::kExitFailure;
  }
  return mgt::cli::kExitUsage;
}
