#pragma once

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nrlb/eval/report.hpp"
#include "nrlb/eval/sampling.hpp"
#include "nrlb/pipeline/runner.hpp"

namespace nrlb::cli {

using Json = nlohmann::json;

/// Documented exit codes:
///   0 success, 2 invalid config or unreadable input,
///   3 backend unreachable (credential/cassette/endpoint failures),
///   4 partial failure (some documents failed; manifest still written).
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitBackend = 3;
inline constexpr int kExitPartial = 4;

namespace detail {

/// Flags the user may set on run-like commands. Only flags actually passed
/// override the config file, which overrides built-in defaults.
struct RunFlags {
  std::string config_file;
  std::string dataset;
  std::optional<std::size_t> sample_n;
  std::optional<std::uint64_t> seed;
  std::optional<int> rounds;
  std::optional<int> k;
  std::vector<std::string> personas;
  std::optional<std::string> backend;
  std::optional<std::string> cassette;
  std::optional<std::string> editor_mode;
  std::optional<std::string> output_dir;
  std::optional<int> workers;
  std::optional<std::string> endpoint;
  std::optional<std::string> api_key_env;
  std::optional<std::string> data_dir;
  std::optional<std::string> examples_file;
  std::optional<std::string> model_id;
  std::optional<double> temperature;
};

inline void add_run_flags(CLI::App* cmd, RunFlags& flags) {
  cmd->add_option("--config", flags.config_file, "JSON config file");
  cmd->add_option("--dataset", flags.dataset, "JSON-lines dataset {id, source, reference}");
  cmd->add_option("--sample-n", flags.sample_n, "sample size drawn from the dataset");
  cmd->add_option("--seed", flags.seed, "sampling seed");
  cmd->add_option("--rounds", flags.rounds, "refinement rounds");
  cmd->add_option("--k", flags.k, "checklist size per category");
  cmd->add_option("--personas", flags.personas,
                  "reader personas (comma separated; ele,non,att aliases work)")
      ->delimiter(',');
  cmd->add_option("--backend", flags.backend, "scripted | replay | http");
  cmd->add_option("--cassette", flags.cassette, "cassette file (replay source / record target)");
  cmd->add_option("--editor-mode", flags.editor_mode, "deterministic | llm");
  cmd->add_option("--output-dir", flags.output_dir, "artifact output directory");
  cmd->add_option("--workers", flags.workers, "parallel documents");
  cmd->add_option("--endpoint", flags.endpoint, "http backend base URL");
  cmd->add_option("--api-key-env", flags.api_key_env,
                  "environment variable holding the API credential");
  cmd->add_option("--data-dir", flags.data_dir, "word lists / prompt catalog directory");
  cmd->add_option("--examples-file", flags.examples_file, "few-shot examples for drafting");
  cmd->add_option("--model", flags.model_id, "model id");
  cmd->add_option("--temperature", flags.temperature, "decoding temperature");
}

inline pipeline::RunConfig build_config(const RunFlags& flags) {
  pipeline::RunConfig cfg;
  if (!flags.config_file.empty()) cfg = pipeline::RunConfig::from_file(flags.config_file);
  if (flags.rounds) cfg.rounds = *flags.rounds;
  if (flags.k) cfg.checklist_k = *flags.k;
  if (!flags.personas.empty()) cfg.personas = flags.personas;
  if (flags.backend) cfg.backend = *flags.backend;
  if (flags.cassette) cfg.cassette = *flags.cassette;
  if (flags.editor_mode) cfg.editor_mode = *flags.editor_mode;
  if (flags.output_dir) cfg.output_dir = *flags.output_dir;
  if (flags.workers) cfg.workers = *flags.workers;
  if (flags.endpoint) cfg.endpoint = *flags.endpoint;
  if (flags.api_key_env) cfg.api_key_env = *flags.api_key_env;
  if (flags.data_dir) cfg.data_dir = *flags.data_dir;
  if (flags.examples_file) cfg.examples_file = *flags.examples_file;
  if (flags.model_id) cfg.model.model_id = *flags.model_id;
  if (flags.temperature) cfg.model.temperature = *flags.temperature;
  if (flags.seed) cfg.run_seed = *flags.seed;
  return cfg;
}

inline std::vector<eval::DatasetRecord> load_run_corpus(const RunFlags& flags,
                                                        const pipeline::RunConfig& cfg) {
  if (flags.dataset.empty()) throw ConfigError("--dataset is required");
  auto loaded = eval::load_dataset(flags.dataset);
  for (const auto& issue : loaded.issues) {
    std::cerr << "dataset line " << issue.line_number << ": " << issue.message << "\n";
  }
  std::vector<eval::DatasetRecord> records = std::move(loaded.records);
  if (flags.sample_n) {
    records = eval::sample(records, *flags.sample_n, cfg.run_seed);
  }
  return records;
}

inline int execute_run(const RunFlags& flags, bool record_mode) {
  pipeline::RunConfig cfg;
  std::vector<eval::DatasetRecord> records;
  try {
    cfg = build_config(flags);
    if (record_mode) cfg.record = true;
    records = load_run_corpus(flags, cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    std::filesystem::create_directories(cfg.output_dir);
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: cannot create output dir: " << e.what() << "\n";
    return kExitConfig;
  }

  pipeline::RunContext ctx;
  try {
    ctx = pipeline::make_run_context(std::move(cfg));
  } catch (const CredentialMissingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBackend;
  } catch (const CassetteMissError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBackend;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  pipeline::RunManifest manifest = pipeline::run_corpus(records, ctx);
  std::filesystem::path manifest_path = std::filesystem::path(ctx.cfg.output_dir) / "run.json";
  std::cout << "manifest: " << manifest_path.string() << "\n"
            << "documents ok: " << manifest.documents_ok
            << ", failed: " << manifest.documents_failed
            << ", gateway calls: " << manifest.total_calls << "\n";
  return manifest.documents_failed == 0 ? kExitOk : kExitPartial;
}

inline int execute_eval(const std::string& artifacts, const std::string& dataset,
                        const std::string& format, const std::string& export_path,
                        const std::string& data_dir) {
  try {
    auto loaded = eval::load_dataset(dataset);
    std::filesystem::path dir =
        data_dir.empty() ? default_data_dir() : std::filesystem::path(data_dir);
    auto familiar = text::load_word_list(text::familiar_words_path(dir));
    text::TokenizerOptions tokenizer;
    tokenizer.abbreviations = text::load_abbreviations(text::abbreviations_path(dir));
    eval::EvalReport report = eval::evaluate_run(artifacts, loaded.records, familiar, tokenizer);
    for (const auto& missing : report.missing) {
      std::cerr << "missing artifact: " << missing << "\n";
    }
    std::cout << eval::emit_table(report, format == "markdown" ? eval::TableFormat::Markdown
                                                               : eval::TableFormat::Csv);
    if (!export_path.empty()) {
      eval::export_for_external_scorers(artifacts, loaded.records, export_path);
      std::cout << "external-scorer export: " << export_path << "\n";
    }
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

inline int execute_metrics(const std::string& input, const std::string& format,
                           const std::string& data_dir) {
  try {
    std::filesystem::path dir =
        data_dir.empty() ? default_data_dir() : std::filesystem::path(data_dir);
    auto familiar = text::load_word_list(text::familiar_words_path(dir));
    text::TokenizerOptions tokenizer;
    tokenizer.abbreviations = text::load_abbreviations(text::abbreviations_path(dir));

    std::vector<std::pair<std::string, std::string>> texts;  // (id, text)
    std::string extension = std::filesystem::path(input).extension().string();
    if (extension == ".jsonl" || extension == ".ndjson") {
      std::size_t line_number = 0;
      for (const auto& line : split_lines(read_file(input))) {
        ++line_number;
        if (strings::trim(line).empty()) continue;
        Json j = Json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
          std::cerr << "line " << line_number << ": not a JSON object\n";
          continue;
        }
        std::string body = j.value("text", j.value("summary", j.value("source", "")));
        texts.emplace_back(j.value("id", std::to_string(line_number)), body);
      }
    } else {
      texts.emplace_back(std::filesystem::path(input).filename().string(), read_file(input));
    }

    Json rows = Json::array();
    for (const auto& [id, body] : texts) {
      text::TokenizedText tokenized = text::tokenize(body, tokenizer);
      if (tokenized.sentence_count() == 0) {
        std::cerr << id << ": no sentences, skipped\n";
        continue;
      }
      auto report = text::readability_report(tokenized, familiar);
      rows.push_back(Json{{"id", id},
                          {"fkgl", report.fkgl},
                          {"dcrs", report.dcrs},
                          {"cli", report.cli},
                          {"ari", report.ari},
                          {"word_count", report.word_count},
                          {"sentence_count", report.sentence_count}});
    }
    if (format == "json") {
      std::cout << rows.dump(2) << "\n";
    } else if (format == "csv") {
      std::cout << "id,fkgl,dcrs,cli,ari,word_count,sentence_count\n";
      for (const auto& row : rows) {
        std::printf("%s,%.4f,%.4f,%.4f,%.4f,%zu,%zu\n",
                    row["id"].get<std::string>().c_str(), row["fkgl"].get<double>(),
                    row["dcrs"].get<double>(), row["cli"].get<double>(),
                    row["ari"].get<double>(), row["word_count"].get<std::size_t>(),
                    row["sentence_count"].get<std::size_t>());
      }
    } else {
      for (const auto& row : rows) {
        std::printf("%-24s fkgl=%7.3f dcrs=%7.3f cli=%7.3f ari=%7.3f words=%zu sentences=%zu\n",
                    row["id"].get<std::string>().c_str(), row["fkgl"].get<double>(),
                    row["dcrs"].get<double>(), row["cli"].get<double>(),
                    row["ari"].get<double>(), row["word_count"].get<std::size_t>(),
                    row["sentence_count"].get<std::size_t>());
      }
    }
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

/// The 7 reader combinations of the persona ablation grid.
inline const std::vector<std::pair<std::string, std::vector<std::string>>>&
persona_sweep_cells() {
  static const std::vector<std::pair<std::string, std::vector<std::string>>> cells = {
      {"all", {"elementary", "non_native", "attention_deficit"}},
      {"wo_ele", {"non_native", "attention_deficit"}},
      {"wo_non", {"elementary", "attention_deficit"}},
      {"wo_att", {"elementary", "non_native"}},
      {"wo_ele_non", {"attention_deficit"}},
      {"wo_ele_att", {"non_native"}},
      {"wo_non_att", {"elementary"}}};
  return cells;
}

/// Checklist sizes covered by the K sweep.
inline const std::vector<int>& k_sweep_values() {
  static const std::vector<int> values = {1, 2, 3, 6, 9};
  return values;
}

inline int execute_ablate(const RunFlags& flags, const std::string& axis, int rounds_max) {
  pipeline::RunConfig base;
  std::vector<eval::DatasetRecord> records;
  try {
    base = build_config(flags);
    records = load_run_corpus(flags, base);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  struct Cell {
    std::string name;
    pipeline::RunConfig cfg;
  };
  std::vector<Cell> cells;
  if (axis == "personas") {
    for (const auto& [name, personas] : persona_sweep_cells()) {
      pipeline::RunConfig cfg = base;
      cfg.personas = personas;
      cells.push_back({name, std::move(cfg)});
    }
  } else if (axis == "k") {
    for (int k : k_sweep_values()) {
      pipeline::RunConfig cfg = base;
      cfg.checklist_k = k;
      cells.push_back({"k_" + std::to_string(k), std::move(cfg)});
    }
  } else if (axis == "rounds") {
    for (int r = 0; r <= rounds_max; ++r) {
      pipeline::RunConfig cfg = base;
      cfg.rounds = r;
      cells.push_back({"rounds_" + std::to_string(r), std::move(cfg)});
    }
  } else {
    std::cerr << "error: --axis must be personas, k, or rounds\n";
    return kExitConfig;
  }

  std::filesystem::path root = base.output_dir;
  bool any_failed = false;
  std::string table = "cell,documents_ok,documents_failed,rouge1,fkgl,dcrs,cli,ari\n";
  for (auto& cell : cells) {
    cell.cfg.output_dir = (root / cell.name).string();
    try {
      pipeline::RunContext ctx = pipeline::make_run_context(cell.cfg);
      pipeline::RunManifest manifest = pipeline::run_corpus(records, ctx);
      if (manifest.documents_failed > 0) any_failed = true;

      eval::EvalReport report = eval::evaluate_run(cell.cfg.output_dir, records,
                                                   ctx.familiar_words, ctx.tokenizer);
      std::string row = cell.name + "," + std::to_string(manifest.documents_ok) + "," +
                        std::to_string(manifest.documents_failed);
      if (!report.rounds.empty()) {
        const eval::RoundMeans& final_round = report.rounds.rbegin()->second;
        row += "," + (final_round.rouge_docs > 0 ? eval::detail::fixed2(final_round.rouge1_f1)
                                                 : std::string("n/a"));
        row += "," + eval::detail::fixed2(final_round.fkgl) + "," + eval::detail::fixed2(final_round.dcrs) +
               "," + eval::detail::fixed2(final_round.cli) + "," + eval::detail::fixed2(final_round.ari);
      } else {
        row += ",n/a,n/a,n/a,n/a,n/a";
      }
      table += row + "\n";
      std::cout << "cell " << cell.name << ": ok=" << manifest.documents_ok
                << " failed=" << manifest.documents_failed << "\n";
    } catch (const std::exception& e) {
      any_failed = true;
      table += cell.name + ",0,0,error,error,error,error,error\n";
      std::cerr << "cell " << cell.name << " failed: " << e.what() << "\n";
    }
  }
  std::filesystem::path table_path = root / ("ablation_" + axis + ".csv");
  write_file(table_path, table);
  std::cout << table << "comparison table: " << table_path.string() << "\n";
  return any_failed ? kExitPartial : kExitOk;
}

}  // namespace detail

inline int run_app(std::vector<std::string> args) {
  CLI::App app{"Multi-agent plain language summarization engine"};
  app.require_subcommand(1);

  detail::RunFlags run_flags;
  CLI::App* run_cmd = app.add_subcommand("run", "run the refinement pipeline over a dataset");
  detail::add_run_flags(run_cmd, run_flags);

  detail::RunFlags record_flags;
  CLI::App* record_cmd =
      app.add_subcommand("record", "run while recording every call to a cassette");
  detail::add_run_flags(record_cmd, record_flags);

  std::string eval_artifacts, eval_dataset, eval_format = "csv", eval_export, eval_data_dir;
  CLI::App* eval_cmd = app.add_subcommand("eval", "score persisted round artifacts");
  eval_cmd->add_option("--artifacts", eval_artifacts, "artifact directory")->required();
  eval_cmd->add_option("--dataset", eval_dataset, "dataset the run was made from")->required();
  eval_cmd->add_option("--format", eval_format, "csv | markdown");
  eval_cmd->add_option("--export", eval_export, "write {id, round, candidate, reference, source} JSONL");
  eval_cmd->add_option("--data-dir", eval_data_dir, "word list directory");

  std::string metrics_input, metrics_format = "table", metrics_data_dir;
  CLI::App* metrics_cmd = app.add_subcommand("metrics", "readability report for texts");
  metrics_cmd->add_option("--input", metrics_input, "text file or .jsonl of texts")->required();
  metrics_cmd->add_option("--format", metrics_format, "table | json | csv");
  metrics_cmd->add_option("--data-dir", metrics_data_dir, "word list directory");

  detail::RunFlags ablate_flags;
  std::string ablate_axis;
  int ablate_rounds_max = 3;
  CLI::App* ablate_cmd = app.add_subcommand("ablate", "sweep personas, k, or rounds");
  detail::add_run_flags(ablate_cmd, ablate_flags);
  ablate_cmd->add_option("--axis", ablate_axis, "personas | k | rounds")->required();
  ablate_cmd->add_option("--rounds-max", ablate_rounds_max, "upper bound for the rounds sweep");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("nrlb");
  for (const auto& arg : args) argv.push_back(arg.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (run_cmd->parsed()) return detail::execute_run(run_flags, /*record_mode=*/false);
  if (record_cmd->parsed()) return detail::execute_run(record_flags, /*record_mode=*/true);
  if (eval_cmd->parsed()) {
    return detail::execute_eval(eval_artifacts, eval_dataset, eval_format, eval_export,
                                eval_data_dir);
  }
  if (metrics_cmd->parsed()) {
    return detail::execute_metrics(metrics_input, metrics_format, metrics_data_dir);
  }
  if (ablate_cmd->parsed()) {
    return detail::execute_ablate(ablate_flags, ablate_axis, ablate_rounds_max);
  }
  return kExitConfig;
}

}  // namespace nrlb::cli
