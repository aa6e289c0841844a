// Command-line driver: process (alignment pipeline), evaluate (GriTS/DAR
// metrics), stats (diversity summary), render (SVG overlays).
//
// Exit codes: 0 success, 1 usage/config/data error, 2 parse-failure count
// above the configured threshold.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tabalign/canonical_json.hpp"
#include "tabalign/errors.hpp"
#include "tabalign/manifest.hpp"
#include "tabalign/metrics.hpp"
#include "tabalign/options.hpp"
#include "tabalign/pipeline.hpp"
#include "tabalign/stats.hpp"
#include "tabalign/svg.hpp"

namespace fs = std::filesystem;
using namespace tabalign;

namespace {

int default_threads() {
  if (const char* env = std::getenv("TABALIGN_THREADS")) {
    try {
      return std::max(1, std::stoi(env));
    } catch (...) {
      return 1;
    }
  }
  return 1;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  out << content;
  if (!out) throw Error(ErrorCode::IoError, "failed while writing '" + path.string() + "'");
}

struct OptionFlags {
  std::string options_file;
  int dot_leader_min_dots = -1;
  double word_overlap_threshold = -1.0;
  int refine_iteration_cap = -1;
  double qc_coverage_threshold = -1.0;
  double numeric_majority_threshold = -1.0;
  std::string currency_glyphs;

  PipelineOptions resolve() const {
    PipelineOptions options;
    if (!options_file.empty()) options = load_options_file(options_file);
    if (dot_leader_min_dots >= 0) options.dot_leader_min_dots = dot_leader_min_dots;
    if (word_overlap_threshold >= 0) options.word_overlap_threshold = word_overlap_threshold;
    if (refine_iteration_cap >= 0) options.refine_iteration_cap = refine_iteration_cap;
    if (qc_coverage_threshold >= 0) options.qc_coverage_threshold = qc_coverage_threshold;
    if (numeric_majority_threshold >= 0)
      options.numeric_majority_threshold = numeric_majority_threshold;
    if (!currency_glyphs.empty()) apply_option(options, "currency_glyphs", currency_glyphs);
    return options;
  }
};

void add_option_flags(CLI::App* cmd, OptionFlags& flags) {
  cmd->add_option("--options", flags.options_file, "key=value options file");
  cmd->add_option("--dot-leader-min-dots", flags.dot_leader_min_dots,
                  "minimum dots in a strippable edge run");
  cmd->add_option("--word-overlap-threshold", flags.word_overlap_threshold,
                  "ambiguous-word area fraction (inclusive)");
  cmd->add_option("--refine-iteration-cap", flags.refine_iteration_cap,
                  "box refinement iteration cap");
  cmd->add_option("--qc-coverage-threshold", flags.qc_coverage_threshold,
                  "required word coverage at quality control (exclusive)");
  cmd->add_option("--numeric-majority-threshold", flags.numeric_majority_threshold,
                  "numeric body majority for two-column headers");
  cmd->add_option("--currency-glyphs", flags.currency_glyphs,
                  "comma-separated currency glyph set");
}

int cmd_process(const std::string& manifest_path, const std::string& stage,
                const std::string& out_dir, const OptionFlags& flags, int threads,
                int max_parse_failures) {
  const PipelineOptions options = flags.resolve();
  const DatasetManifest manifest = load_manifest(manifest_path);
  LoadedDataset dataset = load_dataset(manifest, threads);

  PipelineResult result =
      run_pipeline(std::move(dataset.tables), dataset.mode, stage, options, threads,
                   &dataset.corrections, dataset.name);

  fs::create_directories(out_dir);
  const fs::path snapshot = fs::path(out_dir) / (dataset.name + "." + stage + ".jsonl");
  write_canonical_file(snapshot.string(), result.tables);

  std::string report_json = pipeline_report_json(result.report);
  // Parse failures ride along in the JSON report.
  if (!dataset.failures.empty()) {
    nlohmann::ordered_json j = nlohmann::ordered_json::parse(report_json);
    nlohmann::ordered_json failures = nlohmann::ordered_json::array();
    for (const ParseFailure& f : dataset.failures)
      failures.push_back(nlohmann::ordered_json{
          {"file", f.file}, {"record", f.record}, {"reason", f.reason}});
    j["parse_failures"] = std::move(failures);
    report_json = j.dump(2) + "\n";
  }
  write_file(fs::path(out_dir) / "report.json", report_json);

  std::string text = pipeline_report_text(result.report);
  text += "parse failures: " + std::to_string(dataset.failures.size()) + "\n";
  write_file(fs::path(out_dir) / "report.txt", text);
  std::cout << text;

  if (static_cast<int>(dataset.failures.size()) > max_parse_failures) return 2;
  return 0;
}

int cmd_evaluate(const std::string& gt_path, const std::string& pred_path,
                 const std::string& out_dir, int threads) {
  const std::vector<TableAnnotation> gt = read_canonical_file(gt_path);
  const std::vector<TableAnnotation> pred = read_canonical_file(pred_path);
  const MetricReport report = evaluate_corpus(gt, pred, threads);

  const std::string name = fs::path(gt_path).stem().string();
  fs::create_directories(out_dir);
  write_file(fs::path(out_dir) / "metrics.json", metric_report_json(report, name));
  write_file(fs::path(out_dir) / "metrics.csv", metric_report_csv(report));
  const std::string text = metric_report_text(report, name);
  write_file(fs::path(out_dir) / "summary.txt", text);
  std::cout << text;
  return 0;
}

int cmd_stats(const std::string& in_path, const std::string& out_dir) {
  const std::vector<TableAnnotation> tables = read_canonical_file(in_path);
  const DatasetStats stats = dataset_stats(tables);
  const std::string name = fs::path(in_path).stem().string();
  const std::string text = stats_text(stats, name);
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "stats.json", stats_json(stats, name));
    write_file(fs::path(out_dir) / "stats.txt", text);
  }
  std::cout << text;
  return 0;
}

int cmd_render(const std::string& in_path, const std::string& table_id,
               const std::string& layers_csv, const std::string& out_path) {
  const std::vector<TableAnnotation> tables = read_canonical_file(in_path);
  const TableAnnotation* table = nullptr;
  for (const TableAnnotation& t : tables)
    if (t.table_id == table_id) table = &t;
  if (!table) throw Error(ErrorCode::UnknownTable, "no table '" + table_id + "' in " + in_path);

  std::set<std::string> layers;
  std::string layer;
  for (char c : layers_csv + ",") {
    if (c == ',') {
      if (!layer.empty()) layers.insert(layer);
      layer.clear();
    } else {
      layer.push_back(c);
    }
  }
  const std::string svg = render_table_svg(*table, layers);
  write_file(out_path, svg);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"table annotation alignment and evaluation toolkit"};
  app.require_subcommand(1);
  int threads = default_threads();

  auto* process = app.add_subcommand("process", "run the alignment pipeline over a dataset");
  std::string manifest_path, stage = "a6", out_dir = ".";
  int max_parse_failures = 0;
  OptionFlags flags;
  process->add_option("--manifest", manifest_path, "dataset manifest JSON")->required();
  process->add_option("--stage", stage, "target stage (a1..a6; icdar: a1..a3)");
  process->add_option("--out", out_dir, "output directory")->required();
  process->add_option("--max-parse-failures", max_parse_failures,
                      "parse failures tolerated before exit code 2");
  process->add_option("--threads", threads, "worker threads (default $TABALIGN_THREADS or 1)");
  add_option_flags(process, flags);

  auto* evaluate = app.add_subcommand("evaluate", "score predictions against ground truth");
  std::string gt_path, pred_path, eval_out = ".";
  evaluate->add_option("--gt", gt_path, "ground-truth canonical JSONL")->required();
  evaluate->add_option("--pred", pred_path, "predicted canonical JSONL")->required();
  evaluate->add_option("--out", eval_out, "output directory")->required();
  evaluate->add_option("--threads", threads, "worker threads (default $TABALIGN_THREADS or 1)");

  auto* stats = app.add_subcommand("stats", "dataset diversity and complexity summary");
  std::string stats_in, stats_out;
  stats->add_option("--in", stats_in, "canonical JSONL")->required();
  stats->add_option("--out", stats_out, "output directory (optional)");

  auto* render = app.add_subcommand("render", "write an SVG overlay for one table");
  std::string render_in, render_table, render_layers = "rows,columns", render_out = "table.svg";
  render->add_option("--in", render_in, "canonical JSONL")->required();
  render->add_option("--table", render_table, "table id")->required();
  render->add_option("--layers", render_layers,
                     "comma-separated: rows,columns,cells,words,header,projected");
  render->add_option("--svg", render_out, "output SVG path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (process->parsed())
      return cmd_process(manifest_path, stage, out_dir, flags, threads, max_parse_failures);
    if (evaluate->parsed()) return cmd_evaluate(gt_path, pred_path, eval_out, threads);
    if (stats->parsed()) return cmd_stats(stats_in, stats_out);
    if (render->parsed()) return cmd_render(render_in, render_table, render_layers, render_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
