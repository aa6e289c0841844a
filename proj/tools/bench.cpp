// Throughput benchmark: the per-table pipeline and corpus evaluation kernels,
// serial reference vs. OpenMP, with an output-equality check between the two.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tabalign/metrics.hpp"
#include "tabalign/parallel.hpp"
#include "tabalign/pipeline.hpp"
#include "tabalign/synthetic.hpp"

using namespace tabalign;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs. OpenMP benchmark for pipeline and metric kernels"};
  std::size_t n_tables = 400;
  unsigned seed = 7;
  int threads = hardware_threads();
  app.add_option("--tables", n_tables, "corpus size");
  app.add_option("--seed", seed, "generator seed");
  app.add_option("--threads", threads, "parallel thread count to compare against serial");
  CLI11_PARSE(app, argc, argv);

  SyntheticOptions gen;
  gen.max_rows = 8;
  gen.max_cols = 6;
  const std::vector<TableAnnotation> corpus = make_random_corpus(seed, n_tables, gen);
  const PipelineOptions options;

  std::printf("corpus: %zu tables, threads: 1 vs %d\n", corpus.size(), threads);

  auto t0 = Clock::now();
  PipelineResult serial = run_pipeline(corpus, PipelineMode::Fintabnet, "a6", options, 1);
  const double pipeline_serial = seconds_since(t0);

  t0 = Clock::now();
  PipelineResult parallel = run_pipeline(corpus, PipelineMode::Fintabnet, "a6", options, threads);
  const double pipeline_parallel = seconds_since(t0);

  const bool pipeline_equal = serial.tables == parallel.tables &&
                              pipeline_report_json(serial.report) ==
                                  pipeline_report_json(parallel.report);
  std::printf("pipeline a6       serial %7.3fs  parallel %7.3fs  speedup %5.2fx  equal: %s\n",
              pipeline_serial, pipeline_parallel, pipeline_serial / pipeline_parallel,
              pipeline_equal ? "yes" : "NO");

  // Evaluation kernel: score the processed corpus against itself.
  t0 = Clock::now();
  MetricReport eval_serial = evaluate_corpus(serial.tables, serial.tables, 1);
  const double eval_serial_s = seconds_since(t0);

  t0 = Clock::now();
  MetricReport eval_parallel = evaluate_corpus(serial.tables, serial.tables, threads);
  const double eval_parallel_s = seconds_since(t0);

  const bool eval_equal =
      metric_report_json(eval_serial, "bench") == metric_report_json(eval_parallel, "bench");
  std::printf("evaluate corpus   serial %7.3fs  parallel %7.3fs  speedup %5.2fx  equal: %s\n",
              eval_serial_s, eval_parallel_s, eval_serial_s / eval_parallel_s,
              eval_equal ? "yes" : "NO");

  return pipeline_equal && eval_equal ? 0 : 1;
}
