#ifndef GDFL_BENCH_HPP
#define GDFL_BENCH_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gdfl/gnn.hpp"
#include "gdfl/graph.hpp"
#include "gdfl/pipeline.hpp"
#include "gdfl/qubo.hpp"

namespace gdfl {

inline constexpr std::string_view kToolVersion = "0.1.0";

// (best - ours) / best when maximising, (ours - best) / best when
// minimising, clamped at 0. Throws InvalidArgument if best <= 0.
double relative_error(double ours, double best, Sense sense = Sense::Maximize);

enum class Method { GnnSolver, DflPipeline, Dga, DgaLocalSearch, Oracle };

std::string_view to_string(Method m) noexcept;
// "gnn-solver", "dfl-pipeline", "dga", "dga+local-search", "oracle"
Method parse_method(std::string_view name);

struct GsetFile {
  std::filesystem::path path;
};
struct DRegular {
  std::size_t n;
  std::size_t d;
  std::uint64_t seed;
};
struct ErdosRenyi {
  std::size_t n;
  double p;
  std::uint64_t seed;
};

struct SuiteInstance {
  std::string name;
  std::variant<GsetFile, DRegular, ErdosRenyi, Graph> source;
};

struct SuiteSpec {
  ProblemKind kind = ProblemKind::MaxCut;
  std::vector<SuiteInstance> instances;
  std::vector<Method> methods;
  std::vector<std::uint64_t> seeds{0};
  TrainConfig solver_cfg;
  PipelineConfig pipeline_cfg;  // kind, penalty, polish and seeds are taken from the suite
  double penalty = kDefaultPenalty;
  bool polish = true;
  // Worker bound; 0 reads GDFL_THREADS, falling back to hardware concurrency.
  std::size_t threads = 0;
  // Keep the gnn-solver training trace of every row in BenchReport::traces.
  bool keep_traces = false;
};

struct BenchRow {
  std::string instance;
  std::size_t n = 0;
  std::size_t m = 0;
  Method method = Method::Dga;
  double objective = 0.0;
  bool feasible = false;
  double runtime_ms = 0.0;
  std::uint64_t seed = 0;
  std::optional<double> epsilon;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::string config_digest;
  std::string timestamp;
  std::string tool_version{kToolVersion};
  // Parallel to rows when SuiteSpec::keep_traces is set; empty for methods
  // that do not train a solver.
  std::vector<std::vector<TraceRow>> traces;
};

struct MethodRun {
  BinaryAssignment x;
  double runtime_ms = 0.0;
  std::vector<TraceRow> trace;  // gnn-solver only
};

// One method on one graph with the suite's problem, configs and the given seed.
MethodRun run_method(Method method, const Graph& g, const SuiteSpec& spec, std::uint64_t seed);

// Loads a named instance; GsetFile sources that do not exist raise
// DataError naming the path.
Graph load_instance(const SuiteInstance& instance);

/// Runs every (instance, method, seed) combination. Rows come back ordered
/// by instance, then method, then seed, in the order given in the spec.
/// Epsilon is filled from the Gset reference table (MaxCut) or, failing
/// that, from the oracle row of the same instance when the suite has one.
BenchReport run_suite(const SuiteSpec& spec);

enum class ReportFormat { Csv, Json };
ReportFormat parse_report_format(std::string_view name);

struct ReportOptions {
  // Zero runtimes and drop the timestamp so repeated runs compare equal.
  bool redact_timing = false;
};

// CSV header: instance,n,m,method,objective,feasible,runtime_ms,seed,epsilon
std::string emit_report(const BenchReport& report, ReportFormat format,
                        const ReportOptions& options = {});

// Parses either format back into rows (metadata is only present in JSON).
BenchReport parse_report(std::string_view text, ReportFormat format);

// Number of workers: GDFL_THREADS when set and positive, else hardware
// concurrency, bounded below by 1.
std::size_t worker_count(std::size_t requested = 0);

}  // namespace gdfl

#endif  // GDFL_BENCH_HPP
