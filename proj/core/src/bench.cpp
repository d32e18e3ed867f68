#include "gdfl/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "gdfl/baselines.hpp"
#include "gdfl/error.hpp"
#include "gdfl/reference_values.hpp"

namespace gdfl {

namespace {

using Json = nlohmann::ordered_json;

constexpr std::array<std::pair<Method, std::string_view>, 5> kMethodNames{{
    {Method::GnnSolver, "gnn-solver"},
    {Method::DflPipeline, "dfl-pipeline"},
    {Method::Dga, "dga"},
    {Method::DgaLocalSearch, "dga+local-search"},
    {Method::Oracle, "oracle"},
}};

std::string format_number(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return {buf, ptr};
}

std::string format_runtime(double ms) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, ms, std::chars_format::fixed, 3);
  return {buf, ptr};
}

Json config_json(const TrainConfig& c) {
  return Json{{"max_epochs", c.max_epochs}, {"learning_rate", c.learning_rate},
              {"patience", c.patience},     {"tolerance", c.tolerance},
              {"seed", c.seed},             {"d0", c.d0},
              {"d1", c.d1}};
}

std::string digest(const SuiteSpec& spec) {
  Json j;
  j["problem"] = std::string(to_string(spec.kind));
  Json inst = Json::array();
  for (const auto& i : spec.instances) {
    Json e{{"name", i.name}};
    std::visit(
        [&](const auto& src) {
          using T = std::decay_t<decltype(src)>;
          if constexpr (std::is_same_v<T, GsetFile>) {
            e["file"] = src.path.string();
          } else if constexpr (std::is_same_v<T, DRegular>) {
            e["d_regular"] = {src.n, src.d, src.seed};
          } else if constexpr (std::is_same_v<T, ErdosRenyi>) {
            e["erdos_renyi"] = {src.n, src.p, src.seed};
          } else {
            e["inline"] = write_gset(src);
          }
        },
        i.source);
    inst.push_back(std::move(e));
  }
  j["instances"] = std::move(inst);
  Json methods = Json::array();
  for (auto m : spec.methods) methods.push_back(std::string(to_string(m)));
  j["methods"] = std::move(methods);
  j["seeds"] = spec.seeds;
  j["solver"] = config_json(spec.solver_cfg);
  j["predictor"] = config_json(spec.pipeline_cfg.predictor_cfg);
  j["observe_fraction"] = spec.pipeline_cfg.observe_fraction;
  j["lambda"] = spec.pipeline_cfg.lambda;
  j["penalty"] = spec.penalty;
  j["polish"] = spec.polish;

  // FNV-1a 64
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

MethodRun run_method(Method method, const Graph& g, const SuiteSpec& spec, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  MethodRun out;
  switch (method) {
    case Method::GnnSolver: {
      TrainConfig cfg = spec.solver_cfg;
      cfg.seed = seed;
      const QuboMatrix q = build_qubo(spec.kind, g, spec.penalty);
      TrainResult r = train(g, q, cfg);
      out.x = project_and_repair(spec.kind, g, r.best_p, spec.polish);
      out.trace = std::move(r.trace);
      break;
    }
    case Method::DflPipeline: {
      PipelineConfig cfg = spec.pipeline_cfg;
      cfg.kind = spec.kind;
      cfg.penalty = spec.penalty;
      cfg.polish = spec.polish;
      cfg.seed = seed;
      cfg.solver_cfg = spec.solver_cfg;
      cfg.solver_cfg.seed = seed;
      cfg.predictor_cfg.seed = seed;
      out.x = end_to_end_solve(g, cfg).assignment;
      break;
    }
    case Method::Dga:
      out.x = dga(spec.kind, g);
      break;
    case Method::DgaLocalSearch:
      out.x = one_flip_local_search(spec.kind, g, dga(spec.kind, g));
      break;
    case Method::Oracle:
      out.x = brute_force_optimum(spec.kind, g).assignment;
      break;
  }
  out.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

namespace {

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
T parse_field(std::string_view tok, std::size_t line) {
  T value{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw ParseError(line, "bad field '" + std::string(tok) + "'");
  }
  return value;
}

}  // namespace

double relative_error(double ours, double best, Sense sense) {
  if (!(best > 0.0)) throw InvalidArgument("relative error needs a positive reference value");
  const double gap = sense == Sense::Maximize ? best - ours : ours - best;
  return std::max(0.0, gap / best);
}

std::string_view to_string(Method m) noexcept {
  for (const auto& [method, name] : kMethodNames) {
    if (method == m) return name;
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (const auto& [method, label] : kMethodNames) {
    if (label == name) return method;
  }
  if (name == "gnn") return Method::GnnSolver;
  if (name == "dfl") return Method::DflPipeline;
  if (name == "dga+ls") return Method::DgaLocalSearch;
  throw InvalidArgument("unknown method '" + std::string(name) + "'");
}

ReportFormat parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::Csv;
  if (name == "json") return ReportFormat::Json;
  throw InvalidArgument("unknown report format '" + std::string(name) + "'");
}

std::size_t worker_count(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("GDFL_THREADS")) {
    std::size_t value = 0;
    const std::string_view s(env);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec == std::errc{} && ptr == s.data() + s.size() && value > 0) return value;
  }
  return std::max<unsigned>(1, std::thread::hardware_concurrency());
}

Graph load_instance(const SuiteInstance& instance) {
  return std::visit(
      [](const auto& src) -> Graph {
        using T = std::decay_t<decltype(src)>;
        if constexpr (std::is_same_v<T, GsetFile>) {
          if (!std::filesystem::exists(src.path)) {
            throw DataError("instance file not found: " + src.path.string());
          }
          return read_gset_file(src.path);
        } else if constexpr (std::is_same_v<T, DRegular>) {
          return generate_d_regular(src.n, src.d, src.seed);
        } else if constexpr (std::is_same_v<T, ErdosRenyi>) {
          return generate_erdos_renyi(src.n, src.p, src.seed);
        } else {
          return src;
        }
      },
      instance.source);
}

BenchReport run_suite(const SuiteSpec& spec) {
  BenchReport report;
  report.config_digest = digest(spec);
  report.timestamp = utc_timestamp();

  std::vector<Graph> graphs;
  graphs.reserve(spec.instances.size());
  for (const auto& inst : spec.instances) graphs.push_back(load_instance(inst));
  const bool has_oracle =
      std::find(spec.methods.begin(), spec.methods.end(), Method::Oracle) != spec.methods.end();
  if (has_oracle) {
    for (std::size_t k = 0; k < graphs.size(); ++k) {
      if (graphs[k].num_nodes() > kMaxOracleNodes) {
        throw TooLarge("oracle requested on " + spec.instances[k].name + " with n=" +
                       std::to_string(graphs[k].num_nodes()));
      }
    }
  }

  struct Task {
    std::size_t instance;
    Method method;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    for (auto m : spec.methods) {
      for (auto s : spec.seeds) tasks.push_back({i, m, s});
    }
  }

  std::vector<BenchRow> rows(tasks.size());
  std::vector<std::vector<TraceRow>> traces(spec.keep_traces ? tasks.size() : 0);
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < tasks.size(); t = next++) {
      try {
        const auto& task = tasks[t];
        const Graph& g = graphs[task.instance];
        MethodRun out = run_method(task.method, g, spec, task.seed);
        BenchRow& row = rows[t];
        row.instance = spec.instances[task.instance].name;
        row.n = g.num_nodes();
        row.m = g.num_edges();
        row.method = task.method;
        row.objective = objective(spec.kind, g, out.x);
        row.feasible = is_feasible(spec.kind, g, out.x);
        row.runtime_ms = out.runtime_ms;
        row.seed = task.seed;
        if (spec.keep_traces) traces[t] = std::move(out.trace);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::min(worker_count(spec.threads), std::max<std::size_t>(1, tasks.size()));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  // Reference values: the published table for MaxCut, else the oracle.
  std::map<std::size_t, double> oracle_value;
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    if (tasks[t].method == Method::Oracle) oracle_value[tasks[t].instance] = rows[t].objective;
  }
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    std::optional<double> best;
    if (spec.kind == ProblemKind::MaxCut) {
      if (const auto* ref = find_reference(rows[t].instance)) best = ref->bls;
    }
    if (!best) {
      if (auto it = oracle_value.find(tasks[t].instance); it != oracle_value.end()) best = it->second;
    }
    if (best && *best > 0.0) {
      rows[t].epsilon = relative_error(rows[t].objective, *best, sense_of(spec.kind));
    }
  }
  report.rows = std::move(rows);
  report.traces = std::move(traces);
  return report;
}

std::string emit_report(const BenchReport& report, ReportFormat format,
                        const ReportOptions& options) {
  auto runtime = [&](const BenchRow& r) { return options.redact_timing ? 0.0 : r.runtime_ms; };
  if (format == ReportFormat::Csv) {
    std::string out = "instance,n,m,method,objective,feasible,runtime_ms,seed,epsilon\n";
    for (const auto& r : report.rows) {
      out += r.instance + ',' + std::to_string(r.n) + ',' + std::to_string(r.m) + ',' +
             std::string(to_string(r.method)) + ',' + format_number(r.objective) + ',' +
             (r.feasible ? "true" : "false") + ',' + format_runtime(runtime(r)) + ',' +
             std::to_string(r.seed) + ',' + (r.epsilon ? format_number(*r.epsilon) : "") + '\n';
    }
    return out;
  }

  Json j;
  j["metadata"] = {{"config_digest", report.config_digest},
                   {"timestamp", options.redact_timing ? std::string() : report.timestamp},
                   {"tool_version", report.tool_version}};
  Json rows = Json::array();
  for (const auto& r : report.rows) {
    Json row;
    row["instance"] = r.instance;
    row["n"] = r.n;
    row["m"] = r.m;
    row["method"] = std::string(to_string(r.method));
    row["objective"] = r.objective;
    row["feasible"] = r.feasible;
    row["runtime_ms"] = runtime(r);
    row["seed"] = r.seed;
    row["epsilon"] = r.epsilon ? Json(*r.epsilon) : Json(nullptr);
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + '\n';
}

BenchReport parse_report(std::string_view text, ReportFormat format) {
  BenchReport report;
  if (format == ReportFormat::Json) {
    Json j;
    try {
      j = Json::parse(text);
      const auto& meta = j.at("metadata");
      report.config_digest = meta.at("config_digest").get<std::string>();
      report.timestamp = meta.at("timestamp").get<std::string>();
      report.tool_version = meta.at("tool_version").get<std::string>();
      for (const auto& row : j.at("rows")) {
        BenchRow r;
        r.instance = row.at("instance").get<std::string>();
        r.n = row.at("n").get<std::size_t>();
        r.m = row.at("m").get<std::size_t>();
        r.method = parse_method(row.at("method").get<std::string>());
        r.objective = row.at("objective").get<double>();
        r.feasible = row.at("feasible").get<bool>();
        r.runtime_ms = row.at("runtime_ms").get<double>();
        r.seed = row.at("seed").get<std::uint64_t>();
        if (!row.at("epsilon").is_null()) r.epsilon = row.at("epsilon").get<double>();
        report.rows.push_back(std::move(r));
      }
    } catch (const nlohmann::json::exception& e) {
      throw DataError(std::string("malformed report JSON: ") + e.what());
    }
    return report;
  }

  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) {
      if (line != "instance,n,m,method,objective,feasible,runtime_ms,seed,epsilon") {
        throw ParseError(1, "unexpected CSV header");
      }
      continue;
    }
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 9) throw ParseError(line_no, "expected 9 fields");
    BenchRow r;
    r.instance = std::string(f[0]);
    r.n = parse_field<std::size_t>(f[1], line_no);
    r.m = parse_field<std::size_t>(f[2], line_no);
    r.method = parse_method(f[3]);
    r.objective = parse_field<double>(f[4], line_no);
    if (f[5] != "true" && f[5] != "false") throw ParseError(line_no, "bad feasible flag");
    r.feasible = f[5] == "true";
    r.runtime_ms = parse_field<double>(f[6], line_no);
    r.seed = parse_field<std::uint64_t>(f[7], line_no);
    if (!f[8].empty()) r.epsilon = parse_field<double>(f[8], line_no);
    report.rows.push_back(std::move(r));
  }
  return report;
}

}  // namespace gdfl
