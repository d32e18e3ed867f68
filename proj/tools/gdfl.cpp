#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "gdfl/bench.hpp"
#include "gdfl/error.hpp"
#include "gdfl/gnn.hpp"
#include "gdfl/graph.hpp"
#include "gdfl/pipeline.hpp"
#include "gdfl/qubo.hpp"

namespace {

using gdfl::Method;

// Reads a JSON object whose keys are long flag names. Top-level keys apply
// to the subcommand being run; a nested object keyed by a subcommand name
// applies to that subcommand only. Flags given on the command line win.
class JsonConfig : public CLI::Config {
 public:
  explicit JsonConfig(const CLI::App* root) : root_(root) {}

  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    nlohmann::ordered_json j;
    for (const CLI::Option* opt : app->get_options({})) {
      if (!opt->get_configurable() || opt->get_lnames().empty()) continue;
      const std::string& name = opt->get_lnames().front();
      if (opt->count() > 0) {
        const auto& res = opt->results();
        j[name] = res.size() == 1 ? nlohmann::ordered_json(res.front()) : nlohmann::ordered_json(res);
      } else if (default_also && !opt->get_default_str().empty()) {
        j[name] = opt->get_default_str();
      }
    }
    return j.dump(2) + '\n';
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(input);
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConfigError(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConfigError("config: top level must be an object");
    std::vector<std::string> parents;
    for (const CLI::App* sub : root_->get_subcommands()) parents.push_back(sub->get_name());
    std::vector<CLI::ConfigItem> items;
    collect(j, parents, items);
    return items;
  }

 private:
  void collect(const nlohmann::json& obj, const std::vector<std::string>& parents,
               std::vector<CLI::ConfigItem>& items) const {
    for (const auto& [key, value] : obj.items()) {
      if (value.is_object()) {
        const CLI::App* sub = root_->get_subcommand_no_throw(key);
        if (sub == nullptr) throw CLI::ConfigError("config: unknown section '" + key + "'");
        if (!sub->parsed()) continue;
        collect(value, {key}, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      } else {
        item.inputs.push_back(scalar(value));
      }
      items.push_back(std::move(item));
    }
  }

  static std::string scalar(const nlohmann::json& v) {
    return v.is_string() ? v.get<std::string>() : v.dump();
  }

  const CLI::App* root_;
};

struct Options {
  std::string problem = "maxcut";
  std::string input;
  std::size_t n = 0;
  std::size_t d = 3;
  std::size_t graphs = 1;
  std::uint64_t seed = 0;
  std::size_t seeds = 1;
  std::size_t epochs = gdfl::TrainConfig{}.max_epochs;
  double lr = gdfl::TrainConfig{}.learning_rate;
  std::size_t patience = gdfl::TrainConfig{}.patience;
  double lambda = gdfl::PipelineConfig{}.lambda;
  double observe = gdfl::PipelineConfig{}.observe_fraction;
  double penalty = gdfl::kDefaultPenalty;
  bool polish = true;
  std::string format = "csv";
  std::string out;
  std::string method = "gnn-solver";
  std::vector<std::string> methods;
  std::vector<std::string> inputs;
  std::string trace;
  bool redact_timing = false;
  std::size_t threads = 0;
};

void add_problem(CLI::App* app, Options& o) {
  app->add_option("--problem", o.problem, "maxcut, mis or mvc")
      ->check(CLI::IsMember({"maxcut", "mis", "mvc"}))
      ->capture_default_str();
  app->add_option("--penalty", o.penalty, "Penalty weight for MIS/MVC, must exceed 1")
      ->capture_default_str();
}

void add_generator(CLI::App* app, Options& o) {
  app->add_option("--n", o.n, "Nodes of a generated d-regular graph");
  app->add_option("--d", o.d, "Degree of a generated graph")->capture_default_str();
  app->add_option("--seed", o.seed, "Base seed")->capture_default_str();
}

void add_training(CLI::App* app, Options& o) {
  app->add_option("--seeds", o.seeds, "Number of seeds, starting at --seed")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--epochs", o.epochs, "Solver epoch budget")->capture_default_str();
  app->add_option("--lr", o.lr, "Solver learning rate")->capture_default_str();
  app->add_option("--patience", o.patience, "Epochs without improvement before stopping")
      ->capture_default_str();
  app->add_flag("--polish,!--no-polish", o.polish, "One-flip local search after rounding")
      ->capture_default_str();
}

void add_pipeline(CLI::App* app, Options& o) {
  app->add_option("--lambda", o.lambda, "Weight of the reconstruction loss")
      ->capture_default_str();
  app->add_option("--observe", o.observe, "Fraction of nodes observed, in (0, 1]")
      ->capture_default_str();
}

void add_output(CLI::App* app, Options& o, bool with_format) {
  if (with_format) {
    app->add_option("--format", o.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app->add_flag("--redact-timing", o.redact_timing,
                  "Zero runtimes and drop the timestamp so reruns compare byte for byte");
  }
  app->add_option("--out", o.out, "Output file (default stdout)");
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw gdfl::DataError("cannot open " + path + " for writing");
  f << text;
  if (!f) throw gdfl::DataError("failed writing " + path);
}

gdfl::SuiteInstance single_instance(const Options& o) {
  if (!o.input.empty()) {
    std::filesystem::path p(o.input);
    std::string name = p.filename().string();
    for (const char* ext : {".gz", ".txt"}) {
      if (name.size() > std::string_view(ext).size() && name.ends_with(ext)) {
        name.resize(name.size() - std::string_view(ext).size());
      }
    }
    return {name, gdfl::GsetFile{p}};
  }
  if (o.n == 0) throw gdfl::InvalidArgument("give --input or --n");
  return {"reg" + std::to_string(o.d) + "_n" + std::to_string(o.n) + "_s" + std::to_string(o.seed),
          gdfl::DRegular{o.n, o.d, o.seed}};
}

gdfl::SuiteSpec suite_base(const Options& o) {
  gdfl::SuiteSpec spec;
  spec.kind = gdfl::parse_problem_kind(o.problem);
  spec.penalty = o.penalty;
  spec.polish = o.polish;
  spec.threads = o.threads;
  spec.seeds.clear();
  for (std::size_t k = 0; k < o.seeds; ++k) spec.seeds.push_back(o.seed + k);
  spec.solver_cfg.max_epochs = o.epochs;
  spec.solver_cfg.learning_rate = o.lr;
  spec.solver_cfg.patience = o.patience;
  spec.solver_cfg.validate();
  spec.pipeline_cfg.lambda = o.lambda;
  spec.pipeline_cfg.observe_fraction = o.observe;
  spec.pipeline_cfg.validate();
  return spec;
}

std::string render(const gdfl::BenchReport& r, const Options& o) {
  return gdfl::emit_report(r, gdfl::parse_report_format(o.format),
                           gdfl::ReportOptions{.redact_timing = o.redact_timing});
}

void run_gen(const Options& o) {
  if (o.n == 0) throw gdfl::InvalidArgument("--n is required");
  write_output(o.out, gdfl::write_gset(gdfl::generate_d_regular(o.n, o.d, o.seed)));
}

void run_solve(const Options& o, Method method) {
  gdfl::SuiteSpec spec = suite_base(o);
  spec.instances = {single_instance(o)};
  spec.methods = {method};
  spec.keep_traces = !o.trace.empty();
  gdfl::BenchReport r = gdfl::run_suite(spec);
  if (!o.trace.empty()) {
    if (method != Method::GnnSolver) throw gdfl::InvalidArgument("--trace needs --method gnn-solver");
    write_output(o.trace, gdfl::trace_csv(r.traces.front()));
  }
  write_output(o.out, render(r, o));
}

void run_dfl(const Options& o) {
  gdfl::PipelineConfig cfg;
  cfg.kind = gdfl::parse_problem_kind(o.problem);
  cfg.observe_fraction = o.observe;
  cfg.lambda = o.lambda;
  cfg.penalty = o.penalty;
  cfg.polish = o.polish;
  cfg.seed = o.seed;
  cfg.solver_cfg.max_epochs = o.epochs;
  cfg.solver_cfg.learning_rate = o.lr;
  cfg.solver_cfg.patience = o.patience;
  cfg.solver_cfg.seed = o.seed;
  cfg.predictor_cfg.seed = o.seed;
  const gdfl::Graph g = gdfl::load_instance(single_instance(o));
  gdfl::PipelineResult r = gdfl::end_to_end_solve(g, cfg);
  write_output(o.out, gdfl::to_json(r) + '\n');
}

void run_bench(const Options& o) {
  gdfl::SuiteSpec spec = suite_base(o);
  for (const auto& path : o.inputs) {
    Options one = o;
    one.input = path;
    spec.instances.push_back(single_instance(one));
  }
  if (o.n > 0) {
    for (std::size_t k = 0; k < o.graphs; ++k) {
      Options one = o;
      one.input.clear();
      one.seed = o.seed + k;
      spec.instances.push_back(single_instance(one));
    }
  }
  for (const auto& m : o.methods) spec.methods.push_back(gdfl::parse_method(m));
  write_output(o.out, render(gdfl::run_suite(spec), o));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph learning QUBO solver with decision-focused link prediction", "gdfl"};
  app.set_version_flag("--version", std::string(gdfl::kToolVersion));
  app.require_subcommand(1);
  app.fallthrough();
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.config_formatter(std::make_shared<JsonConfig>(&app));
  app.set_config("--config", "", "JSON file mirroring the command-line flags");

  Options o;

  CLI::App* gen = app.add_subcommand("gen", "Generate a random d-regular graph in Gset format");
  add_generator(gen, o);
  add_output(gen, o, false);

  CLI::App* solve = app.add_subcommand("solve", "Run one method on one instance");
  solve->add_option("--input", o.input, "Gset file, optionally gzipped");
  add_generator(solve, o);
  add_problem(solve, o);
  add_training(solve, o);
  add_pipeline(solve, o);
  solve->add_option("--method", o.method,
                    "gnn-solver, dfl-pipeline, dga, dga+local-search or oracle")
      ->capture_default_str();
  solve->add_option("--trace", o.trace, "Write the training trace of the first seed as CSV");
  solve->add_option("--threads", o.threads, "Worker bound (default GDFL_THREADS or all cores)");
  add_output(solve, o, true);

  CLI::App* dfl = app.add_subcommand("dfl", "Predict links on a partial observation, then solve");
  dfl->add_option("--input", o.input, "Gset file of the true graph");
  add_generator(dfl, o);
  add_problem(dfl, o);
  add_training(dfl, o);
  add_pipeline(dfl, o);
  add_output(dfl, o, false);

  CLI::App* oracle = app.add_subcommand("oracle", "Exact optimum by enumeration (small graphs)");
  oracle->add_option("--input", o.input, "Gset file");
  add_generator(oracle, o);
  add_problem(oracle, o);
  add_output(oracle, o, true);

  CLI::App* bench = app.add_subcommand("bench", "Run a method suite and emit a report");
  bench->add_option("--input", o.inputs, "Gset files (repeatable)");
  add_generator(bench, o);
  bench->add_option("--graphs", o.graphs, "Generated graphs, seeded from --seed upward")
      ->capture_default_str();
  add_problem(bench, o);
  add_training(bench, o);
  add_pipeline(bench, o);
  o.methods = {"gnn-solver", "dga", "dga+local-search"};
  bench->add_option("--method", o.methods, "Methods to run (repeatable)")->capture_default_str();
  bench->add_option("--threads", o.threads, "Worker bound (default GDFL_THREADS or all cores)");
  add_output(bench, o, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (gen->parsed()) {
      run_gen(o);
    } else if (solve->parsed()) {
      run_solve(o, gdfl::parse_method(o.method));
    } else if (dfl->parsed()) {
      run_dfl(o);
    } else if (oracle->parsed()) {
      run_solve(o, Method::Oracle);
    } else if (bench->parsed()) {
      run_bench(o);
    }
  } catch (const gdfl::TrainingDiverged& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const gdfl::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const gdfl::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
