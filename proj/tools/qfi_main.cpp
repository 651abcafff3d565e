#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <string>

#include "qfi/errors.hpp"
#include "qfi/generators.hpp"
#include "qfi/log.hpp"
#include "qfi/matrix_io.hpp"
#include "qfi/metrics.hpp"
#include "qfi/scenario.hpp"
#include "qfi/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open '" + path + "' for reading");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw IoFailure("cannot parse '" + path + "': " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoFailure("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoFailure("write to '" + path + "' failed");
}

void emit_json(const nlohmann::json& doc, const std::string& out_path) {
  const std::string text = doc.dump(2) + "\n";
  if (out_path.empty())
    std::cout << text;
  else
    write_text(out_path, text);
}

// Numeric-domain failures get their own exit code so sweep drivers can tell
// a bad configuration from a run that hit a genuine numerical wall.
int classify_numeric(const std::exception&) { return kExitNumeric; }

struct RunArgs {
  std::string scenario;
  std::string out;
  std::string csv;
  int jobs = 1;
  std::int64_t seed = -1;
};

int do_run(const RunArgs& args, bool with_grouping) {
  nlohmann::json doc;
  try {
    doc = load_json(args.scenario);
  } catch (const IoFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }

  qfi::ScenarioConfig cfg;
  try {
    cfg = qfi::parse_scenario(doc);
  } catch (const qfi::ConfigValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  if (args.seed >= 0) {
    cfg.seed = static_cast<std::uint64_t>(args.seed);
    cfg.echo["seed"] = cfg.seed;
  }
  if (with_grouping && !cfg.grouping.enabled) {
    std::cerr << "error: scenario has grouping disabled; enable grouping.enabled\n";
    return kExitConfig;
  }

  qfi::RunReport report;
  try {
    report = with_grouping ? qfi::run_grouping(cfg, args.jobs)
                           : qfi::run_scenario(cfg, args.jobs);
  } catch (const qfi::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const qfi::ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const qfi::ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return classify_numeric(e);
  }

  try {
    emit_json(qfi::report_to_json(report), args.out);
    if (!args.csv.empty()) write_text(args.csv, qfi::report_to_csv(report));
  } catch (const IoFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }

  if (report.any_violation) {
    std::cerr << "error: run flagged invariant violations; inspect the report records\n";
    return kExitNumeric;
  }
  return kExitOk;
}

int do_metrics(const std::string& state_path, const std::string& gen_path,
               const std::string& out_path) {
  nlohmann::json state_doc, gen_doc;
  try {
    state_doc = load_json(state_path);
    gen_doc = load_json(gen_path);
  } catch (const IoFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }

  try {
    const qfi::DensityOperator rho(qfi::matrix_from_json(state_doc));
    const qfi::HermitianGenerator gen =
        qfi::make_generator(qfi::matrix_from_json(gen_doc), "cli");
    const qfi::ParamStateFamily family = qfi::unitary_family(rho, gen);
    const qfi::MetricReport metrics = qfi::evaluate_metrics(family, 0.0);

    nlohmann::json out{
        {"version", qfi::kVersion},
        {"qfi", metrics.qfi},
        {"sub_qfi", metrics.sub_qfi},
        {"sub_qfi_unitary", qfi::sub_qfi_unitary(rho, gen)},
        {"purity", metrics.purity},
        {"method_tags", metrics.method_tags},
    };
    emit_json(out, out_path);
    return kExitOk;
  } catch (const qfi::ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return classify_numeric(e);
  }
}

int do_validate(const std::string& scenario_path) {
  nlohmann::json doc;
  try {
    doc = load_json(scenario_path);
  } catch (const IoFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  try {
    const qfi::ScenarioConfig cfg = qfi::parse_scenario(doc);
    (void)qfi::assemble_scenario(cfg);
  } catch (const qfi::ConfigValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const qfi::ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const qfi::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return classify_numeric(e);
  }
  std::cout << "ok\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum Fisher information toolkit"};
  app.set_version_flag("--version", std::string(qfi::kVersion));
  app.require_subcommand(1);

  RunArgs run_args;
  CLI::App* run = app.add_subcommand("run", "sweep a scenario and audit the transfer chain");
  run->add_option("scenario", run_args.scenario, "scenario JSON file")->required();
  run->add_option("--out", run_args.out, "write the JSON report here instead of stdout");
  run->add_option("--csv", run_args.csv, "also write a per-point CSV table");
  run->add_option("--jobs", run_args.jobs, "worker threads for the sweep")
      ->check(CLI::Range(1, 256));
  run->add_option("--seed", run_args.seed, "override the scenario seed");

  RunArgs group_args;
  CLI::App* group =
      app.add_subcommand("group", "run a scenario and reduce its measurement by grouping");
  group->add_option("scenario", group_args.scenario, "scenario JSON file")->required();
  group->add_option("--out", group_args.out, "write the JSON report here instead of stdout");
  group->add_option("--csv", group_args.csv, "also write a per-point CSV table");
  group->add_option("--jobs", group_args.jobs, "worker threads for the sweep")
      ->check(CLI::Range(1, 256));
  group->add_option("--seed", group_args.seed, "override the scenario seed");

  std::string metrics_state, metrics_gen, metrics_out;
  CLI::App* metrics =
      app.add_subcommand("metrics", "point metrics for a state and a Hermitian generator");
  metrics->add_option("state", metrics_state, "density matrix JSON file")->required();
  metrics->add_option("generator", metrics_gen, "generator matrix JSON file")->required();
  metrics->add_option("--out", metrics_out, "write the JSON output here instead of stdout");

  std::string validate_path;
  CLI::App* validate = app.add_subcommand("validate", "check a scenario file and exit");
  validate->add_option("scenario", validate_path, "scenario JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  if (run->parsed()) return do_run(run_args, false);
  if (group->parsed()) return do_run(group_args, true);
  if (metrics->parsed()) return do_metrics(metrics_state, metrics_gen, metrics_out);
  if (validate->parsed()) return do_validate(validate_path);
  return kExitConfig;
}
