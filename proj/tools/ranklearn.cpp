// Batch front end: gen, train, eval, report.
#include <exception>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ranklearn/errors.hpp"
#include "ranklearn/experiment.hpp"
#include "ranklearn/io.hpp"
#include "ranklearn/synthetic.hpp"

namespace fs = std::filesystem;
using namespace ranklearn;

namespace {

std::map<std::string, std::string> key_values(const fs::path& path) {
  std::istringstream in(io::read_text(path));
  return io::read_key_values(in);
}

int cmd_gen(const fs::path& spec_path, const fs::path& out) {
  const auto spec = synthetic_spec_from(key_values(spec_path));
  const auto data = generate_synthetic(spec);
  io::save_dataset(out, data.dataset);
  std::ostringstream star;
  io::write_params(star, data.phi_star);
  io::write_text(out / "phi_star.txt", star.str());
  std::cout << "wrote " << data.dataset.graphs.size() << " queries to " << out.string() << '\n';
  return 0;
}

int cmd_train(const fs::path& config_path, const fs::path& data_dir, const fs::path& out) {
  const auto config = experiment_config_from(key_values(config_path));
  const auto data = io::load_dataset(data_dir, config.margin);
  const auto report = run_experiment(config, data);
  write_report(out, report);
  std::cout << io::read_text(out / "report.csv");
  return 0;
}

int cmd_eval(const fs::path& model_path, const fs::path& data_dir, const fs::path& config_path) {
  ExperimentConfig config;
  if (!config_path.empty()) config = experiment_config_from(key_values(config_path));
  std::istringstream model_in(io::read_text(model_path));
  const auto phi = io::read_params(model_in);
  const auto data = io::load_dataset(data_dir, config.margin);
  const auto e = evaluate_model(phi, data, config.alpha, config.eval_terms);
  std::cout << "queries = " << e.queries << '\n'
            << "loss = " << io::format_double(e.loss) << '\n'
            << "ndcg3 = " << io::format_double(e.ndcg3) << '\n'
            << "ndcg5 = " << io::format_double(e.ndcg5) << '\n'
            << "degenerate_queries = " << e.degenerate_queries << '\n';
  return 0;
}

int cmd_report(const fs::path& runs) {
  summarize_runs(runs);
  std::cout << io::read_text(runs / "summary.md");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learning ranking parameters of a supervised PageRank model"};
  app.require_subcommand(1);

  std::string spec, out, config, data, model, runs;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic dataset");
  gen->add_option("--spec", spec, "Synthetic spec (key = value)")->required();
  gen->add_option("--out", out, "Output dataset directory")->required();

  auto* train = app.add_subcommand("train", "Train and evaluate the configured methods");
  train->add_option("--config", config, "Experiment config (key = value)")->required();
  train->add_option("--data", data, "Dataset directory")->required();
  train->add_option("--out", out, "Report directory")->required();

  auto* eval = app.add_subcommand("eval", "Evaluate a parameter file on a dataset");
  eval->add_option("--model", model, "Parameter file")->required();
  eval->add_option("--data", data, "Dataset directory")->required();
  eval->add_option("--config", config, "Experiment config for alpha, margin and eval_terms");

  auto* report = app.add_subcommand("report", "Summarize several train runs");
  report->add_option("--runs", runs, "Directory holding run subdirectories")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) return cmd_gen(spec, out);
    if (train->parsed()) return cmd_train(config, data, out);
    if (eval->parsed()) return cmd_eval(model, data, config);
    if (report->parsed()) return cmd_report(runs);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
