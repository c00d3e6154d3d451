#include <iostream>

#include "CLI11.hpp"
#include "modcomplete/cli.hpp"

int main(int argc, char** argv) {
  using namespace modcomplete::cli;

  CLI::App app{"Completes partial state-machine models from Given-When-Then requirements"};
  app.require_subcommand(1);

  RunConfig config;
  std::string kb_path;

  auto add_inputs = [&](CLI::App* cmd) {
    cmd->add_option("--model", config.model_path, "Partial system model (JSON)")->required();
    cmd->add_option("--reqs", config.corpus_path, "Requirements feature file")->required();
    cmd->add_option("--kb", kb_path, "Translation rules file (built-in rules when omitted)")
        ->envname("MODCOMPLETE_KB");
    cmd->add_flag("--strict", config.strict, "Treat warnings as failures (exit 2)");
  };

  auto* complete = app.add_subcommand("complete", "Generate transitions and write model, report and trace");
  add_inputs(complete);
  complete->add_option("--out", config.out_model_path, "Completed model output")->required();
  complete->add_option("--report", config.report_path, "Completion report output (JSON)")->required();
  complete->add_option("--trace", config.trace_path, "Trace records output (JSON)")->required();
  std::string diagrams;
  complete->add_option("--diagrams", diagrams, "Directory for requirement diagrams");

  auto* check = app.add_subcommand("check", "Match requirements and report acceptability, write nothing");
  add_inputs(check);
  check->add_flag("--explain", config.explain, "Show bindings and slot-by-slot failures");

  auto* lint = app.add_subcommand("kb-lint", "Validate a translation rules file");
  lint->add_option("--kb,kb", kb_path, "Translation rules file")->envname("MODCOMPLETE_KB");
  lint->add_flag("--strict", config.strict, "Treat warnings as failures (exit 2)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitInputFailure;
  }

  if (!kb_path.empty()) config.kb_path = kb_path;
  if (!diagrams.empty()) config.diagram_dir = diagrams;

  if (*complete) return cmd_complete(config, std::cout, std::cerr);
  if (*check) return cmd_check(config, std::cout, std::cerr);
  return cmd_kb_lint(config.kb_path, config.strict, std::cout, std::cerr);
}
