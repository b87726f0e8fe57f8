#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "wb/errors.hpp"
#include "wb/spec_file.hpp"

int main(int argc, char** argv) {
  CLI::App app{"finite-domain clone workbench"};
  app.require_subcommand(1);

  std::string file, format = "text", task;
  CLI::App* run = app.add_subcommand("run", "run the tasks of a definition file");
  run->add_option("file", file, "definition file")->required();
  run->add_option("--format", format, "output format")
      ->check(CLI::IsMember({"text", "lines"}));
  run->add_option("--task", task, "run only the task with this name");

  CLI11_PARSE(app, argc, argv);

  std::ifstream in(file);
  if (!in) {
    std::cerr << "error: cannot open '" << file << "'\n";
    return 2;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  try {
    const wb::WorkbenchSpec spec = wb::parse_spec(buf.str());
    const wb::Report rep = wb::run_all(spec, task);
    std::cout << wb::emit_report(
        rep, format == "lines" ? wb::ReportFormat::Lines : wb::ReportFormat::Text);
    return rep.all_pass() ? 0 : 1;
  } catch (const wb::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
