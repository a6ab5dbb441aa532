// Command-line front end: one subcommand per pipeline stage, JSON on stdout,
// structured errors on stderr, exit codes 0/1/2/3.
#include "tlg/io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

namespace {

std::string slurp(const std::string &path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw tlg::Error(tlg::ErrorKind::Validation, "cannot read '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Toric GKZ / orbifold cohomology toolkit"};
  app.require_subcommand(1, 1);

  std::string fan_pos, fan_opt, resolution, basis_file;
  tlg::io::Options opts;
  for (const std::string &name : tlg::io::commands()) {
    CLI::App *sub = app.add_subcommand(name);
    sub->add_option("input", fan_pos, "Fan JSON file ('-' for stdin)");
    sub->add_option("--fan", fan_opt, "Fan JSON file (alternative to the positional argument)");
    sub->add_option("--order", opts.order, "Series truncation order")->capture_default_str();
    sub->add_option("--basis-file", basis_file, "JSON with p_basis / q_basis overrides");
    sub->add_flag("--emit-certificates", opts.emit_certificates, "Include LP and Gröbner witnesses");
    sub->add_flag("--timing", opts.timing, "Add wall-clock timing to the report");
    if (name == "crepant" || name == "global-moduli" || name == "all")
      sub->add_option("--resolution", resolution, "Fan JSON of a smooth refinement");
  }
  CLI11_PARSE(app, argc, argv);
  opts.command = app.get_subcommands().front()->get_name();

  tlg::io::Outcome out;
  try {
    std::string path = !fan_opt.empty() ? fan_opt : !fan_pos.empty() ? fan_pos : "-";
    opts.fan_text = slurp(path);
    if (!resolution.empty())
      opts.resolution_text = slurp(resolution);
    if (!basis_file.empty())
      opts.basis_text = slurp(basis_file);
    out = tlg::io::run(opts);
  } catch (const tlg::Error &e) {
    out.exit_code = static_cast<int>(e.kind());
    out.error = tlg::io::error_json(e.kind(), e.what());
  }
  if (!out.report.is_null())
    std::cout << tlg::io::dump(out.report);
  if (out.error)
    std::cerr << tlg::io::dump(*out.error);
  return out.exit_code;
}
