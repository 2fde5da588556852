// hmflab: run one experiment command and write its CSV/.dat artifacts.
//
// Settings resolve as built-in defaults < --config file < HMF_* environment
// variables < command-line flags.  Exit codes: 0 ok, 1 unexpected, 2 usage or
// configuration error, 3 numerical or domain failure.

#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "hmflab/commands.hpp"
#include "hmflab/errors.hpp"

namespace {

struct EnvOverride {
  const char* var;
  const char* field;
};

constexpr EnvOverride kEnv[] = {
    {"HMF_COMMAND", "output.command"},  {"HMF_OUT", "output.dir"},
    {"HMF_PRECISION", "numerics.precision"}, {"HMF_THREADS", "numerics.threads"},
};

int run(int argc, char** argv) {
  CLI::App app{"Hamiltonian of mean force toolkit"};
  std::string config_path;
  std::string command;
  std::string out_dir;
  std::optional<int> precision;
  std::optional<int> threads;
  std::vector<std::string> sets;
  bool quiet = false;

  std::string commands;
  for (const auto& c : hmf::command_names()) commands += (commands.empty() ? "" : ", ") + c;
  app.add_option("--config,-c", config_path, "INI configuration file (env HMF_CONFIG)");
  app.add_option("command,--command", command, "one of: " + commands + " (env HMF_COMMAND)");
  app.add_option("--out,-o", out_dir, "output directory (env HMF_OUT)");
  app.add_option("--precision,-p", precision, "working precision in bits (env HMF_PRECISION)");
  app.add_option("--threads,-j", threads, "worker threads (env HMF_THREADS)");
  app.add_option("--set", sets, "override one key, e.g. --set scan.k_max=8")->allow_extra_args(false);
  app.add_flag("--quiet,-q", quiet, "do not echo the resolved configuration");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  hmf::RunConfig cfg;
  if (config_path.empty()) {
    if (const char* p = std::getenv("HMF_CONFIG")) config_path = p;
  }
  if (!config_path.empty()) cfg = hmf::load_config(config_path);
  for (const auto& e : kEnv) {
    if (const char* v = std::getenv(e.var)) hmf::set_field(cfg, e.field, v);
  }
  if (!command.empty()) cfg.command = command;
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (precision) cfg.precision = *precision;
  if (threads) cfg.threads = *threads;
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw hmf::UsageError("--set: expected key=value, got '" + s + "'");
    hmf::set_field(cfg, s.substr(0, eq), s.substr(eq + 1));
  }
  if (cfg.command.empty()) throw hmf::UsageError("output.command: no command given (one of: " + commands + ")");

  if (!quiet) {
    for (const auto& line : hmf::provenance(cfg)) std::cout << "# " << line << '\n';
  }
  const auto result = hmf::run_command(cfg);
  for (const auto& s : result.summary) std::cout << s << '\n';
  for (const auto& f : result.files) std::cout << "wrote " << f << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const hmf::UsageError& e) {
    std::cerr << "hmflab: " << e.what() << '\n';
    return 2;
  } catch (const hmf::DomainError& e) {
    std::cerr << "hmflab: " << e.what() << " (smallest eigenvalue " << e.smallest_eigenvalue() << ")\n";
    return 3;
  } catch (const hmf::NumericalError& e) {
    std::cerr << "hmflab: " << e.what() << '\n';
    return 3;
  } catch (const hmf::InsufficientDataError& e) {
    std::cerr << "hmflab: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "hmflab: unexpected error: " << e.what() << '\n';
    return 1;
  }
}
