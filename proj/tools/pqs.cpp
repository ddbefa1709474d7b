#include <cstdlib>
#include <string>
#include <vector>

#include "pqs/cli.hpp"

int main(int argc, char** argv) {
  pqs::CliEnvironment env;
  env.probe_workers = pqs::probe_workers(std::getenv("PADIC_PROBE_PARALLELISM"));
  return pqs::run_cli(std::vector<std::string>(argv + 1, argv + argc), env);
}
