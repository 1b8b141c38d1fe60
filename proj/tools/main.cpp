#include <string>
#include <vector>

#include "hs2_cli.hpp"

int main(int argc, char** argv) {
  return hs2::cli::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
