#include <string>
#include <vector>

#include "pembeam/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return pembeam::cli::run(std::move(args));
}
