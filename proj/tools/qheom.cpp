#include <vector>

#include "qheom/runner.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qheom::cli_main(args);
}
