#include <iostream>

#include "cmv/cli.hpp"

int main(int argc, char** argv) {
  const cmv::CliResult r = cmv::run_cli({argv + 1, argv + argc});
  std::cout << r.out;
  std::cerr << r.err;
  return r.code;
}
