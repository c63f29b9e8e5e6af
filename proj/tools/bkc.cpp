#include <iostream>
#include <string>
#include <vector>

#include "bkc/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  const bkc::CliResult r = bkc::dispatch(args);
  std::cout << r.out;
  std::cerr << r.err;
  return r.code;
}
