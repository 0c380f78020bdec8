#include <string>
#include <vector>

#include "nrlb/cli/app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return nrlb::cli::run_app(std::move(args));
}
