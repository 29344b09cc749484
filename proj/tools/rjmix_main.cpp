#include <string>
#include <vector>

#include "rjmix/cli.hpp"

int main(int argc, char** argv) {
  return rjmix::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
