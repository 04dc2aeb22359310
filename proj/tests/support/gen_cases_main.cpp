// Regenerates the bundled synthetic cases. The checked-in files must stay
// byte-identical to this tool's output; a unit test enforces that.
#include <cstdio>
#include <string>

#include "pflin/case_io.hpp"
#include "synth_cases.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s <output-dir>\n", argv[0]);
    return 1;
  }
  const std::string out_dir = argv[1];
  pflin::save_case(pflin::testsupport::synth57(), out_dir + "/synth57.json");
  pflin::save_case(pflin::testsupport::synth300(), out_dir + "/synth300.json");
  return 0;
}
