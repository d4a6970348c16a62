// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <crc/acceptance.hpp>

#include <iostream>

int main() {
  int failed = 0;
  for (auto& run : crc::all_criteria()) {
    auto r = run();
    std::cout << crc::criterion_line(r) << std::endl;
    failed += !r.pass;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all criteria passed") << std::endl;
  return failed ? 1 : 0;
}
