#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace cli {

std::vector<std::string> selftest_suites();

/// Runs one suite (or "all") with instances drawn from `seed` and prints a
/// table with one row per check. The output contains no timings, so equal
/// seeds give byte-identical text at any thread count. Returns 0 when every
/// check passes and 1 otherwise.
int run_selftest(const std::string& suite, std::uint64_t seed, std::ostream& out);

}  // namespace cli
