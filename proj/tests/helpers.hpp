#ifndef FFBIAS_TEST_HELPERS_HPP
#define FFBIAS_TEST_HELPERS_HPP

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ffbias/census.hpp"
#include "ffbias/poly.hpp"
#include "ffbias/rng.hpp"

namespace ffbias::test {

// Independent census oracle: plain odometer enumeration with the naive
// term-by-term evaluator, no compiled sweep involved.
inline std::vector<std::uint64_t> naive_census(const MultiPoly& F, unsigned n) {
  FieldPtr K = resolve_eval_field(F, n);
  const unsigned N = F.nvars();
  const std::uint64_t Q = K->size();
  std::vector<std::uint64_t> counts(Q, 0);
  std::vector<std::uint64_t> digits(N, 0);
  std::vector<FieldElement> point;
  for (;;) {
    point.clear();
    for (unsigned j = 0; j < N; ++j) point.push_back(K->element(digits[j]));
    ++counts[F.evaluate(point).index()];
    unsigned j = N;
    while (j-- > 0) {
      if (++digits[j] < Q) break;
      digits[j] = 0;
      if (j == 0) return counts;
    }
    if (N == 0) return counts;
  }
}

inline FieldElement random_element(const FieldPtr& K, SplitMix64& rng) {
  return K->element(rng.next_below(K->size()));
}

inline FieldElement random_nonzero(const FieldPtr& K, SplitMix64& rng) {
  return K->element(1 + rng.next_below(K->size() - 1));
}

// Runs the CLI binary (path from FFBIAS_BIN) and captures stdout + exit code.
struct CliResult {
  int exit_code = -1;
  std::string out;
};

inline CliResult run_cli(const std::string& args) {
  const char* bin = std::getenv("FFBIAS_BIN");
  if (!bin) return {};
  std::string out_file = "cli_out.tmp";
  std::string cmd = std::string(bin) + " " + args + " > " + out_file + " 2>cli_err.tmp";
  int rc = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = rc == -1 ? -1 : WEXITSTATUS(rc);
  std::ifstream f(out_file, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  r.out = ss.str();
  return r;
}

}  // namespace ffbias::test

#endif
