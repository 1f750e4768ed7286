// Runs each acceptance criterion at full size and prints one PASS/FAIL line
// with its timing. Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "properties.hpp"

namespace {

struct Criterion {
  const char* name;
  double limit_s;
  std::function<recap::props::Outcome()> run;
};

}  // namespace

int main() {
  using namespace recap::props;
  const std::vector<Criterion> criteria = {
      {"toy-golden", 1, [] { return toy_golden(); }},
      {"tier-oracle-432", 1, [] { return tier_oracle(); }},
      {"flow-matrix", 5, [] { return flow_matrix(); }},
      {"fault-injection-200", 10, [] { return fault_injection(20250301, 200); }},
      {"law-monotonicity-1000", 10, [] { return law_monotonicity(7, 1000, 8); }},
      {"route-properties-10000", 30, [] { return route_properties(101, 10000); }},
      {"replay-equivalence-1000", 30, [] { return replay_equivalence(9001, 1000, 40); }},
      {"conservatism-432", 1, [] { return conservatism(); }},
      {"reporting-partition-500", 10, [] { return reporting_partition(77, 500); }},
      {"cli-corpus", 5, [] { return cli_contract(); }},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool pass = o.ok && secs < c.limit_s;
    if (!pass) ++failed;
    std::string why = o.detail;
    if (o.ok && !pass) why = "over time limit; " + why;
    std::printf("%s %-24s %8.1f ms (limit %.0f s) %zu cases: %s\n", pass ? "PASS" : "FAIL", c.name, secs * 1000,
                c.limit_s, o.cases, why.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
