// One line per acceptance criterion; exit status 1 when any fails.

#include <chrono>
#include <cstdio>
#include <sstream>
#include <string>

#include "rittcalc/cli.hpp"
#include "rittcalc/verify.hpp"

using namespace rittcalc;

namespace {

// Wall-time limits in seconds, where the criterion states one.
double time_limit(int id) {
  switch (id) {
    case 1: return 10.0;
    case 2: return 60.0;
    case 10: return 30.0;
    default: return 0.0;
  }
}

std::string describe(const verify::Check& c) {
  char buf[256];
  if (c.relation == "in")
    std::snprintf(buf, sizeof buf, "%s = %.6g in [%.12g, %.12g]", c.name.c_str(), c.value, c.bound, c.bound2);
  else
    std::snprintf(buf, sizeof buf, "%s = %.6g %s %.12g", c.name.c_str(), c.value, c.relation.c_str(), c.bound);
  return buf;
}

bool line(int id, const std::string& title, bool pass, const std::string& detail) {
  std::printf("[%s] %2d %-30s %s\n", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  std::fflush(stdout);
  return pass;
}

}  // namespace

int main() {
  bool all = true;
  for (int id = 1; id <= verify::kCriteria; ++id) {
    const verify::CriterionResult r = verify::run_criterion(id);
    const double limit = time_limit(id);
    const bool in_time = limit == 0.0 || r.seconds < limit;
    std::string detail = r.headline() ? describe(*r.headline()) : "no checks";
    char t[64];
    std::snprintf(t, sizeof t, "; %zu checks; %.2f s", r.checks.size(), r.seconds);
    detail += t;
    if (limit > 0.0) {
      std::snprintf(t, sizeof t, " (limit %.0f s)", limit);
      detail += t;
    }
    for (const verify::Check& c : r.checks)
      if (!c.passed && &c != r.headline()) detail += "; also failed: " + describe(c);
    all = line(id, r.title, r.passed() && in_time, detail) && all;
  }

  // verify all, twice, with the same seed and no timestamp.
  std::ostringstream a, b, err;
  const auto start = std::chrono::steady_clock::now();
  const int ca = cli::run({"verify", "all", "--no-timestamp"}, a, err);
  const int cb = cli::run({"verify", "all", "--no-timestamp"}, b, err);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool same = a.str() == b.str() && !a.str().empty();
  char d[160];
  std::snprintf(d, sizeof d, "verify all twice: %s JSON (%zu bytes), exit codes %d and %d; %.2f s",
                same ? "identical" : "different", a.str().size(), ca, cb, secs);
  all = line(12, "determinism", same && ca == 0 && cb == 0, d) && all;

  return all ? 0 : 1;
}
