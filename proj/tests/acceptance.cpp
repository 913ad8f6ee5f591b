// Acceptance criteria runner. Prints one PASS/FAIL line per criterion.
//   acceptance                 run all
//   acceptance --criterion K   run only K

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "nearsq/decompose.hpp"
#include "nearsq/error.hpp"
#include "nearsq/pell.hpp"
#include "nearsq/search.hpp"
#include "nearsq/window.hpp"
#include "oracles.hpp"

namespace nearsq {
namespace {

constexpr long kSweepLimit = 20000;
constexpr long kDistinctFrom = 23328;  // 32·3⁶
constexpr long kDistinctTo = 60000;
constexpr double kBoundsRelTol = 1e-4;
constexpr double kPellSeconds = 1.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Census of every N in the sweep for both c values, computed once.
struct Sweep {
  struct Item {
    long N;
    long c;
    WindowCensus census;
  };
  std::vector<Item> items;
};

const Sweep& SweepData() {
  static const Sweep sweep = [] {
    Sweep s;
    for (long c : {3L, 5L}) {
      for (long N = 2; N <= kSweepLimit; ++N) {
        s.items.push_back({N, c, ComputeWindowCensus(WindowParams::Make(N, c))});
      }
    }
    return s;
  }();
  return sweep;
}

Outcome CensusOracle() {
  std::size_t mismatches = 0, checked = 0;
  for (const auto& item : SweepData().items) {
    const auto want = testing::NaiveWindowDivisors(item.N, item.c, 1);
    bool same = want.size() == item.census.divisors.size();
    for (std::size_t i = 0; same && i < want.size(); ++i) {
      same = item.census.divisors[i] == want[i];
    }
    if (!same) ++mismatches;
    ++checked;
  }
  return {mismatches == 0, std::to_string(checked) + " censuses, " +
                               std::to_string(mismatches) + " mismatches"};
}

Outcome PairIdentities() {
  std::size_t pairs = 0, violations = 0;
  for (const auto& item : SweepData().items) {
    const bool gate = item.N >= 4 * item.c * item.c;
    for (const auto& w : item.census.pairs) {
      ++pairs;
      const Int& N = w.N;
      const Int &d = w.d, &e = w.e, &l = w.l;
      const bool ok = (N - d) * (N + e) == N * N && e * d == (e - d) * N &&
                      l * (N - d) == d * d &&
                      (2 * d + l) * (2 * d + l) + (2 * N) * (2 * N) ==
                          (2 * N + l) * (2 * N + l) &&
                      (!gate || l <= 2 * item.c * item.c);
      if (!ok) ++violations;
    }
  }
  return {violations == 0, std::to_string(pairs) + " pairs, " +
                               std::to_string(violations) + " violations"};
}

Outcome Feasibility() {
  std::size_t pairs = 0, entries = 0, violations = 0;
  for (const auto& item : SweepData().items) {
    const long c = item.c;
    if (item.N < 4 * c * c) continue;
    for (const auto& w : item.census.pairs) {
      ++pairs;
      try {
        const auto decs = Decompose(w, c);
        for (const MuXY& m : decs.all) {
          ++entries;
          const Int& N = w.N;
          const bool ok = 2 * N == m.mu * m.x * m.y &&
                          2 * (N - w.d) == m.mu * m.x * m.x &&
                          2 * (N + w.e) == m.mu * m.y * m.y &&
                          m.mu <= 4 * c * c && m.y - m.x >= 1 &&
                          m.y - m.x <= 2 * c;
          if (!ok) ++violations;
        }
      } catch (const Error&) {
        ++violations;
      }
    }
  }
  return {violations == 0, std::to_string(pairs) + " pairs, " +
                               std::to_string(entries) + " decompositions, " +
                               std::to_string(violations) + " violations"};
}

Outcome Lemma1() {
  std::size_t instances = 0, violations = 0;
  for (const auto& item : SweepData().items) {
    if (item.census.r() < 2) continue;
    ++instances;
    std::vector<MuXY> base;
    std::set<Int> values;
    for (const auto& w : item.census.pairs) {
      base.push_back(DecompositionFamily(w).front());
      values.insert(base.back().mu * base.back().c_gap * base.back().c_gap);
    }
    if (values.size() != base.size() || !CheckLemma1(base).ok) ++violations;
  }
  return {violations == 0, std::to_string(instances) +
                               " instances with r >= 2, " +
                               std::to_string(violations) + " violations"};
}

Outcome MuDistinct() {
  std::size_t instances = 0, multi = 0, collisions = 0;
  for (long N = kDistinctFrom + 1; N <= kDistinctTo; ++N) {
    ++instances;
    const auto census = ComputeWindowCensus(WindowParams::Make(N, 3));
    if (census.r() < 2) continue;
    ++multi;
    std::vector<std::pair<Int, Int>> mu_by_pair;  // (μ, d)
    for (const auto& w : census.pairs) {
      for (const MuXY& m : Decompose(w, 3).all) mu_by_pair.emplace_back(m.mu, w.d);
    }
    bool shared = false;
    for (std::size_t i = 0; i < mu_by_pair.size() && !shared; ++i) {
      for (std::size_t j = i + 1; j < mu_by_pair.size(); ++j) {
        if (mu_by_pair[i].first == mu_by_pair[j].first &&
            mu_by_pair[i].second != mu_by_pair[j].second) {
          shared = true;
          break;
        }
      }
    }
    if (shared || !CheckMuDistinctness([&] {
          std::vector<MuXY> all;
          for (const auto& w : census.pairs) {
            for (auto& m : Decompose(w, 3).all) all.push_back(m);
          }
          return all;
        }(), 3, N).raw_ok) {
      ++collisions;
    }
  }
  return {collisions == 0,
          "N in (" + std::to_string(kDistinctFrom) + ", " +
              std::to_string(kDistinctTo) + "]: " + std::to_string(instances) +
              " instances, " + std::to_string(multi) + " with r >= 2, " +
              std::to_string(collisions) + " shared-mu instances"};
}

Outcome WorkedInstance() {
  const auto census = ComputeWindowCensus(WindowParams::Make(60, 3));
  std::vector<MuXY> canonical;
  std::vector<std::array<long, 3>> got;
  for (const auto& w : census.pairs) {
    canonical.push_back(Decompose(w, 3).canonical);
    got.push_back({canonical.back().mu.get_si(), canonical.back().x.get_si(),
                   canonical.back().y.get_si()});
  }
  const std::vector<std::array<long, 3>> want{{1, 10, 12}, {6, 4, 5}, {10, 3, 4}};
  bool ok = census.r() == 3 && got == want;
  std::string detail = "r = " + std::to_string(census.r());
  if (ok) {
    const PellSystem sys = BuildPellSystem(canonical);
    const Int lhs1 = 1 * 22 * 22 - 6 * 9 * 9;   // 484 − 486
    const Int lhs2 = 1 * 22 * 22 - 10 * 7 * 7;  // 484 − 490
    ok = sys.Lhs(1) == lhs1 && lhs1 == -2 && sys.Rhs(1) == -2 &&
         sys.Lhs(2) == lhs2 && lhs2 == -6 && sys.Rhs(2) == -6 &&
         sys.IdentitiesHold() && sys.Rhs(1) != 0 && sys.Rhs(2) != 0;
    detail += ", (1,10,12) (6,4,5) (10,3,4), pell " + sys.Lhs(1).get_str() +
              " = " + sys.Rhs(1).get_str() + " and " + sys.Lhs(2).get_str() +
              " = " + sys.Rhs(2).get_str();
  }
  return {ok, detail};
}

Outcome PellFamilyInvariants() {
  const auto start = std::chrono::steady_clock::now();
  std::size_t failures = 0;
  std::vector<PellExample> members;
  for (unsigned k = 1; k <= 50; ++k) {
    try {
      members.push_back(PellFamily(k));
      if (members.back().Violation()) ++failures;
    } catch (const Error&) {
      ++failures;
    }
  }
  const double seconds = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();
  bool ok = failures == 0 && members.size() == 50;
  if (ok) {
    const auto& k1 = members[0];
    const auto& k2 = members[1];
    ok = k1.X == 10 && k1.Y == 7 && k1.n == 9216 &&
         k1.window_divisors == std::array<Int, 3>{96, 144, 128} &&
         k2.X == 58 && k2.Y == 41 && k2.n == 11289600;
  }
  ok = ok && seconds <= kPellSeconds;
  std::ostringstream detail;
  detail << "k = 1..50, " << failures << " invariant failures, "
         << seconds * 1000 << " ms";
  return {ok, detail.str()};
}

Outcome PellCrossCheck() {
  std::vector<unsigned> bad;
  std::string extra;
  for (unsigned k = 1; k <= 8; ++k) {
    const PellExample ex = PellFamily(k);
    const auto census = ComputeWindowCensus(WindowParams::Make(ex.root(), 5),
                                            PellRootFactorization(ex));
    std::vector<Int> above;
    for (const Int& q : census.divisors) {
      if (q >= ex.root()) above.push_back(q);
    }
    std::vector<Int> want(ex.window_divisors.begin(), ex.window_divisors.end());
    std::sort(want.begin(), want.end());
    if (above != want) {
      bad.push_back(k);
      extra += " k=" + std::to_string(k) + " has {";
      for (std::size_t i = 0; i < above.size(); ++i) {
        extra += (i ? ", " : "") + above[i].get_str();
      }
      extra += "}";
    }
  }
  return {bad.empty(), std::to_string(8 - bad.size()) +
                           "/8 members match exactly" + extra};
}

Outcome Bounds() {
  using boost::multiprecision::cpp_bin_float_50;
  const cpp_bin_float_50 c = 3, m = 4 * c * c, lm = log(m);
  const cpp_bin_float_50 turk = m * m * lm * lm * lm * (m * lm) * log(m * lm);
  const cpp_bin_float_50 lc = log(c);
  const cpp_bin_float_50 threshold = pow(c, 6) * lc * lc * lc * lc * lc;

  const double got_turk = TurkLogBound(Rational(3), 1.0);
  const double got_threshold = TheoremLogThreshold(Rational(3), 1.0);
  const double rel_turk =
      std::abs(got_turk / turk.convert_to<double>() - 1.0);
  const double rel_threshold =
      std::abs(got_threshold / threshold.convert_to<double>() - 1.0);
  std::ostringstream detail;
  detail.precision(10);
  detail << "ln Turk bound " << got_turk << " (rel err " << rel_turk
         << "), ln threshold " << got_threshold << " (rel err "
         << rel_threshold << ")";
  return {rel_turk <= kBoundsRelTol && rel_threshold <= kBoundsRelTol,
          detail.str()};
}

Outcome ScanDeterminism() {
  const long lo = 2, hi = 10000;
  const ScanReport whole = Scan(lo, hi, 3);

  std::size_t splits = 0, mismatches = 0;
  for (long split : {2L, 3L, 59L, 60L, 61L, 999L, 1000L, 5000L, 7777L, 9999L}) {
    ++splits;
    if (!(Merge(Scan(lo, split, 3), Scan(split + 1, hi, 3)) == whole)) {
      ++mismatches;
    }
  }
  // Every 50th split point, folding per-instance reports.
  std::vector<InstanceReport> instances;
  for (long N = lo; N <= hi; ++N) instances.push_back(VerifyInstance(N, 3));
  for (long split = lo; split < hi; split += 50) {
    ++splits;
    ScanReport left = EmptyScanReport(lo, 3), right = EmptyScanReport(split + 1, 3);
    for (const auto& inst : instances) {
      Accumulate(inst.N <= split ? left : right, inst);
    }
    if (!(Merge(left, right) == whole)) ++mismatches;
  }

  const auto path = std::filesystem::temp_directory_path() /
                    ("nearsq-acceptance-" + std::to_string(::getpid()) + ".json");
  std::filesystem::remove(path);
  ScanOptions options;
  options.checkpoint_path = path;
  options.batch_size = 1000;
  options.max_batches = 4;
  const ScanReport partial = Scan(lo, hi, 3, options);
  options.max_batches.reset();
  const ScanReport resumed = Scan(lo, hi, 3, options);
  std::filesystem::remove(path);
  const bool resume_ok = partial.next_N() == 4002 && resumed == whole;

  return {mismatches == 0 && resume_ok,
          std::to_string(splits) + " split points, " +
              std::to_string(mismatches) + " mismatches; checkpoint at N = " +
              partial.next_N().get_str() + " resumed " +
              (resume_ok ? "identically" : "DIFFERENTLY")};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace nearsq

int main(int argc, char** argv) {
  using namespace nearsq;
  const std::vector<Criterion> criteria{
      {1, "census oracle equivalence, N <= 20000, c in {3,5}", CensusOracle},
      {2, "pair and Pythagorean identities, l <= 2c^2", PairIdentities},
      {3, "decomposition feasibility for N >= 4c^2", Feasibility},
      {4, "mu*c_gap^2 distinct across pairs", Lemma1},
      {5, "raw mu distinct above 32c^6, c = 3", MuDistinct},
      {6, "worked instance N = 60, c = 3", WorkedInstance},
      {7, "Pell family invariants, k = 1..50", PellFamilyInvariants},
      {8, "Pell family census cross-check, k <= 8, c = 5", PellCrossCheck},
      {9, "log-space bounds vs 50-digit evaluation", Bounds},
      {10, "scan split/merge and checkpoint determinism", ScanDeterminism},
  };

  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion K]\n", argv[0]);
      return 2;
    }
  }

  int failed = 0, ran = 0;
  for (const auto& c : criteria) {
    if (only && c.id != only) continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    std::printf("[%s] criterion %d: %s: %s (%.2f s)\n",
                outcome.pass ? "PASS" : "FAIL", c.id, c.name,
                outcome.detail.c_str(), seconds);
    if (!outcome.pass) ++failed;
  }
  if (ran == 0) {
    std::fprintf(stderr, "no such criterion\n");
    return 2;
  }
  return failed == 0 ? 0 : 1;
}
