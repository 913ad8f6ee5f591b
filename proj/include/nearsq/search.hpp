#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nearsq/arith.hpp"
#include "nearsq/decompose.hpp"
#include "nearsq/pell.hpp"
#include "nearsq/window.hpp"

namespace nearsq {

enum class AnomalyKind {
  kWitnessIdentity,
  kTripleIdentity,
  kRestrict,
  kParametrization,
  kParametrizationCrossCheck,
  kInfeasible,
  kDecompositionIdentity,
  kLemma1,
  kMuCollision,
  kMuTildeCollision,
  kAlmostSquareIdentity,
  kPellIdentity,
  kPellRhsZero,
  kError,
};

std::string_view AnomalyKindName(AnomalyKind kind);

struct Anomaly {
  AnomalyKind kind = AnomalyKind::kError;
  std::string detail;

  friend bool operator==(const Anomaly&, const Anomaly&) = default;
};

struct InstanceReport {
  Int N;
  Rational c;
  std::size_t census_size = 0;
  std::size_t r = 0;
  bool restrict_gate = false;  // N ≥ 4c²
  bool pipeline_ok = true;
  bool lemma1_ok = true;
  bool mu_distinct_ok = true;
  bool mu_distinct_gate = false;  // N > 32c⁶
  bool mu_tilde_distinct_ok = true;
  bool mu_tilde_distinct_gate = false;  // N > 512c¹⁰
  // Canonical μ of each pair that has a feasible decomposition, ascending d.
  std::vector<Int> mu_list;
  std::optional<PellSystem> pell_system;
  std::vector<Anomaly> anomalies;
};

struct VerifyOptions {
  std::optional<Factorization> factors;  // factorization of N
  bool cross_check_parametrizations = true;
};

// Runs census, witnesses, restrict, triples, parametrizations,
// decompositions, distinct μ(y−x)², μ/μ̃ distinctness and, for r ≥ 3, the Pell
// system built from the first three pairs. Failures become anomalies.
// Throws kSizeBudgetExceeded when N cannot be factored.
InstanceReport VerifyInstance(const Int& N, const Rational& c,
                              const VerifyOptions& options = {});

// Collision counts from the distinctness checks are reported whether or not
// the thresholds hold; anomalies only count collisions above them.
struct ScanReport {
  Int lo;
  Int hi;  // last processed N
  Rational c;
  std::size_t max_census_size = 0;
  std::vector<Int> max_census_argmax;
  std::size_t max_r = 0;
  std::vector<Int> max_r_argmax;
  // threshold → N with r ≥ threshold, for every threshold in
  // [record_min_r, max_r].
  std::map<std::size_t, std::vector<Int>> instances_with_r_at_least;
  std::uint64_t instances = 0;
  std::uint64_t pairs = 0;
  std::uint64_t anomaly_count = 0;
  std::uint64_t lemma1_violations = 0;
  std::uint64_t mu_collision_instances = 0;
  std::uint64_t mu_collision_instances_gated = 0;
  std::uint64_t mu_tilde_collision_instances = 0;
  std::uint64_t mu_tilde_collision_instances_gated = 0;
  std::uint64_t pell_systems = 0;
  // First anomalies encountered, ascending N, capped at kAnomalySampleCap.
  std::vector<std::string> anomaly_samples;

  Int next_N() const { return hi + 1; }

  friend bool operator==(const ScanReport&, const ScanReport&) = default;
};

inline constexpr std::size_t kAnomalySampleCap = 32;
inline constexpr int kScanSchemaVersion = 1;

// Empty report covering no values yet; hi = lo − 1.
ScanReport EmptyScanReport(const Int& lo, const Rational& c);

// Folds one instance into the report. N must equal report.next_N().
void Accumulate(ScanReport& report, const InstanceReport& instance,
                std::size_t record_min_r = 3);

// Combines reports over adjacent ranges [a, b] and [b + 1, c].
ScanReport Merge(const ScanReport& left, const ScanReport& right);

struct ScanOptions {
  std::size_t record_min_r = 3;
  // Instances with r ≥ min_pairs_to_log are passed to on_record.
  std::size_t min_pairs_to_log = 3;
  std::function<void(const InstanceReport&)> on_record;
  std::optional<std::filesystem::path> checkpoint_path;
  unsigned parallelism = 1;
  std::uint64_t batch_size = 1000;
  // Limits above this fall back to per-N factorization.
  std::uint64_t sieve_limit = 100'000'000;
  // Stop after this many batches (resume later from the checkpoint).
  std::optional<std::uint64_t> max_batches;
};

// Scans [N_lo, N_hi]. With a checkpoint path, an existing checkpoint for
// the same c and range is resumed and a new one is written atomically after
// every wave of batches. Throws kCheckpointCorrupt on a mismatched file.
ScanReport Scan(const Int& N_lo, const Int& N_hi, const Rational& c,
                const ScanOptions& options = {});

struct Checkpoint {
  int schema_version = kScanSchemaVersion;
  Int target_hi;
  ScanReport report;
};

void WriteCheckpoint(const std::filesystem::path& path, const Checkpoint& cp);
Checkpoint ReadCheckpoint(const std::filesystem::path& path);

}  // namespace nearsq
