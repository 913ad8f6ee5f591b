#include "nearsq/search.hpp"

#include <algorithm>
#include <exception>
#include <fstream>
#include <memory>
#include <sstream>
#include <thread>

#include "nearsq/error.hpp"
#include "nearsq/serialize.hpp"

namespace nearsq {

std::string_view AnomalyKindName(AnomalyKind kind) {
  switch (kind) {
    case AnomalyKind::kWitnessIdentity: return "WitnessIdentity";
    case AnomalyKind::kTripleIdentity: return "TripleIdentity";
    case AnomalyKind::kRestrict: return "Restrict";
    case AnomalyKind::kParametrization: return "Parametrization";
    case AnomalyKind::kParametrizationCrossCheck:
      return "ParametrizationCrossCheck";
    case AnomalyKind::kInfeasible: return "Infeasible";
    case AnomalyKind::kDecompositionIdentity: return "DecompositionIdentity";
    case AnomalyKind::kLemma1: return "Lemma1";
    case AnomalyKind::kMuCollision: return "MuCollision";
    case AnomalyKind::kMuTildeCollision: return "MuTildeCollision";
    case AnomalyKind::kAlmostSquareIdentity: return "AlmostSquareIdentity";
    case AnomalyKind::kPellIdentity: return "PellIdentity";
    case AnomalyKind::kPellRhsZero: return "PellRhsZero";
    case AnomalyKind::kError: return "Error";
  }
  return "Unknown";
}

namespace {

std::string PairLabel(const PairWitness& w) {
  return "d=" + w.d.get_str() + " e=" + w.e.get_str();
}

bool HasEntry(const std::vector<MuXY>& family, const Int& mu, const Int& x,
              const Int& y) {
  return std::any_of(family.begin(), family.end(), [&](const MuXY& m) {
    return m.mu == mu && m.x == x && m.y == y;
  });
}

bool IsPipelineKind(AnomalyKind kind) {
  switch (kind) {
    case AnomalyKind::kWitnessIdentity:
    case AnomalyKind::kTripleIdentity:
    case AnomalyKind::kRestrict:
    case AnomalyKind::kParametrization:
    case AnomalyKind::kParametrizationCrossCheck:
    case AnomalyKind::kInfeasible:
    case AnomalyKind::kDecompositionIdentity:
    case AnomalyKind::kError:
      return true;
    default:
      return false;
  }
}

// Per-pair part of the pipeline. Returns the unconstrained family.
std::vector<MuXY> CheckPair(const PairWitness& w, const Rational& c,
                            bool restrict_gate, bool cross_check,
                            std::vector<Anomaly>& anomalies) {
  const std::string label = PairLabel(w);
  if (!w.IdentitiesHold()) {
    anomalies.push_back({AnomalyKind::kWitnessIdentity, label});
  }
  if (restrict_gate && !CheckRestrict(w, c)) {
    anomalies.push_back(
        {AnomalyKind::kRestrict, label + " l=" + w.l.get_str()});
  }

  std::vector<MuXY> family;
  try {
    const PythTriple triple = MakePythTriple(w);
    family = DecompositionFamily(w);
    for (const MuXY& m : family) {
      if (!m.IdentitiesHold()) {
        anomalies.push_back({AnomalyKind::kDecompositionIdentity,
                             label + " mu=" + m.mu.get_str()});
      }
    }
    if (cross_check) {
      for (const PythParam& p : Parametrizations(triple)) {
        if (!p.Reproduces(triple)) {
          anomalies.push_back({AnomalyKind::kParametrization, label});
          continue;
        }
        // Case1 gives (2λ, v, u); Case2 gives (λ, u − v, u + v).
        const bool found =
            p.case_tag == PythCase::kCase1
                ? HasEntry(family, 2 * p.lambda, p.v, p.u)
                : HasEntry(family, p.lambda, p.u - p.v, p.u + p.v);
        if (!found) {
          anomalies.push_back({AnomalyKind::kParametrizationCrossCheck,
                               label + " lambda=" + p.lambda.get_str()});
        }
      }
    }
  } catch (const Error& err) {
    const AnomalyKind kind =
        err.code() == Errc::kEmptyParametrization
            ? AnomalyKind::kParametrization
            : AnomalyKind::kError;
    if (err.code() == Errc::kSizeBudgetExceeded) throw;
    anomalies.push_back({kind, label + ": " + err.what()});
  }
  return family;
}

}  // namespace

InstanceReport VerifyInstance(const Int& N, const Rational& c,
                              const VerifyOptions& options) {
  InstanceReport report;
  report.N = N;
  report.c = c;
  const WindowCensus census =
      ComputeWindowCensus(WindowParams::Make(N, c), options.factors);
  report.census_size = census.divisors.size();
  report.r = census.r();
  report.restrict_gate = MeetsRestrictGate(N, c);

  std::vector<MuXY> base_entries;  // t = 1 per pair, always present
  std::vector<MuXY> feasible;
  std::vector<std::optional<MuXY>> canonical;
  for (const PairWitness& w : census.pairs) {
    std::vector<MuXY> family = CheckPair(
        w, c, report.restrict_gate, options.cross_check_parametrizations,
        report.anomalies);
    if (family.empty()) {
      canonical.emplace_back();
      continue;
    }
    base_entries.push_back(family.front());
    std::optional<MuXY> first;
    for (MuXY& m : family) {
      if (!m.Feasible(c)) continue;
      if (!first) first = m;
      feasible.push_back(std::move(m));
    }
    if (!first && report.restrict_gate) {
      report.anomalies.push_back({AnomalyKind::kInfeasible, PairLabel(w)});
    }
    if (first) report.mu_list.push_back(first->mu);
    canonical.push_back(std::move(first));
  }

  const Lemma1Report lemma1 = CheckLemma1(base_entries);
  report.lemma1_ok = lemma1.ok;
  if (!lemma1.ok) {
    const auto [i, j] = *lemma1.colliding_pair;
    report.anomalies.push_back(
        {AnomalyKind::kLemma1, PairLabel(base_entries[i].source) + " vs " +
                                   PairLabel(base_entries[j].source)});
  }

  try {
    const MuDistinctness mu = CheckMuDistinctness(feasible, c, N);
    report.mu_distinct_ok = mu.raw_ok;
    report.mu_tilde_distinct_ok = mu.squarefree_ok;
    report.mu_distinct_gate = mu.raw_gate;
    report.mu_tilde_distinct_gate = mu.squarefree_gate;
    for (const MuViolation& v : mu.violations) {
      const bool raw = v.level == MuLevel::kRaw;
      if (v.almost_square && !v.almost_square->IdentitiesHold()) {
        report.anomalies.push_back(
            {AnomalyKind::kAlmostSquareIdentity, "m=" + v.almost_square->m.get_str()});
      }
      if (raw ? mu.raw_gate : mu.squarefree_gate) {
        report.anomalies.push_back(
            {raw ? AnomalyKind::kMuCollision : AnomalyKind::kMuTildeCollision,
             PairLabel(feasible[v.first].source) + " vs " +
                 PairLabel(feasible[v.second].source) +
                 " share " + v.shared.get_str()});
      }
    }
  } catch (const Error& err) {
    report.anomalies.push_back({AnomalyKind::kError, err.what()});
  }

  if (report.r >= 3 && canonical[0] && canonical[1] && canonical[2]) {
    try {
      PellSystem sys =
          BuildPellSystem({*canonical[0], *canonical[1], *canonical[2]});
      if (!sys.IdentitiesHold()) {
        report.anomalies.push_back({AnomalyKind::kPellIdentity, ""});
      }
      if (sys.Rhs(1) == 0 || sys.Rhs(2) == 0) {
        report.anomalies.push_back({AnomalyKind::kPellRhsZero, ""});
      }
      report.pell_system = std::move(sys);
    } catch (const Error& err) {
      report.anomalies.push_back({AnomalyKind::kPellIdentity, err.what()});
    }
  }

  report.pipeline_ok = std::none_of(
      report.anomalies.begin(), report.anomalies.end(),
      [](const Anomaly& a) { return IsPipelineKind(a.kind); });
  return report;
}

ScanReport EmptyScanReport(const Int& lo, const Rational& c) {
  ScanReport report;
  report.lo = lo;
  report.hi = lo - 1;
  report.c = c;
  return report;
}

void Accumulate(ScanReport& report, const InstanceReport& instance,
                std::size_t record_min_r) {
  if (instance.N != report.next_N() || !(instance.c == report.c)) {
    throw Error(Errc::kInvalidArgument,
                "instance N = " + instance.N.get_str() +
                    " does not extend scan ending at " + report.hi.get_str());
  }
  report.hi = instance.N;
  ++report.instances;
  report.pairs += instance.r;

  if (instance.census_size > report.max_census_size) {
    report.max_census_size = instance.census_size;
    report.max_census_argmax.clear();
  }
  if (instance.census_size == report.max_census_size) {
    report.max_census_argmax.push_back(instance.N);
  }
  if (instance.r > report.max_r) {
    report.max_r = instance.r;
    report.max_r_argmax.clear();
  }
  if (instance.r == report.max_r) report.max_r_argmax.push_back(instance.N);
  for (std::size_t t = record_min_r; t <= instance.r; ++t) {
    report.instances_with_r_at_least[t].push_back(instance.N);
  }

  report.anomaly_count += instance.anomalies.size();
  if (!instance.lemma1_ok) ++report.lemma1_violations;
  if (!instance.mu_distinct_ok) {
    ++report.mu_collision_instances;
    if (instance.mu_distinct_gate) ++report.mu_collision_instances_gated;
  }
  if (!instance.mu_tilde_distinct_ok) {
    ++report.mu_tilde_collision_instances;
    if (instance.mu_tilde_distinct_gate) {
      ++report.mu_tilde_collision_instances_gated;
    }
  }
  if (instance.pell_system) ++report.pell_systems;
  for (const Anomaly& a : instance.anomalies) {
    if (report.anomaly_samples.size() >= kAnomalySampleCap) break;
    report.anomaly_samples.push_back("N=" + instance.N.get_str() + " " +
                                     std::string(AnomalyKindName(a.kind)) +
                                     ": " + a.detail);
  }
}

ScanReport Merge(const ScanReport& left, const ScanReport& right) {
  if (!(left.c == right.c) || left.next_N() != right.lo) {
    throw Error(Errc::kInvalidArgument, "scan reports are not adjacent");
  }
  ScanReport out = left;
  out.hi = right.hi;

  auto merge_max = [](std::size_t& best, std::vector<Int>& argmax,
                      std::size_t other, const std::vector<Int>& other_argmax) {
    if (other > best) {
      best = other;
      argmax = other_argmax;
    } else if (other == best) {
      argmax.insert(argmax.end(), other_argmax.begin(), other_argmax.end());
    }
  };
  // An empty side has max 0 with no achievers, which merges correctly.
  merge_max(out.max_census_size, out.max_census_argmax, right.max_census_size,
            right.max_census_argmax);
  merge_max(out.max_r, out.max_r_argmax, right.max_r, right.max_r_argmax);

  for (const auto& [t, list] : right.instances_with_r_at_least) {
    auto& dst = out.instances_with_r_at_least[t];
    dst.insert(dst.end(), list.begin(), list.end());
  }
  out.instances += right.instances;
  out.pairs += right.pairs;
  out.anomaly_count += right.anomaly_count;
  out.lemma1_violations += right.lemma1_violations;
  out.mu_collision_instances += right.mu_collision_instances;
  out.mu_collision_instances_gated += right.mu_collision_instances_gated;
  out.mu_tilde_collision_instances += right.mu_tilde_collision_instances;
  out.mu_tilde_collision_instances_gated +=
      right.mu_tilde_collision_instances_gated;
  out.pell_systems += right.pell_systems;
  for (const auto& s : right.anomaly_samples) {
    if (out.anomaly_samples.size() >= kAnomalySampleCap) break;
    out.anomaly_samples.push_back(s);
  }
  return out;
}

void WriteCheckpoint(const std::filesystem::path& path, const Checkpoint& cp) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << ToJson(cp).dump(1) << '\n';
    out.flush();
    if (!out) {
      throw Error(Errc::kInvalidArgument,
                  "cannot write checkpoint " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint ReadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::kCheckpointCorrupt, "cannot open " + path.string());
  }
  try {
    return CheckpointFromJson(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& err) {
    throw Error(Errc::kCheckpointCorrupt, path.string() + ": " + err.what());
  }
}

namespace {

struct BatchResult {
  ScanReport report;
  std::vector<InstanceReport> logged;
  std::exception_ptr failure;
};

void RunBatch(const Int& lo, const Int& hi, const Rational& c,
              const SmallestPrimeSieve* sieve, const ScanOptions& options,
              BatchResult& result) {
  try {
    result.report = EmptyScanReport(lo, c);
    for (Int N = lo; N <= hi; ++N) {
      VerifyOptions vo;
      if (sieve) vo.factors = sieve->Factor(static_cast<std::uint32_t>(N.get_ui()));
      InstanceReport inst = VerifyInstance(N, c, vo);
      Accumulate(result.report, inst, options.record_min_r);
      if (options.on_record && inst.r >= options.min_pairs_to_log) {
        result.logged.push_back(std::move(inst));
      }
    }
  } catch (...) {
    result.failure = std::current_exception();
  }
}

}  // namespace

ScanReport Scan(const Int& N_lo, const Int& N_hi, const Rational& c,
                const ScanOptions& options) {
  if (N_lo < 2 || N_lo > N_hi) {
    throw Error(Errc::kInvalidArgument, "scan needs 2 <= from <= to");
  }
  ScanReport report = EmptyScanReport(N_lo, c);
  if (options.checkpoint_path && std::filesystem::exists(*options.checkpoint_path)) {
    Checkpoint cp = ReadCheckpoint(*options.checkpoint_path);
    if (cp.schema_version != kScanSchemaVersion || !(cp.report.c == c) ||
        cp.report.lo != N_lo || cp.target_hi != N_hi ||
        cp.report.hi > N_hi) {
      throw Error(Errc::kCheckpointCorrupt,
                  options.checkpoint_path->string() +
                      " belongs to a different scan");
    }
    report = std::move(cp.report);
  }

  std::unique_ptr<SmallestPrimeSieve> sieve;
  if (N_hi <= options.sieve_limit && N_hi.fits_uint_p() &&
      report.next_N() <= N_hi) {
    sieve = std::make_unique<SmallestPrimeSieve>(
        static_cast<std::uint32_t>(N_hi.get_ui()));
  }

  const unsigned workers = std::max(1u, options.parallelism);
  const Int batch = std::max<std::uint64_t>(1, options.batch_size);
  std::uint64_t batches_done = 0;
  while (report.next_N() <= N_hi) {
    if (options.max_batches && batches_done >= *options.max_batches) break;
    std::vector<std::pair<Int, Int>> wave;
    Int start = report.next_N();
    while (wave.size() < workers && start <= N_hi &&
           !(options.max_batches &&
             batches_done + wave.size() >= *options.max_batches)) {
      Int stop = start + batch - 1;
      if (stop > N_hi) stop = N_hi;
      wave.emplace_back(start, stop);
      start = stop + 1;
    }

    std::vector<BatchResult> results(wave.size());
    if (wave.size() == 1) {
      RunBatch(wave[0].first, wave[0].second, c, sieve.get(), options,
               results[0]);
    } else {
      std::vector<std::jthread> threads;
      for (std::size_t i = 0; i < wave.size(); ++i) {
        threads.emplace_back([&, i] {
          RunBatch(wave[i].first, wave[i].second, c, sieve.get(), options,
                   results[i]);
        });
      }
    }
    for (BatchResult& res : results) {
      if (res.failure) std::rethrow_exception(res.failure);
      report = Merge(report, res.report);
      for (const InstanceReport& inst : res.logged) options.on_record(inst);
    }
    batches_done += wave.size();
    if (options.checkpoint_path) {
      WriteCheckpoint(*options.checkpoint_path, Checkpoint{kScanSchemaVersion, N_hi, report});
    }
  }
  return report;
}

}  // namespace nearsq
