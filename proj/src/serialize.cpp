#include "nearsq/serialize.hpp"

#include "nearsq/error.hpp"

namespace nearsq {

using nlohmann::json;

namespace {

json IntList(const std::vector<Int>& values) {
  json out = json::array();
  for (const Int& v : values) out.push_back(ToJson(v));
  return out;
}

std::vector<Int> IntListFromJson(const json& j) {
  std::vector<Int> out;
  for (const auto& item : j) out.push_back(IntFromJson(item));
  return out;
}

}  // namespace

json ToJson(const Int& v) { return v.get_str(); }

Int IntFromJson(const json& j) {
  const std::string& text = j.get_ref<const std::string&>();
  Int out;
  if (text.empty() || out.set_str(text, 10) != 0) {
    throw Error(Errc::kInvalidArgument, "not a decimal integer: " + text);
  }
  return out;
}

json ToJson(const PairWitness& w) {
  return {{"N", ToJson(w.N)},
          {"d", ToJson(w.d)},
          {"e", ToJson(w.e)},
          {"l", ToJson(w.l)}};
}

json ToJson(const WindowCensus& census) {
  json pairs = json::array();
  for (const auto& w : census.pairs) pairs.push_back(ToJson(w));
  return {{"schema_version", 1},
          {"N", ToJson(census.params.N)},
          {"c", census.params.c.ToString()},
          {"divisors", IntList(census.divisors)},
          {"pairs", pairs},
          {"r", census.r()},
          {"unpaired_low", IntList(census.unpaired_low)},
          {"unpaired_high", IntList(census.unpaired_high)}};
}

json ToJson(const MuXY& m) {
  return {{"mu", ToJson(m.mu)},       {"x", ToJson(m.x)},
          {"y", ToJson(m.y)},         {"c_gap", ToJson(m.c_gap)},
          {"mu_tilde", ToJson(m.mu_tilde)}, {"t", ToJson(m.t)},
          {"d", ToJson(m.source.d)}};
}

json ToJson(const PellExample& ex) {
  json divisors = json::array();
  for (const Int& q : ex.window_divisors) divisors.push_back(ToJson(q));
  return {{"schema_version", 1},
          {"k", ex.k},
          {"X", ToJson(ex.X)},
          {"Y", ToJson(ex.Y)},
          {"n", ToJson(ex.n)},
          {"window_divisors", divisors}};
}

json ToJson(const PellSystem& sys) {
  json rows = json::array();
  for (const auto& row : sys.rows) {
    rows.push_back({{"mu", ToJson(row.mu)},
                    {"base", ToJson(row.base)},
                    {"rhs", ToJson(row.rhs)},
                    {"mu_tilde", ToJson(row.mu_tilde)},
                    {"scaled_base", ToJson(row.scaled_base)},
                    {"scaled_rhs", ToJson(row.scaled_rhs)}});
  }
  json equations = json::array();
  for (std::size_t j : {1u, 2u}) {
    equations.push_back({{"lhs", ToJson(sys.Lhs(j))},
                         {"rhs", ToJson(sys.Rhs(j))},
                         {"scaled_lhs", ToJson(sys.ScaledLhs(j))},
                         {"scaled_rhs", ToJson(sys.ScaledRhs(j))}});
  }
  return {{"rows", rows},
          {"equations", equations},
          {"identities_hold", sys.IdentitiesHold()},
          {"squarefree_coeffs_distinct", sys.squarefree_coeffs_distinct},
          {"rhs_products_distinct", sys.rhs_products_distinct}};
}

namespace {

json Flags(const InstanceReport& r) {
  return {{"pipeline_ok", r.pipeline_ok},
          {"lemma1_ok", r.lemma1_ok},
          {"mu_distinct_ok", r.mu_distinct_ok},
          {"mu_distinct_gate", r.mu_distinct_gate},
          {"mu_tilde_distinct_ok", r.mu_tilde_distinct_ok},
          {"mu_tilde_distinct_gate", r.mu_tilde_distinct_gate},
          {"restrict_gate", r.restrict_gate}};
}

}  // namespace

json ToJson(const InstanceReport& r) {
  json anomalies = json::array();
  for (const auto& a : r.anomalies) {
    anomalies.push_back(
        {{"kind", std::string(AnomalyKindName(a.kind))}, {"detail", a.detail}});
  }
  return {{"schema_version", 1},
          {"N", ToJson(r.N)},
          {"c", r.c.ToString()},
          {"census_size", r.census_size},
          {"r", r.r},
          {"mu_list", IntList(r.mu_list)},
          {"flags", Flags(r)},
          {"pell_system", r.pell_system ? ToJson(*r.pell_system) : json()},
          {"anomalies", anomalies}};
}

json RecordJson(const InstanceReport& r) {
  return {{"schema_version", 1},
          {"N", ToJson(r.N)},
          {"c", r.c.ToString()},
          {"census_size", r.census_size},
          {"r", r.r},
          {"mu_list", IntList(r.mu_list)},
          {"flags", Flags(r)}};
}

json ToJson(const ScanReport& r) {
  json at_least = json::object();
  for (const auto& [t, list] : r.instances_with_r_at_least) {
    at_least[std::to_string(t)] = IntList(list);
  }
  return {{"schema_version", kScanSchemaVersion},
          {"range", {ToJson(r.lo), ToJson(r.hi)}},
          {"c", r.c.ToString()},
          {"max_census_size", r.max_census_size},
          {"max_census_argmax", IntList(r.max_census_argmax)},
          {"max_r", r.max_r},
          {"max_r_argmax", IntList(r.max_r_argmax)},
          {"instances_with_r_at_least", at_least},
          {"instances", r.instances},
          {"pairs", r.pairs},
          {"anomaly_count", r.anomaly_count},
          {"lemma1_violations", r.lemma1_violations},
          {"mu_collision_instances", r.mu_collision_instances},
          {"mu_collision_instances_gated", r.mu_collision_instances_gated},
          {"mu_tilde_collision_instances", r.mu_tilde_collision_instances},
          {"mu_tilde_collision_instances_gated",
           r.mu_tilde_collision_instances_gated},
          {"pell_systems", r.pell_systems},
          {"anomaly_samples", r.anomaly_samples},
          {"next_N", ToJson(r.next_N())}};
}

ScanReport ScanReportFromJson(const json& j) {
  if (j.at("schema_version").get<int>() != kScanSchemaVersion) {
    throw Error(Errc::kCheckpointCorrupt, "unsupported schema_version");
  }
  ScanReport r;
  r.lo = IntFromJson(j.at("range").at(0));
  r.hi = IntFromJson(j.at("range").at(1));
  r.c = Rational::Parse(j.at("c").get<std::string>());
  r.max_census_size = j.at("max_census_size").get<std::size_t>();
  r.max_census_argmax = IntListFromJson(j.at("max_census_argmax"));
  r.max_r = j.at("max_r").get<std::size_t>();
  r.max_r_argmax = IntListFromJson(j.at("max_r_argmax"));
  for (const auto& [key, list] : j.at("instances_with_r_at_least").items()) {
    r.instances_with_r_at_least[std::stoul(key)] = IntListFromJson(list);
  }
  r.instances = j.at("instances").get<std::uint64_t>();
  r.pairs = j.at("pairs").get<std::uint64_t>();
  r.anomaly_count = j.at("anomaly_count").get<std::uint64_t>();
  r.lemma1_violations = j.at("lemma1_violations").get<std::uint64_t>();
  r.mu_collision_instances = j.at("mu_collision_instances").get<std::uint64_t>();
  r.mu_collision_instances_gated =
      j.at("mu_collision_instances_gated").get<std::uint64_t>();
  r.mu_tilde_collision_instances =
      j.at("mu_tilde_collision_instances").get<std::uint64_t>();
  r.mu_tilde_collision_instances_gated =
      j.at("mu_tilde_collision_instances_gated").get<std::uint64_t>();
  r.pell_systems = j.at("pell_systems").get<std::uint64_t>();
  r.anomaly_samples = j.at("anomaly_samples").get<std::vector<std::string>>();
  if (IntFromJson(j.at("next_N")) != r.next_N()) {
    throw Error(Errc::kCheckpointCorrupt, "next_N disagrees with range");
  }
  return r;
}

json ToJson(const Checkpoint& cp) {
  return {{"schema_version", cp.schema_version},
          {"c", cp.report.c.ToString()},
          {"target_hi", ToJson(cp.target_hi)},
          {"next_N", ToJson(cp.report.next_N())},
          {"report", ToJson(cp.report)}};
}

Checkpoint CheckpointFromJson(const json& j) {
  Checkpoint cp;
  try {
    cp.schema_version = j.at("schema_version").get<int>();
    if (cp.schema_version != kScanSchemaVersion) {
      throw Error(Errc::kCheckpointCorrupt,
                  "schema_version " + std::to_string(cp.schema_version));
    }
    cp.target_hi = IntFromJson(j.at("target_hi"));
    cp.report = ScanReportFromJson(j.at("report"));
    if (!(Rational::Parse(j.at("c").get<std::string>()) == cp.report.c) ||
        IntFromJson(j.at("next_N")) != cp.report.next_N()) {
      throw Error(Errc::kCheckpointCorrupt, "header disagrees with report");
    }
  } catch (const Error& err) {
    if (err.code() == Errc::kCheckpointCorrupt) throw;
    throw Error(Errc::kCheckpointCorrupt, err.what());
  } catch (const json::exception& err) {
    throw Error(Errc::kCheckpointCorrupt, err.what());
  }
  return cp;
}

}  // namespace nearsq
