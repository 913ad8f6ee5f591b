#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "nearsq/arith.hpp"
#include "nearsq/error.hpp"
#include "nearsq/pell.hpp"
#include "nearsq/search.hpp"
#include "nearsq/serialize.hpp"
#include "nearsq/window.hpp"

namespace nearsq::cli {

namespace {

using nlohmann::json;

enum class Format { kHuman, kJson, kJsonl, kCsv };

struct Config {
  Format format = Format::kHuman;
  double turk_constant = 1.0;

  std::string n;
  std::string c = "3";
  std::string factors_path;

  std::string from;
  std::string to;
  unsigned jobs = 1;
  std::string checkpoint;
  std::size_t min_pairs = 3;
  std::uint64_t batch_size = 1000;

  unsigned k_max = 0;
  bool cross_check = false;
};

Int ParseInt(const std::string& text, const char* flag) {
  Int v;
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos ||
      v.set_str(text, 10) != 0) {
    throw Error(Errc::kInvalidArgument,
                std::string(flag) + " expects a non-negative integer, got '" +
                    text + "'");
  }
  return v;
}

Rational ParseCoefficient(const std::string& text) {
  Rational c = Rational::Parse(text);
  if (c.value() < 1) {
    throw Error(Errc::kInvalidArgument, "--c must be at least 1");
  }
  return c;
}

// One "prime exponent" pair per line; blank lines and '#' comments skipped.
Factorization ReadFactorsFile(const std::string& path, const Int& N) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kInvalidArgument, "cannot open " + path);
  std::vector<PrimePower> primes;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.resize(hash);
    }
    std::istringstream fields(line);
    std::string p, e;
    if (!(fields >> p)) continue;
    std::string extra;
    if (!(fields >> e) || (fields >> extra)) {
      throw Error(Errc::kInvalidArgument,
                  path + ": expected 'prime exponent', got '" + line + "'");
    }
    const Int exponent = ParseInt(e, "exponent");
    if (!exponent.fits_uint_p() || exponent == 0) {
      throw Error(Errc::kInvalidArgument, path + ": bad exponent " + e);
    }
    primes.push_back(
        {ParseInt(p, "prime"), static_cast<unsigned>(exponent.get_ui())});
  }
  return Factorization::Make(N, std::move(primes));
}

std::string Join(const std::vector<Int>& values, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += sep;
    out += values[i].get_str();
  }
  return out;
}

const char* YesNo(bool v) { return v ? "yes" : "no"; }

void PrintInstanceHuman(const InstanceReport& r, std::ostream& out) {
  out << "N                 " << r.N << '\n'
      << "c                 " << r.c.ToString() << '\n'
      << "window divisors   " << r.census_size << '\n'
      << "pairs (r)         " << r.r << '\n'
      << "canonical mu      " << (r.mu_list.empty() ? "-" : Join(r.mu_list, " "))
      << '\n'
      << "pipeline ok       " << YesNo(r.pipeline_ok) << '\n'
      << "mu*gap^2 distinct " << YesNo(r.lemma1_ok) << '\n'
      << "mu distinct       " << YesNo(r.mu_distinct_ok)
      << (r.mu_distinct_gate ? "" : " (below N > 32c^6)") << '\n'
      << "mu~ distinct      " << YesNo(r.mu_tilde_distinct_ok)
      << (r.mu_tilde_distinct_gate ? "" : " (below N > 512c^10)") << '\n'
      << "pell system       " << (r.pell_system ? "built" : "-") << '\n';
  if (r.pell_system) {
    for (std::size_t j : {1u, 2u}) {
      out << "  " << r.pell_system->Lhs(j) << " = " << r.pell_system->Rhs(j)
          << '\n';
    }
  }
  for (const Anomaly& a : r.anomalies) {
    out << "anomaly           " << AnomalyKindName(a.kind) << ' ' << a.detail
        << '\n';
  }
}

constexpr const char* kInstanceCsvHeader =
    "N,c,census_size,r,mu_list,pipeline_ok,lemma1_ok,mu_distinct_ok,"
    "mu_tilde_distinct_ok,anomalies";

void PrintInstanceCsv(const InstanceReport& r, std::ostream& out) {
  out << r.N << ',' << r.c.ToString() << ',' << r.census_size << ',' << r.r
      << ',' << Join(r.mu_list, ";") << ',' << r.pipeline_ok << ','
      << r.lemma1_ok << ',' << r.mu_distinct_ok << ','
      << r.mu_tilde_distinct_ok << ',' << r.anomalies.size() << '\n';
}

int RunCensus(const Config& cfg, std::ostream& out) {
  const Int N = ParseInt(cfg.n, "--n");
  const auto params = WindowParams::Make(N, ParseCoefficient(cfg.c));
  std::optional<Factorization> factors;
  if (!cfg.factors_path.empty()) factors = ReadFactorsFile(cfg.factors_path, N);
  const WindowCensus census = ComputeWindowCensus(params, factors);

  switch (cfg.format) {
    case Format::kJson:
      out << ToJson(census).dump(2) << '\n';
      break;
    case Format::kJsonl:
      out << ToJson(census).dump() << '\n';
      break;
    case Format::kCsv:
      out << "divisor,offset,role\n";
      for (const Int& q : census.divisors) {
        const char* role = "pair";
        if (q == N) {
          role = "center";
        } else if (std::find(census.unpaired_low.begin(),
                             census.unpaired_low.end(),
                             q) != census.unpaired_low.end() ||
                   std::find(census.unpaired_high.begin(),
                             census.unpaired_high.end(),
                             q) != census.unpaired_high.end()) {
          role = "unpaired";
        }
        out << q << ',' << Int(q - N) << ',' << role << '\n';
      }
      break;
    case Format::kHuman:
      out << "N = " << N << ", c = " << params.c.ToString() << ", window ["
          << Int(N - WindowRadius(N, params.c)) << ", "
          << Int(N + WindowRadius(N, params.c)) << "]\n"
          << "divisors (" << census.divisors.size()
          << "): " << Join(census.divisors, " ") << '\n'
          << "pairs (r = " << census.r() << "):\n";
      for (const auto& w : census.pairs) {
        out << "  " << w.low() << " x " << w.high() << "  d=" << w.d
            << " e=" << w.e << " l=" << w.l << '\n';
      }
      out << "unpaired below: "
          << (census.unpaired_low.empty() ? "-" : Join(census.unpaired_low, " "))
          << '\n'
          << "unpaired above: "
          << (census.unpaired_high.empty() ? "-"
                                           : Join(census.unpaired_high, " "))
          << '\n';
      break;
  }
  return kExitOk;
}

int RunVerify(const Config& cfg, std::ostream& out) {
  const Int N = ParseInt(cfg.n, "--n");
  VerifyOptions options;
  if (!cfg.factors_path.empty()) {
    options.factors = ReadFactorsFile(cfg.factors_path, N);
  }
  const InstanceReport r = VerifyInstance(N, ParseCoefficient(cfg.c), options);
  switch (cfg.format) {
    case Format::kJson: out << ToJson(r).dump(2) << '\n'; break;
    case Format::kJsonl: out << ToJson(r).dump() << '\n'; break;
    case Format::kCsv:
      out << kInstanceCsvHeader << '\n';
      PrintInstanceCsv(r, out);
      break;
    case Format::kHuman: PrintInstanceHuman(r, out); break;
  }
  return r.anomalies.empty() ? kExitOk : kExitAnomalies;
}

std::optional<std::filesystem::path> CheckpointPath(const Config& cfg,
                                                    const Rational& c) {
  const char* dir = std::getenv(kCheckpointDirEnv);
  if (cfg.checkpoint.empty()) {
    if (!dir || !*dir) return std::nullopt;
    return std::filesystem::path(dir) /
           ("scan-" + cfg.from + "-" + cfg.to + "-" + c.num().get_str() + "_" +
            c.den().get_str() + ".json");
  }
  std::filesystem::path p(cfg.checkpoint);
  if (p.is_relative() && dir && *dir) p = std::filesystem::path(dir) / p;
  return p;
}

int RunScan(const Config& cfg, std::ostream& out) {
  const Int from = ParseInt(cfg.from, "--from");
  const Int to = ParseInt(cfg.to, "--to");
  const Rational c = ParseCoefficient(cfg.c);

  ScanOptions options;
  options.parallelism = cfg.jobs;
  options.min_pairs_to_log = cfg.min_pairs;
  options.batch_size = cfg.batch_size;
  options.checkpoint_path = CheckpointPath(cfg, c);

  json records = json::array();
  bool header = false;
  options.on_record = [&](const InstanceReport& r) {
    switch (cfg.format) {
      case Format::kJson: records.push_back(RecordJson(r)); break;
      case Format::kJsonl: out << RecordJson(r).dump() << '\n'; break;
      case Format::kCsv:
        if (!header) out << kInstanceCsvHeader << '\n';
        header = true;
        PrintInstanceCsv(r, out);
        break;
      case Format::kHuman:
        out << "N=" << r.N << " census=" << r.census_size << " r=" << r.r
            << " mu=[" << Join(r.mu_list, " ") << "]"
            << (r.anomalies.empty() ? "" : " ANOMALY") << '\n';
        break;
    }
  };
  const ScanReport report = Scan(from, to, c, options);

  switch (cfg.format) {
    case Format::kJson:
      out << json{{"records", records}, {"report", ToJson(report)}}.dump(2)
          << '\n';
      break;
    case Format::kJsonl:
      out << json{{"scan_report", ToJson(report)}}.dump() << '\n';
      break;
    case Format::kCsv:
      if (!header) out << kInstanceCsvHeader << '\n';
      break;
    case Format::kHuman:
      out << "scanned N in [" << report.lo << ", " << report.hi
          << "], c = " << c.ToString() << '\n'
          << "instances         " << report.instances << '\n'
          << "pairs             " << report.pairs << '\n'
          << "max census size   " << report.max_census_size << " at "
          << Join(report.max_census_argmax, " ") << '\n'
          << "max r             " << report.max_r << " at "
          << Join(report.max_r_argmax, " ") << '\n'
          << "mu*gap^2 repeats  " << report.lemma1_violations << '\n'
          << "mu collisions     " << report.mu_collision_instances << " ("
          << report.mu_collision_instances_gated << " above 32c^6)\n"
          << "mu~ collisions    " << report.mu_tilde_collision_instances
          << " (" << report.mu_tilde_collision_instances_gated
          << " above 512c^10)\n"
          << "pell systems      " << report.pell_systems << '\n'
          << "anomalies         " << report.anomaly_count << '\n';
      for (const auto& s : report.anomaly_samples) out << "  " << s << '\n';
      if (report.next_N() <= to) {
        out << "incomplete; resume from N = " << report.next_N() << '\n';
      }
      break;
  }
  return report.anomaly_count == 0 ? kExitOk : kExitAnomalies;
}

struct CrossCheck {
  std::string status;  // "ok", "mismatch" or "skipped"
  std::vector<Int> at_or_above;
};

CrossCheck PellCrossCheck(const PellExample& ex, const Rational& c) {
  CrossCheck out;
  try {
    const Factorization f = PellRootFactorization(ex);
    const WindowCensus census =
        ComputeWindowCensus(WindowParams::Make(ex.root(), c), f);
    for (const Int& q : census.divisors) {
      if (q >= ex.root()) out.at_or_above.push_back(q);
    }
    std::vector<Int> expected(ex.window_divisors.begin(),
                              ex.window_divisors.end());
    std::sort(expected.begin(), expected.end());
    out.status = out.at_or_above == expected ? "ok" : "mismatch";
  } catch (const Error& err) {
    if (err.code() != Errc::kSizeBudgetExceeded) throw;
    out.status = "skipped";
  }
  return out;
}

int RunPellFamily(const Config& cfg, std::ostream& out) {
  if (cfg.k_max == 0) {
    throw Error(Errc::kInvalidArgument, "--k-max must be at least 1");
  }
  const Rational c = ParseCoefficient(cfg.c);
  bool mismatch = false;
  json all = json::array();
  if (cfg.format == Format::kCsv) {
    out << "k,X,Y,n,divisor_1,divisor_2,divisor_3"
        << (cfg.cross_check ? ",cross_check" : "") << '\n';
  }
  for (unsigned k = 1; k <= cfg.k_max; ++k) {
    const PellExample ex = PellFamily(k);
    std::optional<CrossCheck> check;
    if (cfg.cross_check) {
      check = PellCrossCheck(ex, c);
      mismatch |= check->status == "mismatch";
    }
    json j = ToJson(ex);
    if (check) {
      j["cross_check"] = {{"c", c.ToString()},
                          {"status", check->status},
                          {"divisors_at_or_above_root", json::array()}};
      for (const Int& q : check->at_or_above) {
        j["cross_check"]["divisors_at_or_above_root"].push_back(ToJson(q));
      }
    }
    switch (cfg.format) {
      case Format::kJson: all.push_back(std::move(j)); break;
      case Format::kJsonl: out << j.dump() << '\n'; break;
      case Format::kCsv:
        out << k << ',' << ex.X << ',' << ex.Y << ',' << ex.n << ','
            << ex.window_divisors[0] << ',' << ex.window_divisors[1] << ','
            << ex.window_divisors[2];
        if (check) out << ',' << check->status;
        out << '\n';
        break;
      case Format::kHuman:
        out << k << ' ' << ex.X << ' ' << ex.Y << ' ' << ex.n;
        if (check) out << "  cross-check: " << check->status;
        out << '\n';
        break;
    }
  }
  if (cfg.format == Format::kJson) out << all.dump(2) << '\n';
  return mismatch ? kExitAnomalies : kExitOk;
}

int RunBounds(const Config& cfg, std::ostream& out) {
  const Rational c = ParseCoefficient(cfg.c);
  const double turk = TurkLogBound(c, cfg.turk_constant);
  std::optional<double> threshold;
  if (c.value() > 1) threshold = TheoremLogThreshold(c, cfg.turk_constant);

  if (cfg.format == Format::kHuman) {
    out << std::setprecision(8) << "c                     " << c.ToString()
        << '\n'
        << "constant              " << cfg.turk_constant << '\n'
        << "ln turk bound         " << turk << '\n'
        << "ln theorem threshold  ";
    if (threshold) {
      out << *threshold << '\n';
    } else {
      out << "undefined (needs c > 1)\n";
    }
    return kExitOk;
  }
  if (cfg.format == Format::kCsv) {
    out << "c,constant,ln_turk_bound,ln_theorem_threshold\n"
        << c.ToString() << ',' << std::setprecision(17) << cfg.turk_constant
        << ',' << turk << ',';
    if (threshold) out << *threshold;
    out << '\n';
    return kExitOk;
  }
  const json j = {{"schema_version", 1},
                  {"c", c.ToString()},
                  {"constant", cfg.turk_constant},
                  {"ln_turk_bound", turk},
                  {"ln_theorem_threshold",
                   threshold ? json(*threshold) : json()}};
  out << (cfg.format == Format::kJson ? j.dump(2) : j.dump()) << '\n';
  return kExitOk;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Divisors of N^2 near N: census, proof pipeline and scans"};
  app.require_subcommand(1);
  app.fallthrough();
  Config cfg;

  const std::map<std::string, Format> formats{{"human", Format::kHuman},
                                              {"json", Format::kJson},
                                              {"jsonl", Format::kJsonl},
                                              {"csv", Format::kCsv}};
  app.add_option("--format", cfg.format, "Output format")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  app.add_option("--constant", cfg.turk_constant,
                 "Constant C in the log-space bounds")
      ->check(CLI::PositiveNumber);

  auto* census = app.add_subcommand("census", "Divisors of N^2 in the window");
  census->add_option("--n", cfg.n, "N (so n = N^2)")->required();
  census->add_option("--c", cfg.c, "Window coefficient p or p/s")->required();
  census->add_option("--factors", cfg.factors_path,
                     "File of 'prime exponent' lines factoring N");

  auto* verify = app.add_subcommand("verify", "Run the full pipeline on N");
  verify->add_option("--n", cfg.n, "N (so n = N^2)")->required();
  verify->add_option("--c", cfg.c, "Window coefficient p or p/s")->required();
  verify->add_option("--factors", cfg.factors_path,
                     "File of 'prime exponent' lines factoring N");

  auto* scan = app.add_subcommand("scan", "Verify every N in a range");
  scan->add_option("--from", cfg.from, "First N")->required();
  scan->add_option("--to", cfg.to, "Last N")->required();
  scan->add_option("--c", cfg.c, "Window coefficient p or p/s")->required();
  scan->add_option("--jobs", cfg.jobs, "Concurrent batches")
      ->check(CLI::Range(1u, 1024u));
  scan->add_option("--checkpoint", cfg.checkpoint, "Checkpoint file");
  scan->add_option("--min-pairs", cfg.min_pairs,
                   "Log instances with at least this many pairs");
  scan->add_option("--batch-size", cfg.batch_size, "N values per batch")
      ->check(CLI::PositiveNumber);

  auto* pell = app.add_subcommand("pell-family",
                                  "Members of the X^2 - 2Y^2 = 2 family");
  pell->add_option("--k-max", cfg.k_max, "Last family index")->required();
  pell->add_option("--c", cfg.c, "Window coefficient for --cross-check")
      ->default_val("5");
  pell->add_flag("--cross-check", cfg.cross_check,
                 "Compare against a window census of each member");

  auto* bounds = app.add_subcommand("bounds", "Log-space bound evaluation");
  bounds->add_option("--c", cfg.c, "Window coefficient p or p/s")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (census->parsed()) return RunCensus(cfg, out);
    if (verify->parsed()) return RunVerify(cfg, out);
    if (scan->parsed()) return RunScan(cfg, out);
    if (pell->parsed()) return RunPellFamily(cfg, out);
    if (bounds->parsed()) return RunBounds(cfg, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    if (e.code() == Errc::kSizeBudgetExceeded) {
      err << "hint: N is too large to factor here; pass its factorization "
             "with --factors FILE\n";
    }
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace nearsq::cli
