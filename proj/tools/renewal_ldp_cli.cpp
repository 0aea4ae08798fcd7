// Copyright 2026 The renewal_ldp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// renewal_ldp: experiment driver for the renewal large-deviations toolkit.
//
//   renewal_ldp rate     --law LAW --f F --grid a:b:n
//   renewal_ldp scan     --law LAW --grid a:b:n
//   renewal_ldp simulate --law LAW --t T --seed S [--f F]
//   renewal_ldp mc       --law LAW --event EV --t T --n N --sampler S --seed S
//   renewal_ldp verify   --suite crosscheck|tightness|lln|freeenergy|all
//
// Exit codes: 0 success, 2 configuration error, 3 numeric failure,
// 4 a verification check failed.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#ifdef RENEWAL_LDP_VENDORED_JSON
#include <json.hpp>
#else
#include <nlohmann/json.hpp>
#endif

#include "renewal_ldp/bounded_function.hpp"
#include "renewal_ldp/distributions.hpp"
#include "renewal_ldp/errors.hpp"
#include "renewal_ldp/mc.hpp"
#include "renewal_ldp/numerics.hpp"
#include "renewal_ldp/ratefn.hpp"
#include "renewal_ldp/renewal.hpp"

namespace rl = renewal_ldp;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitCheck = 4;

// Seed used by `verify` when none is given; recorded in the report.
constexpr std::uint64_t kVerifyDefaultSeed = 1;

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// JSON numbers go through the same 12-digit rounding as CSV output.
json jnum(double v) {
  if (!std::isfinite(v)) return fmt(v);
  return std::strtod(fmt(v).c_str(), nullptr);
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

struct Config {
  std::string law;
  std::string f = "one";
  std::string grid;
  double t = 0.0;
  std::uint64_t n = 100000;
  std::string event;
  std::string sampler = "naive";
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::string out;
  std::string suite = "all";
  std::optional<std::uint64_t> n_override;
};

// Canonical text of everything that can change an artifact; threads and the
// output path cannot, so they are left out.
class Canon {
 public:
  explicit Canon(std::string cmd) : text_(std::move(cmd)) {}
  Canon& add(const std::string& key, const std::string& value) {
    text_ += "|" + key + "=" + value;
    return *this;
  }
  [[nodiscard]] std::string hash() const { return hex64(fnv1a64(text_)); }

 private:
  std::string text_;
};

std::string header(const Canon& canon, const std::optional<std::uint64_t>& seed) {
  return "# config_hash=" + canon.hash() +
         " seed=" + (seed ? std::to_string(*seed) : std::string("none")) + "\n";
}

unsigned resolve_threads(const Config& cfg) {
  if (cfg.threads) return std::max(1u, *cfg.threads);
  if (const char* env = std::getenv("RENEWAL_LDP_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    throw rl::ParseError(std::string("RENEWAL_LDP_THREADS='") + env +
                         "' is not a positive integer");
  }
  return 1;
}

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 3) throw rl::ParseError("--grid '" + spec + "': expected a:b:n");
  auto num = [&](const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0' || !std::isfinite(v)) {
      throw rl::ParseError("--grid '" + spec + "': '" + s + "' is not a number");
    }
    return v;
  };
  const double a = num(parts[0]);
  const double b = num(parts[1]);
  const double n = num(parts[2]);
  if (!(n >= 1.0) || n != std::floor(n) || n > 1e6) {
    throw rl::ParseError("--grid '" + spec + "': n must be a positive integer");
  }
  if (!(a >= 0.0) || b < a) throw rl::ParseError("--grid '" + spec + "': need 0 <= a <= b");
  return rl::linspace(a, b, static_cast<int>(n));
}

// Writes to --out when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw rl::ParseError("cannot open --out '" + path + "' for writing");
    }
  }
  std::ostream& os() { return file_.is_open() ? file_ : std::cout; }
  [[nodiscard]] bool to_file() const { return file_.is_open(); }

 private:
  std::ofstream file_;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw rl::ParseError(what);
}

// ------------------------------------------------------------------ rate

int cmd_rate(const Config& cfg, bool scan) {
  require(!cfg.law.empty(), "--law is required");
  require(!cfg.grid.empty(), "--grid is required");
  const rl::WaitingLaw law = rl::WaitingLaw::parse(cfg.law);
  const rl::BoundedFunction F = scan ? rl::BoundedFunction::one()
                                     : rl::BoundedFunction::parse(cfg.f);
  const std::vector<double> grid = parse_grid(cfg.grid);
  Canon canon(scan ? "scan" : "rate");
  canon.add("law", law.describe()).add("f", F.name()).add("grid", cfg.grid);

  const rl::RateCurve curve = scan ? rl::affine_scan(law, grid) : rl::rate_curve(law, F, grid);
  const std::string summary = "xi=" + fmt(curve.xi) + " T=" + fmt(curve.T) +
                              " kink=" + (curve.kink ? fmt(*curve.kink) : "none");
  Sink sink(cfg.out);
  auto& os = sink.os();
  os << header(canon, std::nullopt) << "# law=" << law.describe() << " f=" << F.name()
     << "\n# " << summary << "\nm,J,regime\n";
  for (const auto& p : curve.points) {
    os << fmt(p.m) << "," << fmt(p.value) << "," << rl::to_string(p.regime) << "\n";
  }
  if (sink.to_file()) std::cout << summary << "\n";
  return 0;
}

// -------------------------------------------------------------- simulate

int cmd_simulate(const Config& cfg) {
  require(!cfg.law.empty(), "--law is required");
  require(cfg.t > 0.0 && std::isfinite(cfg.t), "--t must be positive");
  require(cfg.seed.has_value(), "--seed is required");
  const rl::WaitingLaw law = rl::WaitingLaw::parse(cfg.law);
  const rl::BoundedFunction F = rl::BoundedFunction::parse(cfg.f);
  Canon canon("simulate");
  canon.add("law", law.describe()).add("t", fmt(cfg.t)).add("f", F.name());

  rl::RandomStream rng(*cfg.seed);
  const rl::RenewalPath path = rl::simulate(law, cfg.t, rng);
  const std::size_t N = rl::counting(path);
  const auto& a = path.arrivals();
  const double last = N >= 2 ? a[N - 2] : 0.0;
  const double A = cfg.t - last;
  const double B = a[N - 1] - cfg.t;
  const double C = rl::cumulative(path, [&F](double tau) { return F(tau); });
  const std::string summary = "N=" + std::to_string(N) + " A=" + fmt(A) + " B=" + fmt(B) +
                              " C=" + fmt(C);

  Sink sink(cfg.out);
  auto& os = sink.os();
  os << header(canon, cfg.seed) << "# horizon=" << fmt(cfg.t) << "\nindex,arrival\n";
  for (std::size_t i = 0; i < a.size(); ++i) os << (i + 1) << "," << fmt(a[i]) << "\n";
  os << "# " << summary << "\n";
  if (sink.to_file()) std::cout << summary << "\n";
  return 0;
}

// -------------------------------------------------------------------- mc

int cmd_mc(const Config& cfg) {
  require(!cfg.law.empty(), "--law is required");
  require(!cfg.event.empty(), "--event is required");
  require(cfg.t > 0.0 && std::isfinite(cfg.t), "--t must be positive");
  require(cfg.seed.has_value(), "--seed is required");
  const rl::WaitingLaw law = rl::WaitingLaw::parse(cfg.law);
  const rl::Event event = rl::Event::parse(cfg.event);
  const rl::SamplerKind sampler = rl::parse_sampler(cfg.sampler);
  rl::McOptions opts;
  opts.F = rl::BoundedFunction::parse(cfg.f);
  opts.threads = resolve_threads(cfg);
  Canon canon("mc");
  canon.add("law", law.describe())
      .add("event", event.describe())
      .add("t", fmt(cfg.t))
      .add("n", std::to_string(cfg.n))
      .add("sampler", cfg.sampler);
  if (event.kind == rl::EventKind::kCumulBand) canon.add("f", opts.F.name());

  rl::RandomStream rng(*cfg.seed);
  const rl::LdpEstimate e = rl::estimate(law, event, cfg.t, cfg.n, rng, sampler, opts);
  Sink sink(cfg.out);
  auto& os = sink.os();
  os << header(canon, cfg.seed)
     << "t,kind,m,delta,sampler,n,p_hat,std_err,rate_hat,censored\n"
     << fmt(e.t) << "," << rl::to_string(e.event.kind) << "," << fmt(e.event.m) << ","
     << fmt(e.event.delta) << "," << rl::to_string(e.sampler) << "," << e.n_samples << ","
     << fmt(e.p_hat) << "," << fmt(e.std_err) << "," << fmt(e.rate_hat) << ","
     << (e.censored ? 1 : 0) << "\n";
  return 0;
}

// ---------------------------------------------------------------- verify

json suite_crosscheck(const rl::WaitingLaw& law) {
  double worst_closed = 0.0;
  double worst_var = 0.0;
  json failures = json::array();
  for (double m : rl::linspace(0.05, 2.0, 50)) {
    const double jf = rl::rate_JF(law, rl::BoundedFunction::one(), m);
    const double closed = rl::rate_J1_closed(law, m);
    const double var = rl::variational_crosscheck_J1(law, m);
    auto rel = [](double a, double b) {
      if (std::isinf(a) && std::isinf(b)) return 0.0;
      return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-12});
    };
    const double rc = rel(jf, closed);
    const double rv = rel(jf, var);
    worst_closed = std::max(worst_closed, rc);
    worst_var = std::max(worst_var, rv);
    if (rc > 1e-6 || rv > 1e-6) {
      failures.push_back({{"m", jnum(m)},
                          {"rate_JF", jnum(jf)},
                          {"closed", jnum(closed)},
                          {"variational", jnum(var)}});
    }
  }
  json r;
  r["grid"] = "0.05:2:50";
  r["tolerance"] = jnum(1e-6);
  r["max_rel_closed"] = jnum(worst_closed);
  r["max_rel_variational"] = jnum(worst_var);
  r["failures"] = failures;
  r["pass"] = failures.empty();
  return r;
}

json suite_tightness(const rl::WaitingLaw& law, std::uint64_t n, rl::RandomStream& rng,
                     const rl::McOptions& opts) {
  const rl::TightnessReport rep =
      rl::tightness_check(law, {0.01, 1.5, 2.0, 3.0}, {10.0, 20.0}, n, rng, opts);
  json rows = json::array();
  for (const auto& row : rep.rows) {
    rows.push_back({{"M", jnum(row.M)},
                    {"t", jnum(row.t)},
                    {"frequency", jnum(row.frequency)},
                    {"std_err", jnum(row.std_err)},
                    {"bound", jnum(row.bound)},
                    {"pass", row.pass}});
  }
  return {{"n", n}, {"rows", rows}, {"pass", rep.pass}};
}

json suite_lln(const rl::WaitingLaw& law, double t, std::uint64_t n, rl::RandomStream& rng,
               const rl::McOptions& opts) {
  json out;
  out["t"] = jnum(t);
  out["n"] = n;
  json tilts = json::array();
  bool pass = true;
  for (double c : {0.0, -0.5}) {
    const rl::LlnReport rep = rl::lln_check(law, c, rl::standard_test_functions(), t, n, rng, opts);
    json rows = json::array();
    for (const auto& row : rep.rows) {
      rows.push_back({{"f", row.name},
                      {"limit", jnum(row.limit)},
                      {"estimate", jnum(row.estimate)},
                      {"std_err", jnum(row.std_err)},
                      {"pass", row.pass}});
    }
    tilts.push_back({{"c", jnum(c)}, {"rows", rows}, {"pass", rep.pass}});
    pass = pass && rep.pass;
  }
  out["tilts"] = tilts;
  out["pass"] = pass;
  return out;
}

json suite_freeenergy(const rl::WaitingLaw& law, std::uint64_t n, rl::RandomStream& rng,
                      const rl::McOptions& opts) {
  const std::vector<double> ts{10.0, 20.0};
  const rl::PiecewiseLinear dip = rl::PiecewiseLinear::plateau(-1.0, 0.5, 1.5, 0.1);
  json cases = json::array();
  bool pass = true;
  auto run = [&](const std::string& name, double c, const rl::PiecewiseLinear& phi, double M) {
    const rl::FreeEnergyReport rep = rl::free_energy_check(law, c, phi, M, ts, n, rng, opts);
    json rows = json::array();
    for (const auto& row : rep.rows) {
      rows.push_back({{"t", jnum(row.t)},
                      {"estimate", jnum(row.estimate)},
                      {"std_err", jnum(row.std_err)},
                      {"pass", row.pass}});
    }
    cases.push_back({{"case", name},
                     {"c", jnum(c)},
                     {"M", jnum(M)},
                     {"C_f", jnum(rep.c_f)},
                     {"D_f", jnum(rep.d_f)},
                     {"bound", jnum(rep.bound)},
                     {"rows", rows},
                     {"pass", rep.pass}});
    pass = pass && rep.pass;
  };
  run("dip", 0.0, dip, 10.0);

  // phi = 0, c = 0 has C_f = 1 and must be rejected.
  bool rejected = false;
  std::string message;
  try {
    rl::free_energy_check(law, 0.0, rl::PiecewiseLinear{}, 10.0, ts, n, rng, opts);
  } catch (const rl::NotInGammaError& e) {
    rejected = true;
    message = e.what();
  }
  cases.push_back({{"case", "zero"}, {"rejected", rejected}, {"message", message},
                   {"pass", rejected}});
  pass = pass && rejected;

  // Positive tail weight: double M until C_f < 1.
  const double x = rl::xi(law);
  const double c = std::isfinite(x) ? std::min(0.5, 0.5 * x) : 0.5;
  if (c > 0.0) {
    double M = 1.0;
    while (!(rl::free_energy_cf(law, dip, c, M) < 1.0)) {
      M *= 2.0;
      if (M > 1e6) throw rl::DomainError("free energy: no M makes C_f < 1");
    }
    run("tail", c, dip, M);
  }
  return {{"n", n}, {"cases", cases}, {"pass", pass}};
}

int cmd_verify(const Config& cfg) {
  const std::string law_spec = cfg.law.empty() ? "exp(1)" : cfg.law;
  const rl::WaitingLaw law = rl::WaitingLaw::parse(law_spec);
  const std::string& suite = cfg.suite;
  const bool all = suite == "all";
  require(all || suite == "crosscheck" || suite == "tightness" || suite == "lln" ||
              suite == "freeenergy",
          "--suite '" + suite + "': expected crosscheck, tightness, lln, freeenergy or all");
  const std::uint64_t seed = cfg.seed.value_or(kVerifyDefaultSeed);
  const double t_lln = cfg.t > 0.0 ? cfg.t : 1e4;
  rl::McOptions opts;
  opts.threads = resolve_threads(cfg);
  Canon canon("verify");
  canon.add("law", law.describe()).add("suite", suite).add("t", fmt(t_lln));
  if (cfg.n_override) canon.add("n", std::to_string(*cfg.n_override));
  auto n_for = [&](std::uint64_t dflt) { return cfg.n_override.value_or(dflt); };

  json report;
  report["config_hash"] = canon.hash();
  report["seed"] = seed;
  report["law"] = law.describe();
  json suites = json::object();
  rl::RandomStream rng(seed);
  if (all || suite == "crosscheck") suites["crosscheck"] = suite_crosscheck(law);
  if (all || suite == "tightness") {
    suites["tightness"] = suite_tightness(law, n_for(100000), rng, opts);
  }
  if (all || suite == "lln") suites["lln"] = suite_lln(law, t_lln, n_for(200), rng, opts);
  if (all || suite == "freeenergy") {
    suites["freeenergy"] = suite_freeenergy(law, n_for(20000), rng, opts);
  }
  bool pass = true;
  for (const auto& [name, s] : suites.items()) pass = pass && s["pass"].get<bool>();
  report["suites"] = suites;
  report["pass"] = pass;

  Sink sink(cfg.out);
  sink.os() << report.dump(2) << "\n";
  if (sink.to_file()) std::cout << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? 0 : kExitCheck;
}

// ------------------------------------------------------------------ main

void add_common(CLI::App* sub, Config& cfg) {
  sub->add_option("--law", cfg.law, "Waiting-time law, e.g. exp(1), pareto(2,1)");
  sub->add_option("--out", cfg.out, "Output file (stdout when omitted)");
}

void add_seed(CLI::App* sub, Config& cfg) {
  sub->add_option("--seed", cfg.seed, "64-bit seed");
}

void add_threads(CLI::App* sub, Config& cfg) {
  sub->add_option("--threads", cfg.threads,
                  "Worker threads (default: RENEWAL_LDP_THREADS or 1)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Large-deviation rates and Monte Carlo checks for renewal processes"};
  app.set_config("--config", "", "TOML config file; flags override it");
  app.require_subcommand(1);
  Config cfg;

  auto* rate = app.add_subcommand("rate", "Contracted rate J_F on an m-grid");
  add_common(rate, cfg);
  rate->add_option("--f", cfg.f, "F: one, min1, sat(K), sig, ind(a,b,w)");
  rate->add_option("--grid", cfg.grid, "m grid a:b:n");

  auto* scan = app.add_subcommand("scan", "Rate J_1 with regime labels and kink");
  add_common(scan, cfg);
  scan->add_option("--grid", cfg.grid, "m grid a:b:n");

  auto* sim = app.add_subcommand("simulate", "One renewal path up to the horizon");
  add_common(sim, cfg);
  add_seed(sim, cfg);
  sim->add_option("--t", cfg.t, "Horizon");
  sim->add_option("--f", cfg.f, "F for the cumulative summary");

  auto* mc = app.add_subcommand("mc", "Monte Carlo estimate of -(1/t) log P(event)");
  add_common(mc, cfg);
  add_seed(mc, cfg);
  add_threads(mc, cfg);
  mc->add_option("--event", cfg.event, "count:m:delta | upper:m | cumul:m:delta");
  mc->add_option("--t", cfg.t, "Horizon");
  mc->add_option("--n", cfg.n, "Samples")->capture_default_str();
  mc->add_option("--sampler", cfg.sampler, "naive | tilt | bigjump")->capture_default_str();
  mc->add_option("--f", cfg.f, "F for cumulative events");

  auto* verify = app.add_subcommand("verify", "Run a check suite, JSON report");
  add_common(verify, cfg);
  add_seed(verify, cfg);
  add_threads(verify, cfg);
  verify->add_option("--suite", cfg.suite, "crosscheck | tightness | lln | freeenergy | all")
      ->capture_default_str();
  verify->add_option("--t", cfg.t, "Horizon of the LLN suite (default 1e4)");
  verify->add_option("--n", cfg.n_override, "Samples per check (suite defaults otherwise)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*rate) return cmd_rate(cfg, false);
    if (*scan) return cmd_rate(cfg, true);
    if (*sim) return cmd_simulate(cfg);
    if (*mc) return cmd_mc(cfg);
    if (*verify) return cmd_verify(cfg);
  } catch (const rl::ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const rl::RangeError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const rl::DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const rl::InfeasibleError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const rl::MismatchError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const rl::NotInGammaError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitConfig;
}
