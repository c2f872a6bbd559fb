// Copyright 2026 The ghzflux Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <iostream>
#include <sstream>

#include "ghzflux/analysis.hpp"
#include "ghzflux/loop3.hpp"
#include "ghzflux/protocol.hpp"
#include "ghzflux/scheddsl.hpp"

namespace ghzflux::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double parse_pi_multiple(const std::string& text) {
  std::string s = text;
  if (s.size() < 2 || s.compare(s.size() - 2, 2, "pi") != 0) {
    throw UsageError("expected a multiple of pi such as 0.5pi, got '" + text + "'");
  }
  s.resize(s.size() - 2);
  if (s.empty() || s == "+") return kPi;
  if (s == "-") return -kPi;
  double v = 0.0;
  const char* b = s.data();
  if (*b == '+') ++b;
  const auto r = std::from_chars(b, s.data() + s.size(), v);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw UsageError("malformed flux '" + text + "'");
  }
  return v * kPi;
}

// Where output goes: --out, else $GHZFLUX_OUT_DIR/<default_name>, else stdout.
void emit(const std::string& out_path, const std::string& default_name, const std::string& text,
          std::ostream& out) {
  std::string path = out_path;
  if (path.empty()) {
    if (const char* dir = std::getenv("GHZFLUX_OUT_DIR"); dir && *dir) {
      path = (std::filesystem::path(dir) / default_name).string();
    }
  }
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open output file '" + path + "'");
  f << text;
  if (!f) throw UsageError("failed writing '" + path + "'");
}

struct CirculateOpts {
  int excitations = 1;
  std::string flux = "0.5pi";
  double g0_mhz = 3.849;
  int samples = 601;
  std::string out;
};

int cmd_circulate(const CirculateOpts& o, std::ostream& out, std::ostream& err) {
  const double flux = parse_pi_multiple(o.flux);
  const double g0 = units::mhz_to_rad_per_ns(o.g0_mhz);
  SystemConfig config = SystemConfig::uniform(3, g0);
  LoopWindow w;
  const double leg = config.chirality_sign * flux / 3.0;
  w.phases = {leg, leg, leg};
  const double T = circulation_period(g0).swap_time;
  w.duration = 3.0 * T;
  if (std::abs(std::abs(effective_flux(config, w)) - kPi / 2) > 1e-9) {
    err << "warning: flux " << o.flux << " is not +-pi/2; transfer is imperfect\n";
  }
  const BasisLabel initial(o.excitations == 1 ? "100" : "011");
  const PopulationTrace tr = population_trace(config, w, initial, 3.0 * T, o.samples);
  emit(o.out, "circulate.csv", tr.to_csv(), out);
  return kOk;
}

struct GhzOpts {
  int n = 3;
  double gamma_mhz = 0.0;
  double gamma_phi_mhz = 0.0;
  double swap_ns = 100.0;
  double step_ns = 0.0;
  std::string format = "csv";
  std::string method = "local";
  std::string out;
};

int cmd_ghz(const GhzOpts& o, std::ostream& out) {
  const double g0 = coupling_for_swap_time(o.swap_ns);
  IntegratorSettings settings = IntegratorSettings::effective_frame(o.swap_ns);
  if (o.step_ns > 0.0) settings.step = o.step_ns;
  const std::vector<int> ns{o.n};
  const std::vector<double> gammas{units::mhz_rate_to_per_ns(o.gamma_mhz)};
  const auto reports =
      fidelity_vs_n(ns, gammas, g0, settings, units::mhz_rate_to_per_ns(o.gamma_phi_mhz),
                    o.method == "full" ? NoisyMethod::full : NoisyMethod::local);
  if (o.format == "json") {
    emit(o.out, "ghz.json", reports_to_json(reports), out);
  } else {
    emit(o.out, "ghz.csv", reports_to_csv(reports), out);
  }
  return kOk;
}

struct RunOpts {
  std::string file;
  std::optional<double> gamma_mhz;
  std::optional<double> gamma_phi_mhz;
  double step_ns = 0.0;
  std::string out;
};

int cmd_run(const RunOpts& o, std::ostream& out, std::ostream& err) {
  std::ifstream f(o.file, std::ios::binary);
  if (!f) throw UsageError("cannot read '" + o.file + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  ScheduleDocument doc;
  try {
    doc = parse_schedule(buf.str());
  } catch (const ParseError& e) {
    err << o.file << ':' << e.line() << ": " << e.what() << '\n';
    return kParse;
  }
  for (const auto& w : doc.warnings) err << o.file << ':' << w.line << ": warning: " << w.message << '\n';

  SystemConfig& config = doc.config;
  const int n = config.n_qubits;
  if (o.gamma_mhz) config.decay.assign(static_cast<std::size_t>(n), units::mhz_rate_to_per_ns(*o.gamma_mhz));
  if (o.gamma_phi_mhz) {
    config.dephasing.assign(static_cast<std::size_t>(n), units::mhz_rate_to_per_ns(*o.gamma_phi_mhz));
  }
  const double T = circulation_period(config.g0).swap_time;
  IntegratorSettings settings = IntegratorSettings::effective_frame(T);
  if (o.step_ns > 0.0) settings.step = o.step_ns;

  const IdealRun ideal = execute_ideal(config, doc.schedule);
  const NoisyRun noisy = execute_noisy(config, doc.schedule, NoiseRates::from_config(config), settings);

  nlohmann::ordered_json j;
  j["n"] = n;
  j["gamma_per_ns"] = config.decay;
  j["gamma_phi_per_ns"] = config.dephasing;
  j["T_ns"] = T;
  j["step_ns"] = settings.step;
  nlohmann::ordered_json cps = nlohmann::ordered_json::array();
  for (const auto& c : ideal.transcript.checkpoints) {
    cps.push_back(nlohmann::ordered_json{{"label", c.label}, {"t_ns", c.time}, {"fidelity", c.fidelity}});
  }
  j["checkpoints"] = cps;
  j["ideal_fidelity"] = ideal.ghz_fidelity;
  j["fidelity"] = std::clamp(noisy.fidelity, 0.0, 1.0);
  emit(o.out, "run.json", j.dump(2) + "\n", out);
  return kOk;
}

struct RwaOpts {
  std::vector<double> ratios;
  std::string out;
};

int cmd_validate_rwa(const RwaOpts& o, std::ostream& out) {
  if (o.ratios.empty()) throw UsageError("--ratios needs at least one value");
  for (double r : o.ratios) {
    if (!(r > 0.0 && r <= 0.2)) {
      throw UsageError("ratio " + std::to_string(r) + " outside the RWA domain (0, 0.2]");
    }
  }
  emit(o.out, "rwa.csv", rwa_to_csv(rwa_sweep(o.ratios)), out);
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Chiral three-qubit loops and GHZ preparation"};
  app.name("ghzflux");
  app.require_subcommand(1);

  CirculateOpts circ;
  auto* c = app.add_subcommand("circulate", "Population trace of one loop window over 3T");
  c->add_option("--excitations", circ.excitations, "Excitations on the loop")->check(CLI::IsMember({1, 2}));
  c->add_option("--flux", circ.flux, "Loop flux as a multiple of pi, e.g. 0.5pi");
  c->add_option("--g0", circ.g0_mhz, "Coupling g0 in MHz")->check(CLI::PositiveNumber);
  c->add_option("--samples", circ.samples, "Number of time samples")->check(CLI::Range(2, 1000000));
  c->add_option("--out", circ.out, "Output CSV path");

  GhzOpts ghz;
  auto* g = app.add_subcommand("ghz", "Ideal and noisy GHZ preparation fidelity");
  g->add_option("--n", ghz.n, "Number of qubits")->required()->check(CLI::Range(2, 12));
  g->add_option("--gamma", ghz.gamma_mhz, "Decay rate in MHz")->check(CLI::NonNegativeNumber);
  g->add_option("--gamma-phi", ghz.gamma_phi_mhz, "Dephasing rate in MHz")->check(CLI::NonNegativeNumber);
  g->add_option("--T", ghz.swap_ns, "Swap time T in ns")->check(CLI::PositiveNumber);
  g->add_option("--step", ghz.step_ns, "Integrator step in ns")->check(CLI::PositiveNumber);
  g->add_option("--format", ghz.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  g->add_option("--method", ghz.method, "local or full")->check(CLI::IsMember({"local", "full"}));
  g->add_option("--out", ghz.out, "Output path");

  RunOpts run;
  auto* r = app.add_subcommand("run", "Execute a schedule file");
  r->add_option("file", run.file, "Schedule file")->required();
  r->add_option("--gamma", run.gamma_mhz, "Override decay on every qubit, MHz")->check(CLI::NonNegativeNumber);
  r->add_option("--gamma-phi", run.gamma_phi_mhz, "Override dephasing on every qubit, MHz")
      ->check(CLI::NonNegativeNumber);
  r->add_option("--step", run.step_ns, "Integrator step in ns")->check(CLI::PositiveNumber);
  r->add_option("--out", run.out, "Output JSON path");

  RwaOpts rwa;
  auto* v = app.add_subcommand("validate-rwa", "Lab frame against the rotating-wave model");
  v->add_option("--ratios", rwa.ratios, "Comma separated g0/delta values")->required()->delimiter(',');
  v->add_option("--out", rwa.out, "Output CSV path");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::Success& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (*c) return cmd_circulate(circ, out, err);
    if (*g) return cmd_ghz(ghz, out);
    if (*r) return cmd_run(run, out, err);
    return cmd_validate_rwa(rwa, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kParse;
  } catch (const AccuracyError& e) {
    err << "accuracy error: " << e.what() << '\n';
    return kAccuracy;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kAccuracy;
  }
}

}  // namespace ghzflux::cli
