// Command-line front end: threshold tables, rate sweeps, parameter
// optimization, Monte-Carlo validation and brute-force map checks, with CSV
// or JSON output.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qrep/bell.hpp"
#include "qrep/csvout.hpp"
#include "qrep/ensemble.hpp"
#include "qrep/hybrid.hpp"
#include "qrep/oracle.hpp"
#include "qrep/original.hpp"
#include "qrep/rate.hpp"
#include "qrep/search.hpp"

using nlohmann::json;
using namespace qrep;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;

// ---------------------------------------------------------------------------
// Tabular output shared by every subcommand.

struct Output {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
};

std::string cell_to_csv(const json& c) {
  if (c.is_null()) return "-";
  if (c.is_string()) return c.get<std::string>();
  if (c.is_boolean()) return c.get<bool>() ? "true" : "false";
  if (c.is_number_integer()) return std::to_string(c.get<long long>());
  if (c.is_number_float()) return csv_number(c.get<double>());
  return c.dump();
}

int emit(const Output& t, const std::string& format,
         const std::string& out_path) {
  std::ostringstream body;
  if (format == "json") {
    json doc;
    doc["columns"] = t.columns;
    doc["rows"] = json::array();
    for (const auto& r : t.rows) {
      json obj = json::object();
      for (std::size_t i = 0; i < t.columns.size() && i < r.size(); ++i)
        obj[t.columns[i]] = r[i];
      doc["rows"].push_back(std::move(obj));
    }
    body << doc.dump(2) << '\n';
  } else {
    CsvWriter w(body);
    w.write_header(t.columns);
    for (const auto& r : t.rows) {
      std::vector<std::string> cells;
      cells.reserve(r.size());
      for (const auto& c : r) cells.push_back(cell_to_csv(c));
      w.write_cells(cells);
    }
  }
  if (out_path.empty()) {
    std::cout << body.str();
    return 0;
  }
  std::ofstream f(out_path);
  if (!f) {
    std::cerr << "error: cannot open output file '" << out_path << "'\n";
    return kExitUsage;
  }
  f << body.str();
  return 0;
}

std::string three_decimals(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

// "a..b" (inclusive) or a single integer.
std::vector<int> parse_int_range(const std::string& s) {
  std::size_t dots = s.find("..");
  auto to_int = [&](const std::string& part) {
    std::size_t pos = 0;
    int v = std::stoi(part, &pos);
    if (pos != part.size()) throw std::invalid_argument("trailing characters");
    return v;
  };
  std::vector<int> out;
  if (dots == std::string::npos) {
    out.push_back(to_int(s));
    return out;
  }
  int a = to_int(s.substr(0, dots));
  int b = to_int(s.substr(dots + 2));
  if (b < a) throw std::invalid_argument("descending range");
  for (int v = a; v <= b; ++v) out.push_back(v);
  return out;
}

BellState pseudo_state(unsigned seed) {
  double w[4], tot = 0.0;
  unsigned x = seed * 2654435761u + 12345u;
  for (int i = 0; i < 4; ++i) {
    x = x * 1664525u + 1013904223u;
    w[i] = 0.05 + (double)(x >> 8) / (double)(1u << 24);
    tot += w[i];
  }
  return BellState{w[0] / tot, w[1] / tot, w[2] / tot, w[3] / tot};
}

// ---------------------------------------------------------------------------
// Shared flag bundles.

struct PhysOpts {
  double att = 0.17;
  double light_speed = 2e5;
  double eta_d = 1.0;
  double p_dark = 0.0;

  ChannelModel channel() const { return {att, light_speed}; }
  DetectorModel detector() const { return {eta_d, p_dark}; }
};

void add_phys(CLI::App* cmd, PhysOpts& p) {
  cmd->add_option("--att", p.att, "Fiber attenuation (dB/km)")
      ->capture_default_str();
  cmd->add_option("--light-speed", p.light_speed,
                  "Signal velocity in fiber (km/s)")
      ->capture_default_str();
  cmd->add_option("--eta-d", p.eta_d, "Detector efficiency")
      ->capture_default_str();
  cmd->add_option("--p-dark", p.p_dark, "Dark-count probability per gate")
      ->capture_default_str();
}

struct IoOpts {
  std::string format = "csv";
  std::string out;
};

void add_io(CLI::App* cmd, IoOpts& io) {
  cmd->add_option("--format", io.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--out", io.out, "Write output to this file instead of stdout");
}

QkdProtocol flavor_from(const std::string& name) {
  return name == "six-state" ? QkdProtocol::SixState : QkdProtocol::Bb84;
}

// ---------------------------------------------------------------------------
// Chained secret fraction used by the threshold tables (geometry-free).

double chained_fraction(const std::string& protocol, double f0, double p_g,
                        int n, int k, QkdProtocol flavor) {
  if (protocol == "hybrid") {
    DissipativeGate gate{p_g};
    BellState s{f0, 1.0 - f0, 0.0, 0.0};
    for (int i = 0; i < k; ++i) s = hybrid_distill_map(s, gate).first;
    for (int i = 0; i < n; ++i) s = hybrid_swap_map(s, s, gate);
    return secret_fraction(s, flavor);
  }
  ChainResult c = chain_evaluate({f0, p_g, n, k}, 1.0);
  return secret_fraction(c.state, flavor);
}

void append_threshold_cells(std::vector<json>& row, const ThresholdResult& r) {
  switch (r.outcome) {
    case ThresholdOutcome::Value:
      row.push_back(r.value);
      row.push_back(three_decimals(r.value));
      row.push_back("ok");
      break;
    case ThresholdOutcome::NoConstraint:
      row.push_back(nullptr);
      row.push_back(nullptr);
      row.push_back("no-constraint");
      break;
    case ThresholdOutcome::Infeasible:
      row.push_back(nullptr);
      row.push_back(nullptr);
      row.push_back("infeasible");
      break;
  }
}

// ---------------------------------------------------------------------------
// Rate evaluation shared by rate-sweep and optimize.

struct ModelOpts {
  std::string protocol = "original";
  // Bell-pair protocols.
  double f0 = 0.9;
  double p_g = 1.0;
  int n = 2;
  int k = 0;
  // Memory/photon-pair protocol.
  double p = 1e-3;
  double q = 1.0;
  double r_split = 0.5;
  double eta_m = 1.0;
  double gamma_rep = 5e7;
  // Optimization bounds.
  double p_lo = 1e-4;
  double p_hi = 1e-2;
  int k_max = 4;
  std::string qkd = "bb84";
};

void add_model(CLI::App* cmd, ModelOpts& m) {
  cmd->add_option("--protocol", m.protocol, "Repeater protocol")
      ->check(CLI::IsMember({"original", "hybrid", "ensemble"}))
      ->required();
  cmd->add_option("--qkd", m.qkd, "Key-rate flavor")
      ->check(CLI::IsMember({"bb84", "six-state"}))
      ->capture_default_str();
  cmd->add_option("--f0", m.f0, "Elementary-pair fidelity")
      ->capture_default_str();
  cmd->add_option("--p-g", m.p_g, "Two-qubit gate quality")
      ->capture_default_str();
  cmd->add_option("--n", m.n, "Nesting level")->capture_default_str();
  cmd->add_option("--k", m.k, "Distillation rounds")->capture_default_str();
  cmd->add_option("--p", m.p, "Pair-emission parameter")->capture_default_str();
  cmd->add_option("--q", m.q, "Heralding-photon emission probability")
      ->capture_default_str();
  cmd->add_option("--r-split", m.r_split, "Herald tap reflectivity")
      ->capture_default_str();
  cmd->add_option("--eta-m", m.eta_m, "Memory write-read efficiency")
      ->capture_default_str();
  cmd->add_option("--gamma-rep", m.gamma_rep, "Source repetition rate (1/s)")
      ->capture_default_str();
  cmd->add_option("--p-lo", m.p_lo, "Lower bound when optimizing p")
      ->capture_default_str();
  cmd->add_option("--p-hi", m.p_hi, "Upper bound when optimizing p")
      ->capture_default_str();
  cmd->add_option("--k-max", m.k_max, "Upper bound when optimizing k")
      ->capture_default_str();
}

RateBreakdown evaluate_rate(const ModelOpts& m, const PhysOpts& phys,
                            double l_total) {
  ChannelModel ch = phys.channel();
  DetectorModel det = phys.detector();
  QkdProtocol flavor = flavor_from(m.qkd);
  if (m.protocol == "original") {
    RepeaterGeometry g{l_total, m.n, 2};
    return secret_key_rate_original({m.f0, m.p_g, m.n, m.k}, g, ch, det,
                                    flavor);
  }
  if (m.protocol == "hybrid") {
    RepeaterGeometry g{l_total, m.n, 2};
    return secret_key_rate_hybrid({m.f0, m.p_g, m.n, m.k}, g, ch, det, flavor);
  }
  RepeaterGeometry g{l_total, m.n, 1};
  EnsembleParams pr{m.p, m.q, m.r_split, m.eta_m, m.gamma_rep};
  return secret_key_rate_ensemble(pr, g, ch, det).breakdown;
}

// Optimizable axes by name; the continuous f0 domain starts at the lowest
// physical fidelity of each protocol's elementary pair.
Axis axis_by_name(const std::string& name, const ModelOpts& m) {
  if (name == "f0") {
    double lo = (m.protocol == "hybrid") ? 0.5 : 0.2501;
    return Axis{"f0", lo, 1.0 - 1e-9, false, false};
  }
  if (name == "k") return Axis{"k", 0.0, (double)m.k_max, false, true};
  if (name == "p") return Axis{"p", m.p_lo, m.p_hi, true, false};
  if (name == "r") return Axis{"r", 0.05, 0.95, false, false};
  throw CLI::ValidationError("--opt", "unknown axis '" + name + "'");
}

void check_axes(const ModelOpts& m, const std::vector<std::string>& names) {
  for (const auto& name : names) {
    bool pair_axis = (name == "f0" || name == "k");
    bool source_axis = (name == "p" || name == "r");
    if (m.protocol == "ensemble" ? !source_axis : !pair_axis)
      throw CLI::ValidationError(
          "--opt", "axis '" + name + "' does not apply to " + m.protocol);
  }
}

ModelOpts with_axes(const ModelOpts& m, const std::vector<std::string>& names,
                    const std::vector<double>& args) {
  ModelOpts out = m;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == "f0") out.f0 = args[i];
    else if (names[i] == "k") out.k = (int)std::lround(args[i]);
    else if (names[i] == "p") out.p = args[i];
    else if (names[i] == "r") out.r_split = args[i];
  }
  return out;
}

void append_breakdown(std::vector<json>& row, const RateBreakdown& b) {
  row.push_back(b.rate);
  row.push_back(b.r_rep);
  row.push_back(b.p_click);
  row.push_back(b.r_sift);
  row.push_back(b.secret_fraction);
}

// ---------------------------------------------------------------------------
// Subcommand bodies. Each returns a process exit code.

struct TableArgs {
  std::string protocol = "original";
  std::string qkd = "both";
  std::string n_range = "0..7";
  std::string k_range = "0..3";
  double fixed = 1.0;  // p_g for the fidelity table, f0 for the gate table
  double tol = 1e-4;
  PhysOpts phys;
  IoOpts io;
};

int run_threshold_table(const TableArgs& a, bool target_is_f0) {
  std::vector<int> ns = parse_int_range(a.n_range);
  std::vector<int> ks = parse_int_range(a.k_range);
  std::vector<std::string> flavors;
  if (a.qkd == "both") flavors = {"bb84", "six-state"};
  else flavors = {a.qkd};

  const std::string target = target_is_f0 ? "f0_min" : "p_g_min";
  Output t;
  t.columns = {"n", "k"};
  for (const auto& fl : flavors) {
    std::string prefix = (flavors.size() > 1)
                             ? (fl == "bb84" ? "bb84_" : "six_state_")
                             : "";
    t.columns.push_back(prefix + target);
    t.columns.push_back(prefix + target + "_3dp");
    t.columns.push_back(prefix + "status");
  }

  double lo = target_is_f0 ? (a.protocol == "hybrid" ? 0.5001 : 0.2501)
                           : 0.5001;
  double hi = 1.0;
  for (int n : ns) {
    for (int k : ks) {
      std::vector<json> row{n, k};
      for (const auto& fl : flavors) {
        QkdProtocol flavor = flavor_from(fl);
        auto pred = [&](double x) {
          double f0 = target_is_f0 ? x : a.fixed;
          double p_g = target_is_f0 ? a.fixed : x;
          return chained_fraction(a.protocol, f0, p_g, n, k, flavor) > 0.0;
        };
        append_threshold_cells(row, bisect_threshold(pred, lo, hi, a.tol));
      }
      t.rows.push_back(std::move(row));
    }
  }
  return emit(t, a.io.format, a.io.out);
}

struct OptTableArgs {
  std::string qkd = "bb84";
  std::string n_range = "1..4";
  std::string k_range = "0..3";
  double p_g = 1.0;
  double l_total = 600.0;
  int grid = 501;
  PhysOpts phys;
  IoOpts io;
};

int run_opt_fidelity_table(const OptTableArgs& a) {
  std::vector<int> ns = parse_int_range(a.n_range);
  std::vector<int> ks = parse_int_range(a.k_range);
  QkdProtocol flavor = flavor_from(a.qkd);
  ChannelModel ch = a.phys.channel();
  DetectorModel det = a.phys.detector();

  Output t;
  t.columns = {"n", "k", "f0_opt", "f0_opt_3dp", "rate"};
  for (int n : ns) {
    for (int k : ks) {
      RepeaterGeometry g{a.l_total, n, 2};
      auto rate_at = [&](double f0) {
        return secret_key_rate_hybrid({f0, a.p_g, n, k}, g, ch, det, flavor)
            .rate;
      };
      MaximizeResult best = maximize_scalar(rate_at, 0.5, 1.0 - 1e-9, a.grid);
      std::vector<json> row{n, k};
      if (best.value > 0.0) {
        row.push_back(best.arg);
        row.push_back(three_decimals(best.arg));
        row.push_back(best.value);
      } else {
        row.push_back(nullptr);
        row.push_back(nullptr);
        row.push_back(0.0);
      }
      t.rows.push_back(std::move(row));
    }
  }
  return emit(t, a.io.format, a.io.out);
}

struct SweepArgs {
  ModelOpts model;
  double l_from = 600.0;
  double l_to = 600.0;
  int steps = 1;
  std::vector<std::string> opt;
  int grid = 41;
  bool per_memory = false;
  PhysOpts phys;
  IoOpts io;
};

int run_rate_sweep(const SweepArgs& a) {
  check_axes(a.model, a.opt);
  Output t;
  t.columns = {"l_km"};
  for (const auto& name : a.opt)
    t.columns.push_back(name == "r" ? "r_split" : name);
  t.columns.insert(t.columns.end(),
                   {"rate", "r_rep", "p_click", "r_sift", "secret_fraction"});
  if (a.per_memory) t.columns.push_back("rate_per_memory");

  for (int i = 0; i < a.steps; ++i) {
    double l = (a.steps == 1)
                   ? a.l_from
                   : a.l_from + (a.l_to - a.l_from) * (double)i /
                                    (double)(a.steps - 1);
    ModelOpts chosen = a.model;
    if (!a.opt.empty()) {
      std::vector<Axis> axes;
      for (const auto& name : a.opt) axes.push_back(axis_by_name(name, a.model));
      auto objective = [&](const std::vector<double>& args) {
        return evaluate_rate(with_axes(a.model, a.opt, args), a.phys, l).rate;
      };
      OptimizeResult best = maximize_axes(objective, axes, a.grid);
      chosen = with_axes(a.model, a.opt, best.args);
    }
    RateBreakdown b = evaluate_rate(chosen, a.phys, l);
    std::vector<json> row{l};
    for (const auto& name : a.opt) {
      if (name == "f0") row.push_back(chosen.f0);
      else if (name == "k") row.push_back(chosen.k);
      else if (name == "p") row.push_back(chosen.p);
      else row.push_back(chosen.r_split);
    }
    append_breakdown(row, b);
    if (a.per_memory)
      row.push_back(b.rate / std::pow(2.0, (double)chosen.k));
    t.rows.push_back(std::move(row));
  }
  return emit(t, a.io.format, a.io.out);
}

struct OptimizeArgs {
  ModelOpts model;
  double l_total = 600.0;
  std::vector<std::string> opt;
  int grid = 41;
  int passes = 3;
  bool per_memory = false;
  PhysOpts phys;
  IoOpts io;
};

int run_optimize(const OptimizeArgs& a) {
  std::vector<std::string> names = a.opt;
  if (names.empty())
    names = (a.model.protocol == "ensemble")
                ? std::vector<std::string>{"p", "r"}
                : std::vector<std::string>{"f0"};
  check_axes(a.model, names);
  std::vector<Axis> axes;
  for (const auto& name : names) axes.push_back(axis_by_name(name, a.model));
  auto objective = [&](const std::vector<double>& args) {
    return evaluate_rate(with_axes(a.model, names, args), a.phys, a.l_total)
        .rate;
  };
  OptimizeResult best = maximize_axes(objective, axes, a.grid, a.passes);
  ModelOpts chosen = with_axes(a.model, names, best.args);
  RateBreakdown b = evaluate_rate(chosen, a.phys, a.l_total);

  Output t;
  t.columns = {"l_km"};
  for (const auto& name : names)
    t.columns.push_back(name == "r" ? "r_split" : name);
  t.columns.insert(t.columns.end(),
                   {"rate", "r_rep", "p_click", "r_sift", "secret_fraction"});
  if (a.per_memory) t.columns.push_back("rate_per_memory");
  std::vector<json> row{a.l_total};
  for (const auto& name : names) {
    if (name == "f0") row.push_back(chosen.f0);
    else if (name == "k") row.push_back(chosen.k);
    else if (name == "p") row.push_back(chosen.p);
    else row.push_back(chosen.r_split);
  }
  append_breakdown(row, b);
  if (a.per_memory) row.push_back(b.rate / std::pow(2.0, (double)chosen.k));
  t.rows.push_back(std::move(row));

  int code = emit(t, a.io.format, a.io.out);
  if (code != 0) return code;
  if (!(b.rate > 0.0)) {
    std::cerr << "optimize: no positive rate found on the search domain\n";
    return kExitInfeasible;
  }
  return 0;
}

struct McArgs {
  int n = 1;
  double p = 0.5;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  IoOpts io;
};

int run_mc_validate(const McArgs& a) {
  McWaitingResult mc = mc_waiting_time(a.n, a.p, a.trials, a.seed);
  double expected = z_average_attempts(a.n, a.p);
  double dev = (mc.std_error > 0.0)
                   ? std::abs(mc.mean - expected) / mc.std_error
                   : 0.0;
  Output t;
  t.columns = {"n",  "p",           "trials",   "seed",
               "mc_mean", "mc_std_error", "expected", "deviation_se"};
  t.rows.push_back({a.n, a.p, a.trials, a.seed, mc.mean, mc.std_error,
                    expected, dev});
  int code = emit(t, a.io.format, a.io.out);
  if (code != 0) return code;
  if (dev > 6.0) {
    std::cerr << "mc-validate: sampled mean deviates by " << dev
              << " standard errors\n";
    return 1;
  }
  return 0;
}

struct OracleArgs {
  int states = 25;
  double tol_map = 1e-10;
  double tol_link = 1e-8;
  IoOpts io;
};

int run_oracle_check(const OracleArgs& a) {
  double dev_swap_dep = 0.0, dev_dist_dep = 0.0;
  int cases_swap_dep = 0, cases_dist_dep = 0;
  for (int seed = 0; seed < a.states; ++seed) {
    BellState s = pseudo_state((unsigned)seed);
    BellState t = pseudo_state((unsigned)(seed + 1000));
    for (double p_g : {1.0, 0.9}) {
      for (double gamma : {1.0, 0.95}) {
        BellState fast = swap_map(s, t, p_g, gamma);
        BellState slow = oracle_swap_original(s, t, p_g, gamma);
        for (int l = 0; l < 4; ++l)
          dev_swap_dep = std::max(dev_swap_dep, std::abs(fast[l] - slow[l]));
        ++cases_swap_dep;
      }
      auto [fs, fp] = distill_map(s, p_g);
      auto [os, op] = oracle_distill_original(s, p_g);
      dev_dist_dep = std::max(dev_dist_dep, std::abs(fp - op));
      for (int l = 0; l < 4; ++l)
        dev_dist_dep = std::max(dev_dist_dep, std::abs(fs[l] - os[l]));
      ++cases_dist_dep;
    }
  }

  double dev_swap_deph = 0.0, dev_dist_deph = 0.0;
  int cases_swap_deph = 0, cases_dist_deph = 0;
  for (int seed = 0; seed < a.states; ++seed) {
    BellState s = pseudo_state((unsigned)(seed + 2000));
    BellState t = pseudo_state((unsigned)(seed + 3000));
    for (double p_g : {1.0, 0.92}) {
      DissipativeGate gate{p_g};
      BellState fast = hybrid_swap_map(s, t, gate);
      BellState slow = oracle_swap_hybrid(s, t, gate.p_c());
      for (int l = 0; l < 4; ++l)
        dev_swap_deph = std::max(dev_swap_deph, std::abs(fast[l] - slow[l]));
      ++cases_swap_deph;
      auto [fs, fp] = hybrid_distill_map(s, gate);
      auto [os, op] = oracle_distill_hybrid(s, gate.p_c());
      dev_dist_deph = std::max(dev_dist_deph, std::abs(fp - op));
      for (int l = 0; l < 4; ++l)
        dev_dist_deph = std::max(dev_dist_deph, std::abs(fs[l] - os[l]));
      ++cases_dist_deph;
    }
  }

  double dev_link = 0.0;
  int cases_link = 0;
  ChannelModel ch;
  for (double s : {0.005, 0.01, 0.05}) {
    for (double eta_d : {1.0, 0.9}) {
      for (double l0 : {20.0, 75.0}) {
        double eta_t = transmittivity(ch, l0);
        UsdLinkResult res = oracle_usd_link(s, eta_t, eta_d);
        double f = hybrid_initial_fidelity_from_strength(s, eta_t, eta_d);
        double p =
            hybrid_success_probability(f, l0, ch, DetectorModel{eta_d, 0.0});
        dev_link = std::max(dev_link, std::abs(res.fidelity - f));
        dev_link = std::max(dev_link, std::abs(res.p_success - p));
        ++cases_link;
      }
    }
  }

  Output t;
  t.columns = {"family", "cases", "max_abs_dev", "tolerance", "status"};
  bool ok = true;
  auto add = [&](const std::string& family, int cases, double dev, double tol) {
    bool pass = dev < tol;
    ok = ok && pass;
    t.rows.push_back({family, cases, dev, tol, pass ? "ok" : "FAIL"});
  };
  add("swap-depolarizing", cases_swap_dep, dev_swap_dep, a.tol_map);
  add("distill-depolarizing", cases_dist_dep, dev_dist_dep, a.tol_map);
  add("swap-dephasing", cases_swap_deph, dev_swap_deph, a.tol_map);
  add("distill-dephasing", cases_dist_deph, dev_dist_deph, a.tol_map);
  add("heralded-link", cases_link, dev_link, a.tol_link);
  int code = emit(t, a.io.format, a.io.out);
  if (code != 0) return code;
  if (!ok) {
    std::cerr << "oracle-check: at least one family exceeds its tolerance\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Secret-key rates of long-distance repeater chains: tables, sweeps, "
      "optimization and brute-force validation"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read option defaults from a key=value file");
  int exit_code = 0;

  TableArgs tf;
  CLI::App* cmd_tf = app.add_subcommand(
      "table-min-fidelity",
      "Minimal elementary-pair fidelity with a positive key rate");
  cmd_tf->add_option("--protocol", tf.protocol, "Repeater protocol")
      ->check(CLI::IsMember({"original", "hybrid"}))
      ->capture_default_str();
  cmd_tf->add_option("--qkd", tf.qkd, "Key-rate flavor")
      ->check(CLI::IsMember({"bb84", "six-state", "both"}))
      ->capture_default_str();
  cmd_tf->add_option("--n", tf.n_range, "Nesting levels, e.g. 0..7")
      ->capture_default_str();
  cmd_tf->add_option("--k", tf.k_range, "Distillation rounds, e.g. 0..3")
      ->capture_default_str();
  cmd_tf->add_option("--p-g", tf.fixed, "Fixed gate quality")
      ->capture_default_str();
  cmd_tf->add_option("--tol", tf.tol, "Bisection tolerance")
      ->capture_default_str();
  add_phys(cmd_tf, tf.phys);
  add_io(cmd_tf, tf.io);
  cmd_tf->callback([&]() { exit_code = run_threshold_table(tf, true); });

  TableArgs tg;
  tg.fixed = 1.0;
  CLI::App* cmd_tg = app.add_subcommand(
      "table-min-gate", "Minimal gate quality with a positive key rate");
  cmd_tg->add_option("--protocol", tg.protocol, "Repeater protocol")
      ->check(CLI::IsMember({"original", "hybrid"}))
      ->capture_default_str();
  cmd_tg->add_option("--qkd", tg.qkd, "Key-rate flavor")
      ->check(CLI::IsMember({"bb84", "six-state", "both"}))
      ->capture_default_str();
  cmd_tg->add_option("--n", tg.n_range, "Nesting levels, e.g. 0..7")
      ->capture_default_str();
  cmd_tg->add_option("--k", tg.k_range, "Distillation rounds, e.g. 0..3")
      ->capture_default_str();
  cmd_tg->add_option("--f0", tg.fixed, "Fixed elementary-pair fidelity")
      ->capture_default_str();
  cmd_tg->add_option("--tol", tg.tol, "Bisection tolerance")
      ->capture_default_str();
  add_phys(cmd_tg, tg.phys);
  add_io(cmd_tg, tg.io);
  cmd_tg->callback([&]() { exit_code = run_threshold_table(tg, false); });

  OptTableArgs to;
  CLI::App* cmd_to = app.add_subcommand(
      "table-opt-fidelity",
      "Rate-maximizing elementary-pair fidelity of the probe-heralded chain");
  cmd_to->add_option("--qkd", to.qkd, "Key-rate flavor")
      ->check(CLI::IsMember({"bb84", "six-state"}))
      ->capture_default_str();
  cmd_to->add_option("--n", to.n_range, "Nesting levels, e.g. 1..4")
      ->capture_default_str();
  cmd_to->add_option("--k", to.k_range, "Distillation rounds, e.g. 0..3")
      ->capture_default_str();
  cmd_to->add_option("--p-g", to.p_g, "Fixed gate quality")
      ->capture_default_str();
  cmd_to->add_option("--l-total", to.l_total, "Total distance (km)")
      ->capture_default_str();
  cmd_to->add_option("--grid", to.grid, "Coarse-grid points per axis")
      ->capture_default_str();
  add_phys(cmd_to, to.phys);
  add_io(cmd_to, to.io);
  cmd_to->callback([&]() { exit_code = run_opt_fidelity_table(to); });

  SweepArgs sw;
  CLI::App* cmd_sw = app.add_subcommand(
      "rate-sweep", "Secret-key rate across a span of total distances");
  add_model(cmd_sw, sw.model);
  cmd_sw->add_option("--l-from", sw.l_from, "First total distance (km)")
      ->capture_default_str();
  cmd_sw->add_option("--l-to", sw.l_to, "Last total distance (km)")
      ->capture_default_str();
  cmd_sw->add_option("--steps", sw.steps, "Number of rows (0 = header only)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd_sw->add_option("--opt", sw.opt,
                     "Axes optimized per row (f0, k, p, r)")
      ->delimiter(',');
  cmd_sw->add_option("--grid", sw.grid, "Coarse-grid points per axis")
      ->capture_default_str();
  cmd_sw->add_flag("--per-memory", sw.per_memory,
                   "Also report the rate divided by 2^k");
  add_phys(cmd_sw, sw.phys);
  add_io(cmd_sw, sw.io);
  cmd_sw->callback([&]() { exit_code = run_rate_sweep(sw); });

  OptimizeArgs op;
  CLI::App* cmd_op = app.add_subcommand(
      "optimize", "Maximize the rate over chosen parameters at one distance");
  add_model(cmd_op, op.model);
  cmd_op->add_option("--l-total", op.l_total, "Total distance (km)")
      ->capture_default_str();
  cmd_op->add_option("--opt", op.opt,
                     "Axes to optimize (default: f0, or p,r)")
      ->delimiter(',');
  cmd_op->add_option("--grid", op.grid, "Coarse-grid points per axis")
      ->capture_default_str();
  cmd_op->add_option("--passes", op.passes, "Coordinate-ascent passes")
      ->capture_default_str();
  cmd_op->add_flag("--per-memory", op.per_memory,
                   "Also report the rate divided by 2^k");
  add_phys(cmd_op, op.phys);
  add_io(cmd_op, op.io);
  cmd_op->callback([&]() { exit_code = run_optimize(op); });

  McArgs mc;
  CLI::App* cmd_mc = app.add_subcommand(
      "mc-validate",
      "Compare sampled waiting times with the analytic attempt average");
  cmd_mc->add_option("--n", mc.n, "Nesting level")->capture_default_str();
  cmd_mc->add_option("--p", mc.p, "Per-segment success probability")
      ->capture_default_str();
  cmd_mc->add_option("--trials", mc.trials, "Sample count (>= 10000)")
      ->capture_default_str();
  cmd_mc->add_option("--seed", mc.seed, "Random seed")->capture_default_str();
  add_io(cmd_mc, mc.io);
  cmd_mc->callback([&]() { exit_code = run_mc_validate(mc); });

  OracleArgs oc;
  CLI::App* cmd_oc = app.add_subcommand(
      "oracle-check",
      "Compare closed-form pair maps with dense-matrix references");
  cmd_oc->add_option("--states", oc.states, "Pseudo-random states per family")
      ->capture_default_str();
  cmd_oc->add_option("--tol-map", oc.tol_map, "Tolerance for the pair maps")
      ->capture_default_str();
  cmd_oc->add_option("--tol-link", oc.tol_link,
                     "Tolerance for the heralded link")
      ->capture_default_str();
  add_io(cmd_oc, oc.io);
  cmd_oc->callback([&]() { exit_code = run_oracle_check(oc); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return exit_code;
}
