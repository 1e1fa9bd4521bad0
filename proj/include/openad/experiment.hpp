// Copyright 2026 The openad Authors
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

#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "openad/adiabatic_conditions.hpp"
#include "openad/csv.hpp"
#include "openad/errors.hpp"
#include "openad/evolution.hpp"
#include "openad/models.hpp"
#include "openad/numerics.hpp"
#include "openad/parallel.hpp"
#include "openad/spectral.hpp"
#include "openad/thermo.hpp"

namespace openad {

/// Bad configuration; line is 0 when the problem is not tied to one line.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::size_t line, std::string field)
      : Error(line ? detail::concat("line ", line, ": ", field.empty() ? "" : field + ": ", what)
                   : (field.empty() ? what : field + ": " + what)),
        line_(line),
        field_(std::move(field)) {}

  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

enum class ModelKind { deutsch, landau_zener, thermo };

inline std::string model_name(ModelKind m) {
  switch (m) {
    case ModelKind::deutsch: return "deutsch";
    case ModelKind::landau_zener: return "landau_zener";
    case ModelKind::thermo: return "thermo";
  }
  return "unknown";
}

struct ExperimentConfig {
  ModelKind model = ModelKind::deutsch;
  /// Model parameters by name; missing entries take the model defaults.
  std::map<std::string, double> params;
  /// Values of omega * tau.
  std::vector<double> tau_scan;
  std::size_t grid_points = 401;
  std::vector<double> gamma0_over_omega;
  std::string output_path;
  std::uint64_t seed = 0;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

/// "section.key" -> line number, taken from the raw text (property_tree keeps none).
inline std::map<std::string, std::size_t> key_lines(const std::string& text) {
  std::map<std::string, std::size_t> out;
  std::istringstream in(text);
  std::string line, section;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == ';' || t[0] == '#') continue;
    if (t.front() == '[' && t.back() == ']') {
      section = trim(std::string_view(t).substr(1, t.size() - 2));
      out.emplace(section, n);
      continue;
    }
    const auto eq = t.find('=');
    if (eq != std::string::npos) out.emplace(section + "." + trim(std::string_view(t).substr(0, eq)), n);
  }
  return out;
}

struct ConfigReader {
  boost::property_tree::ptree tree;
  std::map<std::string, std::size_t> lines;

  std::size_t line_of(const std::string& key) const {
    auto it = lines.find(key);
    return it == lines.end() ? 0 : it->second;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const { throw ConfigError(what, line_of(key), key); }

  double to_double(const std::string& key, std::string_view text) const {
    const std::string t = trim(text);
    double v = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size() || !std::isfinite(v)) {
      fail(key, "expected a finite number, got '" + t + "'");
    }
    return v;
  }

  std::uint64_t to_unsigned(const std::string& key, std::string_view text) const {
    const std::string t = trim(text);
    std::uint64_t v = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) fail(key, "expected a nonnegative integer, got '" + t + "'");
    return v;
  }

  /// "a, b, c" or "linspace(a, b, n)".
  std::vector<double> to_list(const std::string& key, const std::string& text) const {
    std::string t = trim(text);
    std::vector<std::string> items;
    const bool ranged = t.rfind("linspace(", 0) == 0;
    if (ranged) {
      if (t.back() != ')') fail(key, "unterminated linspace(...)");
      t = t.substr(9, t.size() - 10);
    }
    std::stringstream ss(t);
    for (std::string item; std::getline(ss, item, ',');) items.push_back(item);
    if (t.empty()) items.clear();
    if (!ranged) {
      std::vector<double> out;
      for (const auto& it : items) out.push_back(to_double(key, it));
      return out;
    }
    if (items.size() != 3) fail(key, "linspace takes (start, stop, count)");
    const double a = to_double(key, items[0]), b = to_double(key, items[1]);
    const auto n = to_unsigned(key, items[2]);
    if (n < 1) fail(key, "linspace count must be positive");
    if (n == 1) return {a};
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    out.back() = b;
    return out;
  }
};

inline double param(const ExperimentConfig& c, const std::string& name, double fallback) {
  auto it = c.params.find(name);
  return it == c.params.end() ? fallback : it->second;
}

inline std::vector<std::string> allowed_params(ModelKind m) {
  switch (m) {
    case ModelKind::deutsch: return {"omega", "f0", "f1"};
    case ModelKind::landau_zener: return {"omega0", "theta_final"};
    case ModelKind::thermo: return {"omega0", "ramp", "transverse", "horizon", "beta", "coupling"};
  }
  return {};
}

}  // namespace detail

/// Reads an INI document with an [experiment] section and an optional [params] section.
inline ExperimentConfig parse_config(const std::string& text) {
  detail::ConfigReader r;
  r.lines = detail::key_lines(text);
  try {
    std::istringstream in(text);
    boost::property_tree::ini_parser::read_ini(in, r.tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(e.message(), e.line(), "");
  }

  for (const auto& [name, _] : r.tree) {
    if (name != "experiment" && name != "params") r.fail(name, "unknown section [" + name + "]");
  }
  const auto exp_node = r.tree.get_child_optional("experiment");
  if (!exp_node) throw ConfigError("missing [experiment] section", 0, "experiment");

  ExperimentConfig c;
  bool have_model = false;
  for (const auto& [k, v] : *exp_node) {
    const std::string key = "experiment." + k;
    const std::string val = detail::trim(v.data());
    if (k == "model") {
      if (val == "deutsch") c.model = ModelKind::deutsch;
      else if (val == "landau_zener") c.model = ModelKind::landau_zener;
      else if (val == "thermo") c.model = ModelKind::thermo;
      else r.fail(key, "unknown model '" + val + "' (deutsch, landau_zener, thermo)");
      have_model = true;
    } else if (k == "tau_scan") {
      c.tau_scan = r.to_list(key, val);
      if (c.tau_scan.empty()) r.fail(key, "tau_scan is empty");
      for (std::size_t i = 0; i < c.tau_scan.size(); ++i) {
        if (!(c.tau_scan[i] > 0.0)) r.fail(key, "omega*tau values must be positive");
        if (i && !(c.tau_scan[i] > c.tau_scan[i - 1])) r.fail(key, "tau_scan must be strictly ascending");
      }
    } else if (k == "grid_points") {
      c.grid_points = r.to_unsigned(key, val);
      if (c.grid_points < 51) r.fail(key, "grid_points must be at least 51");
    } else if (k == "gamma0_over_omega") {
      c.gamma0_over_omega = r.to_list(key, val);
      if (c.gamma0_over_omega.empty()) r.fail(key, "gamma0_over_omega is empty");
      for (double g : c.gamma0_over_omega) {
        if (!(g >= 0.0)) r.fail(key, "gamma0_over_omega values must be nonnegative");
      }
    } else if (k == "output") {
      c.output_path = val;
    } else if (k == "seed") {
      c.seed = r.to_unsigned(key, val);
    } else {
      r.fail(key, "unknown key");
    }
  }
  if (!have_model) throw ConfigError("missing key", r.line_of("experiment"), "experiment.model");

  if (const auto pn = r.tree.get_child_optional("params")) {
    const auto allowed = detail::allowed_params(c.model);
    for (const auto& [k, v] : *pn) {
      const std::string key = "params." + k;
      if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
        r.fail(key, "not a parameter of model " + model_name(c.model));
      }
      c.params[k] = r.to_double(key, v.data());
    }
  }

  if (c.model != ModelKind::thermo) {
    if (c.tau_scan.empty()) throw ConfigError("tau_scan is required", r.line_of("experiment"), "experiment.tau_scan");
    if (c.gamma0_over_omega.empty()) {
      throw ConfigError("gamma0_over_omega is required", r.line_of("experiment"), "experiment.gamma0_over_omega");
    }
  }
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'", 0, "");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

struct RunSummary {
  std::size_t rows = 0;
  std::size_t failed = 0;
  bool all_failed() const { return rows > 0 && failed == rows; }
};

namespace detail {

inline std::string describe_params(const ExperimentConfig& c, const std::vector<std::pair<std::string, double>>& extra = {}) {
  std::string out;
  auto add = [&](const std::string& k, double v) {
    if (!out.empty()) out += ';';
    out += k + "=" + csv::number(v);
  };
  for (const auto& [k, v] : c.params) add(k, v);
  for (const auto& [k, v] : extra) add(k, v);
  add("grid_points", static_cast<double>(c.grid_points));
  add("seed", static_cast<double>(c.seed));
  return out;
}

/// Frequency unit the scan is expressed in.
inline double omega_unit(const ExperimentConfig& c) {
  return c.model == ModelKind::deutsch ? param(c, "omega", 1.0) : param(c, "omega0", 1.0);
}

inline DeutschParams deutsch_params(const ExperimentConfig& c, double gamma_ratio, double omega_tau) {
  DeutschParams p;
  p.omega = param(c, "omega", 1.0);
  p.gamma0 = gamma_ratio * p.omega;
  p.f0 = static_cast<int>(param(c, "f0", 0.0));
  p.f1 = static_cast<int>(param(c, "f1", 1.0));
  p.tau = omega_tau / p.omega;
  p.validate();
  return p;
}

inline LandauZenerParams lz_params(const ExperimentConfig& c, double gamma_ratio, double omega_tau) {
  LandauZenerParams p;
  p.omega0 = param(c, "omega0", 1.0);
  p.theta_final = param(c, "theta_final", 2.0 * std::numbers::pi / 5.0);
  p.gamma0 = gamma_ratio * p.omega0;
  p.tau = omega_tau / p.omega0;
  p.validate();
  return p;
}

inline void require_model(const ExperimentConfig& c, std::initializer_list<ModelKind> ok, const std::string& command) {
  if (std::find(ok.begin(), ok.end(), c.model) == ok.end()) {
    throw ConfigError("model " + model_name(c.model) + " is not supported by '" + command + "'", 0, "experiment.model");
  }
}

struct ModelSetup {
  LindbladModel model;
  Matrix rho0;
  Matrix target;
  SpectralTrajectory traj;
};

inline ModelSetup setup(const ExperimentConfig& c, double gamma_ratio, double omega_tau, bool with_traj) {
  ModelSetup m;
  const auto grid = numerics::linspace(0.0, 1.0, c.grid_points);
  if (c.model == ModelKind::deutsch) {
    const auto p = deutsch_params(c, gamma_ratio, omega_tau);
    m.model = deutsch_model(p);
    m.rho0 = deutsch_initial_state();
    m.target = deutsch_target(p);
    if (with_traj) m.traj = deutsch_trajectory(p, grid);
  } else {
    const auto p = lz_params(c, gamma_ratio, omega_tau);
    m.model = lz_model(p);
    m.rho0 = lz_initial_state();
    m.target = lz_target(p);
    if (with_traj) m.traj = lz_trajectory(p, grid);
  }
  return m;
}

/// Blocks the initial state has weight on.
inline std::vector<std::size_t> initial_support(const SpectralTrajectory& traj, const Matrix& rho0) {
  const auto basis = pauli_basis_for_dim(static_cast<std::size_t>(rho0.rows()));
  const Vector x0 = vectorize(rho0, basis).components();
  std::vector<std::size_t> out;
  const auto& b0 = traj.bases.front();
  for (std::size_t b = 0; b < b0.blocks.size(); ++b) {
    for (const auto& e : b0.blocks[b].left_chain) {
      if (std::abs((e * x0).value()) > 1e-12 * x0.norm()) {
        out.push_back(b);
        break;
      }
    }
  }
  return out;
}

/// Largest Xi over pairs whose source block is populated initially.
inline std::array<double, 3> relevant_xi(const AdiabaticityReport& report) {
  std::array<double, 3> out{0.0, 0.0, 0.0};
  for (const auto& e : report.pairs) {
    if (e.dynamically_irrelevant) continue;
    out[0] = std::max(out[0], e.xi1_max);
    out[1] = std::max(out[1], e.xi2_max);
    out[2] = std::max(out[2], e.xi_max);
  }
  return out;
}

inline unsigned default_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

}  // namespace detail

/// Infidelity of the full master equation against the adiabatic target, with the
/// adiabaticity coefficients of the populated blocks, for every (gamma0, omega tau).
/// Rows come out in config order whatever the number of jobs.
inline RunSummary run_sweep(const ExperimentConfig& c, std::ostream& os, unsigned jobs = 0) {
  detail::require_model(c, {ModelKind::deutsch, ModelKind::landau_zener}, "sweep");
  struct Row {
    double ratio, omega_tau;
    double infidelity = std::numeric_limits<double>::quiet_NaN();
    std::array<double, 3> xi{std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN(),
                             std::numeric_limits<double>::quiet_NaN()};
    std::string status = "ok";
  };
  std::vector<Row> rows;
  for (double g : c.gamma0_over_omega) {
    for (double wt : c.tau_scan) rows.push_back(Row{g, wt});
  }
  parallel_for(rows.size(), jobs ? jobs : detail::default_jobs(), [&](std::size_t i) {
    Row& row = rows[i];
    std::vector<std::string> errors;
    try {
      const auto m = detail::setup(c, row.ratio, row.omega_tau, false);
      const auto sol = solve_master(m.model, m.rho0, {0.0, m.model.horizon});
      const Matrix rho = devectorize(sol.states.back(), pauli_basis_for_dim(m.model.dim_s));
      row.infidelity = 1.0 - fidelity(rho, m.target);
    } catch (const std::exception& e) {
      errors.push_back(std::string("infidelity: ") + e.what());
    }
    try {
      const auto m = detail::setup(c, row.ratio, row.omega_tau, true);
      ReportOptions ro;
      ro.initial_support = detail::initial_support(m.traj, m.rho0);
      row.xi = detail::relevant_xi(xi_max(m.traj, m.traj.tau, ro));
    } catch (const std::exception& e) {
      errors.push_back(std::string("xi: ") + e.what());
    }
    if (!errors.empty()) {
      row.status = "error: " + errors.front();
      for (std::size_t k = 1; k < errors.size(); ++k) row.status += "; " + errors[k];
    }
  });

  RunSummary sum;
  csv::write_row(os, {"model", "gamma0_over_omega", "omega_tau", "infidelity", "xi1_max", "xi2_max", "xi_max", "params", "status"});
  for (const auto& r : rows) {
    csv::write_row(os, {model_name(c.model), csv::number(r.ratio), csv::number(r.omega_tau), csv::number(r.infidelity),
                        csv::number(r.xi[0]), csv::number(r.xi[1]), csv::number(r.xi[2]), detail::describe_params(c), r.status});
    ++sum.rows;
    if (r.status != "ok") ++sum.failed;
  }
  return sum;
}

/// Numerically tracked eigenvalue paths lambda_i(s) for every gamma0; chain members
/// repeat their block eigenvalue. Rows whose spectrum has a Jordan block or fails
/// to decompose are marked as errors.
inline RunSummary run_spectrum(const ExperimentConfig& c, std::ostream& os, unsigned jobs = 0) {
  detail::require_model(c, {ModelKind::deutsch, ModelKind::landau_zener}, "spectrum");
  const double omega_tau = c.tau_scan.front();
  struct Result {
    SpectralTrajectory traj;
    std::string status = "ok";
  };
  std::vector<Result> results(c.gamma0_over_omega.size());
  parallel_for(results.size(), jobs ? jobs : detail::default_jobs(), [&](std::size_t i) {
    auto& res = results[i];
    try {
      const auto m = detail::setup(c, c.gamma0_over_omega[i], omega_tau, false);
      res.traj = track_spectrum(m.model, numerics::linspace(0.0, 1.0, c.grid_points));
      for (std::size_t b = 0; b < res.traj.block_count(); ++b) {
        if (res.traj.block_dim(b) > 1) {
          res.status = detail::concat("error: degenerate spectrum, Jordan block of dimension ", res.traj.block_dim(b),
                                      " at lambda = ", res.traj.bases.front().blocks[b].eigenvalue);
          break;
        }
      }
    } catch (const std::exception& e) {
      res.status = std::string("error: ") + e.what();
    }
  });

  const std::size_t n = 4;
  std::vector<std::string> header{"model", "gamma0_over_omega", "s"};
  for (std::size_t i = 0; i < n; ++i) {
    header.push_back("re_lambda_" + std::to_string(i));
    header.push_back("im_lambda_" + std::to_string(i));
  }
  for (const char* h : {"residual", "params", "status"}) header.emplace_back(h);
  csv::write_row(os, header);

  RunSummary sum;
  const std::string nan = csv::number(std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& res = results[i];
    const std::string params = detail::describe_params(c, {{"omega_tau", omega_tau}});
    auto lead = [&](double s) {
      return std::vector<std::string>{model_name(c.model), csv::number(c.gamma0_over_omega[i]), csv::number(s)};
    };
    ++sum.rows;
    if (res.status != "ok") ++sum.failed;
    if (res.traj.size() == 0) {
      auto row = lead(std::numeric_limits<double>::quiet_NaN());
      for (std::size_t k = 0; k < 2 * n + 1; ++k) row.push_back(nan);
      row.push_back(params);
      row.push_back(res.status);
      csv::write_row(os, row);
      continue;
    }
    for (std::size_t j = 0; j < res.traj.size(); ++j) {
      auto row = lead(res.traj.grid[j]);
      const auto& basis = res.traj.bases[j];
      for (const auto& b : basis.blocks) {
        for (std::size_t m = 0; m < b.block_dim(); ++m) {
          row.push_back(csv::number(b.eigenvalue.real()));
          row.push_back(csv::number(b.eigenvalue.imag()));
        }
      }
      while (row.size() < 3 + 2 * n) row.push_back(nan);
      row.push_back(csv::number(left_right_residual(basis, Superoperator{res.traj.generators[j], res.traj.grid[j] * res.traj.tau})));
      row.push_back(params);
      row.push_back(res.status);
      csv::write_row(os, row);
    }
  }
  return sum;
}

/// Per-pair adiabaticity coefficients for every (gamma0, omega tau).
inline RunSummary run_conditions(const ExperimentConfig& c, std::ostream& os, unsigned jobs = 0) {
  detail::require_model(c, {ModelKind::deutsch, ModelKind::landau_zener}, "conditions");
  struct Item {
    double ratio, omega_tau;
    AdiabaticityReport report;
    std::string status = "ok";
  };
  std::vector<Item> items;
  for (double g : c.gamma0_over_omega) {
    for (double wt : c.tau_scan) items.push_back(Item{g, wt, {}});
  }
  parallel_for(items.size(), jobs ? jobs : detail::default_jobs(), [&](std::size_t i) {
    auto& it = items[i];
    try {
      const auto m = detail::setup(c, it.ratio, it.omega_tau, true);
      ReportOptions ro;
      ro.initial_support = detail::initial_support(m.traj, m.rho0);
      it.report = xi_max(m.traj, m.traj.tau, ro);
    } catch (const std::exception& e) {
      it.status = std::string("error: ") + e.what();
    }
  });

  csv::write_row(os, {"model", "gamma0_over_omega", "omega_tau", "pair", "k", "xi1_max", "xi2_max", "xi_max", "g_max", "irrelevant",
                      "params", "status"});
  RunSummary sum;
  const std::string nan = csv::number(std::numeric_limits<double>::quiet_NaN());
  for (const auto& it : items) {
    const std::string params = detail::describe_params(c);
    const std::vector<std::string> lead{model_name(c.model), csv::number(it.ratio), csv::number(it.omega_tau)};
    ++sum.rows;
    if (it.status != "ok") {
      ++sum.failed;
      auto row = lead;
      for (const char* cell : {"", ""}) row.emplace_back(cell);
      for (int k = 0; k < 4; ++k) row.push_back(nan);
      row.emplace_back("");
      row.push_back(params);
      row.push_back(it.status);
      csv::write_row(os, row);
      continue;
    }
    for (const auto& e : it.report.pairs) {
      auto row = lead;
      row.push_back(std::to_string(e.alpha) + "-" + std::to_string(e.beta));
      row.push_back(std::to_string(e.k + 1));
      for (double v : {e.xi1_max, e.xi2_max, e.xi_max, e.g_max}) row.push_back(csv::number(v));
      row.emplace_back(e.dynamically_irrelevant ? "1" : "0");
      row.push_back(params);
      row.emplace_back("ok");
      csv::write_row(os, row);
    }
    for (const auto& [a, b] : it.report.excluded) {
      auto row = lead;
      row.push_back(std::to_string(a) + "-" + std::to_string(b));
      row.emplace_back("");
      for (int k = 0; k < 4; ++k) row.push_back(nan);
      row.emplace_back("");
      row.push_back(params);
      row.emplace_back("excluded: gap vanishes on the grid");
      csv::write_row(os, row);
    }
  }
  return sum;
}

/// Qubit H(t) = omega(t) sigma_z / 2 + transverse sigma_x / 2 with
/// omega(t) = omega0 (1 + ramp t / horizon).
inline HamiltonianPath thermo_hamiltonian(const ExperimentConfig& c) {
  const double w0 = detail::param(c, "omega0", 1.0), ramp = detail::param(c, "ramp", 0.5);
  const double tr = detail::param(c, "transverse", 0.0), horizon = detail::param(c, "horizon", 10.0);
  return [=](double t) -> Matrix { return 0.5 * (w0 * (1.0 + ramp * t / horizon) * pauli_z() + tr * pauli_x()); };
}

/// Equilibrium check dS = beta dQ along the Gibbs trajectory on grid_points times.
inline RunSummary run_thermo_check(const ExperimentConfig& c, std::ostream& os) {
  detail::require_model(c, {ModelKind::thermo}, "thermo");
  const double horizon = detail::param(c, "horizon", 10.0);
  if (!(horizon > 0.0)) throw ConfigError("horizon must be positive", 0, "params.horizon");
  const double w0 = detail::param(c, "omega0", 1.0);
  const double beta = detail::param(c, "beta", 1.0 / w0);
  const double coupling = detail::param(c, "coupling", 1.0);
  if (!(beta >= 0.0)) throw ConfigError("beta must be nonnegative", 0, "params.beta");
  if (!(coupling > 0.0)) throw ConfigError("coupling must be positive", 0, "params.coupling");

  csv::write_row(os, {"t", "dQ_rate", "dS_rate", "residual", "relative_residual", "beta", "params", "status"});
  RunSummary sum;
  const std::string params = detail::describe_params(c);
  const auto times = numerics::linspace(0.0, horizon, c.grid_points);
  try {
    const auto rep = equilibrium_check(thermo_hamiltonian(c), 2, beta, times, coupling);
    for (const auto& s : rep.samples) {
      csv::write_row(os, {csv::number(s.t), csv::number(s.dq_rate), csv::number(s.ds_rate), csv::number(s.residual),
                          csv::number(rep.relative_residual), csv::number(s.beta), params, "ok"});
      ++sum.rows;
    }
  } catch (const std::exception& e) {
    const std::string nan = csv::number(std::numeric_limits<double>::quiet_NaN());
    csv::write_row(os, {nan, nan, nan, nan, nan, csv::number(beta), params, std::string("error: ") + e.what()});
    sum.rows = sum.failed = 1;
  }
  return sum;
}

}  // namespace openad
