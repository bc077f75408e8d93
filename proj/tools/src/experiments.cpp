#include "fasuav/cli/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include "fasuav/errors.hpp"

namespace fasuav::cli {

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Re-throws with the sweep point prepended, keeping the error category.
template <typename F>
auto at_point(const std::string& label, F&& f) {
  try {
    return f();
  } catch (const NumericError& e) {
    throw NumericError(label + ": " + e.what());
  } catch (const UnsupportedModeError& e) {
    throw UnsupportedModeError(label + ": " + e.what());
  } catch (const DomainError& e) {
    throw DomainError(label + ": " + e.what());
  }
}

std::string point_label(const ExperimentSpec& spec, double value, const std::string& curve_suffix) {
  std::string s = "sweep point " + std::string(to_string(spec.sweep_parameter)) + "=" + num(value);
  if (!curve_suffix.empty()) s += " (curve " + curve_suffix.substr(1) + ")";
  return s;
}

void require_sweep(const ExperimentSpec& spec, SweepParameter p, Command c) {
  if (spec.sweep_parameter != p) {
    throw ConfigError("sweep.parameter", std::string(to_string(c)) + " needs sweep.parameter = " +
                                             std::string(to_string(p)));
  }
  spec.validate();
}

bool has_method(const ExperimentSpec& spec, rate::Method m) {
  return std::find(spec.methods.begin(), spec.methods.end(), m) != spec.methods.end();
}

std::vector<Curve> curves_or_base(const ExperimentSpec& spec) {
  return spec.curves.empty() ? std::vector<Curve>{Curve{}} : spec.curves;
}

std::vector<std::string> header_comments(Command c, const ExperimentSpec& spec) {
  return {"command: " + std::string(to_string(c)), "config: " + serialize(spec, -1),
          "seed: " + std::to_string(spec.seed)};
}

rate::McOptions mc_options(const ExperimentSpec& spec, selection::Strategy s, const RunOptions& opt) {
  rate::McOptions mc;
  mc.trials = spec.trials;
  mc.seed = spec.seed;
  mc.strategy = s;
  mc.workers = opt.workers;
  return mc;
}

// Shared body of the two rate sweeps. Gains are drawn once per curve and
// strategy; alpha and p_u only rescale nu.
ResultTable rate_table(Command cmd, const ExperimentSpec& spec, const RunOptions& opt, bool mark_argmax) {
  const bool want_exact = has_method(spec, rate::Method::exact);
  const bool want_mc = has_method(spec, rate::Method::monte_carlo);
  const bool want_asym = has_method(spec, rate::Method::asymptotic);
  const auto curves = curves_or_base(spec);

  ResultTable table;
  table.comments = header_comments(cmd, spec);
  table.columns.push_back("sweep_value");

  struct Group {
    rate::ScenarioConfig base;
    selection::Strategy strategy;
    std::string curve_suffix;
    std::vector<double> gains;
    std::size_t first_column = 0;
  };
  std::vector<Group> groups;
  for (const auto& curve : curves) {
    for (auto s : spec.strategies) {
      Group g;
      g.curve_suffix = curve.suffix();
      g.base = at_point("curve" + g.curve_suffix, [&] { return apply_curve(spec.scenario, curve); });
      g.strategy = s;
      g.first_column = table.columns.size();
      const std::string sfx = (s == selection::Strategy::rs ? "_rs" : "") + g.curve_suffix;
      if (want_exact) table.columns.push_back("rate_exact" + sfx);
      if (want_mc) {
        table.columns.push_back("rate_mc" + sfx);
        table.columns.push_back("rate_mc_stderr" + sfx);
      }
      if (want_asym) table.columns.push_back("rate_asymptotic" + sfx);
      if (mark_argmax) table.columns.push_back("argmax" + sfx);
      if (want_mc) {
        g.gains = at_point("curve" + g.curve_suffix, [&] {
          return rate::sample_gain_products(rate::link_model(g.base), mc_options(spec, s, opt));
        });
      }
      groups.push_back(std::move(g));
    }
  }

  for (double v : spec.sweep_values) {
    std::vector<double> row{v};
    for (const auto& g : groups) {
      const auto label = point_label(spec, v, g.curve_suffix);
      const auto cfg = at_point(label, [&] { return apply_sweep(g.base, spec.sweep_parameter, v); });
      if (want_exact) {
        row.push_back(at_point(label, [&] { return rate::ergodic_rate_exact(cfg, g.strategy).rate; }));
      }
      if (want_mc) {
        const auto r = at_point(label, [&] { return rate::rate_from_gains(g.gains, rate::snr_scale(cfg), cfg.alpha); });
        row.push_back(r.rate);
        row.push_back(r.std_error);
      }
      if (want_asym) {
        row.push_back(at_point(label, [&] { return rate::ergodic_rate_asymptotic(cfg, g.strategy).rate; }));
      }
      if (mark_argmax) row.push_back(0.0);
    }
    table.add_row(std::move(row));
  }

  if (mark_argmax) {
    // The argmax follows the most accurate method present.
    for (const auto& g : groups) {
      const std::size_t primary = g.first_column;
      std::size_t flag = primary + (want_exact ? 1 : 0) + (want_mc ? 2 : 0) + (want_asym ? 1 : 0);
      std::size_t best = 0;
      for (std::size_t i = 1; i < table.rows.size(); ++i) {
        if (table.rows[i][primary] > table.rows[best][primary]) best = i;
      }
      table.rows[best][flag] = 1.0;
    }
  }
  return table;
}

}  // namespace

std::size_t ResultTable::column(std::string_view name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::out_of_range("no column '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

bool ResultTable::has_column(std::string_view name) const {
  return std::find(columns.begin(), columns.end(), name) != columns.end();
}

void ResultTable::add_row(std::vector<double> row) {
  if (row.size() != columns.size()) throw std::logic_error("ResultTable: row width does not match header");
  rows.push_back(std::move(row));
}

std::string ResultTable::to_csv() const {
  std::string out;
  for (const auto& c : comments) out += "# " + c + "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + num(row[i]);
    out += "\n";
  }
  return out;
}

std::string_view to_string(Command c) {
  switch (c) {
    case Command::rate_vs_power: return "rate-vs-power";
    case Command::rate_vs_alpha: return "rate-vs-alpha";
    case Command::ee_vs_ports: return "ee-vs-ports";
  }
  return "?";
}

ResultTable run_rate_vs_power(const ExperimentSpec& spec, const RunOptions& opt) {
  require_sweep(spec, SweepParameter::p_u, Command::rate_vs_power);
  return rate_table(Command::rate_vs_power, spec, opt, false);
}

ResultTable run_rate_vs_alpha(const ExperimentSpec& spec, const RunOptions& opt) {
  require_sweep(spec, SweepParameter::alpha, Command::rate_vs_alpha);
  return rate_table(Command::rate_vs_alpha, spec, opt, true);
}

ResultTable run_ee_vs_ports(const ExperimentSpec& spec, const RunOptions& opt) {
  require_sweep(spec, SweepParameter::n_ports, Command::ee_vs_ports);
  const bool mc = spec.optimize.method == rate::Method::monte_carlo;
  const auto curves = curves_or_base(spec);

  ResultTable table;
  table.comments = header_comments(Command::ee_vs_ports, spec);
  table.columns.push_back("n_ports");
  for (const auto& curve : curves) {
    const auto cs = curve.suffix();
    for (auto s : spec.strategies) table.columns.push_back("zeta_" + std::string(selection::to_string(s)) + cs);
    for (auto s : spec.strategies) {
      table.columns.push_back("alpha_star_" + std::string(selection::to_string(s)) + cs);
    }
    if (mc) {
      for (auto s : spec.strategies) {
        table.columns.push_back("zeta_stderr_" + std::string(selection::to_string(s)) + cs);
      }
    }
  }

  for (double v : spec.sweep_values) {
    std::vector<double> row{v};
    for (const auto& curve : curves) {
      const auto label = point_label(spec, v, curve.suffix());
      const auto cfg = at_point(label, [&] {
        return apply_sweep(apply_curve(spec.scenario, curve), SweepParameter::n_ports, v);
      });
      std::vector<energy::EfficiencyResult> res;
      for (auto s : spec.strategies) {
        energy::OptimizeOptions o;
        o.method = spec.optimize.method;
        o.strategy = s;
        o.grid = spec.optimize.grid;
        o.refine_tol = spec.optimize.refine_tol;
        o.mc = mc_options(spec, s, opt);
        res.push_back(at_point(label, [&] { return energy::optimize_alpha(cfg, spec.power, o); }));
      }
      for (const auto& r : res) row.push_back(r.zeta);
      for (const auto& r : res) row.push_back(r.alpha_star);
      if (mc) {
        for (const auto& r : res) row.push_back(r.rate_std_error / r.p_total);
      }
    }
    table.add_row(std::move(row));
  }
  return table;
}

ResultTable run(Command c, const ExperimentSpec& spec, const RunOptions& opt) {
  switch (c) {
    case Command::rate_vs_power: return run_rate_vs_power(spec, opt);
    case Command::rate_vs_alpha: return run_rate_vs_alpha(spec, opt);
    case Command::ee_vs_ports: return run_ee_vs_ports(spec, opt);
  }
  throw std::logic_error("unknown command");
}

void write_csv(const ResultTable& table, const std::string& path) {
  const auto text = table.to_csv();
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out.flush()) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace fasuav::cli
