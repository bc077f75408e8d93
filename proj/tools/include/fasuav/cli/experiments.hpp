#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fasuav/cli/config.hpp"

namespace fasuav::cli {

/// Rectangular numeric table with a block of '#' comment lines on top.
struct ResultTable {
  std::vector<std::string> comments;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  /// Index of a column; throws std::out_of_range if absent.
  std::size_t column(std::string_view name) const;
  bool has_column(std::string_view name) const;
  double at(std::size_t row, std::string_view name) const { return rows.at(row).at(column(name)); }

  /// Appends a row; its width must match the header.
  void add_row(std::vector<double> row);

  /// Comments, header, rows. Numbers use %.12g, so identical inputs give
  /// identical bytes.
  std::string to_csv() const;
};

struct RunOptions {
  unsigned workers = 0;  // Monte Carlo threads, 0 = hardware concurrency
};

enum class Command { rate_vs_power, rate_vs_alpha, ee_vs_ports };

std::string_view to_string(Command c);

/// Rate against transmit power. Columns: sweep_value, then per curve and
/// strategy rate_exact, rate_mc, rate_mc_stderr, rate_asymptotic for the
/// selected methods. RS columns carry an "_rs" suffix, curves their
/// Curve::suffix(). Monte Carlo draws are shared across rows.
ResultTable run_rate_vs_power(const ExperimentSpec& spec, const RunOptions& opt = {});

/// Rate against the time-switching ratio, plus an argmax column per curve and
/// strategy marking the row with the highest rate.
ResultTable run_rate_vs_alpha(const ExperimentSpec& spec, const RunOptions& opt = {});

/// Energy efficiency at the optimized alpha against the port count. Columns:
/// n_ports, zeta_<s>, alpha_star_<s>, and zeta_stderr_<s> for Monte Carlo
/// optimization, suffixed per curve.
ResultTable run_ee_vs_ports(const ExperimentSpec& spec, const RunOptions& opt = {});

ResultTable run(Command c, const ExperimentSpec& spec, const RunOptions& opt = {});

/// Writes the CSV to `path`, or to stdout when path is empty or "-".
void write_csv(const ResultTable& table, const std::string& path);

}  // namespace fasuav::cli
