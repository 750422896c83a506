#pragma once

#include <optional>
#include <string>
#include <vector>

#include "welfair/fairmetrics.hpp"

// The fixed results schema every command that reports metrics writes. One
// row per (alpha, tau, fold); cells a command cannot fill stay empty.
// Columns only ever get appended, and schema_version bumps when they do.

namespace welfair::cmd {

inline constexpr int kSchemaVersion = 1;

struct ResultRow {
  std::optional<double> alpha;
  std::optional<double> tau;
  std::optional<long> fold;
  std::optional<double> loss;
  std::optional<double> accuracy;
  std::optional<double> welfare;
  std::optional<double> atkinson;
  std::optional<double> ge2;
  std::optional<double> dwork_violation;
  std::optional<double> demographic_parity;
  std::optional<double> fpr_diff;
  std::optional<double> fnr_diff;
  std::optional<double> mean_diff;
  std::optional<double> pos_residual_diff;
  std::optional<double> neg_residual_diff;
  std::optional<double> lambda;
  std::optional<double> intercept;
  std::string status = "optimal";
};

// 17 significant digits; round-trips a double exactly.
std::string fmt17(double v);

std::string results_header();
std::string format_row(const ResultRow& row);

// Copies every metric the report carries into the row.
void fill_from_report(const MetricsReport& rep, ResultRow* row);

// Stable sort by (alpha, tau, fold), absent keys first.
void sort_rows(std::vector<ResultRow>* rows);

// Header plus one line per row, sorted.
std::string render_table(std::vector<ResultRow> rows);

}  // namespace welfair::cmd
