#include "results_table.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

namespace welfair::cmd {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string results_header() {
  return "schema_version,alpha,tau,fold,loss,accuracy,welfare,atkinson,ge2,"
         "dwork_violation,demographic_parity,fpr_diff,fnr_diff,mean_diff,"
         "pos_residual_diff,neg_residual_diff,lambda,intercept,status";
}

namespace {

void cell(std::string* line, const std::optional<double>& v) {
  line->push_back(',');
  if (v) *line += fmt17(*v);
}

}  // namespace

std::string format_row(const ResultRow& row) {
  std::string line = std::to_string(kSchemaVersion);
  cell(&line, row.alpha);
  cell(&line, row.tau);
  line.push_back(',');
  if (row.fold) line += std::to_string(*row.fold);
  cell(&line, row.loss);
  cell(&line, row.accuracy);
  cell(&line, row.welfare);
  cell(&line, row.atkinson);
  cell(&line, row.ge2);
  cell(&line, row.dwork_violation);
  cell(&line, row.demographic_parity);
  cell(&line, row.fpr_diff);
  cell(&line, row.fnr_diff);
  cell(&line, row.mean_diff);
  cell(&line, row.pos_residual_diff);
  cell(&line, row.neg_residual_diff);
  cell(&line, row.lambda);
  cell(&line, row.intercept);
  line.push_back(',');
  line += row.status;
  return line;
}

void fill_from_report(const MetricsReport& rep, ResultRow* row) {
  row->loss = rep.loss;
  if (rep.accuracy) row->accuracy = *rep.accuracy;
  row->welfare = rep.welfare;
  row->atkinson = rep.atkinson;
  row->ge2 = rep.ge;
  row->dwork_violation = rep.dwork;
  if (rep.demographic_parity) row->demographic_parity = *rep.demographic_parity;
  if (rep.fpr_diff) row->fpr_diff = *rep.fpr_diff;
  if (rep.fnr_diff) row->fnr_diff = *rep.fnr_diff;
  if (rep.mean_diff) row->mean_diff = *rep.mean_diff;
  if (rep.pos_residual_diff) row->pos_residual_diff = *rep.pos_residual_diff;
  if (rep.neg_residual_diff) row->neg_residual_diff = *rep.neg_residual_diff;
}

void sort_rows(std::vector<ResultRow>* rows) {
  auto key = [](const std::optional<double>& v) {
    return v ? *v : -std::numeric_limits<double>::infinity();
  };
  std::stable_sort(rows->begin(), rows->end(),
                   [&](const ResultRow& a, const ResultRow& b) {
                     if (key(a.alpha) != key(b.alpha))
                       return key(a.alpha) < key(b.alpha);
                     if (key(a.tau) != key(b.tau))
                       return key(a.tau) < key(b.tau);
                     long fa = a.fold ? *a.fold : -1;
                     long fb = b.fold ? *b.fold : -1;
                     return fa < fb;
                   });
}

std::string render_table(std::vector<ResultRow> rows) {
  sort_rows(&rows);
  std::string out = results_header();
  out.push_back('\n');
  for (const ResultRow& row : rows) {
    out += format_row(row);
    out.push_back('\n');
  }
  return out;
}

}  // namespace welfair::cmd
