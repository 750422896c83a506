#include "welfair/datakit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "welfair/errors.hpp"
#include "welfair/kernels.hpp"
#include "welfair/rng.hpp"

namespace welfair {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      out.push_back(trim(line.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

bool parse_double(std::string_view s, double* out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, *out);
  return ec == std::errc{} && ptr == last;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

LoadedCsv load_csv(const std::string& path, const CsvSchema& schema) {
  std::string text = read_file(path);
  std::vector<std::string_view> lines;
  {
    std::string_view rest = text;
    while (!rest.empty()) {
      std::size_t nl = rest.find('\n');
      lines.push_back(rest.substr(0, nl));
      if (nl == std::string_view::npos) break;
      rest.remove_prefix(nl + 1);
    }
  }
  if (lines.empty() || trim(lines[0]).empty())
    throw IoError(path + " has no header row");

  auto header = split_fields(lines[0]);
  std::size_t label_idx = header.size();
  std::size_t group_idx = header.size();
  std::vector<std::size_t> feature_cols;
  std::vector<std::string> feature_names;
  for (std::size_t c = 0; c < header.size(); ++c) {
    std::string name(header[c]);
    if (name == schema.label_column) {
      label_idx = c;
    } else if (schema.group_column && name == *schema.group_column) {
      group_idx = c;
    } else {
      feature_cols.push_back(c);
      feature_names.push_back(name);
    }
  }
  if (label_idx == header.size())
    throw MissingColumn("label column " + schema.label_column + " not in " + path);
  if (schema.group_column && group_idx == header.size())
    throw MissingColumn("group column " + *schema.group_column + " not in " + path);

  LoadedCsv out;
  Dataset& d = out.data;
  d.task = schema.task;
  d.k = feature_cols.size() + 1;
  d.feature_names = feature_names;
  d.feature_names.push_back("homogeneous");
  d.label_name = schema.label_column;
  if (schema.group_column) d.groups = GroupAssignment{};

  std::size_t data_row = 0;  // 1-based, counted over non-empty lines
  for (std::size_t li = 1; li < lines.size(); ++li) {
    std::string_view line = lines[li];
    if (trim(line).empty()) continue;
    ++data_row;
    auto fields = split_fields(line);
    bool missing = fields.size() != header.size();
    if (!missing)
      for (auto f : fields)
        if (f.empty()) missing = true;
    if (missing) {
      ++out.dropped_rows;
      continue;
    }
    for (std::size_t j = 0; j < feature_cols.size(); ++j) {
      double v;
      if (!parse_double(fields[feature_cols[j]], &v))
        throw MalformedNumber("malformed number at row " +
                              std::to_string(data_row) + ", column " +
                              feature_names[j]);
      d.X.push_back(v);
    }
    d.X.push_back(1.0);
    double label;
    if (!parse_double(fields[label_idx], &label))
      throw MalformedNumber("malformed number at row " +
                            std::to_string(data_row) + ", column " +
                            schema.label_column);
    d.y.push_back(label);
    if (schema.group_column) {
      double g;
      if (!parse_double(fields[group_idx], &g) || (g != 0.0 && g != 1.0))
        throw MalformedNumber("group value at row " + std::to_string(data_row) +
                              " must be 0 or 1");
      d.groups->membership.push_back(g == 0.0 ? Group::g1 : Group::g2);
    }
    ++d.n;
  }
  if (d.n == 0) throw TooFewRows(path + " has no usable data rows");
  d.validate();
  return out;
}

void save_csv(const std::string& path, const Dataset& d) {
  d.validate();
  std::ofstream outf(path, std::ios::binary);
  if (!outf) throw IoError("cannot write " + path);
  std::string line;
  for (std::size_t j = 0; j + 1 < d.k; ++j) {
    line += d.feature_names.empty() ? "f" + std::to_string(j + 1)
                                    : d.feature_names[j];
    line += ',';
  }
  line += d.label_name;
  if (d.groups) line += ",group";
  outf << line << '\n';
  for (std::size_t i = 0; i < d.n; ++i) {
    line.clear();
    for (std::size_t j = 0; j + 1 < d.k; ++j) {
      line += fmt17(d.X[i * d.k + j]);
      line += ',';
    }
    line += fmt17(d.y[i]);
    if (d.groups)
      line += d.groups->membership[i] == Group::g1 ? ",0" : ",1";
    outf << line << '\n';
  }
  if (!outf) throw IoError("write failed for " + path);
}

namespace {

std::size_t column_index(const Dataset& d, const std::string& name) {
  for (std::size_t j = 0; j < d.feature_names.size(); ++j)
    if (d.feature_names[j] == name) return j;
  throw MissingColumn("no feature column named " + name);
}

// distinct values exactly {0,1} or {-1,1}
bool is_binary_column(const Dataset& d, std::size_t j) {
  bool has0 = false, has1 = false, hasm1 = false;
  for (std::size_t i = 0; i < d.n; ++i) {
    double v = d.X[i * d.k + j];
    if (v == 0.0)
      has0 = true;
    else if (v == 1.0)
      has1 = true;
    else if (v == -1.0)
      hasm1 = true;
    else
      return false;
  }
  return (has0 && has1 && !hasm1) || (hasm1 && has1 && !has0);
}

}  // namespace

PreprocessResult preprocess(const Dataset& d, const PreprocessConfig& config) {
  d.validate();
  PreprocessResult out;
  out.data = d;
  Dataset& r = out.data;

  if (config.group_rule) {
    std::size_t j = column_index(r, config.group_rule->column);
    GroupAssignment g;
    g.membership.resize(r.n);
    for (std::size_t i = 0; i < r.n; ++i)
      g.membership[i] = r.X[i * r.k + j] > config.group_rule->threshold
                            ? Group::g2
                            : Group::g1;
    r.groups = g;
  }

  if (config.flip_labels)
    for (double& v : r.y) v = -v;
  if (config.target_rescale) {
    double div = *config.target_rescale;
    if (!(div > 0.0) || !std::isfinite(div))
      throw InvalidArgument("target rescale divisor must be positive");
    for (double& v : r.y) v /= div;
  }

  if (config.standardize) {
    for (const std::string& name : config.exempt) column_index(r, name);
    std::vector<double> col(r.n);
    for (std::size_t j = 0; j + 1 < r.k; ++j) {
      if (is_binary_column(r, j)) continue;
      if (std::find(config.exempt.begin(), config.exempt.end(),
                    r.feature_names[j]) != config.exempt.end())
        continue;
      for (std::size_t i = 0; i < r.n; ++i) col[i] = r.X[i * r.k + j];
      double mu = kernels::sum(col.data(), r.n) / static_cast<double>(r.n);
      for (std::size_t i = 0; i < r.n; ++i) col[i] -= mu;
      double var = kernels::sumsq(col.data(), r.n) / static_cast<double>(r.n);
      if (var <= 1e-24 * (1.0 + mu * mu)) {
        out.zero_variance.push_back(r.feature_names[j]);
        continue;
      }
      double inv_sigma = 1.0 / std::sqrt(var);
      for (std::size_t i = 0; i < r.n; ++i)
        r.X[i * r.k + j] = col[i] * inv_sigma;
    }
  }

  r.validate();
  return out;
}

GeneratedData gen_realizable(std::size_t n, std::size_t k, std::uint64_t seed,
                             double theta_scale) {
  if (n < 1) throw InvalidArgument("need at least one row");
  if (k < 2) throw InvalidArgument("need at least one real feature");
  CounterRng rng(seed);
  GeneratedData out;
  out.truth.task = Task::regression;
  out.truth.weights.resize(k);
  for (double& w : out.truth.weights) w = rng.next_normal() * theta_scale;

  Dataset& d = out.data;
  d.task = Task::regression;
  d.n = n;
  d.k = k;
  d.X.resize(n * k);
  d.y.resize(n);
  for (std::size_t j = 0; j + 1 < k; ++j)
    d.feature_names.push_back("f" + std::to_string(j + 1));
  d.feature_names.push_back("homogeneous");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j + 1 < k; ++j) d.X[i * k + j] = rng.next_normal();
    d.X[i * k + (k - 1)] = 1.0;
    d.y[i] = kernels::dot(d.X.data() + i * k, out.truth.weights.data(), k);
  }
  d.validate();
  return out;
}

std::vector<FoldSplit> kfold_split(std::size_t n, std::size_t folds,
                                   std::uint64_t seed) {
  if (folds < 2) throw InvalidArgument("need at least two folds");
  if (folds > n) throw TooFewRows("more folds than rows");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  CounterRng rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    std::size_t j = rng.next_index(i + 1);
    std::swap(perm[i], perm[j]);
  }
  std::vector<FoldSplit> out(folds);
  std::size_t base = n / folds, extra = n % folds, pos = 0;
  std::vector<bool> in_test(n);
  for (std::size_t f = 0; f < folds; ++f) {
    std::size_t size = base + (f < extra ? 1 : 0);
    in_test.assign(n, false);
    for (std::size_t t = 0; t < size; ++t) in_test[perm[pos + t]] = true;
    pos += size;
    for (std::size_t i = 0; i < n; ++i)
      (in_test[i] ? out[f].test : out[f].train).push_back(i);
  }
  return out;
}

}  // namespace welfair
