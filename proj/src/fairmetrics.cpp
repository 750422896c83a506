#include "welfair/fairmetrics.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include "welfair/errors.hpp"
#include "welfair/kernels.hpp"
#include "welfair/welfare.hpp"

namespace welfair {

namespace {

const char* rate_name(RateKind k) {
  return k == RateKind::fpr ? "false-positive" : "false-negative";
}

void check_groups(const GroupAssignment& g, std::size_t n) {
  if (g.membership.size() != n)
    throw LengthMismatch("group assignment length does not match predictions");
  std::size_t c1 = g.count(Group::g1);
  if (c1 == 0 || c1 == g.membership.size())
    throw EmptyGroup("both groups must be non-empty");
}

// overflow-safe log(1 + exp(t))
double log1p_exp(double t) {
  if (t > 35.0) return t + std::log1p(std::exp(-t));
  return std::log1p(std::exp(t));
}

}  // namespace

DistanceMatrix DistanceMatrix::from_features(const double* X, std::size_t n,
                                             std::size_t k,
                                             std::size_t dense_cap) {
  if (n < 2) throw TooFewRows("pairwise distances need at least two points");
  DistanceMatrix m;
  m.mode_ = DistanceMode::normalized_euclidean;
  m.n_ = n;
  m.k_ = k;
  double max_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double s = kernels::sq_dist(X + i * k, X + j * k, k);
      if (s > max_sq) max_sq = s;
    }
  if (max_sq == 0.0)
    throw DegenerateData("all points identical, distances cannot be normalized");
  m.inv_scale_ = 1.0 / std::sqrt(max_sq);
  m.points_.assign(X, X + n * k);
  if (n <= dense_cap) {
    m.dense_.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        double d = m.compute(i, j);
        m.dense_[i * n + j] = d;
        m.dense_[j * n + i] = d;
      }
    m.points_.clear();
  }
  return m;
}

DistanceMatrix DistanceMatrix::from_features(const Dataset& d,
                                             std::size_t dense_cap) {
  return from_features(d.X.data(), d.n, d.k, dense_cap);
}

DistanceMatrix DistanceMatrix::from_labels(const std::vector<double>& y,
                                           std::size_t dense_cap) {
  if (y.size() < 2)
    throw TooFewRows("pairwise distances need at least two points");
  DistanceMatrix m;
  m.mode_ = DistanceMode::label_distance;
  m.n_ = y.size();
  m.k_ = 1;
  m.points_ = y;
  if (m.n_ <= dense_cap) {
    m.dense_.assign(m.n_ * m.n_, 0.0);
    for (std::size_t i = 0; i < m.n_; ++i)
      for (std::size_t j = i + 1; j < m.n_; ++j) {
        double d = m.compute(i, j);
        m.dense_[i * m.n_ + j] = d;
        m.dense_[j * m.n_ + i] = d;
      }
    m.points_.clear();
  }
  return m;
}

double DistanceMatrix::compute(std::size_t i, std::size_t j) const {
  if (mode_ == DistanceMode::label_distance)
    return std::fabs(points_[i] - points_[j]);
  return std::sqrt(kernels::sq_dist(points_.data() + i * k_,
                                    points_.data() + j * k_, k_)) *
         inv_scale_;
}

double DistanceMatrix::at(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_) throw InvalidArgument("distance index out of range");
  if (i == j) return 0.0;
  if (!dense_.empty()) return dense_[i * n_ + j];
  return compute(i, j);
}

void DistanceMatrix::row(std::size_t i, double* out) const {
  if (i >= n_) throw InvalidArgument("distance row out of range");
  if (!dense_.empty()) {
    std::memcpy(out, dense_.data() + i * n_, n_ * sizeof(double));
    return;
  }
  for (std::size_t j = 0; j < n_; ++j) out[j] = i == j ? 0.0 : compute(i, j);
}

double dwork_violation(const std::vector<double>& predictions,
                       const DistanceMatrix& d) {
  std::size_t n = predictions.size();
  if (d.size() != n)
    throw LengthMismatch("distance matrix does not match predictions");
  if (n < 2) return 0.0;
  std::vector<double> buf(n);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    d.row(i, buf.data());
    total += kernels::dwork_row(predictions[i], predictions.data() + i + 1,
                                buf.data() + i + 1, n - i - 1);
  }
  return 2.0 * total / (static_cast<double>(n) * static_cast<double>(n - 1));
}

double demographic_parity_diff(const std::vector<double>& hard_predictions,
                               const GroupAssignment& groups) {
  check_groups(groups, hard_predictions.size());
  double pos[2] = {0, 0};
  double cnt[2] = {0, 0};
  for (std::size_t i = 0; i < hard_predictions.size(); ++i) {
    double p = hard_predictions[i];
    if (p != 1.0 && p != -1.0)
      throw InvalidArgument("demographic parity needs -1/+1 predictions");
    int g = static_cast<int>(groups.membership[i]);
    cnt[g] += 1.0;
    if (p == 1.0) pos[g] += 1.0;
  }
  return std::fabs(pos[0] / cnt[0] - pos[1] / cnt[1]);
}

double error_rate_diff(RateKind kind,
                       const std::vector<double>& hard_predictions,
                       const std::vector<double>& labels,
                       const GroupAssignment& groups) {
  if (hard_predictions.size() != labels.size())
    throw LengthMismatch("predictions and labels differ in length");
  check_groups(groups, labels.size());
  double conditioning = kind == RateKind::fpr ? -1.0 : 1.0;
  double erroneous = -conditioning;
  double num[2] = {0, 0};
  double den[2] = {0, 0};
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != conditioning) continue;
    int g = static_cast<int>(groups.membership[i]);
    den[g] += 1.0;
    if (hard_predictions[i] == erroneous) num[g] += 1.0;
  }
  for (int g = 0; g < 2; ++g)
    if (den[g] == 0.0)
      throw UndefinedRate(std::string(rate_name(kind)) +
                          " rate undefined: group " + std::to_string(g + 1) +
                          " has no instance with the conditioning label");
  return std::fabs(num[0] / den[0] - num[1] / den[1]);
}

double mean_diff(const std::vector<double>& predictions,
                 const GroupAssignment& groups) {
  check_groups(groups, predictions.size());
  double sum[2] = {0, 0};
  double cnt[2] = {0, 0};
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    int g = static_cast<int>(groups.membership[i]);
    sum[g] += predictions[i];
    cnt[g] += 1.0;
  }
  return std::fabs(sum[0] / cnt[0] - sum[1] / cnt[1]);
}

double residual_diff(ResidualSign sign, const std::vector<double>& predictions,
                     const std::vector<double>& labels,
                     const GroupAssignment& groups, bool* degenerate) {
  if (predictions.size() != labels.size())
    throw LengthMismatch("predictions and labels differ in length");
  check_groups(groups, labels.size());
  if (degenerate) *degenerate = false;
  double sum[2] = {0, 0};
  double cnt[2] = {0, 0};
  for (std::size_t i = 0; i < labels.size(); ++i) {
    double r = sign == ResidualSign::positive ? predictions[i] - labels[i]
                                              : labels[i] - predictions[i];
    int g = static_cast<int>(groups.membership[i]);
    if (r > 0.0) {
      sum[g] += r;
      cnt[g] += 1.0;
    }
  }
  double v[2];
  for (int g = 0; g < 2; ++g) {
    if (cnt[g] == 0.0) {
      v[g] = 0.0;
      if (degenerate) *degenerate = true;
    } else {
      v[g] = sum[g] / cnt[g];
    }
  }
  return std::fabs(v[0] - v[1]);
}

BinaryBenefitTable default_classification_table() {
  return BinaryBenefitTable{1.0, 1.5, 0.0, 1.0};
}

std::vector<double> hard_labels(const std::vector<double>& scores) {
  std::vector<double> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i)
    out[i] = scores[i] >= 0.0 ? 1.0 : -1.0;
  return out;
}

MetricsReport full_report(const Dataset& data,
                          const std::vector<double>& predictions,
                          const ReportConfig& config) {
  if (predictions.size() != data.n)
    throw LengthMismatch("predictions do not match dataset rows");
  MetricsReport rep;

  bool classification = data.task == Task::classification;
  std::vector<double> hard;
  const std::vector<double>* metric_preds = &predictions;
  if (classification) {
    hard = hard_labels(predictions);
    metric_preds = &hard;
  }

  // loss and accuracy from the raw scores
  if (classification) {
    double s = 0.0;
    double correct = 0.0;
    for (std::size_t i = 0; i < data.n; ++i) {
      s += log1p_exp(-data.y[i] * predictions[i]);
      if (hard[i] == data.y[i]) correct += 1.0;
    }
    rep.loss = s / static_cast<double>(data.n);
    rep.accuracy = correct / static_cast<double>(data.n);
  } else {
    std::vector<double> r(data.n);
    for (std::size_t i = 0; i < data.n; ++i) r[i] = predictions[i] - data.y[i];
    rep.loss = kernels::sumsq(r.data(), data.n) / static_cast<double>(data.n);
  }

  // welfare and inequality over the (floored) benefit profile
  BenefitSpec spec = config.benefit
                         ? *config.benefit
                         : (classification
                                ? to_pm1(fit_binary_benefit(
                                      default_classification_table()))
                                : regression_benefit());
  spec.floor = config.benefit_floor;
  BenefitProfile profile = build_profile(*metric_preds, data.y, spec);
  rep.welfare = empirical_welfare(profile, config.alpha);
  rep.atkinson = atkinson(profile, config.beta);
  rep.ge = generalized_entropy(profile, config.ge_alpha);

  // similarity-based violation; the task picks the distance
  DistanceMatrix dm =
      classification
          ? DistanceMatrix::from_features(data, config.distance_cap)
          : DistanceMatrix::from_labels(data.y, config.distance_cap);
  rep.dwork = dwork_violation(*metric_preds, dm);

  if (data.groups) {
    const GroupAssignment& g = *data.groups;
    rep.mean_diff = mean_diff(*metric_preds, g);
    rep.pos_residual_diff =
        residual_diff(ResidualSign::positive, *metric_preds, data.y, g,
                      &rep.pos_residual_degenerate);
    rep.neg_residual_diff =
        residual_diff(ResidualSign::negative, *metric_preds, data.y, g,
                      &rep.neg_residual_degenerate);
    if (classification) {
      rep.demographic_parity = demographic_parity_diff(hard, g);
      try {
        rep.fpr_diff = error_rate_diff(RateKind::fpr, hard, data.y, g);
      } catch (const UndefinedRate&) {
      }
      try {
        rep.fnr_diff = error_rate_diff(RateKind::fnr, hard, data.y, g);
      } catch (const UndefinedRate&) {
      }
    }
  }
  return rep;
}

}  // namespace welfair
