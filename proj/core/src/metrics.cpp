#include "sitegrid/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "sitegrid/error.hpp"

namespace sitegrid {
namespace {

constexpr double kPivotFloor = 1e-12;

struct WeightedMoments {
  double mean_x = 0.0;
  double mean_y = 0.0;
  double var_x = 0.0;   // population variance
  double var_y = 0.0;
  double cov = 0.0;
};

void check_weights(std::size_t n, const std::vector<double>& weights) {
  if (weights.empty()) return;
  if (weights.size() != n) {
    throw Error(ErrorCode::invalid_argument,
                "weight count does not match value count");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0 || !std::isfinite(w)) {
      throw Error(ErrorCode::invalid_argument, "weights must be nonnegative");
    }
    sum += w;
  }
  if (!(sum > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "weight sum must be positive");
  }
}

double weight_at(const std::vector<double>& weights, std::size_t i) {
  return weights.empty() ? 1.0 : weights[i];
}

WeightedMoments moments(const std::vector<double>& x,
                        const std::vector<double>& y,
                        const std::vector<double>& weights) {
  double wsum = 0.0;
  WeightedMoments m;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double w = weight_at(weights, i);
    wsum += w;
    m.mean_x += w * x[i];
    m.mean_y += w * y[i];
  }
  m.mean_x /= wsum;
  m.mean_y /= wsum;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double w = weight_at(weights, i);
    double dx = x[i] - m.mean_x;
    double dy = y[i] - m.mean_y;
    m.var_x += w * dx * dx;
    m.var_y += w * dy * dy;
    m.cov += w * dx * dy;
  }
  m.var_x /= wsum;
  m.var_y /= wsum;
  m.cov /= wsum;
  return m;
}

}  // namespace

PerPanelMetrics per_panel_metrics(const ZipRecord& zip) {
  if (!(zip.potential_installs > 0.0)) {
    throw Error(ErrorCode::invalid_argument,
                "zip " + zip.zip_code + " has no potential installs");
  }
  PerPanelMetrics out;
  out.zip_code = zip.zip_code;
  out.energy_per_panel = zip.energy_potential_total / zip.potential_installs;
  out.carbon_per_panel = zip.carbon_offset_total / zip.potential_installs;
  out.realized_potential =
      realized_potential(zip.existing_installs, zip.potential_installs);
  return out;
}

double realized_potential(double existing, double potential) {
  if (!(potential > 0.0)) {
    throw Error(ErrorCode::invalid_argument,
                "realized potential undefined without potential installs");
  }
  return 100.0 * existing / potential;
}

MetricsTable per_zip_metrics(const Dataset& dataset) {
  MetricsTable table;
  table.rows.reserve(dataset.zips.size());
  for (const auto& zip : dataset.zips) {
    if (zip.potential_installs > 0.0) {
      table.rows.push_back(per_panel_metrics(zip));
    } else {
      ++table.excluded;
    }
  }
  return table;
}

double per_panel_field(const PerPanelMetrics& row, Attr attr) {
  switch (attr) {
    case Attr::energy_per_panel: return row.energy_per_panel;
    case Attr::carbon_per_panel: return row.carbon_per_panel;
    case Attr::realized_potential: return row.realized_potential;
    default:
      throw Error(ErrorCode::unknown_attribute,
                  "attribute " + std::string(attr_name(attr)) +
                      " is not a per-panel metric");
  }
}

double coefficient_of_variation(const std::vector<double>& values,
                                const std::vector<double>& weights) {
  if (values.empty()) {
    throw Error(ErrorCode::undefined_statistic,
                "coefficient of variation of an empty series");
  }
  check_weights(values.size(), weights);
  WeightedMoments m = moments(values, values, weights);
  if (m.mean_x == 0.0) {
    throw Error(ErrorCode::undefined_statistic,
                "coefficient of variation undefined for zero mean");
  }
  return std::sqrt(m.var_x) / m.mean_x;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y,
               const std::vector<double>& weights) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::invalid_argument,
                "correlation requires equal-length series");
  }
  if (x.size() < 2) {
    throw Error(ErrorCode::undefined_statistic,
                "correlation requires at least two pairs");
  }
  check_weights(x.size(), weights);
  WeightedMoments m = moments(x, y, weights);
  if (!(m.var_x > 0.0) || !(m.var_y > 0.0)) {
    throw Error(ErrorCode::undefined_statistic,
                "correlation undefined for a constant series");
  }
  double r = m.cov / std::sqrt(m.var_x * m.var_y);
  return std::clamp(r, -1.0, 1.0);
}

double median(std::vector<double> values) {
  if (values.empty()) {
    throw Error(ErrorCode::undefined_statistic, "median of an empty series");
  }
  std::sort(values.begin(), values.end());
  std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

std::vector<std::vector<std::string>> quantile_partition(
    const Dataset& dataset, Attr key, std::size_t q) {
  std::vector<std::pair<double, const std::string*>> ranked;
  ranked.reserve(dataset.zips.size());
  for (const auto& zip : dataset.zips) {
    if (auto value = zip_attr(dataset, zip, key)) {
      ranked.emplace_back(*value, &zip.zip_code);
    }
  }
  if (q == 0 || q > ranked.size()) {
    throw Error(ErrorCode::invalid_argument,
                "cannot split " + std::to_string(ranked.size()) +
                    " ranked records into " + std::to_string(q) + " groups");
  }
  std::sort(ranked.begin(), ranked.end(),
            [](const auto& a, const auto& b) {
              if (a.first != b.first) return a.first < b.first;
              return *a.second < *b.second;
            });

  // The first (n mod q) groups take one extra member, so sizes differ by
  // at most one and cover everything.
  std::vector<std::vector<std::string>> groups(q);
  std::size_t base = ranked.size() / q;
  std::size_t extra = ranked.size() % q;
  std::size_t cursor = 0;
  for (std::size_t g = 0; g < q; ++g) {
    std::size_t size = base + (g < extra ? 1 : 0);
    groups[g].reserve(size);
    for (std::size_t i = 0; i < size; ++i) {
      groups[g].push_back(*ranked[cursor++].second);
    }
  }
  return groups;
}

FitResult polyfit_lse(const std::vector<double>& x,
                      const std::vector<double>& y, std::size_t degree) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::invalid_argument,
                "fit requires equal-length series");
  }
  if (x.empty()) {
    throw Error(ErrorCode::invalid_argument, "fit requires data points");
  }
  std::vector<double> distinct(x);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()),
                 distinct.end());
  if (distinct.size() <= degree) {
    throw Error(ErrorCode::rank_deficient,
                std::to_string(distinct.size()) +
                    " distinct x values cannot support degree " +
                    std::to_string(degree));
  }

  const std::size_t n = x.size();
  const std::size_t terms = degree + 1;

  // Normal equations on standardized x for conditioning; coefficients are
  // expanded back to the raw basis afterwards.
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n);
  double scale = var > 0.0 ? std::sqrt(var) : 1.0;

  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = (x[i] - mean) / scale;

  std::vector<double> power_sums(2 * degree + 1, 0.0);
  std::vector<double> rhs(terms, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double zp = 1.0;
    for (std::size_t p = 0; p <= 2 * degree; ++p) {
      power_sums[p] += zp;
      zp *= z[i];
    }
    zp = 1.0;
    for (std::size_t p = 0; p < terms; ++p) {
      rhs[p] += y[i] * zp;
      zp *= z[i];
    }
  }

  std::vector<std::vector<double>> a(terms, std::vector<double>(terms));
  for (std::size_t r = 0; r < terms; ++r) {
    for (std::size_t c = 0; c < terms; ++c) {
      a[r][c] = power_sums[r + c];
    }
  }

  // Gaussian elimination with partial pivoting.
  std::vector<double> solution(rhs);
  for (std::size_t col = 0; col < terms; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < terms; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (std::abs(a[pivot][col]) < kPivotFloor) {
      throw Error(ErrorCode::rank_deficient, "singular normal equations");
    }
    std::swap(a[col], a[pivot]);
    std::swap(solution[col], solution[pivot]);
    for (std::size_t r = col + 1; r < terms; ++r) {
      double factor = a[r][col] / a[col][col];
      for (std::size_t c = col; c < terms; ++c) a[r][c] -= factor * a[col][c];
      solution[r] -= factor * solution[col];
    }
  }
  for (std::size_t col = terms; col-- > 0;) {
    for (std::size_t c = col + 1; c < terms; ++c) {
      solution[col] -= a[col][c] * solution[c];
    }
    solution[col] /= a[col][col];
  }

  // Expand p(z), z = (x - mean)/scale, into ascending powers of x.
  std::vector<double> coefficients(terms, 0.0);
  std::vector<double> shifted{1.0};  // ((x - mean)/scale)^k, iteratively
  for (std::size_t k = 0; k < terms; ++k) {
    for (std::size_t c = 0; c < shifted.size(); ++c) {
      coefficients[c] += solution[k] * shifted[c];
    }
    if (k + 1 < terms) {
      std::vector<double> next(shifted.size() + 1, 0.0);
      for (std::size_t c = 0; c < shifted.size(); ++c) {
        next[c] += shifted[c] * (-mean / scale);
        next[c + 1] += shifted[c] / scale;
      }
      shifted = std::move(next);
    }
  }

  FitResult result;
  result.coefficients = std::move(coefficients);
  result.n_points = n;

  double y_mean = 0.0;
  for (double v : y) y_mean += v;
  y_mean /= static_cast<double>(n);
  double ss_tot = 0.0;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double fitted = polyval(result.coefficients, x[i]);
    ss_res += (y[i] - fitted) * (y[i] - fitted);
    ss_tot += (y[i] - y_mean) * (y[i] - y_mean);
  }
  result.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;

  bool x_constant = distinct.size() < 2;
  bool y_constant = ss_tot == 0.0;
  if (!x_constant && !y_constant && n >= 2) {
    result.pearson_r = pearson(x, y);
  }
  return result;
}

double polyval(const std::vector<double>& coefficients, double x) {
  double value = 0.0;
  for (std::size_t k = coefficients.size(); k-- > 0;) {
    value = value * x + coefficients[k];
  }
  return value;
}

std::vector<FitResult> quantile_fits(const Dataset& dataset, Attr key,
                                     Attr x_attr, Attr y_attr, std::size_t q,
                                     std::size_t degree) {
  auto groups = quantile_partition(dataset, key, q);
  std::vector<FitResult> fits;
  fits.reserve(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    std::vector<double> xs;
    std::vector<double> ys;
    xs.reserve(groups[g].size());
    ys.reserve(groups[g].size());
    for (const auto& zip_code : groups[g]) {
      const ZipRecord* zip = dataset.find_zip(zip_code);
      auto x = zip_attr(dataset, *zip, x_attr);
      auto y = zip_attr(dataset, *zip, y_attr);
      if (x && y) {
        xs.push_back(*x);
        ys.push_back(*y);
      }
    }
    FitResult fit = polyfit_lse(xs, ys, degree);
    fit.quantile_index = g;
    fits.push_back(std::move(fit));
  }
  return fits;
}

QuadrantShares quadrant_stats(const MetricsTable& metrics, Attr x_key,
                              Attr y_key, double x_split, double y_split) {
  if (metrics.rows.empty()) {
    throw Error(ErrorCode::undefined_statistic,
                "quadrant shares of an empty metrics table");
  }
  QuadrantShares shares;
  shares.x_split = x_split;
  shares.y_split = y_split;
  shares.count = metrics.rows.size();
  for (const auto& row : metrics.rows) {
    bool right = per_panel_field(row, x_key) >= x_split;
    bool top = per_panel_field(row, y_key) >= y_split;
    if (top && right) {
      shares.top_right += 1.0;
    } else if (top) {
      shares.top_left += 1.0;
    } else if (right) {
      shares.bottom_right += 1.0;
    } else {
      shares.bottom_left += 1.0;
    }
  }
  double n = static_cast<double>(shares.count);
  shares.top_right /= n;
  shares.top_left /= n;
  shares.bottom_right /= n;
  shares.bottom_left /= n;
  return shares;
}

QuadrantShares quadrant_shares(const Dataset& dataset, SplitRule rule) {
  MetricsTable metrics = per_zip_metrics(dataset);
  if (metrics.rows.empty()) {
    throw Error(ErrorCode::undefined_statistic,
                "quadrant shares need per-panel records");
  }
  std::vector<double> xs;
  std::vector<double> ys;
  xs.reserve(metrics.rows.size());
  ys.reserve(metrics.rows.size());
  for (const auto& row : metrics.rows) {
    xs.push_back(row.carbon_per_panel);
    ys.push_back(row.energy_per_panel);
  }
  double x_split;
  double y_split;
  if (rule == SplitRule::mean) {
    x_split = summarize(xs).mean;
    y_split = summarize(ys).mean;
  } else {
    x_split = median(xs);
    y_split = median(ys);
  }
  return quadrant_stats(metrics, Attr::carbon_per_panel,
                        Attr::energy_per_panel, x_split, y_split);
}

SummaryStats summarize(const std::vector<double>& values) {
  if (values.empty()) {
    throw Error(ErrorCode::undefined_statistic, "summary of an empty series");
  }
  SummaryStats stats;
  stats.count = values.size();
  stats.min = values.front();
  stats.max = values.front();
  double sum = 0.0;
  for (double v : values) {
    sum += v;
    stats.min = std::min(stats.min, v);
    stats.max = std::max(stats.max, v);
  }
  stats.mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - stats.mean) * (v - stats.mean);
  stats.stddev = std::sqrt(ss / static_cast<double>(values.size()));
  return stats;
}

}  // namespace sitegrid
