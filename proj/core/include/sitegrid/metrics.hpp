#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sitegrid/attributes.hpp"
#include "sitegrid/types.hpp"

namespace sitegrid {

/// Derived per-ZIP comparison metrics. Defined only when the ZIP has
/// viable panel sites.
struct PerPanelMetrics {
  std::string zip_code;
  double energy_per_panel = 0.0;     // kWh/yr per panel
  double carbon_per_panel = 0.0;     // kg CO2/yr per panel
  double realized_potential = 0.0;   // percent, in [0, 100]
};

/// Throws Error{invalid_argument} when potential_installs is 0.
PerPanelMetrics per_panel_metrics(const ZipRecord& zip);

/// 100 x existing / potential. Throws Error{invalid_argument} when
/// potential is not positive.
double realized_potential(double existing, double potential);

/// Per-panel metrics for the whole dataset in zip_code order;
/// zero-potential ZIPs are excluded and counted.
struct MetricsTable {
  std::vector<PerPanelMetrics> rows;
  std::size_t excluded = 0;
};

MetricsTable per_zip_metrics(const Dataset& dataset);

/// Field access by attribute selector; only the three per-panel
/// attributes are valid here.
double per_panel_field(const PerPanelMetrics& row, Attr attr);

/// Population coefficient of variation: stddev / mean, optionally
/// weighted. Throws Error{undefined_statistic} when the series is empty
/// or its mean is zero, Error{invalid_argument} on weight-length mismatch
/// or a nonpositive weight sum.
double coefficient_of_variation(const std::vector<double>& values,
                                const std::vector<double>& weights = {});

/// Product-moment correlation, optionally weighted. Throws
/// Error{invalid_argument} on length mismatch, Error{undefined_statistic}
/// when fewer than two pairs or either series is constant (the value
/// would be 0/0; never NaN).
double pearson(const std::vector<double>& x, const std::vector<double>& y,
               const std::vector<double>& weights = {});

/// Median (mean of the middle pair for even counts). Throws
/// Error{undefined_statistic} when empty.
double median(std::vector<double> values);

/// Contiguous groups after sorting by (key ascending, zip_code
/// ascending); the first (n mod q) groups take one extra member, so sizes
/// differ by at most one. ZIPs whose key attribute is absent are
/// excluded. Throws Error{invalid_argument} when q is 0 or exceeds the
/// number of ranked ZIPs.
std::vector<std::vector<std::string>> quantile_partition(
    const Dataset& dataset, Attr key, std::size_t q);

struct FitResult {
  std::size_t quantile_index = 0;    // 0-based; 0 for stand-alone fits
  std::vector<double> coefficients;  // ascending powers of x
  std::optional<double> pearson_r;   // absent when either series constant
  double r_squared = 0.0;
  std::size_t n_points = 0;
};

/// Least-squares polynomial fit of y on x (normal equations on centered,
/// scaled x). Throws Error{invalid_argument} on length mismatch or empty
/// input, Error{rank_deficient} when there are at most `degree` distinct
/// x values.
FitResult polyfit_lse(const std::vector<double>& x,
                      const std::vector<double>& y, std::size_t degree);

double polyval(const std::vector<double>& coefficients, double x);

/// Partition ZIPs into q groups by `key`, then fit
/// y_attr on x_attr within each group. Returned in group order with
/// quantile_index set.
std::vector<FitResult> quantile_fits(const Dataset& dataset, Attr key,
                                     Attr x_attr, Attr y_attr, std::size_t q,
                                     std::size_t degree);

/// Share of records in each half-plane pair; points exactly on a split
/// line count toward the >= side.
struct QuadrantShares {
  double top_right = 0.0;
  double top_left = 0.0;
  double bottom_right = 0.0;
  double bottom_left = 0.0;
  double x_split = 0.0;
  double y_split = 0.0;
  std::size_t count = 0;

  double top_half() const { return top_right + top_left; }
  double right_half() const { return top_right + bottom_right; }
};

/// Classify per-panel rows by (x >= x_split, y >= y_split). Throws
/// Error{undefined_statistic} on an empty table.
QuadrantShares quadrant_stats(const MetricsTable& metrics, Attr x_key,
                              Attr y_key, double x_split, double y_split);

enum class SplitRule { mean, median };

/// The energy-vs-carbon benefit quadrants: x = carbon offset per panel,
/// y = energy generation per panel, split at each axis's mean (or median).
QuadrantShares quadrant_shares(const Dataset& dataset,
                               SplitRule rule = SplitRule::mean);

struct SummaryStats {
  std::size_t count = 0;
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation
  double min = 0.0;
  double max = 0.0;
};

/// Throws Error{undefined_statistic} on an empty series.
SummaryStats summarize(const std::vector<double>& values);

}  // namespace sitegrid
