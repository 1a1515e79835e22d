#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "sitegrid/error.hpp"
#include "sitegrid/metrics.hpp"
#include "support.hpp"

using namespace sitegrid;
namespace ts = testsupport;

TEST_CASE("per_panel_metrics divides totals by viable panel count") {
  ZipRecord zip = ts::zip("00501", "NY", 25, 100, 1000, 200);
  zip.potential_installs = 10;
  zip.existing_installs = 10;
  PerPanelMetrics m = per_panel_metrics(zip);
  CHECK(m.energy_per_panel == 100.0);
  CHECK(m.carbon_per_panel == 20.0);
  CHECK(m.realized_potential == 100.0);

  CHECK(realized_potential(25, 100) == 25.0);
  CHECK(ts::error_code_of([] { realized_potential(1, 0); }) ==
        ErrorCode::invalid_argument);
}

TEST_CASE("per_panel_metrics is homogeneous in a joint rescale") {
  ZipRecord zip = ts::zip("00501", "NY", 3, 11, 1234.5, 321.25);
  PerPanelMetrics base = per_panel_metrics(zip);
  ZipRecord scaled = zip;
  scaled.existing_installs *= 4;
  scaled.potential_installs *= 4;
  scaled.energy_potential_total *= 4;
  scaled.carbon_offset_total *= 4;
  PerPanelMetrics quad = per_panel_metrics(scaled);
  CHECK(quad.energy_per_panel == doctest::Approx(base.energy_per_panel));
  CHECK(quad.carbon_per_panel == doctest::Approx(base.carbon_per_panel));
  CHECK(quad.realized_potential == doctest::Approx(base.realized_potential));
}

TEST_CASE("per_zip_metrics excludes and counts zero-potential ZIPs") {
  Dataset dataset = ts::dataset({
      ts::zip("00501", "NY", 5, 10, 1000, 200),
      ts::zip("00502", "NY", 0, 0, 0, 0),
  });
  MetricsTable table = per_zip_metrics(dataset);
  REQUIRE(table.rows.size() == 1);
  CHECK(table.rows[0].zip_code == "00501");
  CHECK(table.excluded == 1);
}

TEST_CASE("coefficient_of_variation oracle values") {
  CHECK(coefficient_of_variation({2, 2, 2}) == 0.0);
  CHECK(coefficient_of_variation({1, 3}) == 0.5);

  std::vector<double> series = {1, 3, 7, 2, 9};
  std::vector<double> scaled;
  for (double v : series) scaled.push_back(v * 17.5);
  CHECK(coefficient_of_variation(scaled) ==
        doctest::Approx(coefficient_of_variation(series)).epsilon(1e-12));

  CHECK(ts::error_code_of([] { coefficient_of_variation({}); }) ==
        ErrorCode::undefined_statistic);
  CHECK(ts::error_code_of([] { coefficient_of_variation({-1, 1}); }) ==
        ErrorCode::undefined_statistic);
}

TEST_CASE("pearson oracle values and error paths") {
  CHECK(pearson({1, 2, 5}, {1, 2, 5}) == doctest::Approx(1.0));
  CHECK(pearson({1, 2, 5}, {-1, -2, -5}) == doctest::Approx(-1.0));
  // closed form: 9 / sqrt(84)
  CHECK(pearson({1, 2, 3}, {1, 2, 4}) ==
        doctest::Approx(0.98198).epsilon(1e-5));
  CHECK(pearson({1, 2, 3}, {1, 2, 4}) ==
        doctest::Approx(9.0 / std::sqrt(84.0)).epsilon(1e-12));

  CHECK(ts::error_code_of([] { pearson({1, 1, 1}, {1, 2, 3}); }) ==
        ErrorCode::undefined_statistic);
  CHECK(ts::error_code_of([] { pearson({1}, {2}); }) ==
        ErrorCode::undefined_statistic);
  CHECK(ts::error_code_of([] { pearson({1, 2}, {1, 2, 3}); }) ==
        ErrorCode::invalid_argument);
}

TEST_CASE("pearson is symmetric and affine-invariant") {
  std::vector<double> x = {1, 4, 2, 8, 5};
  std::vector<double> y = {3, 1, 7, 2, 9};
  CHECK(pearson(x, y) == doctest::Approx(pearson(y, x)).epsilon(1e-15));
  std::vector<double> shifted;
  for (double v : x) shifted.push_back(2.5 * v + 100.0);
  CHECK(pearson(shifted, y) == doctest::Approx(pearson(x, y)).epsilon(1e-12));
}

TEST_CASE("median") {
  CHECK(median({3, 1, 2}) == 2.0);
  CHECK(median({4, 1, 3, 2}) == 2.5);
  CHECK(ts::error_code_of([] { median({}); }) ==
        ErrorCode::undefined_statistic);
}

namespace {

Dataset counting_dataset(std::size_t n) {
  std::vector<ZipRecord> zips;
  for (std::size_t i = 0; i < n; ++i) {
    std::string code = "00" + std::to_string(500 + i);
    zips.push_back(ts::zip(code, "NY", 1, 10, 100.0 * (i + 1),
                           10.0 * (i + 1)));
  }
  return ts::dataset(std::move(zips));
}

}  // namespace

TEST_CASE("quantile_partition sizes and ordering") {
  Dataset eight = counting_dataset(8);
  auto quartiles = quantile_partition(eight, Attr::carbon_offset_total, 4);
  REQUIRE(quartiles.size() == 4);
  for (const auto& group : quartiles) CHECK(group.size() == 2);
  CHECK(quartiles[0] == std::vector<std::string>{"00500", "00501"});
  CHECK(quartiles[3] == std::vector<std::string>{"00506", "00507"});

  Dataset ten = counting_dataset(10);
  auto groups = quantile_partition(ten, Attr::carbon_offset_total, 4);
  REQUIRE(groups.size() == 4);
  CHECK(groups[0].size() == 3);
  CHECK(groups[1].size() == 3);
  CHECK(groups[2].size() == 2);
  CHECK(groups[3].size() == 2);
}

TEST_CASE("quantile_partition breaks ties by zip_code") {
  std::vector<ZipRecord> zips;
  for (int i = 0; i < 8; ++i) {
    zips.push_back(ts::zip("0050" + std::to_string(i), "NY", 1, 10, 100, 50));
  }
  Dataset dataset = ts::dataset(std::move(zips));
  auto halves = quantile_partition(dataset, Attr::carbon_offset_total, 2);
  REQUIRE(halves.size() == 2);
  CHECK(halves[0].size() == 4);
  CHECK(halves[1].size() == 4);
  CHECK(halves[0].front() == "00500");
  CHECK(halves[1].back() == "00507");
}

TEST_CASE("quantile_partition is a partition of the ranked ZIPs") {
  Dataset dataset = counting_dataset(11);
  auto groups = quantile_partition(dataset, Attr::carbon_offset_total, 3);
  std::set<std::string> seen;
  std::size_t total = 0;
  for (const auto& group : groups) {
    total += group.size();
    for (const auto& zip : group) CHECK(seen.insert(zip).second);
  }
  CHECK(total == dataset.zips.size());

  CHECK(ts::error_code_of([&] {
          quantile_partition(dataset, Attr::carbon_offset_total, 12);
        }) == ErrorCode::invalid_argument);
  CHECK(ts::error_code_of([&] {
          quantile_partition(dataset, Attr::carbon_offset_total, 0);
        }) == ErrorCode::invalid_argument);
}

TEST_CASE("polyfit_lse interpolates y = x^2 + x + 1 exactly") {
  FitResult fit = polyfit_lse({0, 1, 2}, {1, 3, 7}, 2);
  REQUIRE(fit.coefficients.size() == 3);
  CHECK(fit.coefficients[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(fit.coefficients[1] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(fit.coefficients[2] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(fit.n_points == 3);
  CHECK(fit.r_squared == doctest::Approx(1.0));
}

TEST_CASE("polyfit_lse fits collinear points with zero residual") {
  std::vector<double> x = {0, 1, 2, 3};
  std::vector<double> y = {5, 7, 9, 11};  // y = 2x + 5
  FitResult fit = polyfit_lse(x, y, 1);
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(polyval(fit.coefficients, x[i]) ==
          doctest::Approx(y[i]).epsilon(1e-12));
  }
  CHECK(fit.pearson_r.has_value());
  CHECK(*fit.pearson_r == doctest::Approx(1.0));
}

TEST_CASE("polyfit_lse never beats the data's own scale") {
  std::vector<double> x = {1, 2, 3, 4, 5, 6};
  std::vector<double> y = {2, 1, 4, 9, 3, 8};
  FitResult fit = polyfit_lse(x, y, 2);
  double residuals = 0.0;
  double zero_poly = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double r = y[i] - polyval(fit.coefficients, x[i]);
    residuals += r * r;
    zero_poly += y[i] * y[i];
  }
  CHECK(residuals <= zero_poly);
  CHECK(fit.r_squared >= 0.0);
  CHECK(fit.r_squared <= 1.0);
}

TEST_CASE("polyfit_lse interpolates degree d on d+1 distinct points") {
  std::vector<double> x = {-2, -1, 0.5, 3, 7};
  std::vector<double> y = {11, -3, 0.25, 9, -40};
  FitResult fit = polyfit_lse(x, y, 4);
  for (std::size_t i = 0; i < x.size(); ++i) {
    double predicted = polyval(fit.coefficients, x[i]);
    CHECK(predicted == doctest::Approx(y[i]).epsilon(1e-9));
  }
}

TEST_CASE("polyfit_lse rejects rank-deficient designs") {
  CHECK(ts::error_code_of([] { polyfit_lse({2, 2, 2}, {1, 2, 3}, 1); }) ==
        ErrorCode::rank_deficient);
  CHECK(ts::error_code_of([] { polyfit_lse({1, 2}, {1, 2}, 2); }) ==
        ErrorCode::rank_deficient);
  CHECK(ts::error_code_of([] { polyfit_lse({}, {}, 1); }) ==
        ErrorCode::invalid_argument);
}

TEST_CASE("quantile_fits returns one fit per group in order") {
  Dataset dataset = counting_dataset(10);
  auto fits = quantile_fits(dataset, Attr::carbon_offset_total,
                            Attr::carbon_offset_total,
                            Attr::energy_potential_total, 4, 1);
  REQUIRE(fits.size() == 4);
  for (std::size_t i = 0; i < fits.size(); ++i) {
    CHECK(fits[i].quantile_index == i);
  }
  CHECK(fits[0].n_points == 3);
  CHECK(fits[3].n_points == 2);
  // energy = 10 x carbon on this fixture, so every group fits the same line
  for (const auto& fit : fits) {
    CHECK(polyval(fit.coefficients, 100.0) ==
          doctest::Approx(1000.0).epsilon(1e-9));
  }
}

TEST_CASE("quadrant_stats classifies with >= boundary rule") {
  MetricsTable metrics;
  metrics.rows = {
      {"00501", 10, 1, 0},  // bottom-left
      {"00502", 10, 9, 0},  // bottom-right
      {"00503", 90, 1, 0},  // top-left
      {"00504", 90, 9, 0},  // top-right
  };
  QuadrantShares shares = quadrant_stats(metrics, Attr::carbon_per_panel,
                                         Attr::energy_per_panel, 5.0, 50.0);
  CHECK(shares.top_right == 0.25);
  CHECK(shares.top_left == 0.25);
  CHECK(shares.bottom_right == 0.25);
  CHECK(shares.bottom_left == 0.25);
  CHECK(shares.top_right + shares.top_left + shares.bottom_right +
            shares.bottom_left ==
        doctest::Approx(1.0).epsilon(1e-12));

  // boundary points join the >= side
  MetricsTable edge;
  edge.rows = {{"00501", 50, 5, 0}};
  QuadrantShares on_split = quadrant_stats(edge, Attr::carbon_per_panel,
                                           Attr::energy_per_panel, 5.0, 50.0);
  CHECK(on_split.top_right == 1.0);

  MetricsTable high;
  high.rows = {{"00501", 90, 9, 0}, {"00502", 80, 8, 0}};
  CHECK(quadrant_stats(high, Attr::carbon_per_panel, Attr::energy_per_panel,
                       5.0, 50.0)
            .top_right == 1.0);
}

TEST_CASE("quadrant_shares splits at the per-axis mean by default") {
  // carbon per panel: {1, 3} mean 2; energy per panel: {10, 30} mean 20
  Dataset dataset = ts::dataset({
      ts::zip("00501", "NY", 0, 10, 100, 10),
      ts::zip("00502", "NY", 0, 10, 300, 30),
  });
  QuadrantShares shares = quadrant_shares(dataset);
  CHECK(shares.x_split == 2.0);
  CHECK(shares.y_split == 20.0);
  CHECK(shares.top_right == 0.5);
  CHECK(shares.bottom_left == 0.5);
  CHECK(shares.count == 2);
}

TEST_CASE("summarize basic statistics") {
  SummaryStats stats = summarize({1, 3});
  CHECK(stats.count == 2);
  CHECK(stats.mean == 2.0);
  CHECK(stats.stddev == 1.0);
  CHECK(stats.min == 1.0);
  CHECK(stats.max == 3.0);
  CHECK(ts::error_code_of([] { summarize({}); }) ==
        ErrorCode::undefined_statistic);
}
