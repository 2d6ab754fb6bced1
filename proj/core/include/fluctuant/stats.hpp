#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace fluctuant {

// Uniform-bin density histogram; densities integrate to 1 over the covered range.
struct WorkHistogram {
  std::vector<double> bin_edges;  // size bins + 1, uniform spacing
  std::vector<double> densities;  // counts / (total_n * width)
  std::vector<std::size_t> counts;
  std::size_t total_n = 0;

  std::size_t bins() const { return counts.size(); }
  double width() const { return bin_edges.size() > 1 ? bin_edges[1] - bin_edges[0] : 0.0; }
  double center(std::size_t i) const { return 0.5 * (bin_edges[i] + bin_edges[i + 1]); }
};

// bin_count = 0 selects the Freedman-Diaconis rule.
WorkHistogram histogram(std::span<const double> samples, std::size_t bin_count = 0);

// Shared-edges mode: identical grids for forward/backward comparisons.
WorkHistogram histogram_with_edges(std::span<const double> samples,
                                   const std::vector<double>& edges);

// Uniform edges covering all sample sets passed in, bin count by Freedman-Diaconis
// on the pooled data unless overridden.
std::vector<double> shared_edges(std::span<const double> a, std::span<const double> b,
                                 std::size_t bin_count = 0);

struct CrooksRegression {
  double slope = 0.0;       // estimates beta
  double slope_se = 0.0;
  double intercept = 0.0;   // estimates -beta * dF
  double intercept_se = 0.0;
  double delta_f = 0.0;     // -intercept / slope
  std::size_t admissible_bins = 0;
  std::vector<double> bin_centers;
  std::vector<double> log_ratios;
};

// Weighted least squares of ln(p_F(w) / p_B(-w)) against w over bins where both
// histograms hold at least min_count samples. forward and backward_mirrored must
// share the same edges, with backward_mirrored built from the negated backward
// works. Throws std::runtime_error mentioning insufficient overlap when fewer
// than 3 bins qualify.
CrooksRegression crooks_regression(const WorkHistogram& forward,
                                   const WorkHistogram& backward_mirrored,
                                   std::size_t min_count = 10);

// Standard error of `statistic` over `resamples` bootstrap resamples of `samples`.
double bootstrap_se(std::span<const double> samples,
                    const std::function<double(std::span<const double>)>& statistic,
                    std::size_t resamples, std::uint64_t seed);

// Convenience: bootstrap SE of the sample mean.
double bootstrap_se_mean(std::span<const double> samples, std::size_t resamples,
                         std::uint64_t seed);

double mean(std::span<const double> v);
double variance(std::span<const double> v);  // unbiased
double standard_error_of_mean(std::span<const double> v);

// Kolmogorov-Smirnov statistic of samples against a reference CDF, and the
// asymptotic p-value (Marsaglia form of the Kolmogorov distribution).
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);
double ks_pvalue(double statistic, std::size_t n);

double normal_cdf(double x, double mu = 0.0, double sigma = 1.0);

}  // namespace fluctuant
