#include "fluctuant/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "fluctuant/rng.hpp"

namespace fluctuant {

namespace {

double quantile_sorted(const std::vector<double>& s, double q) {
  const double pos = q * static_cast<double>(s.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const auto hi = std::min(lo + 1, s.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return s[lo] * (1.0 - frac) + s[hi] * frac;
}

std::size_t freedman_diaconis_bins(const std::vector<double>& sorted) {
  const double n = static_cast<double>(sorted.size());
  const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
  const double range = sorted.back() - sorted.front();
  if (iqr <= 0.0 || range <= 0.0) return 1;
  const double width = 2.0 * iqr / std::cbrt(n);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(range / width)));
}

WorkHistogram fill(const std::vector<double>& edges, std::span<const double> samples) {
  WorkHistogram h;
  h.bin_edges = edges;
  const std::size_t bins = edges.size() - 1;
  h.counts.assign(bins, 0);
  const double lo = edges.front(), hi = edges.back();
  const double width = (hi - lo) / static_cast<double>(bins);
  for (double x : samples) {
    if (x < lo || x > hi) continue;
    auto b = static_cast<std::size_t>((x - lo) / width);
    if (b >= bins) b = bins - 1;  // right edge lands in the last bin
    ++h.counts[b];
  }
  h.total_n = samples.size();
  h.densities.resize(bins);
  for (std::size_t i = 0; i < bins; ++i)
    h.densities[i] =
        static_cast<double>(h.counts[i]) / (static_cast<double>(h.total_n) * width);
  return h;
}

std::vector<double> uniform_edges(double lo, double hi, std::size_t bins) {
  if (hi <= lo) {  // degenerate sample sets still get a well-formed bin
    lo -= 0.5;
    hi += 0.5;
  }
  std::vector<double> edges(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i)
    edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
  // pin the endpoints exactly: lo + (hi - lo) can round below hi, which would
  // drop the extreme samples from the boundary bins
  edges.front() = lo;
  edges.back() = hi;
  return edges;
}

}  // namespace

WorkHistogram histogram(std::span<const double> samples, std::size_t bin_count) {
  if (samples.empty()) throw std::domain_error("histogram of an empty sample set");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t bins = bin_count > 0 ? bin_count : freedman_diaconis_bins(sorted);
  return fill(uniform_edges(sorted.front(), sorted.back(), bins), samples);
}

WorkHistogram histogram_with_edges(std::span<const double> samples,
                                   const std::vector<double>& edges) {
  if (samples.empty()) throw std::domain_error("histogram of an empty sample set");
  if (edges.size() < 2) throw std::invalid_argument("need at least two bin edges");
  return fill(edges, samples);
}

std::vector<double> shared_edges(std::span<const double> a, std::span<const double> b,
                                 std::size_t bin_count) {
  if (a.empty() || b.empty()) throw std::domain_error("shared edges need non-empty samples");
  std::vector<double> pooled;
  pooled.reserve(a.size() + b.size());
  pooled.insert(pooled.end(), a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::sort(pooled.begin(), pooled.end());
  const std::size_t bins = bin_count > 0 ? bin_count : freedman_diaconis_bins(pooled);
  return uniform_edges(pooled.front(), pooled.back(), bins);
}

CrooksRegression crooks_regression(const WorkHistogram& forward,
                                   const WorkHistogram& backward_mirrored,
                                   std::size_t min_count) {
  if (forward.bin_edges != backward_mirrored.bin_edges)
    throw std::invalid_argument("crooks regression requires histograms on shared edges");

  CrooksRegression r;
  std::vector<double> w, y, wt;
  for (std::size_t i = 0; i < forward.bins(); ++i) {
    if (forward.counts[i] < min_count || backward_mirrored.counts[i] < min_count) continue;
    w.push_back(forward.center(i));
    y.push_back(std::log(forward.densities[i] / backward_mirrored.densities[i]));
    // Poisson counts: var(ln n) ~ 1/n, the two histograms are independent
    wt.push_back(1.0 / (1.0 / static_cast<double>(forward.counts[i]) +
                        1.0 / static_cast<double>(backward_mirrored.counts[i])));
  }
  r.admissible_bins = w.size();
  if (r.admissible_bins < 3)
    throw std::runtime_error(
        "insufficient overlap between forward and reverse work histograms (" +
        std::to_string(r.admissible_bins) + " admissible bins, need 3)");

  double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    sw += wt[i];
    swx += wt[i] * w[i];
    swy += wt[i] * y[i];
    swxx += wt[i] * w[i] * w[i];
    swxy += wt[i] * w[i] * y[i];
  }
  const double det = sw * swxx - swx * swx;
  if (det <= 0.0) throw std::runtime_error("degenerate design in crooks regression");
  r.slope = (sw * swxy - swx * swy) / det;
  r.intercept = (swxx * swy - swx * swxy) / det;
  r.slope_se = std::sqrt(sw / det);
  r.intercept_se = std::sqrt(swxx / det);
  r.delta_f = -r.intercept / r.slope;
  r.bin_centers = std::move(w);
  r.log_ratios = std::move(y);
  return r;
}

double bootstrap_se(std::span<const double> samples,
                    const std::function<double(std::span<const double>)>& statistic,
                    std::size_t resamples, std::uint64_t seed) {
  if (samples.size() < 2) throw std::invalid_argument("bootstrap needs at least 2 samples");
  if (resamples < 2) throw std::invalid_argument("bootstrap needs at least 2 resamples");
  std::vector<double> draw(samples.size());
  std::vector<double> stats(resamples);
  for (std::size_t r = 0; r < resamples; ++r) {
    auto rng = stream_rng(seed, r);
    std::uniform_int_distribution<std::size_t> pick(0, samples.size() - 1);
    for (auto& d : draw) d = samples[pick(rng)];
    stats[r] = statistic(draw);
  }
  return std::sqrt(variance(stats));
}

double bootstrap_se_mean(std::span<const double> samples, std::size_t resamples,
                         std::uint64_t seed) {
  return bootstrap_se(samples, [](std::span<const double> v) { return mean(v); }, resamples,
                      seed);
}

double mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double variance(std::span<const double> v) {
  const double m = mean(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return acc / static_cast<double>(v.size() - 1);
}

double standard_error_of_mean(std::span<const double> v) {
  return std::sqrt(variance(v) / static_cast<double>(v.size()));
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::domain_error("KS statistic of an empty sample set");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

double ks_pvalue(double statistic, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * statistic;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = 2.0 * ((k % 2 == 1) ? 1.0 : -1.0) *
                        std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-12) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

double normal_cdf(double x, double mu, double sigma) {
  return 0.5 * std::erfc(-(x - mu) / (sigma * std::sqrt(2.0)));
}

}  // namespace fluctuant
