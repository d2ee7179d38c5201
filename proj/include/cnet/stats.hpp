#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cnet/engine.hpp"

namespace cnet::stats {

struct Sample {
  std::vector<double> values;
  std::string label;
};

/// Higher moments are population-normalized (m3 / m2^1.5, m4 / m2^2 - 3)
/// and absent for a zero-variance sample. Tests built on them (JB, fit
/// comparison) additionally demand kMinHigherMoments points.
struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased, n - 1 denominator
  std::optional<double> skewness;
  std::optional<double> excess_kurtosis;
};

inline constexpr std::size_t kMinHigherMoments = 8;

/// Throws std::invalid_argument for fewer than two values.
Moments moments(std::span<const double> values);

struct TestReport {
  double statistic = 0.0;
  double p_value = 1.0;
  bool reject_at_1pct = false;
  std::size_t n = 0;
};

/// Chi-square survival function with two degrees of freedom, exp(-x / 2).
double chi2_2df_survival(double x);

/// JB from already computed skewness and excess kurtosis.
TestReport bera_jarque_from_moments(std::size_t n, double skewness, double excess_kurtosis);

/// JB = n / 6 * (S^2 + K^2 / 4) against chi-square(2).
/// Throws std::invalid_argument when n < 8 or the sample is degenerate.
TestReport bera_jarque(std::span<const double> values);

struct LaplaceFit {
  double location = 0.0;  // sample median
  double scale = 0.0;     // mean absolute deviation from the median
  double loglik = 0.0;
};

struct NormalFit {
  double mean = 0.0;
  double sd = 0.0;  // population standard deviation
  double loglik = 0.0;
};

struct FitComparison {
  LaplaceFit laplace;
  NormalFit normal;
  bool laplace_preferred = false;
};

/// Laplace MLE: location = median, scale = mean absolute deviation from it.
LaplaceFit fit_laplace(std::span<const double> values);

/// Gaussian MLE with the population standard deviation.
NormalFit fit_normal(std::span<const double> values);

double laplace_loglik(std::span<const double> values, double location, double scale);
double normal_loglik(std::span<const double> values, double mean, double sd);

/// Maximum-likelihood Laplace and Gaussian fits. Throws for n < 8 or zero scale.
FitComparison compare_fits(std::span<const double> values);

/// Pearson correlation of (x_t, y_{t+lag}) for lag in [-max_lag, max_lag],
/// returned in lag order; empty where a window has zero variance.
std::vector<std::optional<double>> cross_correlation(std::span<const double> x,
                                                     std::span<const double> y,
                                                     std::size_t max_lag);

/// Pearson correlation of two equal-length series; empty on zero variance.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

/// Total failures per period across the three sectors.
Sample avalanche_series(std::span<const PeriodRecord> records);

/// Pooled downstream net-worth growth rates carried by a run.
Sample growth_rate_sample(const RunResult& result);

struct Bin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
};

inline constexpr std::size_t kHistogramBins = 64;

/// Equal-width bins over [min, max]; a zero range collapses to one bin.
/// NaNs are skipped.
std::vector<Bin> histogram(std::span<const double> values, std::size_t bins = kHistogramBins);

/// Log-spaced bins over the positive values only.
std::vector<Bin> log_histogram(std::span<const double> values, std::size_t bins = kHistogramBins);

}  // namespace cnet::stats
