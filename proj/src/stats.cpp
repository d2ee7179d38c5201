#include "cnet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cnet/credit.hpp"

namespace cnet::stats {

Moments moments(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) throw std::invalid_argument("moments: need at least two values");
  Moments m;
  m.n = n;
  double sum = 0.0;
  for (double x : values) sum += x;
  const double dn = static_cast<double>(n);
  m.mean = sum / dn;
  double s2 = 0.0, s3 = 0.0, s4 = 0.0;
  for (double x : values) {
    const double d = x - m.mean;
    const double d2 = d * d;
    s2 += d2;
    s3 += d2 * d;
    s4 += d2 * d2;
  }
  m.variance = s2 / (dn - 1.0);
  const double m2 = s2 / dn;
  if (m2 > 0.0) {
    m.skewness = (s3 / dn) / std::pow(m2, 1.5);
    m.excess_kurtosis = (s4 / dn) / (m2 * m2) - 3.0;
  }
  return m;
}

double chi2_2df_survival(double x) { return x <= 0.0 ? 1.0 : std::exp(-x / 2.0); }

TestReport bera_jarque(std::span<const double> values) {
  if (values.size() < kMinHigherMoments) {
    throw std::invalid_argument("bera_jarque: need at least 8 values");
  }
  const auto m = moments(values);
  if (!m.skewness) throw std::invalid_argument("bera_jarque: degenerate (zero-variance) sample");
  return bera_jarque_from_moments(values.size(), *m.skewness, *m.excess_kurtosis);
}

TestReport bera_jarque_from_moments(std::size_t n, double skewness, double excess_kurtosis) {
  TestReport r;
  r.n = n;
  r.statistic = static_cast<double>(n) / 6.0 *
                (skewness * skewness + excess_kurtosis * excess_kurtosis / 4.0);
  r.p_value = chi2_2df_survival(r.statistic);
  r.reject_at_1pct = r.p_value < 0.01;
  return r;
}

double laplace_loglik(std::span<const double> values, double location, double scale) {
  double abs_dev = 0.0;
  for (double x : values) abs_dev += std::abs(x - location);
  return -static_cast<double>(values.size()) * std::log(2.0 * scale) - abs_dev / scale;
}

double normal_loglik(std::span<const double> values, double mean, double sd) {
  double sq = 0.0;
  for (double x : values) sq += (x - mean) * (x - mean);
  const double var = sd * sd;
  return -0.5 * static_cast<double>(values.size()) * std::log(2.0 * std::numbers::pi * var) -
         sq / (2.0 * var);
}

LaplaceFit fit_laplace(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("fit_laplace: empty sample");
  LaplaceFit f;
  f.location = credit::sector_median(values);
  double abs_dev = 0.0;
  for (double x : values) abs_dev += std::abs(x - f.location);
  f.scale = abs_dev / static_cast<double>(values.size());
  if (!(f.scale > 0.0)) throw std::invalid_argument("fit_laplace: zero scale (all values equal)");
  f.loglik = laplace_loglik(values, f.location, f.scale);
  return f;
}

NormalFit fit_normal(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("fit_normal: empty sample");
  const double dn = static_cast<double>(values.size());
  NormalFit f;
  double sum = 0.0;
  for (double x : values) sum += x;
  f.mean = sum / dn;
  double sq = 0.0;
  for (double x : values) sq += (x - f.mean) * (x - f.mean);
  f.sd = std::sqrt(sq / dn);
  if (!(f.sd > 0.0)) throw std::invalid_argument("fit_normal: zero scale (all values equal)");
  f.loglik = normal_loglik(values, f.mean, f.sd);
  return f;
}

FitComparison compare_fits(std::span<const double> values) {
  if (values.size() < kMinHigherMoments) {
    throw std::invalid_argument("compare_fits: need at least 8 values");
  }
  FitComparison f;
  f.laplace = fit_laplace(values);
  f.normal = fit_normal(values);
  f.laplace_preferred = f.laplace.loglik > f.normal.loglik;
  return f;
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("pearson: need two equal-length series of at least 2 values");
  }
  const double dn = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    mx += x[t];
    my += y[t];
  }
  mx /= dn;
  my /= dn;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    const double dx = x[t] - mx;
    const double dy = y[t] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

std::vector<std::optional<double>> cross_correlation(std::span<const double> x,
                                                     std::span<const double> y,
                                                     std::size_t max_lag) {
  if (x.size() != y.size()) throw std::invalid_argument("cross_correlation: unequal lengths");
  if (x.size() <= max_lag + 8) throw std::invalid_argument("cross_correlation: series too short");
  const std::size_t n = x.size();
  std::vector<std::optional<double>> out;
  out.reserve(2 * max_lag + 1);
  const auto lag_max = static_cast<std::ptrdiff_t>(max_lag);
  for (std::ptrdiff_t lag = -lag_max; lag <= lag_max; ++lag) {
    const std::size_t shift = static_cast<std::size_t>(lag < 0 ? -lag : lag);
    const std::size_t len = n - shift;
    if (lag >= 0) {
      out.push_back(pearson(x.subspan(0, len), y.subspan(shift, len)));
    } else {
      out.push_back(pearson(x.subspan(shift, len), y.subspan(0, len)));
    }
  }
  return out;
}

Sample avalanche_series(std::span<const PeriodRecord> records) {
  Sample s;
  s.label = "avalanche";
  s.values.reserve(records.size());
  for (const auto& r : records) {
    s.values.push_back(static_cast<double>(r.bankrupt_d + r.bankrupt_u + r.bankrupt_b));
  }
  return s;
}

Sample growth_rate_sample(const RunResult& result) {
  return Sample{result.growth_networth, "growth_networth_d"};
}

namespace {

std::vector<Bin> bin_values(const std::vector<double>& v, std::size_t bins, bool logscale) {
  std::vector<Bin> out;
  if (v.empty()) return out;
  const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
  const double lo = *lo_it, hi = *hi_it;
  if (!(hi > lo) || bins <= 1) {
    out.push_back({lo, hi, v.size()});
    return out;
  }
  const double a = logscale ? std::log(lo) : lo;
  const double b = logscale ? std::log(hi) : hi;
  const double width = (b - a) / static_cast<double>(bins);
  out.resize(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    const double e0 = a + width * static_cast<double>(k);
    const double e1 = k + 1 == bins ? b : a + width * static_cast<double>(k + 1);
    out[k].lo = logscale ? std::exp(e0) : e0;
    out[k].hi = logscale ? std::exp(e1) : e1;
  }
  out.front().lo = lo;
  out.back().hi = hi;
  for (double x : v) {
    const double u = logscale ? std::log(x) : x;
    auto k = static_cast<std::size_t>((u - a) / width);
    if (k >= bins) k = bins - 1;
    ++out[k].count;
  }
  return out;
}

}  // namespace

std::vector<Bin> histogram(std::span<const double> values, std::size_t bins) {
  std::vector<double> v;
  v.reserve(values.size());
  for (double x : values) {
    if (!std::isnan(x)) v.push_back(x);
  }
  return bin_values(v, bins, false);
}

std::vector<Bin> log_histogram(std::span<const double> values, std::size_t bins) {
  std::vector<double> v;
  for (double x : values) {
    if (x > 0.0) v.push_back(x);
  }
  return bin_values(v, bins, true);
}

}  // namespace cnet::stats
