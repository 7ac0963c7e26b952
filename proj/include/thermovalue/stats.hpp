#pragma once

// Correlation and regression of log10 molar prices against refining energy.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "thermovalue/csv.hpp"
#include "thermovalue/dataset.hpp"
#include "thermovalue/error.hpp"
#include "thermovalue/thermo.hpp"

namespace thermovalue {

inline constexpr std::size_t kMinSamples = 3;

struct FitResult {
  double slope = 0.0;      // log10 USD(1992)/mol per kJ/mol
  double intercept = 0.0;  // log10 USD(1992)/mol
  double pearson_r = 0.0;
  std::size_t n = 0;
};

namespace detail {

struct Moments {
  double mean_x = 0.0;
  double mean_y = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
};

inline Moments centered_moments(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size())
    throw argument_error(fmt::format("length mismatch ({} vs {})", xs.size(), ys.size()));
  if (xs.size() < kMinSamples)
    throw insufficient_data(fmt::format("need at least {} samples, got {}", kMinSamples, xs.size()));
  Moments m;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    m.mean_x += xs[i];
    m.mean_y += ys[i];
  }
  m.mean_x /= n;
  m.mean_y /= n;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - m.mean_x;
    const double dy = ys[i] - m.mean_y;
    m.sxx += dx * dx;
    m.syy += dy * dy;
    m.sxy += dx * dy;
  }
  if (!(m.sxx > 0.0)) throw insufficient_data("x vector is constant (zero variance)");
  if (!(m.syy > 0.0)) throw insufficient_data("y vector is constant (zero variance)");
  return m;
}

inline double correlation(const Moments& m) {
  return std::clamp(m.sxy / std::sqrt(m.sxx * m.syy), -1.0, 1.0);
}

}  // namespace detail

// Sample Pearson correlation coefficient.
inline double pearson(std::span<const double> xs, std::span<const double> ys) {
  return detail::correlation(detail::centered_moments(xs, ys));
}

// Closed-form least squares y = slope * x + intercept.
inline FitResult ols(std::span<const double> xs, std::span<const double> ys) {
  const auto m = detail::centered_moments(xs, ys);
  FitResult fit;
  fit.slope = m.sxy / m.sxx;
  fit.intercept = m.mean_y - fit.slope * m.mean_x;
  fit.pearson_r = detail::correlation(m);
  fit.n = xs.size();
  return fit;
}

inline double fitted_value(const FitResult& fit, double x) { return fit.slope * x + fit.intercept; }

// Observed minus fitted, element-wise.
inline std::vector<double> residuals(const FitResult& fit, std::span<const double> xs, std::span<const double> ys) {
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = ys[i] - fitted_value(fit, xs[i]);
  return out;
}

struct LogPriceVector {
  int year = 0;
  std::vector<std::string> symbols;  // ascending
  std::vector<double> log10_price;   // log10 USD(1992)/mol
  std::vector<std::string> excluded;  // elements with no quote that year
};

inline LogPriceVector log_price_vector(const ValidatedDataset& dataset, int year) {
  LogPriceVector out;
  out.year = year;
  for (const auto& e : dataset.elements()) {
    const auto* quote = dataset.find_price(e.symbol, year);
    if (!quote) {
      out.excluded.push_back(e.symbol);
      continue;
    }
    out.symbols.push_back(e.symbol);
    out.log10_price.push_back(std::log10(price_per_mole(*quote, e, dataset.deflators())));
  }
  if (out.symbols.size() < kMinSamples)
    throw insufficient_data(fmt::format("year {}: {} priced element(s), need at least {}", year, out.symbols.size(),
                                        kMinSamples));
  return out;
}

// Elements priced in one year, with their energies and classes aligned.
struct YearSample {
  int year = 0;
  std::vector<std::string> symbols;
  std::vector<GibbsClass> classes;
  std::vector<double> delta_g;   // kJ/mol
  std::vector<double> delta_g0;  // kJ/mol
  std::vector<double> log10_price;
  std::vector<std::string> excluded;

  // sumE with a = ratio, b = 1.
  std::vector<double> sigma_e(double ratio) const {
    std::vector<double> out(delta_g.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = total_energy_cost(delta_g[i], delta_g0[i], ratio, 1.0);
    return out;
  }
};

inline YearSample year_sample(const ValidatedDataset& dataset, int year, const ThermoConditions& cond) {
  auto prices = log_price_vector(dataset, year);
  YearSample s;
  s.year = year;
  s.excluded = std::move(prices.excluded);
  s.log10_price = std::move(prices.log10_price);
  for (const auto& symbol : prices.symbols) {
    const auto& record = *dataset.find_element(symbol);
    const auto energy = element_energy(record, dataset.crust_density(), cond, 1.0, 0.0);
    s.classes.push_back(record.gibbs_class);
    s.delta_g.push_back(energy.delta_g);
    s.delta_g0.push_back(energy.delta_g0);
  }
  s.symbols = std::move(prices.symbols);
  return s;
}

// Log-spaced candidate efficiency ratios a/b.
struct RatioGrid {
  double min_ratio = 0.1;
  double max_ratio = 1000.0;
  std::size_t points = 200;

  void validate() const {
    if (points == 0) throw argument_error("ratio grid is empty");
    if (!(min_ratio > 0.0) || !(max_ratio >= min_ratio))
      throw argument_error(fmt::format("invalid ratio grid [{}, {}]", min_ratio, max_ratio));
    if (points > 1 && max_ratio == min_ratio) throw argument_error("ratio grid has zero width");
  }

  std::vector<double> values() const {
    validate();
    if (points == 1) return {min_ratio};
    std::vector<double> out(points);
    const double lo = std::log(min_ratio);
    const double step = (std::log(max_ratio) - lo) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) out[i] = std::exp(lo + step * static_cast<double>(i));
    out.front() = min_ratio;
    out.back() = max_ratio;
    return out;
  }

  std::string describe() const {
    return fmt::format("{} log-spaced points on [{}, {}]", points, min_ratio, max_ratio);
  }
};

struct RatioPoint {
  double ratio = 0.0;
  double pearson_r = 0.0;
};

struct RatioFit {
  double ratio = 0.0;
  double pearson_r_at_ratio = 0.0;
  RatioGrid grid;
  // False when dG0 is constant across the sample: r then does not depend on the ratio.
  bool identifiable = true;
  std::vector<RatioPoint> curve;
};

// Grid argmax of pearson(ratio * dG + dG0, log10 price); ties go to the smallest ratio.
inline RatioFit fit_efficiency_ratio(const YearSample& sample, const RatioGrid& grid = {}) {
  RatioFit fit;
  fit.grid = grid;
  const auto ratios = grid.values();
  const auto dg0 = std::minmax_element(sample.delta_g0.begin(), sample.delta_g0.end());
  fit.identifiable = !sample.delta_g0.empty() && *dg0.first != *dg0.second;
  fit.curve.reserve(ratios.size());
  for (double ratio : ratios) {
    const auto xs = sample.sigma_e(ratio);
    fit.curve.push_back({ratio, pearson(xs, sample.log10_price)});
  }
  if (!fit.identifiable) {
    fit.ratio = fit.curve.front().ratio;
    fit.pearson_r_at_ratio = fit.curve.front().pearson_r;
    return fit;
  }
  const auto best = std::max_element(fit.curve.begin(), fit.curve.end(),
                                     [](const auto& a, const auto& b) { return a.pearson_r < b.pearson_r; });
  fit.ratio = best->ratio;
  fit.pearson_r_at_ratio = best->pearson_r;
  return fit;
}

inline RatioFit fit_efficiency_ratio(const ValidatedDataset& dataset, int year, const ThermoConditions& cond,
                                     const RatioGrid& grid = {}) {
  grid.validate();
  return fit_efficiency_ratio(year_sample(dataset, year, cond), grid);
}

struct YearCorrelation {
  int year = 0;
  double pearson_r = 0.0;
  std::size_t n = 0;
};

struct YearRange {
  int first = 0;
  int last = 0;

  void validate() const {
    if (first > last) throw argument_error(fmt::format("year range {}:{} is reversed", first, last));
  }
};

struct CorrelationSeries {
  std::vector<YearCorrelation> entries;
  std::vector<int> omitted;  // years with fewer than three priced elements
};

inline CorrelationSeries yearly_correlation_series(const ValidatedDataset& dataset, const ThermoConditions& cond,
                                                   double ratio, YearRange range) {
  range.validate();
  CorrelationSeries out;
  for (int year = range.first; year <= range.last; ++year) {
    std::optional<YearSample> sample;
    try {
      sample = year_sample(dataset, year, cond);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::insufficient_data) throw;
      out.omitted.push_back(year);
      continue;
    }
    out.entries.push_back({year, pearson(sample->sigma_e(ratio), sample->log10_price), sample->symbols.size()});
  }
  return out;
}

struct ClassResidualStats {
  GibbsClass gibbs_class = GibbsClass::mid;
  std::size_t n = 0;
  double mean = 0.0;
  double stddev = 0.0;  // population spread of the class residuals
};

struct Stratification {
  std::vector<ClassResidualStats> classes;  // high, mid, low order; absent classes skipped
  std::vector<GibbsClass> absent;

  const ClassResidualStats* find(GibbsClass c) const {
    for (const auto& s : classes)
      if (s.gibbs_class == c) return &s;
    return nullptr;
  }
};

inline Stratification stratify_residuals(const YearSample& sample, const FitResult& fit) {
  const auto res = residuals(fit, sample.delta_g, sample.log10_price);
  std::map<GibbsClass, std::vector<double>> groups;
  for (std::size_t i = 0; i < res.size(); ++i) groups[sample.classes[i]].push_back(res[i]);
  Stratification out;
  for (auto c : kGibbsClasses) {
    const auto it = groups.find(c);
    if (it == groups.end()) {
      out.absent.push_back(c);
      continue;
    }
    // Sorting first makes the sums independent of element order.
    auto values = it->second;
    std::sort(values.begin(), values.end());
    ClassResidualStats s;
    s.gibbs_class = c;
    s.n = values.size();
    for (double v : values) s.mean += v;
    s.mean /= static_cast<double>(s.n);
    for (double v : values) s.stddev += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(s.stddev / static_cast<double>(s.n));
    out.classes.push_back(s);
  }
  return out;
}

// `fit` must come from regressing log10 price on dG for the same year.
inline Stratification stratify_residuals(const ValidatedDataset& dataset, int year, const ThermoConditions& cond,
                                         const FitResult& fit) {
  return stratify_residuals(year_sample(dataset, year, cond), fit);
}

inline std::string write_correlation_series(const CorrelationSeries& series) {
  std::string out = "year,n,pearson_r\n";
  for (const auto& e : series.entries) out += fmt::format("{},{},{}\n", e.year, e.n, csv::format_double(e.pearson_r));
  return out;
}

inline std::string write_ratio_curve(const RatioFit& fit) {
  std::string out = "ratio,pearson_r\n";
  for (const auto& p : fit.curve)
    out += fmt::format("{},{}\n", csv::format_double(p.ratio), csv::format_double(p.pearson_r));
  return out;
}

}  // namespace thermovalue
