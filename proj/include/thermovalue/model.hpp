#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "thermovalue/csv.hpp"
#include "thermovalue/dataset.hpp"
#include "thermovalue/error.hpp"
#include "thermovalue/stats.hpp"
#include "thermovalue/thermo.hpp"

namespace thermovalue {

// log10 price = slope * (ratio * dG + dG0) + intercept, with b normalised to 1.
struct EnergyValueModel {
  double ratio = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
  ThermoConditions conditions;
  int fit_year = 0;
  double pearson_r = 0.0;
  std::size_t n = 0;
};

inline EnergyValueModel build_model(const YearSample& sample, const ThermoConditions& cond, double ratio) {
  if (!(ratio > 0.0)) throw argument_error(fmt::format("ratio must be positive, got {}", ratio));
  const auto fit = ols(sample.sigma_e(ratio), sample.log10_price);
  return {ratio, fit.slope, fit.intercept, cond, sample.year, fit.pearson_r, fit.n};
}

inline EnergyValueModel build_model(const ValidatedDataset& dataset, int year, const ThermoConditions& cond,
                                    double ratio) {
  return build_model(year_sample(dataset, year, cond), cond, ratio);
}

inline FitResult as_fit(const EnergyValueModel& model) {
  return {model.slope, model.intercept, model.pearson_r, model.n};
}

inline double predict_log_price(const EnergyValueModel& model, double delta_g, double delta_g0) {
  return fitted_value(as_fit(model), total_energy_cost(delta_g, delta_g0, model.ratio, 1.0));
}

// Inverse of the affine map: the energy (kJ/mol) the model assigns to a log10 price.
inline double implied_energy(const EnergyValueModel& model, double log10_price) {
  return (log10_price - model.intercept) / model.slope;
}

inline constexpr double kResidualFlagDecades = 1.0;

struct ResidualRow {
  std::string symbol;
  double observed_log10 = 0.0;
  double predicted_log10 = 0.0;
  double residual = 0.0;
  bool flagged = false;  // |residual| > one decade
};

// Rows in symbol order.
inline std::vector<ResidualRow> residual_report(const EnergyValueModel& model, const ValidatedDataset& dataset,
                                                int year) {
  const auto sample = year_sample(dataset, year, model.conditions);
  const auto xs = sample.sigma_e(model.ratio);
  const auto res = residuals(as_fit(model), xs, sample.log10_price);
  std::vector<ResidualRow> rows;
  rows.reserve(res.size());
  for (std::size_t i = 0; i < res.size(); ++i) {
    rows.push_back({sample.symbols[i], sample.log10_price[i], fitted_value(as_fit(model), xs[i]), res[i],
                    std::abs(res[i]) > kResidualFlagDecades});
  }
  return rows;
}

inline double residual_stddev(const std::vector<ResidualRow>& rows) {
  if (rows.empty()) return 0.0;
  double mean = 0.0;
  for (const auto& r : rows) mean += r.residual;
  mean /= static_cast<double>(rows.size());
  double ss = 0.0;
  for (const auto& r : rows) ss += (r.residual - mean) * (r.residual - mean);
  return std::sqrt(ss / static_cast<double>(rows.size()));
}

inline std::string write_residual_table(const std::vector<ResidualRow>& rows) {
  std::string out = "symbol,observed_log10,predicted_log10,residual\n";
  for (const auto& r : rows)
    out += csv::join({r.symbol, csv::format_double(r.observed_log10), csv::format_double(r.predicted_log10),
                      csv::format_double(r.residual)}) +
           '\n';
  return out;
}

// Gold's total energy cost evaluated two ways: from its concentrations, and
// from its price read back through the fitted affine map. Because the bond
// term is negligible for gold, both should agree to within the fit's scatter.
struct GoldAnchorConsistency {
  double sigma_e_from_concentration = 0.0;  // kJ/mol
  double sigma_e_from_price = 0.0;          // kJ/mol
  double discrepancy = 0.0;                 // from_price - from_concentration, kJ/mol
  double tolerance = 0.0;                   // residual standard deviation of the fit, in kJ/mol
  double spread_multiple = 0.0;             // |discrepancy| / tolerance
  double bond_share = 0.0;                  // dG0 / sumE for gold
  bool within_spread = false;               // spread_multiple <= kGoldAnchorSpreadMultiple
};

inline constexpr double kGoldAnchorSpreadMultiple = 2.0;

inline GoldAnchorConsistency gold_anchor_consistency(const EnergyValueModel& model, const ValidatedDataset& dataset,
                                                     int year) {
  const auto* gold = dataset.find_element("Au");
  if (!gold) throw insufficient_data("gold (Au) is absent from the dataset");
  const auto* quote = dataset.find_price("Au", year);
  if (!quote) throw insufficient_data(fmt::format("gold (Au) has no price in {}", year));

  const auto energy = element_energy(*gold, dataset.crust_density(), model.conditions, model.ratio, 1.0);
  const double log_price = std::log10(price_per_mole(*quote, *gold, dataset.deflators()));

  GoldAnchorConsistency out;
  out.sigma_e_from_concentration = energy.sigma_e;
  out.sigma_e_from_price = implied_energy(model, log_price);
  out.discrepancy = out.sigma_e_from_price - out.sigma_e_from_concentration;
  out.tolerance = residual_stddev(residual_report(model, dataset, year)) / std::abs(model.slope);
  out.bond_share = energy.sigma_e > 0.0 ? energy.delta_g0 / energy.sigma_e : 0.0;
  out.spread_multiple = std::abs(out.discrepancy) / out.tolerance;
  out.within_spread = out.spread_multiple <= kGoldAnchorSpreadMultiple;
  return out;
}

// Flat key/value JSON.
inline std::string write_model(const EnergyValueModel& model) {
  nlohmann::ordered_json j;
  j["ratio"] = model.ratio;
  j["slope"] = model.slope;
  j["intercept"] = model.intercept;
  j["temperature"] = model.conditions.temperature;
  j["fit_year"] = model.fit_year;
  j["pearson_r"] = model.pearson_r;
  j["n"] = model.n;
  return j.dump(2) + "\n";
}

inline EnergyValueModel read_model(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    EnergyValueModel m;
    m.ratio = j.at("ratio").get<double>();
    m.slope = j.at("slope").get<double>();
    m.intercept = j.at("intercept").get<double>();
    m.conditions.temperature = j.at("temperature").get<double>();
    m.fit_year = j.at("fit_year").get<int>();
    m.pearson_r = j.at("pearson_r").get<double>();
    m.n = j.at("n").get<std::size_t>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(fmt::format("model file: {}", e.what()));
  }
}

}  // namespace thermovalue
