#pragma once

// Refining energetics of a purified element:
//   concentration Gibbs energy   dG   = R T ln(c_pure / c_env)
//   standard free-energy change  dG0  (from absolute electronegativity)
//   total energy cost            sumE = a dG + b dG0
// Energies are computed in J/mol and reported in kJ/mol.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "thermovalue/csv.hpp"
#include "thermovalue/dataset.hpp"
#include "thermovalue/error.hpp"

namespace thermovalue {

namespace constants {
inline constexpr double gas_constant = 8.314;          // J/(mol K)
inline constexpr double gas_constant_l_atm = 0.082057;  // L atm/(mol K)
inline constexpr double faraday_kj_per_ev = 96.485;     // kJ/(mol eV)
// Absolute potential of the standard hydrogen electrode, eV.
inline constexpr double she_absolute_potential_ev = 4.44;
}  // namespace constants

// How the standard free-energy change of extraction is derived from the
// element's absolute electronegativity chi and common cation charge z.
enum class StandardGibbsMapping {
  // F * max(0, chi_ref - chi): reduction work per mole of electrons, measured
  // from the reference level (the SHE by default). Zero for noble elements.
  electron_potential,
  // z * F * max(0, chi_ref - chi): the same, per mole of atoms.
  electron_potential_per_mole,
  // z * F * chi.
  proportional,
};

inline std::string_view to_string(StandardGibbsMapping m) {
  switch (m) {
    case StandardGibbsMapping::electron_potential: return "electron-potential";
    case StandardGibbsMapping::electron_potential_per_mole: return "electron-potential-per-mole";
    case StandardGibbsMapping::proportional: return "proportional";
  }
  return "";
}

inline std::optional<StandardGibbsMapping> standard_gibbs_mapping_from(std::string_view s) {
  for (auto m : {StandardGibbsMapping::electron_potential, StandardGibbsMapping::electron_potential_per_mole,
                 StandardGibbsMapping::proportional})
    if (to_string(m) == s) return m;
  return std::nullopt;
}

struct ThermoConditions {
  double temperature = 295.0;  // K
  double pressure = 1.0;       // atm
  double gas_constant = constants::gas_constant;
  StandardGibbsMapping dg0_mapping = StandardGibbsMapping::electron_potential;
  double reference_level_ev = constants::she_absolute_potential_ev;

  void validate() const {
    if (!(temperature > 0.0)) throw argument_error(fmt::format("temperature must be positive, got {}", temperature));
    if (!(pressure > 0.0)) throw argument_error(fmt::format("pressure must be positive, got {}", pressure));
    if (!(gas_constant > 0.0)) throw argument_error("gas constant must be positive");
  }
};

struct ElementEnergy {
  std::string symbol;
  double c_pure = 0.0;    // mol/L
  double c_env = 0.0;     // mol/L
  double delta_g = 0.0;   // kJ/mol
  double delta_g0 = 0.0;  // kJ/mol
  double sigma_e = 0.0;   // kJ/mol

  friend bool operator==(const ElementEnergy&, const ElementEnergy&) = default;
};

// Molar concentration of the traded pure form. Condensed phases use their
// density; gases are ideal at the given temperature and pressure, counted per
// mole of atoms.
inline double pure_molar_concentration(const ElementRecord& record, const ThermoConditions& cond) {
  cond.validate();
  if (record.trading_form == TradingForm::gas)
    return cond.pressure / (constants::gas_constant_l_atm * cond.temperature);
  return record.density * 1000.0 / record.molar_mass;
}

// Crustal abundance (mg/kg) expressed per litre of crust of the given density.
inline double env_molar_concentration(const ElementRecord& record, double crust_density) {
  if (!(crust_density > 0.0)) throw argument_error("crust density must be positive");
  return record.abundance_env * crust_density / record.molar_mass * 1e-3;
}

inline double concentration_gibbs(double c_pure, double c_env, const ThermoConditions& cond) {
  if (!(c_pure > 0.0) || !(c_env > 0.0))
    throw argument_error(fmt::format("concentrations must be positive (c_pure={}, c_env={})", c_pure, c_env));
  cond.validate();
  const double joules = cond.gas_constant * cond.temperature * std::log(c_pure / c_env);
  return joules / 1000.0;
}

inline double standard_gibbs(const ElementRecord& record,
                             StandardGibbsMapping mapping = StandardGibbsMapping::electron_potential,
                             double reference_level_ev = constants::she_absolute_potential_ev) {
  const double chi = record.abs_electronegativity;
  const double z = record.oxidation_state;
  const double gap = std::max(0.0, reference_level_ev - chi);
  switch (mapping) {
    case StandardGibbsMapping::electron_potential: return gap * constants::faraday_kj_per_ev;
    case StandardGibbsMapping::electron_potential_per_mole: return z * gap * constants::faraday_kj_per_ev;
    case StandardGibbsMapping::proportional: return chi * z * constants::faraday_kj_per_ev;
  }
  return 0.0;
}

inline double standard_gibbs(const ElementRecord& record, const ThermoConditions& cond) {
  return standard_gibbs(record, cond.dg0_mapping, cond.reference_level_ev);
}

inline double total_energy_cost(double delta_g, double delta_g0, double a, double b) {
  if (!(a > 0.0)) throw argument_error(fmt::format("coefficient a must be positive, got {}", a));
  if (!(b >= 0.0)) throw argument_error(fmt::format("coefficient b must be non-negative, got {}", b));
  return a * delta_g + b * delta_g0;
}

inline ElementEnergy element_energy(const ElementRecord& record, double crust_density, const ThermoConditions& cond,
                                    double a, double b) {
  try {
    ElementEnergy e;
    e.symbol = record.symbol;
    e.c_pure = pure_molar_concentration(record, cond);
    e.c_env = env_molar_concentration(record, crust_density);
    e.delta_g = concentration_gibbs(e.c_pure, e.c_env, cond);
    e.delta_g0 = standard_gibbs(record, cond);
    e.sigma_e = total_energy_cost(e.delta_g, e.delta_g0, a, b);
    return e;
  } catch (const Error& err) {
    throw Error(err.kind(), fmt::format("{}: {}", record.symbol, err.what()));
  }
}

// One entry per element, in the dataset's symbol order.
inline std::vector<ElementEnergy> compute_energies(const ValidatedDataset& dataset, const ThermoConditions& cond,
                                                   double a, double b) {
  std::vector<ElementEnergy> out;
  out.reserve(dataset.elements().size());
  for (const auto& record : dataset.elements())
    out.push_back(element_energy(record, dataset.crust_density(), cond, a, b));
  return out;
}

inline std::string write_energy_table(const std::vector<ElementEnergy>& energies) {
  std::string out = "symbol,c_pure_mol_L,c_env_mol_L,delta_g_kJ_mol,delta_g0_kJ_mol,sigma_e_kJ_mol\n";
  for (const auto& e : energies) {
    out += csv::join({e.symbol, csv::format_double(e.c_pure), csv::format_double(e.c_env),
                      csv::format_double(e.delta_g), csv::format_double(e.delta_g0), csv::format_double(e.sigma_e)});
    out += '\n';
  }
  return out;
}

}  // namespace thermovalue
