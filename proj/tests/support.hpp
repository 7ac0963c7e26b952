#pragma once

// Shared fixtures for the test suites: reference data location, synthetic
// datasets, and oracle formulas written independently of the library.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "thermovalue/dataset.hpp"

namespace thermovalue::testing {

inline std::filesystem::path reference_dir() { return THERMOVALUE_REFERENCE_DIR; }

inline ValidatedDataset reference_dataset() { return load_dataset(reference_dir()); }

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Unique scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::mt19937_64 rng(std::random_device{}());
    path_ = std::filesystem::temp_directory_path() / ("thermovalue-test-" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream(p, std::ios::binary) << content;
}

inline void write_dataset(const std::filesystem::path& dir, const ValidatedDataset& ds) {
  write_file(dir / "elements.csv", write_element_table(ds.elements()));
  write_file(dir / "prices.csv", write_price_table(ds.prices()));
  write_file(dir / "deflator.csv", write_deflator_table(ds.deflators()));
}

inline ElementRecord make_element(std::string symbol, double molar_mass, double density, double abundance,
                                  double chi, int z, GibbsClass cls = GibbsClass::mid,
                                  TradingForm form = TradingForm::solid) {
  return {symbol, symbol + "-name", molar_mass, density, form, abundance, chi, z, cls};
}

// Quote in the base year so the deflator is the identity; `per_mole` in USD/mol.
inline PriceQuote base_year_quote(const ElementRecord& e, double per_mole, int year = kBaseYear) {
  return {e.symbol, year, per_mole / e.molar_mass, MassUnit::usd_per_g, ""};
}

inline DeflatorTable base_only_deflator() { return DeflatorTable::from_entries({{kBaseYear, 100.0}}); }

// Oracle formulas, deliberately not routed through the library.
namespace oracle {
inline double delta_g_kj(const ElementRecord& e, double crust = 2.7, double temperature = 295.0) {
  const double c_pure = e.trading_form == TradingForm::gas ? 1.0 / (0.082057 * temperature)
                                                          : e.density * 1000.0 / e.molar_mass;
  const double c_env = e.abundance_env * 1e-3 * crust / e.molar_mass;
  return 8.314 * temperature * std::log(c_pure / c_env) / 1000.0;
}
inline double delta_g0_kj(const ElementRecord& e) {
  return e.abs_electronegativity < 4.44 ? (4.44 - e.abs_electronegativity) * 96.485 : 0.0;
}
}  // namespace oracle

// Elements whose log10 molar price is exactly scale * (dG + dG0 / ratio) + offset.
inline ValidatedDataset known_ratio_dataset(double ratio, double scale = 0.05, double offset = -1.0) {
  std::vector<ElementRecord> elements{
      make_element("Aa", 50.0, 7.0, 100.0, 2.5, 2),   make_element("Bb", 120.0, 10.0, 0.5, 3.2, 3),
      make_element("Cc", 20.0, 1.5, 5000.0, 2.0, 1),  make_element("Dd", 190.0, 20.0, 0.002, 5.5, 3),
      make_element("Ee", 90.0, 8.0, 20.0, 3.8, 2),    make_element("Ff", 60.0, 5.0, 0.05, 4.1, 4),
      make_element("Gg", 140.0, 6.5, 30.0, 3.0, 3),   make_element("Hh", 30.0, 2.5, 10.0, 2.8, 2),
  };
  std::vector<PriceQuote> prices;
  for (const auto& e : elements) {
    const double log10_price = scale * (oracle::delta_g_kj(e) + oracle::delta_g0_kj(e) / ratio) + offset;
    prices.push_back(base_year_quote(e, std::pow(10.0, log10_price)));
  }
  return validate_dataset(elements, prices, base_only_deflator());
}

}  // namespace thermovalue::testing
