#pragma once

// Element, price and deflator tables: parsing, validation, and conversion of
// quoted prices to constant 1992 US dollars per mole.

#include <algorithm>
#include <array>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "thermovalue/csv.hpp"
#include "thermovalue/error.hpp"

namespace thermovalue {

inline constexpr int kBaseYear = 1992;
inline constexpr double kBaseIndex = 100.0;
inline constexpr double kDefaultCrustDensity = 2.7;  // g/cm^3, upper continental crust

enum class TradingForm { solid, liquid, gas };
enum class GibbsClass { high, mid, low };
enum class MassUnit { usd_per_kg, usd_per_lb, usd_per_g, usd_per_troy_oz };

inline constexpr std::array kGibbsClasses{GibbsClass::high, GibbsClass::mid, GibbsClass::low};

inline std::string_view to_string(TradingForm f) {
  switch (f) {
    case TradingForm::solid: return "solid";
    case TradingForm::liquid: return "liquid";
    case TradingForm::gas: return "gas";
  }
  return "";
}

inline std::string_view to_string(GibbsClass c) {
  switch (c) {
    case GibbsClass::high: return "high";
    case GibbsClass::mid: return "mid";
    case GibbsClass::low: return "low";
  }
  return "";
}

inline std::string_view to_string(MassUnit u) {
  switch (u) {
    case MassUnit::usd_per_kg: return "USD_per_kg";
    case MassUnit::usd_per_lb: return "USD_per_lb";
    case MassUnit::usd_per_g: return "USD_per_g";
    case MassUnit::usd_per_troy_oz: return "USD_per_troy_oz";
  }
  return "";
}

inline std::optional<TradingForm> trading_form_from(std::string_view s) {
  for (auto f : {TradingForm::solid, TradingForm::liquid, TradingForm::gas})
    if (to_string(f) == s) return f;
  return std::nullopt;
}

inline std::optional<GibbsClass> gibbs_class_from(std::string_view s) {
  for (auto c : kGibbsClasses)
    if (to_string(c) == s) return c;
  return std::nullopt;
}

inline std::optional<MassUnit> mass_unit_from(std::string_view s) {
  for (auto u : {MassUnit::usd_per_kg, MassUnit::usd_per_lb, MassUnit::usd_per_g, MassUnit::usd_per_troy_oz})
    if (to_string(u) == s) return u;
  return std::nullopt;
}

// Exact mass of one quoting unit, in grams.
constexpr double grams_per_unit(MassUnit u) {
  switch (u) {
    case MassUnit::usd_per_kg: return 1000.0;
    case MassUnit::usd_per_lb: return 453.59237;
    case MassUnit::usd_per_g: return 1.0;
    case MassUnit::usd_per_troy_oz: return 31.1034768;
  }
  return 0.0;
}

struct ElementRecord {
  std::string symbol;
  std::string name;
  double molar_mass = 0.0;             // g/mol
  double density = 0.0;                // g/cm^3 of the traded pure form
  TradingForm trading_form = TradingForm::solid;
  double abundance_env = 0.0;          // mg/kg, upper continental crust
  double abs_electronegativity = 0.0;  // eV
  int oxidation_state = 1;
  GibbsClass gibbs_class = GibbsClass::mid;

  friend bool operator==(const ElementRecord&, const ElementRecord&) = default;
};

struct PriceQuote {
  std::string symbol;
  int year = 0;
  double nominal_price = 0.0;  // USD of `year`, per `unit`
  MassUnit unit = MassUnit::usd_per_kg;
  std::string purity_note;

  friend bool operator==(const PriceQuote&, const PriceQuote&) = default;
};

// Year -> price index with 1992 = 100.
class DeflatorTable {
 public:
  DeflatorTable() = default;

  static DeflatorTable from_entries(std::map<int, double> entries) {
    for (const auto& [year, index] : entries)
      if (!(index > 0.0)) throw parse_error(fmt::format("deflator year {}: non-positive index", year));
    const auto base = entries.find(kBaseYear);
    if (base == entries.end()) throw parse_error(fmt::format("missing base year {}", kBaseYear));
    if (base->second != kBaseIndex)
      throw parse_error(fmt::format("base year {} must have index exactly 100", kBaseYear));
    DeflatorTable t;
    t.entries_ = std::move(entries);
    return t;
  }

  bool contains(int year) const { return entries_.contains(year); }

  double index(int year) const {
    const auto it = entries_.find(year);
    if (it == entries_.end()) throw integrity_error(fmt::format("no deflator index for year {}", year));
    return it->second;
  }

  const std::map<int, double>& entries() const { return entries_; }

  friend bool operator==(const DeflatorTable&, const DeflatorTable&) = default;

 private:
  std::map<int, double> entries_;
};

// One rejected input row.
struct RowError {
  std::size_t line = 0;
  std::string column;  // empty when the whole row is malformed
  std::string message;

  std::string describe() const {
    if (column.empty()) return fmt::format("line {}: {}", line, message);
    return fmt::format("line {}, column {}: {}", line, column, message);
  }
};

// Lenient parse outcome: every data row lands in exactly one of the two lists.
template <typename T>
struct ParseResult {
  std::vector<T> records;
  std::vector<RowError> errors;
  std::size_t data_rows = 0;

  bool ok() const { return errors.empty(); }
};

inline constexpr std::array<std::string_view, 9> kElementHeader{
    "symbol", "name", "molar_mass_g_mol", "density_g_cm3", "trading_form",
    "abundance_mg_kg", "abs_electronegativity_eV", "oxidation_state", "gibbs_class"};
inline constexpr std::array<std::string_view, 5> kPriceHeader{"symbol", "year", "nominal_price_usd", "unit",
                                                               "purity_note"};
inline constexpr std::array<std::string_view, 2> kDeflatorHeader{"year", "index_1992_base"};

namespace detail {

template <std::size_t N>
void check_header(const std::vector<csv::Row>& rows, const std::array<std::string_view, N>& expected,
                  std::string_view table) {
  std::string want;
  for (std::size_t i = 0; i < N; ++i) want += fmt::format("{}{}", i ? "," : "", expected[i]);
  if (rows.empty()) throw parse_error(fmt::format("{}: missing header row (expected '{}')", table, want));
  const auto& got = rows.front().fields;
  if (got.size() != N || !std::equal(got.begin(), got.end(), expected.begin()))
    throw parse_error(fmt::format("{}: header mismatch (expected '{}')", table, want));
}

inline bool valid_symbol(std::string_view s) {
  if (s.empty() || s.size() > 2) return false;
  if (!std::isupper(static_cast<unsigned char>(s[0]))) return false;
  return s.size() == 1 || std::islower(static_cast<unsigned char>(s[1]));
}

// Collects at most one error per row; `fail` records it and makes later checks no-ops.
class RowReader {
 public:
  RowReader(const csv::Row& row, std::vector<RowError>& errors) : row_(row), errors_(errors) {}

  bool failed() const { return failed_; }

  void fail(std::string_view column, std::string message) {
    if (failed_) return;
    failed_ = true;
    errors_.push_back({row_.line, std::string(column), std::move(message)});
  }

  double number(std::size_t i, std::string_view column) {
    if (failed_) return 0.0;
    const auto v = csv::to_double(row_.fields[i]);
    if (!v) fail(column, fmt::format("malformed number '{}'", row_.fields[i]));
    return v.value_or(0.0);
  }

  double positive(std::size_t i, std::string_view column) {
    const double v = number(i, column);
    if (!failed_ && !(v > 0.0)) fail(column, "non-positive numeric field");
    return v;
  }

  long long integer(std::size_t i, std::string_view column) {
    if (failed_) return 0;
    const auto v = csv::to_integer(row_.fields[i]);
    if (!v) fail(column, fmt::format("malformed integer '{}'", row_.fields[i]));
    return v.value_or(0);
  }

  const std::string& text(std::size_t i) const { return row_.fields[i]; }

 private:
  const csv::Row& row_;
  std::vector<RowError>& errors_;
  bool failed_ = false;
};

template <typename T>
std::vector<T> strict(ParseResult<T> result, std::string_view table) {
  if (result.ok()) return std::move(result.records);
  std::string msg = fmt::format("{}: {} malformed row(s)", table, result.errors.size());
  for (const auto& e : result.errors) msg += "\n  " + e.describe();
  throw parse_error(msg);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error(fmt::format("cannot open {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

inline ParseResult<ElementRecord> read_element_table(std::string_view text) {
  const auto rows = csv::read_rows(text);
  detail::check_header(rows, kElementHeader, "elements");
  ParseResult<ElementRecord> out;
  std::set<std::string> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    ++out.data_rows;
    detail::RowReader rd(row, out.errors);
    if (row.fields.size() != kElementHeader.size()) {
      rd.fail("", fmt::format("expected {} fields, found {}", kElementHeader.size(), row.fields.size()));
      continue;
    }
    ElementRecord e;
    e.symbol = rd.text(0);
    if (!detail::valid_symbol(e.symbol)) rd.fail("symbol", fmt::format("invalid element symbol '{}'", e.symbol));
    e.name = rd.text(1);
    e.molar_mass = rd.positive(2, "molar_mass_g_mol");
    e.density = rd.positive(3, "density_g_cm3");
    if (!rd.failed()) {
      if (auto f = trading_form_from(rd.text(4))) e.trading_form = *f;
      else rd.fail("trading_form", fmt::format("unknown trading form '{}'", rd.text(4)));
    }
    e.abundance_env = rd.positive(5, "abundance_mg_kg");
    e.abs_electronegativity = rd.number(6, "abs_electronegativity_eV");
    if (!rd.failed() && e.abs_electronegativity < 0.0) rd.fail("abs_electronegativity_eV", "negative numeric field");
    const auto z = rd.integer(7, "oxidation_state");
    if (!rd.failed() && z < 1) rd.fail("oxidation_state", "non-positive numeric field");
    e.oxidation_state = static_cast<int>(z);
    if (!rd.failed()) {
      if (auto c = gibbs_class_from(rd.text(8))) e.gibbs_class = *c;
      else rd.fail("gibbs_class", fmt::format("unknown gibbs class '{}'", rd.text(8)));
    }
    if (!rd.failed() && !seen.insert(e.symbol).second)
      rd.fail("symbol", fmt::format("duplicate symbol '{}'", e.symbol));
    if (!rd.failed()) out.records.push_back(std::move(e));
  }
  return out;
}

inline ParseResult<PriceQuote> read_price_table(std::string_view text) {
  const auto rows = csv::read_rows(text);
  detail::check_header(rows, kPriceHeader, "prices");
  ParseResult<PriceQuote> out;
  std::set<std::pair<std::string, int>> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    auto row = rows[r];
    ++out.data_rows;
    // A trailing empty purity note may be written without its comma.
    if (row.fields.size() == kPriceHeader.size() - 1) row.fields.emplace_back();
    detail::RowReader rd(row, out.errors);
    if (row.fields.size() != kPriceHeader.size()) {
      rd.fail("", fmt::format("expected {} fields, found {}", kPriceHeader.size(), row.fields.size()));
      continue;
    }
    PriceQuote q;
    q.symbol = rd.text(0);
    if (!detail::valid_symbol(q.symbol)) rd.fail("symbol", fmt::format("invalid element symbol '{}'", q.symbol));
    const auto year = rd.integer(1, "year");
    if (!rd.failed() && (year < 1900 || year > 2100)) rd.fail("year", fmt::format("year {} outside 1900-2100", year));
    q.year = static_cast<int>(year);
    q.nominal_price = rd.positive(2, "nominal_price_usd");
    if (!rd.failed()) {
      if (auto u = mass_unit_from(rd.text(3))) q.unit = *u;
      else rd.fail("unit", fmt::format("unknown unit '{}'", rd.text(3)));
    }
    q.purity_note = rd.text(4);
    if (!rd.failed() && !seen.emplace(q.symbol, q.year).second)
      rd.fail("symbol", fmt::format("duplicate quote for ({}, {})", q.symbol, q.year));
    if (!rd.failed()) out.records.push_back(std::move(q));
  }
  return out;
}

// Row-level parse of the deflator table; base-year checks happen in parse_deflator_table.
inline ParseResult<std::pair<int, double>> read_deflator_rows(std::string_view text) {
  const auto rows = csv::read_rows(text);
  detail::check_header(rows, kDeflatorHeader, "deflator");
  ParseResult<std::pair<int, double>> out;
  std::set<int> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    ++out.data_rows;
    detail::RowReader rd(row, out.errors);
    if (row.fields.size() != kDeflatorHeader.size()) {
      rd.fail("", fmt::format("expected {} fields, found {}", kDeflatorHeader.size(), row.fields.size()));
      continue;
    }
    const auto year = rd.integer(0, "year");
    const double index = rd.positive(1, "index_1992_base");
    if (!rd.failed() && !seen.insert(static_cast<int>(year)).second)
      rd.fail("year", fmt::format("duplicate year {}", year));
    if (!rd.failed()) out.records.emplace_back(static_cast<int>(year), index);
  }
  return out;
}

inline std::vector<ElementRecord> parse_element_table(std::string_view text) {
  return detail::strict(read_element_table(text), "elements");
}

inline std::vector<PriceQuote> parse_price_table(std::string_view text) {
  return detail::strict(read_price_table(text), "prices");
}

inline DeflatorTable parse_deflator_table(std::string_view text) {
  const auto rows = detail::strict(read_deflator_rows(text), "deflator");
  return DeflatorTable::from_entries({rows.begin(), rows.end()});
}

inline double to_real_price(double nominal, int year, const DeflatorTable& table) {
  if (year == kBaseYear) return nominal;
  return nominal * table.index(kBaseYear) / table.index(year);
}

// Constant-1992 USD per mole of atoms.
inline double price_per_mole(const PriceQuote& quote, const ElementRecord& record, const DeflatorTable& table) {
  if (quote.symbol != record.symbol)
    throw argument_error(fmt::format("quote for {} paired with record {}", quote.symbol, record.symbol));
  const double real_per_gram = to_real_price(quote.nominal_price, quote.year, table) / grams_per_unit(quote.unit);
  return real_per_gram * record.molar_mass;
}

// Immutable, referentially consistent view of the three tables. Elements are
// held in symbol order.
class ValidatedDataset {
 public:
  const std::vector<ElementRecord>& elements() const { return elements_; }
  const std::vector<PriceQuote>& prices() const { return prices_; }
  const DeflatorTable& deflators() const { return deflators_; }
  double crust_density() const { return crust_density_; }

  const ElementRecord* find_element(std::string_view symbol) const {
    const auto it = element_index_.find(std::string(symbol));
    return it == element_index_.end() ? nullptr : &elements_[it->second];
  }

  const PriceQuote* find_price(std::string_view symbol, int year) const {
    const auto it = price_index_.find({std::string(symbol), year});
    return it == price_index_.end() ? nullptr : &prices_[it->second];
  }

  std::set<int> price_years() const {
    std::set<int> years;
    for (const auto& q : prices_) years.insert(q.year);
    return years;
  }

  // Copy without the given elements and their quotes.
  ValidatedDataset without(const std::set<std::string>& symbols) const;

  friend bool operator==(const ValidatedDataset& a, const ValidatedDataset& b) {
    return a.elements_ == b.elements_ && a.prices_ == b.prices_ && a.deflators_ == b.deflators_ &&
           a.crust_density_ == b.crust_density_;
  }

  friend ValidatedDataset validate_dataset(std::vector<ElementRecord>, std::vector<PriceQuote>, DeflatorTable,
                                           double);

 private:
  ValidatedDataset() = default;

  std::vector<ElementRecord> elements_;
  std::vector<PriceQuote> prices_;
  DeflatorTable deflators_;
  double crust_density_ = kDefaultCrustDensity;
  std::map<std::string, std::size_t> element_index_;
  std::map<std::pair<std::string, int>, std::size_t> price_index_;
};

// Every referential problem across the three tables, in a stable order.
inline std::vector<std::string> integrity_issues(const std::vector<ElementRecord>& elements,
                                                 const std::vector<PriceQuote>& prices,
                                                 const DeflatorTable& deflators, double crust_density) {
  std::vector<std::string> issues;
  if (elements.empty()) issues.emplace_back("element table is empty");
  if (!(crust_density > 0.0)) issues.push_back(fmt::format("crust density must be positive, got {}", crust_density));
  std::set<std::string> symbols;
  for (const auto& e : elements)
    if (!symbols.insert(e.symbol).second) issues.push_back(fmt::format("duplicate element symbol {}", e.symbol));
  std::set<std::string> orphans;
  std::set<int> undeflated;
  std::set<std::pair<std::string, int>> quotes;
  for (const auto& q : prices) {
    if (!symbols.contains(q.symbol)) orphans.insert(q.symbol);
    if (!deflators.contains(q.year)) undeflated.insert(q.year);
    if (!quotes.emplace(q.symbol, q.year).second)
      issues.push_back(fmt::format("duplicate quote for ({}, {})", q.symbol, q.year));
  }
  for (const auto& s : orphans) issues.push_back(fmt::format("orphan price symbol {}", s));
  for (int y : undeflated) issues.push_back(fmt::format("price year {} has no deflator index", y));
  return issues;
}

inline ValidatedDataset validate_dataset(std::vector<ElementRecord> elements, std::vector<PriceQuote> prices,
                                         DeflatorTable deflators, double crust_density = kDefaultCrustDensity) {
  const auto issues = integrity_issues(elements, prices, deflators, crust_density);
  if (!issues.empty()) {
    std::string msg = "dataset integrity check failed";
    for (const auto& i : issues) msg += "\n  " + i;
    throw integrity_error(msg);
  }
  std::sort(elements.begin(), elements.end(), [](const auto& a, const auto& b) { return a.symbol < b.symbol; });
  std::sort(prices.begin(), prices.end(),
            [](const auto& a, const auto& b) { return std::tie(a.symbol, a.year) < std::tie(b.symbol, b.year); });
  ValidatedDataset ds;
  ds.elements_ = std::move(elements);
  ds.prices_ = std::move(prices);
  ds.deflators_ = std::move(deflators);
  ds.crust_density_ = crust_density;
  for (std::size_t i = 0; i < ds.elements_.size(); ++i) ds.element_index_.emplace(ds.elements_[i].symbol, i);
  for (std::size_t i = 0; i < ds.prices_.size(); ++i)
    ds.price_index_.emplace(std::pair{ds.prices_[i].symbol, ds.prices_[i].year}, i);
  return ds;
}

inline ValidatedDataset ValidatedDataset::without(const std::set<std::string>& symbols) const {
  std::vector<ElementRecord> elements;
  std::vector<PriceQuote> prices;
  std::copy_if(elements_.begin(), elements_.end(), std::back_inserter(elements),
               [&](const auto& e) { return !symbols.contains(e.symbol); });
  std::copy_if(prices_.begin(), prices_.end(), std::back_inserter(prices),
               [&](const auto& q) { return !symbols.contains(q.symbol); });
  return validate_dataset(std::move(elements), std::move(prices), deflators_, crust_density_);
}

inline std::string write_element_table(const std::vector<ElementRecord>& elements) {
  std::string out;
  for (std::size_t i = 0; i < kElementHeader.size(); ++i) out += fmt::format("{}{}", i ? "," : "", kElementHeader[i]);
  out += '\n';
  for (const auto& e : elements) {
    out += csv::join({e.symbol, e.name, csv::format_double(e.molar_mass), csv::format_double(e.density),
                      std::string(to_string(e.trading_form)), csv::format_double(e.abundance_env),
                      csv::format_double(e.abs_electronegativity), std::to_string(e.oxidation_state),
                      std::string(to_string(e.gibbs_class))});
    out += '\n';
  }
  return out;
}

inline std::string write_price_table(const std::vector<PriceQuote>& prices) {
  std::string out = "symbol,year,nominal_price_usd,unit,purity_note\n";
  for (const auto& q : prices) {
    out += csv::join({q.symbol, std::to_string(q.year), csv::format_double(q.nominal_price),
                      std::string(to_string(q.unit)), q.purity_note});
    out += '\n';
  }
  return out;
}

inline std::string write_deflator_table(const DeflatorTable& table) {
  std::string out = "year,index_1992_base\n";
  for (const auto& [year, index] : table.entries()) out += fmt::format("{},{}\n", year, csv::format_double(index));
  return out;
}

inline const std::filesystem::path kElementsFile = "elements.csv";
inline const std::filesystem::path kPricesFile = "prices.csv";
inline const std::filesystem::path kDeflatorFile = "deflator.csv";

// Reads elements.csv, prices.csv and deflator.csv from `dir`.
inline ValidatedDataset load_dataset(const std::filesystem::path& dir, double crust_density = kDefaultCrustDensity) {
  for (const auto& f : {kElementsFile, kPricesFile, kDeflatorFile})
    if (!std::filesystem::is_regular_file(dir / f)) throw parse_error(fmt::format("missing {}", (dir / f).string()));
  auto elements = parse_element_table(detail::read_file(dir / kElementsFile));
  auto prices = parse_price_table(detail::read_file(dir / kPricesFile));
  auto deflators = parse_deflator_table(detail::read_file(dir / kDeflatorFile));
  return validate_dataset(std::move(elements), std::move(prices), std::move(deflators), crust_density);
}

}  // namespace thermovalue
