#pragma once

// The `thermovalue` command line: validate | compute | fit | correlate | plot.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "thermovalue/dataset.hpp"
#include "thermovalue/error.hpp"
#include "thermovalue/model.hpp"
#include "thermovalue/stats.hpp"
#include "thermovalue/svg.hpp"
#include "thermovalue/thermo.hpp"

namespace thermovalue::cli {

inline constexpr const char* kDatasetEnv = "THERMOVALUE_DATASET";
inline constexpr int kDefaultYear = 1998;
inline constexpr double kDefaultRatio = 13.0;
inline constexpr YearRange kDefaultYears{1959, 1998};

enum class OutputFormat { csv, svg, text };

struct RunConfig {
  std::string dataset_dir;
  std::optional<int> year;
  std::optional<std::string> years;  // "A:B"
  std::optional<std::string> ratio;  // positive real or "fit"
  double temperature = 295.0;
  double crust_density = kDefaultCrustDensity;
  std::string dg0_mapping = std::string(to_string(StandardGibbsMapping::electron_potential));
  std::vector<std::string> exclude;
  bool crustal_only = false;
  std::string output;
  std::optional<std::string> format;
  int fig = 3;
};

namespace detail {

inline std::filesystem::path dataset_dir(const RunConfig& cfg) {
  if (!cfg.dataset_dir.empty()) return cfg.dataset_dir;
  if (const char* env = std::getenv(kDatasetEnv); env && *env) return env;
  throw argument_error(fmt::format("no dataset directory: pass --dataset or set {}", kDatasetEnv));
}

inline ThermoConditions conditions(const RunConfig& cfg) {
  ThermoConditions cond;
  cond.temperature = cfg.temperature;
  const auto mapping = standard_gibbs_mapping_from(cfg.dg0_mapping);
  if (!mapping) throw argument_error(fmt::format("unknown dG0 mapping '{}'", cfg.dg0_mapping));
  cond.dg0_mapping = *mapping;
  cond.validate();
  return cond;
}

inline OutputFormat output_format(const RunConfig& cfg, OutputFormat fallback, std::set<OutputFormat> allowed) {
  if (!cfg.format) return fallback;
  OutputFormat f;
  if (*cfg.format == "csv") f = OutputFormat::csv;
  else if (*cfg.format == "svg") f = OutputFormat::svg;
  else if (*cfg.format == "text") f = OutputFormat::text;
  else throw argument_error(fmt::format("unknown format '{}'", *cfg.format));
  if (!allowed.contains(f)) throw argument_error(fmt::format("format '{}' is not supported here", *cfg.format));
  return f;
}

inline YearRange parse_years(const std::string& text) {
  const auto colon = text.find(':');
  const auto a = csv::to_integer(std::string_view(text).substr(0, colon));
  const auto b = colon == std::string::npos ? a : csv::to_integer(std::string_view(text).substr(colon + 1));
  if (!a || !b) throw argument_error(fmt::format("malformed year range '{}' (expected A:B)", text));
  YearRange r{static_cast<int>(*a), static_cast<int>(*b)};
  r.validate();
  return r;
}

inline std::set<std::string> split_symbols(const std::vector<std::string>& items) {
  std::set<std::string> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string sym;
    while (std::getline(ss, sym, ','))
      if (auto t = csv::trim(sym); !t.empty()) out.emplace(t);
  }
  return out;
}

// Reference dataset with --exclude and --crustal-only applied.
inline ValidatedDataset prepare_dataset(const RunConfig& cfg) {
  if (!(cfg.crust_density > 0.0)) throw argument_error("crust density must be positive");
  auto ds = load_dataset(dataset_dir(cfg), cfg.crust_density);
  auto drop = split_symbols(cfg.exclude);
  for (const auto& s : drop)
    if (!ds.find_element(s)) throw argument_error(fmt::format("--exclude: unknown element symbol '{}'", s));
  if (cfg.crustal_only)
    for (const auto& e : ds.elements())
      if (e.trading_form == TradingForm::gas) drop.insert(e.symbol);
  return drop.empty() ? ds : ds.without(drop);
}

struct ResolvedRatio {
  double value = kDefaultRatio;
  std::optional<RatioFit> fit;  // set when the ratio came from a grid search
};

inline ResolvedRatio resolve_ratio(const RunConfig& cfg, const ValidatedDataset& ds, const ThermoConditions& cond,
                                   int fit_year, const char* fallback) {
  const std::string ratio_text = cfg.ratio.value_or(fallback);
  if (ratio_text == "fit") {
    auto fit = fit_efficiency_ratio(ds, fit_year, cond);
    return {fit.ratio, std::move(fit)};
  }
  const auto v = csv::to_double(ratio_text);
  if (!v || !(*v > 0.0)) throw argument_error(fmt::format("--ratio must be a positive number or 'fit', got '{}'", ratio_text));
  return {*v, std::nullopt};
}

inline void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw parse_error(fmt::format("cannot write {}", path.string()));
  f << content;
  if (!f) throw parse_error(fmt::format("failed writing {}", path.string()));
}

inline void emit(const RunConfig& cfg, std::ostream& out, const std::string& content) {
  if (cfg.output.empty()) out << content;
  else write_text(cfg.output, content);
}

// Sibling of `path` with its extension replaced, e.g. fig3.svg -> fig3.csv.
inline std::filesystem::path sibling(const std::filesystem::path& path, const std::string& suffix) {
  auto p = path;
  p.replace_extension();
  p += suffix;
  return p;
}

inline std::string format_r(double r) { return fmt::format("{:.4f}", r); }

inline std::string class_color(GibbsClass c) {
  switch (c) {
    case GibbsClass::high: return "#d62728";
    case GibbsClass::mid: return "#2ca02c";
    case GibbsClass::low: return "#1f77b4";
  }
  return "#7f7f7f";
}

}  // namespace detail

inline int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto dir = detail::dataset_dir(cfg);
  std::vector<std::string> missing;
  for (const auto& f : {kElementsFile, kPricesFile, kDeflatorFile})
    if (!std::filesystem::is_regular_file(dir / f)) missing.push_back((dir / f).string());
  if (!missing.empty()) {
    for (const auto& m : missing) err << "error: missing " << m << '\n';
    return static_cast<int>(ErrorKind::parse);
  }

  const auto elements = read_element_table(thermovalue::detail::read_file(dir / kElementsFile));
  const auto prices = read_price_table(thermovalue::detail::read_file(dir / kPricesFile));
  const auto deflator_rows = read_deflator_rows(thermovalue::detail::read_file(dir / kDeflatorFile));

  std::size_t parse_errors = 0;
  auto report = [&](std::string_view file, const auto& result) {
    for (const auto& e : result.errors) err << "error: " << file << ": " << e.describe() << '\n';
    parse_errors += result.errors.size();
  };
  report("elements.csv", elements);
  report("prices.csv", prices);
  report("deflator.csv", deflator_rows);

  DeflatorTable deflators;
  try {
    deflators = DeflatorTable::from_entries({deflator_rows.records.begin(), deflator_rows.records.end()});
  } catch (const Error& e) {
    err << "error: deflator.csv: " << e.what() << '\n';
    ++parse_errors;
  }

  const auto years = [&] {
    std::set<int> ys;
    for (const auto& q : prices.records) ys.insert(q.year);
    return ys;
  }();
  out << fmt::format("{} elements, {} price quotes, {} price years", elements.records.size(),
                     prices.records.size(), years.size());
  if (!years.empty()) out << fmt::format(" ({}-{})", *years.begin(), *years.rbegin());
  out << fmt::format(", {} deflator years\n", deflator_rows.records.size());

  if (parse_errors) {
    out << fmt::format("{} parse error(s)\n", parse_errors);
    return static_cast<int>(ErrorKind::parse);
  }
  const auto issues = integrity_issues(elements.records, prices.records, deflators, cfg.crust_density);
  for (const auto& i : issues) err << "error: " << i << '\n';
  if (!issues.empty()) {
    out << fmt::format("{} integrity error(s)\n", issues.size());
    return static_cast<int>(ErrorKind::integrity);
  }
  out << "ok\n";
  return 0;
}

inline int cmd_compute(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  detail::output_format(cfg, OutputFormat::csv, {OutputFormat::csv});
  const auto ds = detail::prepare_dataset(cfg);
  const auto cond = detail::conditions(cfg);
  const auto ratio = detail::resolve_ratio(cfg, ds, cond, cfg.year.value_or(kDefaultYear), "13");
  detail::emit(cfg, out, write_energy_table(compute_energies(ds, cond, ratio.value, 1.0)));
  return 0;
}

inline int cmd_fit(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const auto format = detail::output_format(cfg, OutputFormat::text, {OutputFormat::text, OutputFormat::csv});
  const auto ds = detail::prepare_dataset(cfg);
  const auto cond = detail::conditions(cfg);
  const int year = cfg.year.value_or(kDefaultYear);
  const auto sample = year_sample(ds, year, cond);
  std::optional<RatioFit> ratio_fit;
  double ratio = kDefaultRatio;
  const std::string ratio_text = cfg.ratio.value_or("fit");
  if (ratio_text == "fit") {
    ratio_fit = fit_efficiency_ratio(sample);
    ratio = ratio_fit->ratio;
  } else {
    ratio = detail::resolve_ratio(cfg, ds, cond, year, "fit").value;
  }
  const auto model = build_model(sample, cond, ratio);

  if (format == OutputFormat::csv) {
    if (!ratio_fit) throw argument_error("--format csv prints the ratio grid and needs --ratio fit");
    out << write_ratio_curve(*ratio_fit);
  } else {
    out << fmt::format("year: {}\n", year);
    out << fmt::format("elements: {}\n", model.n);
    if (ratio_fit) {
      out << fmt::format("ratio: {:.4g} (grid argmax over {})\n", ratio, ratio_fit->grid.describe());
      if (!ratio_fit->identifiable) out << "warning: dG0 is constant over the sample; the ratio is not identifiable\n";
    } else {
      out << fmt::format("ratio: {:.4g}\n", ratio);
    }
    out << fmt::format("pearson_r: {}\n", detail::format_r(model.pearson_r));
    out << fmt::format("slope: {:.6g}\n", model.slope);
    out << fmt::format("intercept: {:.6g}\n", model.intercept);
  }
  if (!cfg.output.empty()) {
    detail::write_text(cfg.output, write_model(model));
    if (ratio_fit) detail::write_text(detail::sibling(cfg.output, "_grid.csv"), write_ratio_curve(*ratio_fit));
  }
  return 0;
}

inline int cmd_correlate(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  detail::output_format(cfg, OutputFormat::csv, {OutputFormat::csv});
  if (cfg.year && cfg.years) throw argument_error("give either --year or --years, not both");
  const YearRange range = cfg.years ? detail::parse_years(*cfg.years)
                          : cfg.year ? YearRange{*cfg.year, *cfg.year}
                                     : kDefaultYears;
  const auto ds = detail::prepare_dataset(cfg);
  const auto cond = detail::conditions(cfg);
  const auto ratio = detail::resolve_ratio(cfg, ds, cond, range.last, "13");
  const auto series = yearly_correlation_series(ds, cond, ratio.value, range);
  std::string text = write_correlation_series(series);
  if (!series.omitted.empty()) {
    text += "# omitted years (fewer than 3 priced elements):";
    for (int y : series.omitted) text += fmt::format(" {}", y);
    text += '\n';
  }
  detail::emit(cfg, out, text);
  return 0;
}

inline int cmd_plot(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  detail::output_format(cfg, OutputFormat::svg, {OutputFormat::svg});
  if (cfg.fig != 3 && cfg.fig != 4) throw argument_error(fmt::format("--fig must be 3 or 4, got {}", cfg.fig));
  const auto ds = detail::prepare_dataset(cfg);
  const auto cond = detail::conditions(cfg);
  const int year = cfg.year.value_or(kDefaultYear);
  const auto sample = year_sample(ds, year, cond);

  svg::ScatterPlot plot;
  plot.y_label = "log10 price (1992 USD per mol)";
  std::vector<double> xs;
  if (cfg.fig == 3) {
    xs = sample.delta_g;
    plot.title = fmt::format("Concentration Gibbs energy vs price, {}", year);
    plot.x_label = "dG = RT ln([A]pure/[A]env) (kJ/mol)";
    for (auto c : kGibbsClasses)
      plot.legend.push_back({fmt::format("dG0 class: {}", to_string(c)), detail::class_color(c)});
  } else {
    const auto ratio = detail::resolve_ratio(cfg, ds, cond, year, "13");
    xs = sample.sigma_e(ratio.value);
    plot.title = fmt::format("Total refining energy vs price, {}", year);
    plot.x_label = fmt::format("sumE = a dG + b dG0 with a/b = {:.4g} (kJ/mol)", ratio.value);
  }
  const auto fit = ols(xs, sample.log10_price);
  plot.fit = svg::Line{fit.slope, fit.intercept};
  plot.annotation = fmt::format("r = {} (n = {})", detail::format_r(fit.pearson_r), fit.n);

  std::string points = "symbol,gibbs_class,energy_kJ_mol,log10_price\n";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto color = cfg.fig == 3 ? detail::class_color(sample.classes[i]) : std::string("#1f77b4");
    plot.points.push_back({xs[i], sample.log10_price[i], sample.symbols[i], color});
    points += csv::join({sample.symbols[i], std::string(to_string(sample.classes[i])), csv::format_double(xs[i]),
                         csv::format_double(sample.log10_price[i])}) +
              '\n';
  }

  const std::filesystem::path svg_path = cfg.output.empty() ? fmt::format("fig{}.svg", cfg.fig) : cfg.output;
  detail::write_text(svg_path, svg::render(plot));
  detail::write_text(detail::sibling(svg_path, ".csv"), points);
  out << fmt::format("wrote {} ({} points, {})\n", svg_path.string(), xs.size(), plot.annotation);
  return 0;
}

inline constexpr const char* kAxisNote =
    "Plots and fits use x = energy in kJ/mol and y = log10 of the price per mole in constant 1992 US dollars.";

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Thermodynamic refining energy and market price of purified elements.\n" + std::string(kAxisNote),
               "thermovalue"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--dataset", cfg.dataset_dir,
                    fmt::format("Directory with elements.csv, prices.csv, deflator.csv (default: ${})", kDatasetEnv));
    sub->add_option("--crust-density", cfg.crust_density, "Crust density in g/cm^3")->capture_default_str();
  };
  auto add_analysis = [&](CLI::App* sub) {
    add_common(sub);
    sub->add_option("--temp", cfg.temperature, "Temperature in K")->capture_default_str();
    sub->add_option("--exclude", cfg.exclude, "Element symbols to drop, comma separated")->delimiter(',');
    sub->add_flag("--crustal-only", cfg.crustal_only, "Drop elements traded as gases");
    sub->add_option("--dg0-map", cfg.dg0_mapping,
                    "dG0 from electronegativity: electron-potential | electron-potential-per-mole | proportional")
        ->capture_default_str();
    sub->add_option("--out", cfg.output, "Output path (default: stdout)");
    sub->add_option("--format", cfg.format, "csv | svg | text");
  };

  auto* validate = app.add_subcommand("validate", "Check the three input tables and report counts and errors");
  add_common(validate);

  auto* compute = app.add_subcommand("compute", "Per-element concentrations and energies as CSV");
  add_analysis(compute);
  compute->add_option("--year", cfg.year, "Fit year when --ratio fit");
  compute->add_option("--ratio", cfg.ratio, "Efficiency ratio a/b or 'fit' (default 13)");

  auto* fit = app.add_subcommand("fit", "Fit a/b by grid search or build the model at a given ratio");
  add_analysis(fit);
  fit->add_option("--year", cfg.year, "Price year (default 1998)");
  fit->add_option("--ratio", cfg.ratio, "Efficiency ratio a/b or 'fit' (default fit)");

  auto* correlate = app.add_subcommand("correlate", "Per-year Pearson r of sumE against log10 price");
  add_analysis(correlate);
  correlate->add_option("--years", cfg.years, "Year range A:B (default 1959:1998)");
  correlate->add_option("--year", cfg.year, "Single year");
  correlate->add_option("--ratio", cfg.ratio, "Efficiency ratio a/b or 'fit' (default 13)");

  auto* plot = app.add_subcommand("plot", "Scatter plot as SVG plus the plotted points as CSV");
  add_analysis(plot);
  plot->add_option("--fig", cfg.fig, "3: dG coloured by dG0 class, 4: sumE at the given ratio")->capture_default_str();
  plot->add_option("--year", cfg.year, "Price year (default 1998)");
  plot->add_option("--ratio", cfg.ratio, "Efficiency ratio a/b or 'fit' for --fig 4 (default 13)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : static_cast<int>(ErrorKind::argument);
  }

  try {
    if (validate->parsed()) return cmd_validate(cfg, out, err);
    if (compute->parsed()) return cmd_compute(cfg, out, err);
    if (fit->parsed()) return cmd_fit(cfg, out, err);
    if (correlate->parsed()) return cmd_correlate(cfg, out, err);
    if (plot->parsed()) return cmd_plot(cfg, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ErrorKind::parse);
  }
  return static_cast<int>(ErrorKind::argument);
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"thermovalue"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace thermovalue::cli
