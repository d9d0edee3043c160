#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string_view>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include "vise/environments.hpp"
#include "vise/errors.hpp"
#include "vise/montecarlo.hpp"
#include "vise/numerics.hpp"
#include "vise/spec_io.hpp"
#include "vise/voting.hpp"

namespace vise::cli {

namespace {

using Json = nlohmann::ordered_json;
using env::Family;

constexpr Family kFamilies[] = {Family::uniform, Family::normal, Family::symmetrized_pareto, Family::laplace};

// Output files that cannot be opened or written.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string command;
  std::optional<std::string> family;
  std::optional<double> a, b, mu, sigma, k, lambda;
  std::optional<std::string> spec;
  std::optional<int> n;
  std::optional<double> alpha;
  std::optional<std::string> grid;
  std::int64_t reps = 1000000;
  std::uint64_t seed = 42;
  unsigned threads = 1;
  std::optional<int> fig;
  std::optional<std::string> out;
  std::optional<std::string> format;
  int steps = 100;
  std::optional<std::string> trajectory;
};

// Reads a flat JSON object whose keys are long flag names, e.g.
// {"family": "normal", "mu": 0.5, "n": 21}. Flags on the command line win.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    Json j = Json::object();
    for (const CLI::Option* opt : app->get_options()) {
      if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
      const auto values = opt->reduced_results();
      if (!values.empty()) {
        j[opt->get_lnames().front()] = values.front();
      } else if (default_also && !opt->get_default_str().empty()) {
        j[opt->get_lnames().front()] = opt->get_default_str();
      }
    }
    return j.dump(2) + "\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    Json j;
    try {
      j = Json::parse(input);
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : j.items()) {
      CLI::ConfigItem item;
      item.name = key;
      if (value.is_string()) {
        item.inputs = {value.get<std::string>()};
      } else if (value.is_number_integer()) {
        item.inputs = {std::to_string(value.get<std::int64_t>())};
      } else if (value.is_number()) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", value.get<double>());
        item.inputs = {buf};
      } else {
        throw CLI::ConversionError("config value for '" + key + "' must be a string or a number");
      }
      items.push_back(std::move(item));
    }
    return items;
  }
};

std::string num(double v, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

// ---------------------------------------------------------------- reports

using Value = std::variant<double, std::int64_t, std::string>;

// Ordered key/value summary rendered as text (6 digits), CSV (12 digits) or JSON.
class Report {
 public:
  Report& add(std::string key, Value v) {
    rows_.emplace_back(std::move(key), std::move(v));
    return *this;
  }

  std::string render(std::string_view format) const {
    std::string s;
    if (format == "json") {
      Json j;
      for (const auto& [key, v] : rows_) std::visit([&j, &key](const auto& x) { j[key] = x; }, v);
      return j.dump() + "\n";
    }
    if (format == "csv") {
      std::string header;
      std::string row;
      for (const auto& [key, v] : rows_) {
        header += (header.empty() ? "" : ",") + key;
        row += (row.empty() ? "" : ",") + text(v, 12);
      }
      return header + "\n" + row + "\n";
    }
    for (const auto& [key, v] : rows_) s += key + ": " + text(v, 6) + "\n";
    return s;
  }

 private:
  static std::string text(const Value& v, int digits) {
    if (const auto* d = std::get_if<double>(&v)) return num(*d, digits);
    if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
    return std::get<std::string>(v);
  }

  std::vector<std::pair<std::string, Value>> rows_;
};

// Column table for curves: CSV with 12 significant digits or a JSON array of rows.
class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add(std::vector<Value> row) { rows_.push_back(std::move(row)); }

  std::string render(std::string_view format) const {
    std::string s;
    if (format == "json") {
      Json array = Json::array();
      for (const auto& row : rows_) {
        Json j;
        for (std::size_t c = 0; c < columns_.size(); ++c) {
          std::visit([&](const auto& x) { j[columns_[c]] = x; }, row[c]);
        }
        array.push_back(std::move(j));
      }
      return array.dump() + "\n";
    }
    for (std::size_t c = 0; c < columns_.size(); ++c) s += (c ? "," : "") + columns_[c];
    s += "\n";
    for (const auto& row : rows_) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) s += ",";
        if (const auto* d = std::get_if<double>(&row[c])) {
          s += num(*d, 12);
        } else if (const auto* i = std::get_if<std::int64_t>(&row[c])) {
          s += std::to_string(*i);
        } else {
          s += std::get<std::string>(row[c]);
        }
      }
      s += "\n";
    }
    return s;
  }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Value>> rows_;
};

void emit(const Config& cfg, const std::string& body, std::ostream& out) {
  if (!cfg.out) {
    out << body;
    return;
  }
  std::ofstream file(*cfg.out, std::ios::binary);
  if (!file) throw IoError("cannot open output file '" + *cfg.out + "'");
  file << body;
  file.flush();
  if (!file) throw IoError("cannot write output file '" + *cfg.out + "'");
}

// ---------------------------------------------------------------- inputs

env::DistributionSpec spec_of(const Config& cfg) {
  if (cfg.spec) {
    if (cfg.family || cfg.a || cfg.b || cfg.mu || cfg.sigma || cfg.k || cfg.lambda)
      throw ParameterError("--spec cannot be combined with --family or parameter flags");
    return env::parse_spec(*cfg.spec);
  }
  if (!cfg.family) throw ParameterError("--family is required");
  return env::build_spec({*cfg.family, cfg.a, cfg.b, cfg.mu, cfg.sigma, cfg.k, cfg.lambda});
}

struct Grid {
  double lo, hi, step;
};

Grid parse_grid(const std::string& text) {
  Grid g{};
  double* slots[] = {&g.lo, &g.hi, &g.step};
  std::string_view rest = text;
  for (int i = 0; i < 3; ++i) {
    const auto colon = rest.find(':');
    if ((i < 2) != (colon != std::string_view::npos))
      throw ParameterError("--grid must be lo:hi:step, got '" + text + "'");
    const auto part = rest.substr(0, colon);
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), *slots[i]);
    if (ec != std::errc{} || ptr != part.data() + part.size())
      throw ParameterError("--grid must be lo:hi:step, got '" + text + "'");
    rest = colon == std::string_view::npos ? std::string_view{} : rest.substr(colon + 1);
  }
  if (!(g.step > 0.0)) throw ParameterError("--grid step must be positive");
  if (!(g.lo <= g.hi)) throw ParameterError("--grid requires lo <= hi");
  return g;
}

std::vector<double> grid_of(const Config& cfg, Grid fallback) {
  const Grid g = cfg.grid ? parse_grid(*cfg.grid) : fallback;
  return voting::make_grid(g.lo, g.hi, g.step);
}

int n_of(const Config& cfg, int fallback) {
  const int n = cfg.n.value_or(fallback);
  if (n < 1) throw ParameterError("--n must be at least 1");
  return n;
}

std::string format_of(const Config& cfg, const char* fallback) {
  return cfg.format.value_or(fallback);
}

const char* degeneracy_name(voting::Degeneracy d) {
  switch (d) {
    case voting::Degeneracy::none:
      return "none";
    case voting::Degeneracy::reject_all:
      return "reject_all";
    case voting::Degeneracy::accept_all:
      return "accept_all";
  }
  return "none";
}

// ---------------------------------------------------------------- commands

void add_ladder(Report& r, const env::EnvironmentStats& s, int n) {
  const auto ladder = voting::optimal_absolute_threshold(s, n);
  r.add("n", std::int64_t{n})
      .add("n0_star", std::int64_t{ladder.n0_star})
      .add("interval_lo", ladder.interval_lo)
      .add("interval_hi", ladder.interval_hi)
      .add("center", ladder.center);
}

void cmd_threshold(const Config& cfg, std::ostream& out) {
  const auto spec = spec_of(cfg);
  const auto s = env::stats(spec);
  Report r;
  r.add("family", std::string(env::family_name(env::family_of(spec))))
      .add("alpha0", voting::optimal_threshold_closed_form(spec))
      .add("R", s.win_loss_ratio())
      .add("e_plus", s.e_plus)
      .add("e_minus", s.e_minus)
      .add("p", s.p)
      .add("q", s.q)
      .add("mu", s.mu)
      .add("sigma", s.sigma)
      .add("rho", s.rho);
  if (cfg.n) add_ladder(r, s, n_of(cfg, 1));
  emit(cfg, r.render(format_of(cfg, "text")), out);
}

void cmd_expectation(const Config& cfg, std::ostream& out) {
  const auto spec = spec_of(cfg);
  const auto s = env::stats(spec);
  const int n = n_of(cfg, 21);
  const voting::VotingRule rule(n, cfg.alpha.value_or(0.5));
  Report r;
  r.add("family", std::string(env::family_name(env::family_of(spec))))
      .add("n", std::int64_t{n})
      .add("alpha", rule.alpha())
      .add("n0", std::int64_t{rule.n0()})
      .add("p", s.p)
      .add("acceptance_probability", numerics::binomial_upper_tail(n, s.p, rule.n0()))
      .add("e_eta", voting::expected_increment(s, n, rule.n0()));
  emit(cfg, r.render(format_of(cfg, "text")), out);
}

env::FamilySweep sweep_of(const env::DistributionSpec& spec) {
  const auto family = env::family_of(spec);
  const double k = family == Family::symmetrized_pareto ? std::get<env::SymmetrizedPareto>(spec).k : 8.0;
  return {family, env::std_dev(spec), k};
}

Table ladder_table(const env::FamilySweep& sweep, int n, const std::vector<double>& rho) {
  const auto alpha0 = voting::alpha0_curve(sweep, rho);
  const auto ladder = voting::ladder_curve(sweep, n, rho);
  Table t({"rho", "alpha0_closed", "ladder_center"});
  for (std::size_t i = 0; i < rho.size(); ++i) t.add({rho[i], alpha0[i].alpha0, ladder[i].center});
  return t;
}

void cmd_ladder(const Config& cfg, std::ostream& out) {
  const auto spec = spec_of(cfg);
  const int n = n_of(cfg, 21);
  if (cfg.grid) {
    // Sweep rho with the input's shape (sigma, k) held fixed.
    emit(cfg, ladder_table(sweep_of(spec), n, grid_of(cfg, {})).render(format_of(cfg, "csv")), out);
    return;
  }
  const auto s = env::stats(spec);
  Report r;
  r.add("family", std::string(env::family_name(env::family_of(spec))))
      .add("rho", s.rho)
      .add("alpha0", voting::optimal_threshold_closed_form(spec));
  add_ladder(r, s, n);
  r.add("degeneracy", std::string(degeneracy_name(voting::optimal_threshold_general(s).degeneracy)));
  emit(cfg, r.render(format_of(cfg, "text")), out);
}

double quartile_sigma(Family family, double k) {
  const double offset = env::first_quartile(env::Normal{0.0, 1.0});
  return env::std_dev(env::standardize_by_quartile(family, offset, k));
}

// Per-figure defaults; flags override any of them.
struct Preset {
  Family family;
  int n;
  double alpha;
};

Preset figure_preset(int fig) {
  switch (fig) {
    case 1:
      return {Family::normal, 21, 0.5};
    case 2:
      return {Family::uniform, 5, 0.5};
    case 3:
      return {Family::normal, 21, 0.5};
    case 4:
      return {Family::symmetrized_pareto, 131, 0.5};
    case 5:
      return {Family::symmetrized_pareto, 130, 0.5};
    case 6:
      return {Family::laplace, 11, 0.5};
    default:
      return {Family::normal, 21, 11.0 / 21.0};
  }
}

void cmd_curve(const Config& cfg, std::ostream& out) {
  if (!cfg.fig) throw ParameterError("--fig is required (1..10)");
  const int fig = *cfg.fig;
  if (fig < 1 || fig > 10) throw ParameterError("--fig must be in 1..10");
  const Preset preset = figure_preset(fig);
  const double k = cfg.k.value_or(8.0);
  const double sigma = cfg.sigma.value_or(1.0);
  if (!(sigma > 0.0)) throw ParameterError("sigma must be positive and finite");
  Family family = preset.family;
  if (cfg.family) {
    const auto parsed = env::parse_family(*cfg.family);
    if (!parsed) throw ParameterError("unsupported family '" + *cfg.family + "'");
    family = *parsed;
  }
  if (family == Family::symmetrized_pareto && !(k > 2.0)) throw ParameterError("k must exceed 2");
  const auto grid = grid_of(cfg, {-2.5, 2.5, 0.01});
  const std::string format = format_of(cfg, "csv");

  if (fig == 1) {
    // rho axis; mu = rho * sigma
    const env::FamilySweep sweep{family, sigma, k};
    std::vector<double> mu(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) mu[i] = grid[i] * sigma;
    Table t({"mu", "rho", "e_eta"});
    for (const auto& p : voting::expectation_curve(sweep, n_of(cfg, preset.n), cfg.alpha.value_or(preset.alpha), mu)) {
      t.add({p.mu, p.rho, p.e_eta});
    }
    emit(cfg, t.render(format), out);
  } else if (fig <= 6) {
    emit(cfg, ladder_table({family, sigma, k}, n_of(cfg, preset.n), grid).render(format), out);
  } else if (fig == 7) {
    Table t({"rho", "dalpha0_drho"});
    for (const double rho : grid) t.add({rho, voting::laplace_alpha0_derivative(rho)});
    emit(cfg, t.render(format), out);
  } else if (fig == 10) {
    Table t({"mu", "alpha0_uniform", "alpha0_normal", "alpha0_pareto8", "alpha0_laplace"});
    std::vector<std::vector<voting::Alpha0Point>> curves;
    for (const auto f : kFamilies) {
      const double s = quartile_sigma(f, k);
      std::vector<double> rho(grid.size());
      for (std::size_t i = 0; i < grid.size(); ++i) rho[i] = grid[i] / s;
      curves.push_back(voting::alpha0_curve({f, s, k}, rho));
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
      t.add({grid[i], curves[0][i].alpha0, curves[1][i].alpha0, curves[2][i].alpha0, curves[3][i].alpha0});
    }
    emit(cfg, t.render(format), out);
  } else {
    // figs 8 and 9: mu axis, all four families at quartile-matched sigma
    const int n = n_of(cfg, preset.n);
    const double alpha = cfg.alpha.value_or(preset.alpha);
    Table t({"mu", "rho", "e_eta", "family"});
    for (const auto f : kFamilies) {
      const env::FamilySweep sweep{f, quartile_sigma(f, k), k};
      const auto curve = fig == 8 ? voting::expectation_curve(sweep, n, alpha, grid)
                                  : voting::optimal_expectation_curve(sweep, n, grid);
      for (const auto& p : curve) t.add({p.mu, p.rho, p.e_eta, std::string(env::family_name(f))});
    }
    emit(cfg, t.render(format), out);
  }
}

void cmd_simulate(const Config& cfg, std::ostream& out) {
  const auto spec = spec_of(cfg);
  const int n = n_of(cfg, 21);
  const double alpha = cfg.alpha.value_or(0.5);
  if (cfg.reps < 2) throw ParameterError("--reps must be at least 2");
  if (cfg.steps < 1) throw ParameterError("--steps must be at least 1");
  const voting::VotingRule rule(n, alpha);
  const auto s = env::stats(spec);
  const double analytic = voting::expected_increment(s, n, rule.n0());

  // Open the trajectory file before the long run so a bad path fails fast.
  std::ofstream trajectory_file;
  if (cfg.trajectory) {
    trajectory_file.open(*cfg.trajectory, std::ios::binary);
    if (!trajectory_file) throw IoError("cannot open trajectory file '" + *cfg.trajectory + "'");
  }

  const auto report = mc::estimate_expected_increment(spec, n, alpha, cfg.reps, cfg.seed, cfg.threads);
  Json j = Json::parse(mc::to_json(report));
  j["spec"] = Json::parse(env::to_json(spec));
  j["analytic_e_eta"] = analytic;
  if (report.std_error > 0.0) {
    j["z_score"] = (report.mean_increment - analytic) / report.std_error;
  } else {
    j["z_score"] = report.mean_increment == analytic ? Json(0.0) : Json(nullptr);
  }
  j["analytic_acceptance"] = numerics::binomial_upper_tail(n, s.p, rule.n0());

  if (cfg.trajectory) {
    const auto t = mc::run_dynamics(spec, n, alpha, cfg.steps, cfg.seed);
    mc::write_trajectory_csv(trajectory_file, t);
    trajectory_file.flush();
    if (!trajectory_file) throw IoError("cannot write trajectory file '" + *cfg.trajectory + "'");
  }

  if (format_of(cfg, "json") == "json") {
    emit(cfg, j.dump() + "\n", out);
    return;
  }
  Report r;
  for (const auto& [key, value] : j.items()) {
    if (value.is_number_integer()) {
      r.add(key, value.get<std::int64_t>());
    } else if (value.is_number()) {
      r.add(key, value.get<double>());
    } else if (key == "spec") {
      r.add(key, env::to_key_value(spec));
    } else {
      r.add(key, value.dump());
    }
  }
  emit(cfg, r.render(format_of(cfg, "json")), out);
}

void cmd_standardize(const Config& cfg, std::ostream& out) {
  if (!cfg.family) throw ParameterError("--family is required");
  const auto family = env::parse_family(*cfg.family);
  if (!family) throw ParameterError("unsupported family '" + *cfg.family + "'");
  if (cfg.a || cfg.b || cfg.mu || cfg.sigma || cfg.lambda)
    throw ParameterError("standardize takes only --family and --k");
  if (cfg.k && *family != Family::symmetrized_pareto) throw ParameterError("--k applies to the pareto family only");
  const double k = cfg.k.value_or(8.0);
  const double offset = env::first_quartile(env::Normal{0.0, 1.0});
  const auto spec = env::standardize_by_quartile(*family, offset, k);
  Report r;
  r.add("family", std::string(env::family_name(*family)));
  if (*family == Family::symmetrized_pareto) r.add("k", k);
  r.add("sigma", env::std_dev(spec)).add("q1", env::first_quartile(spec)).add("spec", env::to_key_value(spec));
  emit(cfg, r.render(format_of(cfg, "text")), out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Voting in a stochastic environment: optimal thresholds, expected increments, simulation", "vise"};
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON file of flag values (keys are long flag names)");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);

  Config cfg;
  app.add_option("--family", cfg.family, "uniform | normal | pareto | laplace");
  app.add_option("--a", cfg.a, "uniform: support [-a, b]");
  app.add_option("--b", cfg.b, "uniform: support [-a, b]");
  app.add_option("--mu", cfg.mu, "mean");
  app.add_option("--sigma", cfg.sigma, "standard deviation");
  app.add_option("--k", cfg.k, "pareto shape (> 2)");
  app.add_option("--lambda", cfg.lambda, "laplace rate");
  app.add_option("--spec", cfg.spec, "whole spec as 'family=normal mu=0.5 sigma=1' or JSON");
  app.add_option("--n", cfg.n, "society size");
  app.add_option("--alpha", cfg.alpha, "relative majority threshold in [-1/n, 1]");
  app.add_option("--grid", cfg.grid, "lo:hi:step (rho for figs 1-7 and ladder, mu for figs 8-10)");
  app.add_option("--reps", cfg.reps, "Monte Carlo replications")->capture_default_str();
  app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  app.add_option("--threads", cfg.threads, "worker threads for simulate")->capture_default_str();
  app.add_option("--fig", cfg.fig, "figure preset 1..10 for curve");
  app.add_option("--out", cfg.out, "write output to PATH instead of stdout");
  app.add_option("--format", cfg.format, "csv | json (summaries default to text)")
      ->check(CLI::IsMember({"csv", "json", "text"}));
  app.add_option("--steps", cfg.steps, "simulate: trajectory length")->capture_default_str();
  app.add_option("--trajectory", cfg.trajectory, "simulate: write a utility trajectory CSV to PATH");

  const std::pair<const char*, const char*> commands[] = {
      {"threshold", "optimal threshold alpha0 and environment statistics"},
      {"expectation", "expected utility increment E(eta) for --n and --alpha"},
      {"ladder", "optimal absolute threshold and its ladder interval (--grid for a curve)"},
      {"curve", "figure data as CSV (--fig N)"},
      {"simulate", "Monte Carlo estimate of E(eta) next to the analytic value"},
      {"standardize", "sigma that matches the first quartile of a unit normal"},
  };
  for (const auto& [name, help] : commands) {
    app.add_subcommand(name, help)->fallthrough()->callback([&cfg, cmd = std::string(name)] { cfg.command = cmd; });
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::FileError& e) {
    err << "vise: " << e.what() << "\n";
    return kIo;
  } catch (const CLI::ParseError& e) {
    err << "vise: " << e.what() << "\n";
    return kValidation;
  }

  try {
    if (cfg.command == "threshold") cmd_threshold(cfg, out);
    else if (cfg.command == "expectation") cmd_expectation(cfg, out);
    else if (cfg.command == "ladder") cmd_ladder(cfg, out);
    else if (cfg.command == "curve") cmd_curve(cfg, out);
    else if (cfg.command == "simulate") cmd_simulate(cfg, out);
    else if (cfg.command == "standardize") cmd_standardize(cfg, out);
  } catch (const IoError& e) {
    err << "vise: " << e.what() << "\n";
    return kIo;
  } catch (const std::invalid_argument& e) {  // ParameterError
    err << "vise: " << e.what() << "\n";
    return kValidation;
  } catch (const std::domain_error& e) {
    err << "vise: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {  // ConvergenceError and the like
    err << "vise: " << e.what() << "\n";
    return 1;
  }
  return kOk;
}

}  // namespace vise::cli
