#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "plaplab/bounds.hpp"
#include "plaplab/config.hpp"
#include "plaplab/eigen_table.hpp"
#include "plaplab/errors.hpp"
#include "plaplab/experiments.hpp"
#include "plaplab/initial_data.hpp"
#include "plaplab/run_record.hpp"
#include "plaplab/solver.hpp"
#include "plot.hpp"

namespace plap {
namespace {

namespace fs = std::filesystem;
using namespace plaplab;

struct Common {
  std::string config;
  std::string out;
  std::vector<std::string> overrides;
  int workers = 0;
  std::optional<std::uint64_t> seed;
  bool verbose = false;
};

struct Context {
  Common common;
  std::ostream& out;
  std::ostream& err;
};

class VerificationFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "Experiment configuration file");
  sub->add_option("--out", c.out, "Output directory (default: run.out of the configuration)");
  sub->add_option("--override", c.overrides, "Dotted KEY=VALUE replacing a configuration entry")
      ->take_all()
      ->allow_extra_args(false);
  sub->add_option("--workers", c.workers, "Concurrent runs (overrides run.workers)");
  sub->add_option("--seed", c.seed, "Seed of the initial datum (overrides initial.seed)");
  sub->add_flag("--verbose", c.verbose, "Per-run diagnostics on stderr");
}

ExperimentConfig load_config(const Common& c) {
  if (c.config.empty()) throw ConfigError("missing required option --config");
  if (!fs::exists(c.config)) throw ConfigError("config file '" + c.config + "' does not exist");
  std::vector<std::string> overrides = c.overrides;
  if (c.workers > 0) overrides.push_back("run.workers=" + std::to_string(c.workers));
  if (c.seed) overrides.push_back("initial.seed=" + std::to_string(*c.seed));
  return ExperimentConfig::load(c.config, overrides);
}

fs::path out_dir(const Common& c, const ExperimentConfig* config) {
  fs::path dir = !c.out.empty() ? fs::path(c.out) : config ? fs::path(config->out) : fs::path(".");
  fs::create_directories(dir);
  return dir;
}

std::string num(double v) {
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : "-"; }

void print_table(std::ostream& out, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t j = 0; j < header.size(); ++j) width[j] = header[j].size();
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < r.size() && j < width.size(); ++j) width[j] = std::max(width[j], r[j].size());
  }
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t j = 0; j < cells.size(); ++j) {
      out << (j ? "  " : "") << std::left << std::setw(static_cast<int>(width[j])) << cells[j];
    }
    out << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
}

void warn_all(Context& ctx, const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) ctx.err << "warning: " << w << '\n';
}

void note(Context& ctx, const std::string& text) {
  if (ctx.common.verbose) ctx.err << text << '\n';
}

// simulate: one trajectory per nu from the first sampled s, full horizon.
int cmd_simulate(Context& ctx) {
  const ExperimentConfig config = load_config(ctx.common);
  const fs::path dir = out_dir(ctx.common, &config);
  const Grid grid = config.grid();
  const ScalarField theta0 = make_initial(grid, config.initial_spec());
  const double s = config.s_list.front();
  std::vector<std::vector<std::string>> rows;
  std::vector<Series> series;
  for (double nu : config.nu_list) {
    Solver solver(config.solver(nu));
    SolverState state = SolverState::from_field(theta0, 0.0);
    solver.advance_to(state, s);
    const ScalarField theta_s = state.field();
    const double trivial = trivial_kappa_bound(nu, config.p, 4.0 * std::numbers::pi * std::numbers::pi);
    RecorderOptions rec;
    rec.cadence = config.cadence > 0.0 ? config.cadence : trivial / 400.0;
    rec.beta = config.beta;
    const double horizon = config.t_max > 0.0 ? config.t_max : 1.5 * trivial;
    RunRecord r = solver.simulate(theta_s, s, s + horizon, rec);
    r.experiment = config.experiment;
    r.config = config.serialize();
    r.seed = config.seed;
    if (r.norm0 > 0.0) {
      r.threshold = decay_threshold(r.norm0, config.p);
      r.crossing_time = detect_crossing(r.samples, r.threshold);
      if (!r.crossing_time) r.add_flag("not_reached");
    }
    const fs::path path = record_path(dir, config.experiment, nu, s);
    persist(r, path);
    fs::path csv = path;
    csv.replace_extension(".csv");
    std::ofstream f(csv, std::ios::binary);
    write_csv(f, r);
    note(ctx, "wrote " + path.string());
    const Sample& last = r.samples.back();
    rows.push_back({num(nu), std::to_string(r.steps), num(last.t), num(last.l2),
                    opt_num(r.kappa()), num(trivial), num(r.residual_abs_sum)});
    Series sr{"nu=" + format_double(nu), {}, {}, false};
    for (const Sample& smp : r.samples) {
      if (smp.l2 > 0.0) {
        sr.x.push_back(smp.t);
        sr.y.push_back(smp.l2);
      }
    }
    if (!sr.x.empty()) series.push_back(std::move(sr));
    if (!r.flags.empty()) warn_all(ctx, {"nu=" + format_double(nu) + ": flags " + [&] {
                                      std::string j;
                                      for (const auto& fl : r.flags) j += (j.empty() ? "" : ",") + fl;
                                      return j;
                                    }()});
  }
  print_table(ctx.out, {"nu", "steps", "t_end", "l2_end", "kappa", "trivial", "residual_abs"}, rows);
  if (!series.empty()) {
    emit_plot(series, {"L2 norm", "t", "|theta|_2", false, true}, dir / "simulate.svg");
  }
  return kOk;
}

int cmd_measure_kappa(Context& ctx) {
  const ExperimentConfig config = load_config(ctx.common);
  const fs::path dir = out_dir(ctx.common, &config);
  LabOptions lab;
  lab.persist_root = dir;
  const auto ms = measure_kappa(config, lab);
  std::vector<std::vector<std::string>> rows;
  std::ostringstream csv;
  csv << "nu,kappa,reached,trivial,worst_s\n";
  for (const KappaMeasurement& m : ms) {
    rows.push_back({num(m.nu), num(m.kappa), m.reached ? "yes" : "no", num(m.trivial_bound),
                    num(m.kappa / m.trivial_bound), num(m.worst_s)});
    csv << format_double(m.nu) << ',' << format_double(m.kappa) << ',' << (m.reached ? 1 : 0) << ','
        << format_double(m.trivial_bound) << ',' << format_double(m.worst_s) << '\n';
    for (const RunRecord& r : m.runs) {
      note(ctx, "nu=" + format_double(r.nu) + " s=" + format_double(r.s) + " steps=" +
                    std::to_string(r.steps) + " kappa=" + opt_num(r.kappa()));
    }
    if (!m.reached) warn_all(ctx, {"nu=" + format_double(m.nu) + ": threshold not reached within the horizon"});
  }
  write_text(dir / "kappa.csv", csv.str());
  print_table(ctx.out, {"nu", "kappa_d", "reached", "trivial", "ratio", "worst_s"}, rows);
  return kOk;
}

int cmd_sweep(Context& ctx) {
  const ExperimentConfig config = load_config(ctx.common);
  const fs::path dir = out_dir(ctx.common, &config);
  LabOptions lab;
  lab.persist_root = dir;
  const SweepResult sweep = nu_sweep(config, lab);
  warn_all(ctx, sweep.warnings);

  std::vector<std::vector<std::string>> rows;
  std::ostringstream csv;
  csv << "nu,kappa,reached,trivial,strong_factor,weak_factor\n";
  Series measured{"kappa_d", {}, {}, false};
  Series trivial{"1/(nu lambda1^(p/2))", {}, {}, true};
  for (const SweepRow& r : sweep.rows) {
    rows.push_back({num(r.nu), num(r.kappa), r.reached ? "yes" : "no", num(r.trivial),
                    opt_num(r.strong_factor), opt_num(r.weak_factor)});
    csv << format_double(r.nu) << ',' << format_double(r.kappa) << ',' << (r.reached ? 1 : 0) << ','
        << format_double(r.trivial) << ',' << (r.strong_factor ? format_double(*r.strong_factor) : "")
        << ',' << (r.weak_factor ? format_double(*r.weak_factor) : "") << '\n';
    if (r.kappa > 0.0) {
      measured.x.push_back(r.nu);
      measured.y.push_back(r.kappa);
    }
    trivial.x.push_back(r.nu);
    trivial.y.push_back(r.trivial);
  }
  write_text(dir / "sweep.csv", csv.str());
  print_table(ctx.out, {"nu", "kappa_d", "reached", "trivial", "strong_factor", "weak_factor"}, rows);
  if (sweep.fit) {
    ctx.out << "slope " << num(sweep.fit->slope) << " +/- " << num(sweep.fit->slope_ci95)
            << " (95%), r^2 " << num(sweep.fit->r_squared) << ", n " << sweep.fit->count << '\n';
  } else {
    ctx.out << "slope -\n";
  }
  std::vector<Series> plot;
  if (!measured.x.empty()) plot.push_back(measured);
  plot.push_back(trivial);
  emit_plot(plot, {"kappa_d against nu", "nu", "kappa_d", true, true}, dir / "sweep.svg");

  const double norm0 = make_initial(config.grid(), config.initial_spec()).l2_norm();
  const auto bounds = bound_reports(config, norm0);
  const ComparisonReport cmp = compare_bounds(sweep, bounds);
  write_text(dir / "comparison.json", to_json(cmp) + "\n");
  return kOk;
}

int cmd_mixing_rate(Context& ctx) {
  const ExperimentConfig config = load_config(ctx.common);
  const fs::path dir = out_dir(ctx.common, &config);
  const MixingRateResult r = run_mixing_rate(config);
  warn_all(ctx, r.warnings);

  std::ostringstream csv;
  csv << "t,mixing,reliable\n";
  Series measured{"|f o phi|_H^-beta", {}, {}, false};
  for (std::size_t i = 0; i < r.series.times.size(); ++i) {
    csv << format_double(r.series.times[i]) << ',' << format_double(r.series.values[i]) << ','
        << (r.series.reliable[i] ? 1 : 0) << '\n';
    if (r.series.values[i] > 0.0) {
      measured.x.push_back(r.series.times[i]);
      measured.y.push_back(r.series.values[i]);
    }
  }
  write_text(dir / "mixing.csv", csv.str());
  std::vector<Series> plot{measured};
  if (r.fit) {
    ctx.out << "law " << to_string(r.fit->law) << "  first " << num(r.fit->first) << "  second "
            << num(r.fit->second) << "  r^2 " << num(r.fit->r_squared) << "  samples " << r.fit->count
            << '\n';
    if (r.fit->rate) {
      Series fitted{"fit", {}, {}, true};
      for (double t : measured.x) {
        if (t > 0.0 || r.fit->law == RateFunction::Law::exponential) {
          fitted.x.push_back(t);
          fitted.y.push_back((*r.fit->rate)(t));
        }
      }
      if (!fitted.x.empty()) plot.push_back(fitted);
    }
  } else {
    ctx.out << "law - (fit skipped)\n";
  }
  if (r.strong) {
    ctx.out << "strong check: worst ratio " << num(r.strong->worst_ratio) << " at t "
            << num(r.strong->worst_time) << (r.strong->passed ? "  pass" : "  fail")
            << (r.strong->inconclusive ? " (inconclusive)" : "") << '\n';
    write_text(dir / "mixing_check.json", to_json(*r.strong) + "\n");
  }
  if (!measured.x.empty()) {
    emit_plot(plot, {"mixing norm", "t", "mixing norm", false, true}, dir / "mixing.svg");
  }
  return kOk;
}

int cmd_bounds(Context& ctx) {
  const ExperimentConfig config = load_config(ctx.common);
  const fs::path dir = out_dir(ctx.common, &config);
  const double norm0 = make_initial(config.grid(), config.initial_spec()).l2_norm();
  const auto pairs = bound_reports(config, norm0);
  std::vector<std::vector<std::string>> rows;
  std::string json = "[\n";
  bool any = false;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double nu = config.nu_list[i];
    const double trivial = trivial_kappa_bound(nu, config.p, 4.0 * std::numbers::pi * std::numbers::pi);
    for (const auto* rep : {&pairs[i].strong, &pairs[i].weak}) {
      const std::string kind = rep == &pairs[i].strong ? "strong" : "weak";
      if (*rep) {
        const BoundReport& b = **rep;
        any = true;
        rows.push_back({num(nu), kind, num(b.threshold_h), num(b.lambda_n), num(b.script_h),
                        num(b.rate_factor), num(b.trivial), b.enhancement_active ? "yes" : "no",
                        opt_num(b.delta)});
        if (json.size() > 2) json += ",\n";
        json += to_json(b);
        warn_all(ctx, b.search.warnings);
      } else {
        rows.push_back({num(nu), kind, "infeasible", "-", "-", "-", num(trivial), "no", "-"});
      }
    }
    for (const auto& w : pairs[i].warnings) ctx.err << "warning: nu=" << format_double(nu) << " " << w << '\n';
  }
  json += "\n]\n";
  print_table(ctx.out, {"nu", "case", "H", "lambda_N", "script_H", "rate_factor", "trivial", "active", "delta"},
              rows);
  ctx.out << "D_p " << num(d_p_constant(config.p)) << '\n';
  write_text(dir / "bounds.json", json);
  if (!any) throw NumericalError("no feasible threshold for any nu: nu too large for enhancement regime");
  return kOk;
}

int suite_f_iteration(Context& ctx) {
  const FIterationReport r = verify_f_iteration(10000, ctx.common.seed.value_or(1));
  print_table(ctx.out, {"check", "value", "limit"},
              {{"monotonicity failures", std::to_string(r.monotonicity_failures) + "/" +
                                             std::to_string(r.monotonicity_checks), "0"},
               {"composition rel. error", num(r.max_composition_error), "1e-12"},
               {"min{b,c} excess", num(r.max_domination_excess), "1e-12"}});
  if (!r.passed) throw VerificationFailed("f-iteration suite failed");
  return kOk;
}

int suite_lemma41(Context& ctx, double dp) {
  const ExperimentConfig config = load_config(ctx.common);
  bool passed = true;
  std::vector<std::vector<std::string>> rows;
  for (double nu : config.nu_list) {
    const Lemma41Report r = verify_lemma41(config, nu, dp);
    const auto worst = std::max_element(r.rows.begin(), r.rows.end(), [](const auto& a, const auto& b) {
      return a.distance_sq / a.bound < b.distance_sq / b.bound;
    });
    rows.push_back({num(nu), num(r.d_p), std::to_string(r.rows.size()), num(r.worst_ratio),
                    worst != r.rows.end() ? num(worst->t) : "-", r.passed ? "pass" : "fail"});
    passed = passed && r.passed;
  }
  print_table(ctx.out, {"nu", "D_p", "samples", "max dist/bound", "at t", "result"}, rows);
  if (!passed) throw VerificationFailed("lemma41 suite failed");
  return kOk;
}

int suite_weyl(Context& ctx) {
  int dim = 2;
  double eps = 0.01;
  if (!ctx.common.config.empty()) {
    const ExperimentConfig config = load_config(ctx.common);
    dim = config.dim;
    eps = config.weyl_eps;
  }
  const EigenTable table(dim, dim == 1 ? 100000 : 200);
  const double c = weyl_constant(dim, 1.0, eps);
  const auto inclusive = weyl_violations(table, c, 100, false);
  const auto strict = weyl_violations(table, c, 100, true);
  auto worst = [](const std::vector<WeylViolation>& v) {
    double w = 0.0;
    for (const auto& x : v) w = std::max(w, static_cast<double>(x.count) / x.bound);
    return w;
  };
  auto last = [](const std::vector<WeylViolation>& v) {
    return v.empty() ? std::string("-") : std::to_string(v.back().level_index);
  };
  print_table(ctx.out, {"counting", "violations", "max N/bound", "last level"},
              {{"N(lambda) <= c lambda^(d/2)", std::to_string(inclusive.size()), num(worst(inclusive)),
                last(inclusive)},
               {"#{lambda_i < lambda}", std::to_string(strict.size()), num(worst(strict)), last(strict)}});
  ctx.out << "c " << num(c) << "  d " << dim << "  levels " << table.levels().size() << '\n';
  if (!inclusive.empty()) throw VerificationFailed("weyl suite failed");
  return kOk;
}

int suite_trivial(Context& ctx) {
  const ExperimentConfig config = load_config(ctx.common);
  const auto ms = measure_kappa(config);
  bool passed = true;
  std::vector<std::vector<std::string>> rows;
  for (const KappaMeasurement& m : ms) {
    const bool ok = m.reached && m.kappa <= 1.05 * m.trivial_bound;
    passed = passed && ok;
    rows.push_back({num(m.nu), num(m.kappa), num(m.trivial_bound), num(m.kappa / m.trivial_bound),
                    ok ? "pass" : "fail"});
  }
  print_table(ctx.out, {"nu", "kappa_d", "trivial", "ratio", "result"}, rows);
  if (!passed) throw VerificationFailed("trivial-bound suite failed");
  return kOk;
}

// Wide CSV with a header row; returns column name -> values.
std::map<std::string, std::vector<double>> read_wide_csv(const fs::path& path,
                                                         std::vector<std::string>& names) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open input '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw FormatError("'" + path.string() + "' is empty");
  std::stringstream hs(line);
  for (std::string cell; std::getline(hs, cell, ',');) names.push_back(cell);
  std::map<std::string, std::vector<double>> cols;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::size_t j = 0;
    for (std::string cell; std::getline(ls, cell, ','); ++j) {
      if (j >= names.size()) throw FormatError("line " + std::to_string(line_no) + ": too many fields");
      double v = std::nan("");
      if (!cell.empty()) {
        try {
          std::size_t used = 0;
          v = std::stod(cell, &used);
          if (used != cell.size()) throw std::invalid_argument(cell);
        } catch (const std::exception&) {
          throw FormatError("line " + std::to_string(line_no) + ": '" + cell + "' is not a number");
        }
      }
      cols[names[j]].push_back(v);
    }
  }
  return cols;
}

int cmd_plot(Context& ctx, const std::string& input, const std::string& xcol,
             const std::vector<std::string>& ycols, PlotStyle style, const std::string& name) {
  std::vector<std::string> names;
  const auto cols = read_wide_csv(input, names);
  auto column = [&](const std::string& key) -> const std::vector<double>& {
    auto it = cols.find(key);
    if (it == cols.end()) throw ConfigError("column '" + key + "' not found in '" + input + "'");
    return it->second;
  };
  const auto& x = column(xcol);
  std::vector<Series> series;
  for (const std::string& yc : ycols) {
    const auto& y = column(yc);
    Series s{yc, {}, {}, false};
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
      if (!std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
      if ((style.log_x && x[i] <= 0.0) || (style.log_y && y[i] <= 0.0)) continue;
      s.x.push_back(x[i]);
      s.y.push_back(y[i]);
    }
    if (s.x.empty()) throw DomainError("emit_plot: column '" + yc + "' has no plottable values");
    series.push_back(std::move(s));
  }
  if (style.x_label == "x") style.x_label = xcol;
  const fs::path dir = out_dir(ctx.common, nullptr);
  emit_plot(series, style, dir / (name + ".svg"));
  ctx.out << "wrote " << (dir / (name + ".svg")).string() << '\n';
  return kOk;
}

}  // namespace

int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"plap: experiments on degenerate advection-diffusion on the torus"};
  app.require_subcommand(1, 1);
  Common common;

  auto* simulate = app.add_subcommand("simulate", "Simulate one trajectory per nu and persist it");
  auto* kappa = app.add_subcommand("measure-kappa", "Measure the nonlinear dissipation time per nu");
  auto* sweep = app.add_subcommand("sweep", "kappa_d over the nu list with slope fit and bound comparison");
  auto* mixing = app.add_subcommand("mixing-rate", "Mixing-norm series of the datum and rate fit");
  auto* bounds = app.add_subcommand("bounds", "Threshold and rate-factor report per nu");
  auto* verify = app.add_subcommand("verify", "Run a property suite; exit 3 when it fails");
  auto* plot = app.add_subcommand("plot", "SVG line plot of CSV columns");
  for (auto* sub : {simulate, kappa, sweep, mixing, bounds, verify, plot}) add_common(sub, common);

  std::string suite;
  double dp = 0.0;
  verify->add_option("--suite", suite, "f-iteration | lemma41 | weyl | trivial")
      ->required()
      ->check(CLI::IsMember({"f-iteration", "lemma41", "weyl", "trivial"}));
  verify->add_option("--dp", dp, "lemma41: replace D_p by this value (negative control)");

  std::string input, xcol = "t", name = "plot";
  std::vector<std::string> ycols;
  PlotStyle style;
  plot->add_option("--input", input, "CSV with a header row")->required();
  plot->add_option("--x", xcol, "Column on the horizontal axis");
  plot->add_option("--y", ycols, "Columns to draw")->required()->delimiter(',');
  plot->add_flag("--log-x", style.log_x, "Logarithmic horizontal axis");
  plot->add_flag("--log-y", style.log_y, "Logarithmic vertical axis");
  plot->add_option("--title", style.title, "Plot title");
  plot->add_option("--name", name, "Output stem (name.svg, name.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  Context ctx{common, out, err};
  try {
    if (simulate->parsed()) return cmd_simulate(ctx);
    if (kappa->parsed()) return cmd_measure_kappa(ctx);
    if (sweep->parsed()) return cmd_sweep(ctx);
    if (mixing->parsed()) return cmd_mixing_rate(ctx);
    if (bounds->parsed()) return cmd_bounds(ctx);
    if (plot->parsed()) return cmd_plot(ctx, input, xcol, ycols, style, name);
    if (suite == "f-iteration") return suite_f_iteration(ctx);
    if (suite == "lemma41") return suite_lemma41(ctx, dp);
    if (suite == "weyl") return suite_weyl(ctx);
    return suite_trivial(ctx);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const FormatError& e) {
    err << "input error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DomainError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kConfigError;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const VerificationFailed& e) {
    err << "verification failed: " << e.what() << '\n';
    return kVerificationFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalFailure;
  }
}

}  // namespace plap
