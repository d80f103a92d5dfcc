#include "plaplab/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include "plaplab/eigen_table.hpp"
#include "plaplab/errors.hpp"

namespace plaplab {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void malformed(const std::string& key, const std::string& text, const char* expected) {
  throw ConfigError("malformed value for '" + key + "': '" + text + "' (expected " + expected + ")");
}

double parse_real(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) malformed(key, text, "a real number");
  return v;
}

long long parse_integer(const std::string& key, const std::string& text) {
  long long v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) malformed(key, text, "an integer");
  return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) malformed(key, text, "an unsigned 64-bit integer");
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  const long long v = parse_integer(key, text);
  if (v < -2147483647LL || v > 2147483647LL) malformed(key, text, "a 32-bit integer");
  return static_cast<int>(v);
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (t.empty()) malformed(key, text, "a comma-separated list of reals");
    out.push_back(parse_real(key, t));
  }
  if (out.empty()) malformed(key, text, "a nonempty list");
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_double(v[i]);
  }
  return out;
}

template <class F>
auto parse_enum(const std::string& key, const std::string& text, F&& from_string, const char* choices) {
  try {
    return from_string(text);
  } catch (const DomainError&) {
    malformed(key, text, choices);
  }
}

struct Field {
  const char* key;
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, const std::string&, const std::string&)> set;
};

#define REAL_FIELD(KEY, MEMBER)                                                       \
  Field {                                                                             \
    KEY, [](const ExperimentConfig& c) { return format_double(c.MEMBER); },           \
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {         \
          c.MEMBER = parse_real(k, v);                                                \
        }                                                                             \
  }
#define INT_FIELD(KEY, MEMBER)                                                        \
  Field {                                                                             \
    KEY, [](const ExperimentConfig& c) { return std::to_string(c.MEMBER); },          \
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {         \
          c.MEMBER = parse_int(k, v);                                                 \
        }                                                                             \
  }

const std::vector<Field>& schema() {
  static const std::vector<Field> fields = {
      Field{"experiment", [](const ExperimentConfig& c) { return c.experiment; },
            [](ExperimentConfig& c, const std::string& k, const std::string& v) {
              if (v.empty() || v.find_first_of("/\\ ") != std::string::npos) {
                malformed(k, v, "a nonempty name without spaces or slashes");
              }
              c.experiment = v;
            }},
      INT_FIELD("grid.dim", dim),
      INT_FIELD("grid.n", n),
      Field{"flow.kind", [](const ExperimentConfig& c) { return std::string(to_string(c.flow)); },
            [](ExperimentConfig& c, const std::string& k, const std::string& v) {
              c.flow = parse_enum(k, v, [](const std::string& s) { return flow_kind_from_string(s); },
                                  "zero|translation|steady_shear|alternating_shear|cellular");
            }},
      REAL_FIELD("flow.amplitude", amplitude),
      REAL_FIELD("flow.period", period),
      REAL_FIELD("solver.p", p),
      Field{"solver.dt_policy",
            [](const ExperimentConfig& c) {
              return std::string(c.dt_policy == DtPolicy::fixed ? "fixed" : "adaptive");
            },
            [](ExperimentConfig& c, const std::string& k, const std::string& v) {
              if (v == "fixed") c.dt_policy = DtPolicy::fixed;
              else if (v == "adaptive") c.dt_policy = DtPolicy::adaptive;
              else malformed(k, v, "fixed|adaptive");
            }},
      REAL_FIELD("solver.dt", dt),
      REAL_FIELD("solver.sigma", sigma),
      REAL_FIELD("solver.dt_max", dt_max),
      REAL_FIELD("solver.eps_g", eps_g),
      INT_FIELD("solver.interp_degree", interp_degree),
      Field{"initial.kind", [](const ExperimentConfig& c) { return to_string(c.initial); },
            [](ExperimentConfig& c, const std::string& k, const std::string& v) {
              c.initial = parse_enum(k, v, initial_kind_from_string, "sine|random|zero");
            }},
      Field{"initial.seed", [](const ExperimentConfig& c) { return std::to_string(c.seed); },
            [](ExperimentConfig& c, const std::string& k, const std::string& v) {
              c.seed = parse_u64(k, v);
            }},
      INT_FIELD("initial.band", band),
      REAL_FIELD("initial.decay", decay),
      REAL_FIELD("initial.norm", norm),
      Field{"nu.list", [](const ExperimentConfig& c) { return join(c.nu_list); },
            [](ExperimentConfig& c, const std::string& k, const std::string& v) {
              c.nu_list = parse_list(k, v);
            }},
      Field{"s.list", [](const ExperimentConfig& c) { return join(c.s_list); },
            [](ExperimentConfig& c, const std::string& k, const std::string& v) {
              c.s_list = parse_list(k, v);
            }},
      REAL_FIELD("run.t_max", t_max),
      REAL_FIELD("run.cadence", cadence),
      REAL_FIELD("run.beta", beta),
      INT_FIELD("run.workers", workers),
      Field{"run.out", [](const ExperimentConfig& c) { return c.out; },
            [](ExperimentConfig& c, const std::string& k, const std::string& v) {
              if (v.empty()) malformed(k, v, "a nonempty path");
              c.out = v;
            }},
      REAL_FIELD("mixing.alpha", mixing_alpha),
      REAL_FIELD("mixing.beta", mixing_beta),
      REAL_FIELD("mixing.horizon", mixing_horizon),
      INT_FIELD("mixing.samples", mixing_samples),
      INT_FIELD("mixing.pairs", mixing_pairs),
      Field{"mixing.law", [](const ExperimentConfig& c) { return to_string(c.mixing_law); },
            [](ExperimentConfig& c, const std::string& k, const std::string& v) {
              c.mixing_law = parse_enum(k, v, rate_law_from_string, "power|exponential");
            }},
      Field{"bounds.law", [](const ExperimentConfig& c) { return to_string(c.bounds_law); },
            [](ExperimentConfig& c, const std::string& k, const std::string& v) {
              c.bounds_law = parse_enum(k, v, rate_law_from_string, "power|exponential");
            }},
      REAL_FIELD("bounds.c", bounds_c),
      REAL_FIELD("bounds.q", bounds_q),
      REAL_FIELD("bounds.c1", bounds_c1),
      REAL_FIELD("bounds.c2", bounds_c2),
      REAL_FIELD("bounds.alpha", bounds_alpha),
      REAL_FIELD("bounds.beta", bounds_beta),
      REAL_FIELD("bounds.weyl_eps", weyl_eps),
      REAL_FIELD("lemma41.horizon", lemma41_horizon),
      REAL_FIELD("lemma41.dp", lemma41_dp),
  };
  return fields;
}

#undef REAL_FIELD
#undef INT_FIELD

const Field* find_field(const std::string& key) {
  for (const Field& f : schema()) {
    if (key == f.key) return &f;
  }
  return nullptr;
}

}  // namespace

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const Field& f : schema()) keys.emplace_back(f.key);
  return keys;
}

ConfigDocument ConfigDocument::parse(const std::string& text) {
  ConfigDocument doc;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']' || t.size() < 3) {
        throw ConfigError("line " + std::to_string(line_no) + ": malformed section header '" + t + "'");
      }
      section = trim(std::string_view(t).substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value', got '" + t + "'");
    }
    const std::string key = trim(std::string_view(t).substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    const std::string full = section.empty() ? key : section + "." + key;
    if (doc.entries_.count(full)) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + full + "'");
    }
    doc.entries_[full] = trim(std::string_view(t).substr(eq + 1));
  }
  return doc;
}

ConfigDocument ConfigDocument::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void ConfigDocument::set(const std::string& dotted_key, const std::string& value) {
  entries_[dotted_key] = value;
}

void ConfigDocument::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("override '" + assignment + "' is not of the form key=value");
  }
  const std::string key = trim(std::string_view(assignment).substr(0, eq));
  if (!find_field(key)) throw ConfigError("unknown config key '" + key + "' in override");
  entries_[key] = trim(std::string_view(assignment).substr(eq + 1));
}

bool ConfigDocument::contains(const std::string& dotted_key) const {
  return entries_.count(dotted_key) != 0;
}

const std::string& ConfigDocument::get(const std::string& dotted_key) const {
  auto it = entries_.find(dotted_key);
  if (it == entries_.end()) throw ConfigError("missing config key '" + dotted_key + "'");
  return it->second;
}

ExperimentConfig ExperimentConfig::from_document(const ConfigDocument& doc) {
  ExperimentConfig c;
  for (const auto& [key, value] : doc.entries()) {
    const Field* f = find_field(key);
    if (!f) throw ConfigError("unknown config key '" + key + "'");
    f->set(c, key, value);
  }
  c.validate();
  return c;
}

ConfigDocument ExperimentConfig::to_document() const {
  ConfigDocument doc;
  for (const Field& f : schema()) doc.set(f.key, f.get(*this));
  return doc;
}

std::string ExperimentConfig::serialize() const {
  std::ostringstream out;
  std::string section;
  for (const Field& f : schema()) {
    const std::string key = f.key;
    const auto dot = key.find('.');
    const std::string sec = dot == std::string::npos ? "" : key.substr(0, dot);
    const std::string name = dot == std::string::npos ? key : key.substr(dot + 1);
    if (sec != section) {
      out << "\n[" << sec << "]\n";
      section = sec;
    }
    out << name << " = " << f.get(*this) << "\n";
  }
  return out.str();
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  return from_document(ConfigDocument::parse(text));
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path,
                                        const std::vector<std::string>& overrides) {
  ConfigDocument doc = ConfigDocument::load(path);
  for (const auto& o : overrides) doc.apply_override(o);
  return from_document(doc);
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& key, const std::string& why) {
    throw ConfigError("invalid value for '" + key + "': " + why);
  };
  if (dim != 1 && dim != 2) fail("grid.dim", "must be 1 or 2");
  if (n < 8 || (n & (n - 1)) != 0) fail("grid.n", "must be a power of two >= 8");
  if (flow != FlowKind::zero && flow != FlowKind::translation && dim != 2) {
    fail("flow.kind", "this flow needs grid.dim = 2");
  }
  if (!(period > 0.0)) fail("flow.period", "must be positive");
  if (!(p > 2.0)) fail("solver.p", "must exceed 2");
  if (!(dt > 0.0)) fail("solver.dt", "must be positive");
  if (!(sigma > 0.0 && sigma <= 1.0)) fail("solver.sigma", "must lie in (0, 1]");
  if (!(dt_max > 0.0)) fail("solver.dt_max", "must be positive");
  if (!(eps_g >= 0.0)) fail("solver.eps_g", "must be nonnegative");
  if (interp_degree != 3 && interp_degree != 5) fail("solver.interp_degree", "must be 3 or 5");
  if (band < 0 || (band > 0 && band >= n / 2)) fail("initial.band", "must lie in [0, n/2)");
  if (!(norm >= 0.0)) fail("initial.norm", "must be nonnegative");
  for (std::size_t i = 0; i < nu_list.size(); ++i) {
    if (!(nu_list[i] > 0.0)) fail("nu.list", "entries must be positive");
    if (i > 0 && !(nu_list[i] < nu_list[i - 1])) fail("nu.list", "must be sorted in descending order");
  }
  const double s_period = flow == FlowKind::alternating_shear ? period : 1.0;
  for (std::size_t i = 0; i < s_list.size(); ++i) {
    if (!(s_list[i] >= 0.0 && s_list[i] < s_period)) fail("s.list", "entries must lie in [0, T)");
    if (i > 0 && !(s_list[i] > s_list[i - 1])) fail("s.list", "must be strictly increasing");
  }
  if (!(t_max >= 0.0)) fail("run.t_max", "must be nonnegative (0 selects automatic)");
  if (!(cadence >= 0.0)) fail("run.cadence", "must be nonnegative (0 selects automatic)");
  if (!(beta > 0.0)) fail("run.beta", "must be positive");
  if (workers < 1) fail("run.workers", "must be at least 1");
  if (!(mixing_alpha > 0.0 && mixing_alpha <= 1.0)) fail("mixing.alpha", "must lie in (0, 1]");
  if (!(mixing_beta > 0.0)) fail("mixing.beta", "must be positive");
  if (!(mixing_horizon > 0.0)) fail("mixing.horizon", "must be positive");
  if (mixing_samples < 8) fail("mixing.samples", "must be at least 8");
  if (mixing_pairs < 1) fail("mixing.pairs", "must be at least 1");
  if (mixing_law == RateFunction::Law::tabulated) fail("mixing.law", "must be power or exponential");
  if (bounds_law == RateFunction::Law::tabulated) fail("bounds.law", "must be power or exponential");
  if (!(bounds_c > 0.0)) fail("bounds.c", "must be positive");
  if (!(bounds_q > 0.0)) fail("bounds.q", "must be positive");
  if (!(bounds_c1 > 0.0)) fail("bounds.c1", "must be positive");
  if (!(bounds_c2 > 0.0)) fail("bounds.c2", "must be positive");
  if (!(bounds_alpha > 0.0 && bounds_alpha <= 1.0)) fail("bounds.alpha", "must lie in (0, 1]");
  if (!(bounds_beta > 0.0)) fail("bounds.beta", "must be positive");
  if (!(weyl_eps > 0.0)) fail("bounds.weyl_eps", "must be positive");
  if (!(lemma41_horizon > 0.0)) fail("lemma41.horizon", "must be positive");
  if (!(lemma41_dp >= 0.0)) fail("lemma41.dp", "must be nonnegative (0 keeps D_p)");
}

Grid ExperimentConfig::grid() const { return Grid(dim, n); }

VelocityField ExperimentConfig::velocity() const {
  return VelocityField::make(flow, dim, amplitude, period);
}

SolverConfig ExperimentConfig::solver(double nu) const {
  SolverConfig s;
  s.grid = grid();
  s.flow = velocity();
  s.nu = nu;
  s.p = p;
  s.dt_policy = dt_policy;
  s.dt = dt;
  s.sigma = sigma;
  s.dt_max = dt_max;
  s.eps_g = eps_g;
  s.transport.spline_degree = interp_degree;
  return s;
}

InitialSpec ExperimentConfig::initial_spec() const {
  return InitialSpec{initial, seed, band, decay, norm};
}

RateFunction ExperimentConfig::rate() const {
  return bounds_law == RateFunction::Law::power ? RateFunction::power(bounds_c, bounds_q)
                                                : RateFunction::exponential(bounds_c1, bounds_c2);
}

BoundInputs ExperimentConfig::bound_inputs(double nu, double theta0_l2) const {
  BoundInputs in;
  in.p = p;
  in.nu = nu;
  in.alpha = bounds_alpha;
  in.beta = bounds_beta;
  in.d = dim;
  in.grad_u_sup = velocity().grad_sup_norm();
  in.theta0_l2 = theta0_l2;
  in.h = rate();
  in.lambda1 = 4.0 * std::numbers::pi * std::numbers::pi;
  in.weyl_c = weyl_constant(dim, 1.0, weyl_eps);
  return in;
}

}  // namespace plaplab
