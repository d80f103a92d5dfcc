#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "plaplab/bounds.hpp"
#include "plaplab/initial_data.hpp"
#include "plaplab/solver.hpp"

namespace plaplab {

/// Sectioned key = value text:
///
///   # comment
///   [section]
///   key = value   # trailing comment
///
/// Keys are addressed as "section.key". Values are kept as text until bound
/// to the typed schema.
class ConfigDocument {
 public:
  static ConfigDocument parse(const std::string& text);
  static ConfigDocument load(const std::filesystem::path& path);

  void set(const std::string& dotted_key, const std::string& value);
  /// "section.key=value"
  void apply_override(const std::string& assignment);
  bool contains(const std::string& dotted_key) const;
  const std::string& get(const std::string& dotted_key) const;
  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

struct ExperimentConfig {
  std::string experiment = "run";
  // [grid]
  int dim = 1;
  int n = 256;
  // [flow]
  FlowKind flow = FlowKind::zero;
  double amplitude = 1.0;
  double period = 1.0;
  // [solver]
  double p = 3.0;
  DtPolicy dt_policy = DtPolicy::adaptive;
  double dt = 1e-4;
  double sigma = 0.5;
  double dt_max = 1e-2;
  double eps_g = 0.0;
  int interp_degree = 5;
  // [initial]
  InitialKind initial = InitialKind::sine;
  std::uint64_t seed = 1;
  int band = 0;
  double decay = 1.0;
  double norm = 1.0;
  // [nu]
  std::vector<double> nu_list{1e-2};
  // [s]
  std::vector<double> s_list{0.0};
  // [run]
  /// Horizon after s; 0 selects 1.5 x the trivial bound.
  double t_max = 0.0;
  /// Recorder spacing; 0 selects trivial bound / 400.
  double cadence = 0.0;
  double beta = 1.0;
  int workers = 1;
  std::string out = "runs";
  // [mixing]
  double mixing_alpha = 1.0;
  double mixing_beta = 1.0;
  double mixing_horizon = 10.0;
  int mixing_samples = 101;
  int mixing_pairs = 4;
  RateFunction::Law mixing_law = RateFunction::Law::exponential;
  // [bounds]
  RateFunction::Law bounds_law = RateFunction::Law::exponential;
  double bounds_c = 1.0;
  double bounds_q = 1.0;
  double bounds_c1 = 1.0;
  double bounds_c2 = 1.0;
  double bounds_alpha = 1.0;
  double bounds_beta = 1.0;
  double weyl_eps = 0.01;
  // [lemma41]
  double lemma41_horizon = 2.0;
  /// Replaces D_p in the bound when positive.
  double lemma41_dp = 0.0;

  static ExperimentConfig from_document(const ConfigDocument& doc);
  ConfigDocument to_document() const;
  /// Text that parses back to the same configuration.
  std::string serialize() const;
  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::filesystem::path& path,
                               const std::vector<std::string>& overrides = {});

  void validate() const;
  Grid grid() const;
  VelocityField velocity() const;
  SolverConfig solver(double nu) const;
  InitialSpec initial_spec() const;
  RateFunction rate() const;
  BoundInputs bound_inputs(double nu, double theta0_l2) const;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Dotted keys accepted by the schema, in serialization order.
std::vector<std::string> config_keys();

}  // namespace plaplab
