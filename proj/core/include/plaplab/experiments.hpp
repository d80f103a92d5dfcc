#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "plaplab/bounds.hpp"
#include "plaplab/config.hpp"
#include "plaplab/mixing.hpp"
#include "plaplab/run_record.hpp"
#include "plaplab/statistics.hpp"

namespace plaplab {

struct LabOptions {
  /// Concurrent (nu) jobs; 0 takes the configuration's run.workers.
  int workers = 0;
  /// When set, every RunRecord is persisted under this root.
  std::optional<std::filesystem::path> persist_root;
};

struct KappaMeasurement {
  double nu = 0.0;
  /// Max over sampled s of the crossing time after s; a lower bound when not reached.
  double kappa = 0.0;
  bool reached = false;
  double trivial_bound = 0.0;
  double worst_s = 0.0;
  std::vector<RunRecord> runs;
  std::vector<std::string> flags;
};

/// Runs `count` jobs on up to `workers` threads; job i writes only its own slot.
void run_jobs(std::size_t count, int workers, const std::function<void(std::size_t)>& job);

/// One nu: continue the s = 0 trajectory to each sampled s, restart the
/// threshold clock there and take the latest crossing.
KappaMeasurement measure_kappa_at(const ExperimentConfig& config, double nu);
std::vector<KappaMeasurement> measure_kappa(const ExperimentConfig& config,
                                            const LabOptions& options = {});

struct SweepRow {
  double nu = 0.0;
  double kappa = 0.0;
  bool reached = false;
  double trivial = 0.0;
  std::optional<double> strong_factor;
  std::optional<double> weak_factor;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  /// log kappa against log nu over reached rows.
  std::optional<LinearFit> fit;
  std::vector<std::string> warnings;
  std::vector<KappaMeasurement> measurements;
};

SweepResult nu_sweep(const ExperimentConfig& config, const LabOptions& options = {});
SweepResult sweep_from_measurements(const ExperimentConfig& config,
                                    std::vector<KappaMeasurement> measurements);

struct Lemma41Row {
  double t = 0.0;
  double distance_sq = 0.0;
  double bound = 0.0;
};

struct Lemma41Report {
  bool passed = false;
  double d_p = 0.0;
  double grad_theta0_p = 0.0;
  double worst_ratio = 0.0;
  std::vector<Lemma41Row> rows;
};

/// |theta - phi|_2^2 against the transport-comparison bound at every sample
/// with t - s <= lemma41.horizon. `d_p` replaces D_p when positive (the
/// configuration's lemma41.dp is used when this is 0).
Lemma41Report verify_lemma41(const ExperimentConfig& config, double nu, double d_p = 0.0);

struct BoundPair {
  std::optional<BoundReport> strong;
  std::optional<BoundReport> weak;
  std::vector<std::string> warnings;
};

/// Strong and weak reports for each nu of the configuration; infeasible
/// thresholds become empty entries with a warning.
std::vector<BoundPair> bound_reports(const ExperimentConfig& config, double theta0_l2);

struct ComparisonRow {
  double nu = 0.0;
  double measured = 0.0;
  bool reached = false;
  double trivial = 0.0;
  std::optional<double> strong_factor;
  std::optional<double> weak_factor;
  /// measured <= 1.05 trivial
  bool within_trivial = false;
  bool operator==(const ComparisonRow&) const = default;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  std::optional<double> measured_slope;
  std::optional<double> delta_strong;
  std::optional<double> delta_weak;
  bool all_within_trivial = false;
  bool operator==(const ComparisonReport&) const = default;
};

ComparisonReport compare_bounds(const SweepResult& sweep, const std::vector<BoundPair>& bounds);

std::string to_json(const ComparisonReport& report);
ComparisonReport comparison_from_json(const std::string& text);
std::string to_json(const BoundReport& report);
std::string to_json(const MixingReport& report);

struct MixingRateResult {
  MixingSeries series;
  std::optional<RateFit> fit;
  std::optional<MixingReport> strong;
  std::vector<std::string> warnings;
};

/// Mixing series of the configured datum over [0, mixing.horizon], a rate
/// fit over the reliable positive samples, and a strong check of the fit.
MixingRateResult run_mixing_rate(const ExperimentConfig& config);

}  // namespace plaplab
