#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace plaplab {

inline constexpr int kRunRecordSchemaVersion = 1;

struct Sample {
  double t = 0.0;
  double l2 = 0.0;
  double grad_p = 0.0;
  /// Negative Sobolev (mixing) norm.
  double mixing = 0.0;
  /// Signed energy-identity residual accumulated over the steps since the previous sample.
  double residual = 0.0;
  bool operator==(const Sample&) const = default;
};

/// One simulated trajectory: configuration snapshot, sampled series and the
/// outcome of threshold detection.
struct RunRecord {
  std::string experiment;
  /// Serialized configuration the run was started from.
  std::string config;
  std::uint64_t seed = 0;
  double nu = 0.0;
  double p = 3.0;
  double s = 0.0;
  double t_max = 0.0;
  double beta = 1.0;
  double norm0 = 0.0;
  /// Threshold on the L2 norm used for crossing detection (0 when none).
  double threshold = 0.0;
  std::vector<Sample> samples;
  /// Absolute time at which the threshold was crossed.
  std::optional<double> crossing_time;
  std::vector<std::string> flags;
  std::int64_t steps = 0;
  /// Sum over steps of |energy residual|.
  double residual_abs_sum = 0.0;
  /// Integral of nu * dissipation accumulated by the stepping quadrature.
  double dissipated = 0.0;

  bool has_flag(const std::string& flag) const;
  void add_flag(const std::string& flag);
  /// crossing_time - s when reached.
  std::optional<double> kappa() const;
  bool operator==(const RunRecord&) const = default;
};

/// First time the series reaches `threshold`, linear in l2^2 between samples.
std::optional<double> detect_crossing(const std::vector<Sample>& samples, double threshold);

/// Line-delimited JSON: header line, one line per sample, footer line.
void write_jsonl(std::ostream& out, const RunRecord& record);
RunRecord read_jsonl(std::istream& in);
void persist(const RunRecord& record, const std::filesystem::path& path);
RunRecord load(const std::filesystem::path& path);

/// `<root>/<experiment>/<nu>/<s>.jsonl` with nu and s in shortest round-trip form.
std::filesystem::path record_path(const std::filesystem::path& root, const std::string& experiment,
                                  double nu, double s);

/// CSV projection of the series with a header row.
void write_csv(std::ostream& out, const RunRecord& record);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

}  // namespace plaplab
