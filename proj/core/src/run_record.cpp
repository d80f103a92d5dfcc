#include "plaplab/run_record.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "plaplab/errors.hpp"

namespace plaplab {

using nlohmann::json;

std::string format_double(double value) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw FormatError("cannot format number");
  return std::string(buf.data(), ptr);
}

bool RunRecord::has_flag(const std::string& flag) const {
  return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

void RunRecord::add_flag(const std::string& flag) {
  if (!has_flag(flag)) flags.push_back(flag);
}

std::optional<double> RunRecord::kappa() const {
  if (!crossing_time) return std::nullopt;
  return *crossing_time - s;
}

std::optional<double> detect_crossing(const std::vector<Sample>& samples, double threshold) {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].l2 > threshold) continue;
    if (i == 0) return samples[0].t;
    const Sample& a = samples[i - 1];
    const Sample& b = samples[i];
    const double ya = a.l2 * a.l2, yb = b.l2 * b.l2, y = threshold * threshold;
    const double w = ya == yb ? 1.0 : (ya - y) / (ya - yb);
    return a.t + std::clamp(w, 0.0, 1.0) * (b.t - a.t);
  }
  return std::nullopt;
}

namespace {

// Doubles must survive the round trip exactly; non-finite values are rejected.
void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw FormatError(std::string("non-finite value in field '") + what + "'");
}

template <class T>
T field(const json& j, const char* key, std::size_t line) {
  if (!j.contains(key)) {
    throw FormatError("line " + std::to_string(line) + ": missing field '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw FormatError("line " + std::to_string(line) + ": field '" + key + "' has the wrong type");
  }
}

}  // namespace

void write_jsonl(std::ostream& out, const RunRecord& r) {
  for (double v : {r.nu, r.p, r.s, r.t_max, r.beta, r.norm0, r.threshold, r.residual_abs_sum,
                   r.dissipated}) {
    check_finite(v, "header");
  }
  json header = {{"kind", "header"},       {"schema_version", kRunRecordSchemaVersion},
                 {"experiment", r.experiment}, {"config", r.config},
                 {"seed", r.seed},             {"nu", r.nu},
                 {"p", r.p},                   {"s", r.s},
                 {"t_max", r.t_max},           {"beta", r.beta},
                 {"norm0", r.norm0},           {"threshold", r.threshold}};
  out << header.dump() << '\n';
  for (const Sample& s : r.samples) {
    for (double v : {s.t, s.l2, s.grad_p, s.mixing, s.residual}) check_finite(v, "sample");
    json line = {{"kind", "sample"},     {"t", s.t},           {"l2", s.l2},
                 {"grad_p", s.grad_p},   {"mixing", s.mixing}, {"residual", s.residual}};
    out << line.dump() << '\n';
  }
  json footer = {{"kind", "footer"},
                 {"sample_count", r.samples.size()},
                 {"crossing_time", r.crossing_time ? json(*r.crossing_time) : json(nullptr)},
                 {"flags", r.flags},
                 {"steps", r.steps},
                 {"residual_abs_sum", r.residual_abs_sum},
                 {"dissipated", r.dissipated}};
  out << footer.dump() << '\n';
}

RunRecord read_jsonl(std::istream& in) {
  RunRecord r;
  std::string text;
  std::size_t line = 0;
  bool have_header = false, have_footer = false;
  while (std::getline(in, text)) {
    ++line;
    if (text.empty()) continue;
    if (have_footer) throw FormatError("line " + std::to_string(line) + ": data after footer");
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw FormatError("line " + std::to_string(line) + ": truncated or malformed record (" +
                        e.what() + ")");
    }
    const auto kind = field<std::string>(j, "kind", line);
    if (!have_header) {
      if (kind != "header") throw FormatError("line " + std::to_string(line) + ": expected header");
      const int version = field<int>(j, "schema_version", line);
      if (version != kRunRecordSchemaVersion) {
        throw FormatError("line " + std::to_string(line) + ": schema version " +
                          std::to_string(version) + " is not supported (expected " +
                          std::to_string(kRunRecordSchemaVersion) + ")");
      }
      r.experiment = field<std::string>(j, "experiment", line);
      r.config = field<std::string>(j, "config", line);
      r.seed = field<std::uint64_t>(j, "seed", line);
      r.nu = field<double>(j, "nu", line);
      r.p = field<double>(j, "p", line);
      r.s = field<double>(j, "s", line);
      r.t_max = field<double>(j, "t_max", line);
      r.beta = field<double>(j, "beta", line);
      r.norm0 = field<double>(j, "norm0", line);
      r.threshold = field<double>(j, "threshold", line);
      have_header = true;
    } else if (kind == "sample") {
      Sample s;
      s.t = field<double>(j, "t", line);
      s.l2 = field<double>(j, "l2", line);
      s.grad_p = field<double>(j, "grad_p", line);
      s.mixing = field<double>(j, "mixing", line);
      s.residual = field<double>(j, "residual", line);
      if (!r.samples.empty() && !(s.t > r.samples.back().t)) {
        throw FormatError("line " + std::to_string(line) + ": samples are not time-sorted");
      }
      r.samples.push_back(s);
    } else if (kind == "footer") {
      const auto count = field<std::size_t>(j, "sample_count", line);
      if (count != r.samples.size()) {
        throw FormatError("line " + std::to_string(line) + ": footer announces " +
                          std::to_string(count) + " samples, read " + std::to_string(r.samples.size()));
      }
      if (!j.contains("crossing_time")) {
        throw FormatError("line " + std::to_string(line) + ": missing field 'crossing_time'");
      }
      if (!j["crossing_time"].is_null()) r.crossing_time = field<double>(j, "crossing_time", line);
      r.flags = field<std::vector<std::string>>(j, "flags", line);
      r.steps = field<std::int64_t>(j, "steps", line);
      r.residual_abs_sum = field<double>(j, "residual_abs_sum", line);
      r.dissipated = field<double>(j, "dissipated", line);
      have_footer = true;
    } else {
      throw FormatError("line " + std::to_string(line) + ": unknown line kind '" + kind + "'");
    }
  }
  if (!have_header) throw FormatError("line " + std::to_string(line + 1) + ": empty record, header missing");
  if (!have_footer) {
    throw FormatError("line " + std::to_string(line + 1) +
                      ": truncated record, footer missing after " + std::to_string(line) + " lines");
  }
  return r;
}

void persist(const RunRecord& record, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open '" + path.string() + "' for writing");
  write_jsonl(out, record);
  if (!out) throw FormatError("write to '" + path.string() + "' failed");
}

RunRecord load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  return read_jsonl(in);
}

std::filesystem::path record_path(const std::filesystem::path& root, const std::string& experiment,
                                  double nu, double s) {
  return root / experiment / format_double(nu) / (format_double(s) + ".jsonl");
}

void write_csv(std::ostream& out, const RunRecord& record) {
  out << "t,l2,grad_p,mixing,residual\n";
  for (const Sample& s : record.samples) {
    out << format_double(s.t) << ',' << format_double(s.l2) << ',' << format_double(s.grad_p) << ','
        << format_double(s.mixing) << ',' << format_double(s.residual) << '\n';
  }
}

}  // namespace plaplab
