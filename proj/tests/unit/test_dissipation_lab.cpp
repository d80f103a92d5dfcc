#include <doctest.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "plaplab/bounds.hpp"
#include "plaplab/config.hpp"
#include "plaplab/errors.hpp"
#include "plaplab/experiments.hpp"
#include "plaplab/run_record.hpp"

using namespace plaplab;
using doctest::Approx;
namespace fs = std::filesystem;

namespace {

RunRecord sample_record() {
  RunRecord r;
  r.experiment = "unit";
  r.config = "[grid]\nn = 32\n";
  r.seed = 42;
  r.nu = 1e-3;
  r.p = 3.0;
  r.s = 0.25;
  r.t_max = 2.0;
  r.beta = 1.0;
  r.norm0 = 0.1 + 0.2;  // not exactly representable: exercises exact round trip
  r.threshold = decay_threshold(r.norm0, 3.0);
  for (int i = 0; i < 5; ++i) {
    r.samples.push_back({0.25 + 0.1 * i, 1.0 / (1.0 + i / 3.0), 2.0 / 3.0 * i, std::sqrt(2.0) / (i + 1),
                         1e-17 * i});
  }
  r.crossing_time = 0.5123456789012345;
  r.flags = {"not_reached", "under_resolved"};
  r.steps = 123456789012;
  r.residual_abs_sum = 3.3e-9;
  r.dissipated = 0.7;
  return r;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("plaplab_unit_" + name);
  fs::remove_all(p);
  return p;
}

ExperimentConfig tiny_config() {
  ExperimentConfig c;
  c.experiment = "tiny";
  c.dim = 2;
  c.n = 16;
  c.flow = FlowKind::alternating_shear;
  c.nu_list = {1e-1, 3e-2, 1e-2};
  c.s_list = {0.0, 0.5};
  c.workers = 2;
  c.lemma41_horizon = 0.5;
  return c;
}

std::string configs_dir() { return PLAPLAB_CONFIG_DIR; }

}  // namespace

TEST_SUITE("dissipation_lab") {

TEST_CASE("crossing time interpolates the squared norm") {
  const std::vector<Sample> s{{0.0, 1.0, 0, 0, 0}, {1.0, 0.5, 0, 0, 0}};
  // y = l2^2: 1 -> 0.25, target 0.5625, w = 0.4375 / 0.75.
  CHECK(*detect_crossing(s, 0.75) == Approx(0.4375 / 0.75).epsilon(1e-14));
  CHECK(*detect_crossing(s, 2.0) == 0.0);
  CHECK_FALSE(detect_crossing(s, 0.1).has_value());
  CHECK(*detect_crossing(s, 0.5) == 1.0);
}

TEST_CASE("record persistence is the identity") {
  const RunRecord r = sample_record();
  const fs::path dir = scratch_dir("persist");
  const fs::path path = record_path(dir, r.experiment, r.nu, r.s);
  CHECK(path == dir / "unit" / "0.001" / "0.25.jsonl");
  persist(r, path);
  const RunRecord back = load(path);
  CHECK(back == r);
  CHECK(back.kappa().has_value());
  CHECK(*back.kappa() == r.crossing_time.value() - r.s);
  std::ostringstream a, b;
  write_jsonl(a, r);
  write_jsonl(b, back);
  CHECK(a.str() == b.str());
  fs::remove_all(dir);
}

TEST_CASE("corrupt records are rejected with the failing line") {
  std::ostringstream full;
  write_jsonl(full, sample_record());
  const std::string text = full.str();
  // Cut in the middle of the fourth line.
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) pos = text.find('\n', pos) + 1;
  {
    std::istringstream in(text.substr(0, pos + 10));
    try {
      (void)read_jsonl(in);
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      CHECK(std::string(e.what()).find("line 4") != std::string::npos);
    }
  }
  {
    std::istringstream in(text.substr(0, pos));
    CHECK_THROWS_WITH_AS(read_jsonl(in), doctest::Contains("footer missing"), FormatError);
  }
  {
    std::string bad = text;
    bad.replace(bad.find("\"schema_version\":1"), 18, "\"schema_version\":9");
    std::istringstream in(bad);
    CHECK_THROWS_WITH_AS(read_jsonl(in), doctest::Contains("schema version 9"), FormatError);
  }
  {
    std::istringstream in("");
    CHECK_THROWS_AS(read_jsonl(in), FormatError);
  }
  RunRecord nan = sample_record();
  nan.samples[1].l2 = std::nan("");
  std::ostringstream out;
  CHECK_THROWS_AS(write_jsonl(out, nan), FormatError);
}

TEST_CASE("shortest round-trip number formatting") {
  CHECK(format_double(0.001) == "0.001");
  CHECK(format_double(3e-3) == "0.003");
  CHECK(format_double(1e-10) == "1e-10");
  CHECK(format_double(0.0) == "0");
  CHECK(std::stod(format_double(0.1 + 0.2)) == 0.1 + 0.2);
}

TEST_CASE("job runner visits every slot once and forwards errors") {
  std::vector<int> hits(37, 0);
  run_jobs(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(run_jobs(5, 2, [](std::size_t i) {
                    if (i == 3) throw NumericalError("boom");
                  }),
                  NumericalError);
}

TEST_CASE("kappa measurement on a tiny grid") {
  const ExperimentConfig c = tiny_config();
  const KappaMeasurement m = measure_kappa_at(c, 1e-1);
  CHECK(m.reached);
  CHECK(m.runs.size() == 2);
  CHECK(m.kappa > 0.0);
  CHECK(m.kappa <= 1.05 * m.trivial_bound);
  double best = 0.0;
  for (const RunRecord& r : m.runs) best = std::max(best, r.kappa().value());
  CHECK(m.kappa == best);
  // Serial and threaded runs agree exactly.
  LabOptions serial;
  serial.workers = 1;
  const auto a = measure_kappa(c, serial);
  const auto b = measure_kappa(c);
  REQUIRE(a.size() == 3);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].kappa == b[i].kappa);
    CHECK(a[i].runs == b[i].runs);
  }
}

TEST_CASE("sweep fit needs several decades of reached values") {
  ExperimentConfig c = tiny_config();
  c.nu_list = {1e-1};
  const SweepResult one = nu_sweep(c);
  CHECK_FALSE(one.fit.has_value());
  REQUIRE_FALSE(one.warnings.empty());
  bool saw = false;
  for (const auto& w : one.warnings) saw = saw || w.find("fit rejected") != std::string::npos;
  CHECK(saw);
}

TEST_CASE("bound comparison JSON round trip and grid mismatch") {
  ExperimentConfig c = tiny_config();
  c.nu_list = {1e-12, 1e-14, 1e-16};
  std::vector<KappaMeasurement> fake;
  for (double nu : c.nu_list) {
    KappaMeasurement m;
    m.nu = nu;
    m.kappa = 0.1 / nu;
    m.reached = true;
    m.trivial_bound = trivial_kappa_bound(nu, 3.0, 4.0 * M_PI * M_PI);
    fake.push_back(m);
  }
  const SweepResult sweep = sweep_from_measurements(c, fake);
  REQUIRE(sweep.fit.has_value());
  CHECK(sweep.fit->slope == Approx(-1.0).epsilon(1e-12));
  const auto bounds = bound_reports(c, 1.0);
  const ComparisonReport rep = compare_bounds(sweep, bounds);
  CHECK(rep.rows.size() == 3);
  CHECK(rep.rows[0].strong_factor.has_value());
  CHECK(comparison_from_json(to_json(rep)) == rep);
  CHECK_THROWS_AS(comparison_from_json("{\"rows\": 3}"), FormatError);
  std::vector<BoundPair> short_bounds(bounds.begin(), bounds.begin() + 2);
  CHECK_THROWS_AS(compare_bounds(sweep, short_bounds), DomainError);
}

TEST_CASE("transport comparison inequality and its negative control") {
  ExperimentConfig c = tiny_config();
  c.n = 32;
  const Lemma41Report ok = verify_lemma41(c, 1e-2);
  CHECK(ok.passed);
  CHECK(ok.d_p == d_p_constant(3.0));
  REQUIRE_FALSE(ok.rows.empty());
  CHECK(ok.rows.back().t <= c.lemma41_horizon + 1e-12);
  for (const auto& row : ok.rows) CHECK(row.distance_sq <= row.bound);
  const Lemma41Report tiny = verify_lemma41(c, 1e-2, 1e-9);
  CHECK_FALSE(tiny.passed);
  CHECK(tiny.worst_ratio > 1.0);
}

}  // TEST_SUITE

TEST_SUITE("config") {

TEST_CASE("sectioned key-value text with comments and overrides") {
  const std::string text =
      "# header comment\n"
      "experiment = demo\n"
      "[grid]\n"
      "dim = 2   # trailing\n"
      "n = 64\n"
      "[flow]\n"
      "kind = cellular\n"
      "[nu]\n"
      "list = 1e-2, 1e-3\n";
  ConfigDocument doc = ConfigDocument::parse(text);
  CHECK(doc.get("grid.n") == "64");
  CHECK(doc.get("grid.dim") == "2");
  doc.apply_override("grid.n=128");
  const ExperimentConfig c = ExperimentConfig::from_document(doc);
  CHECK(c.n == 128);
  CHECK(c.dim == 2);
  CHECK(c.flow == FlowKind::cellular);
  CHECK(c.nu_list == std::vector<double>{1e-2, 1e-3});
  CHECK(c.experiment == "demo");
  CHECK(ExperimentConfig::parse(c.serialize()) == c);
}

TEST_CASE("errors name the offending key") {
  auto message = [](const std::string& text) {
    try {
      (void)ExperimentConfig::parse(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("[grid]\nn = 64\nn = 32\n").find("grid.n") != std::string::npos);
  CHECK(message("[grid]\nsize = 64\n").find("grid.size") != std::string::npos);
  CHECK(message("[grid]\nn = sixty\n").find("grid.n") != std::string::npos);
  CHECK(message("[grid]\nn = 60\n").find("grid.n") != std::string::npos);
  CHECK(message("[solver]\np = 2\n").find("solver.p") != std::string::npos);
  CHECK(message("[grid\n").find("line 1") != std::string::npos);
  ConfigDocument doc;
  CHECK_THROWS_AS(doc.apply_override("grid.n"), ConfigError);
  CHECK_THROWS_AS(doc.apply_override("grid.nn=3"), ConfigError);
}

TEST_CASE("shipped configurations parse and validate") {
  int count = 0;
  for (const auto& entry : fs::directory_iterator(configs_dir())) {
    if (entry.path().extension() != ".cfg") continue;
    CAPTURE(entry.path().string());
    ExperimentConfig c;
    CHECK_NOTHROW(c = ExperimentConfig::load(entry.path()));
    CHECK(ExperimentConfig::parse(c.serialize()) == c);
    ++count;
  }
  CHECK(count >= 5);
  const ExperimentConfig ref = ExperimentConfig::load(fs::path(configs_dir()) / "ref.cfg", {"nu.list=1e-4"});
  CHECK(ref.nu_list == std::vector<double>{1e-4});
  CHECK(ref.n == 256);
  CHECK(ref.flow == FlowKind::alternating_shear);
}

TEST_CASE("every schema key survives serialization") {
  const ExperimentConfig def;
  const ConfigDocument doc = def.to_document();
  for (const std::string& key : config_keys()) CHECK(doc.contains(key));
  CHECK(doc.entries().size() == config_keys().size());
}

}  // TEST_SUITE
