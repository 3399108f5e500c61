#include <fstream>
#include <sstream>

#include <omp.h>

#include "bditb/harness.hpp"

namespace bditb::harness {

std::vector<SuiteTest> from_entries(const std::vector<testgen::SuiteEntry>& entries,
                                    const std::string& generator) {
  std::vector<SuiteTest> out;
  for (const auto& e : entries) out.push_back({e.test, generator, e.pool, {}});
  return out;
}

std::vector<SuiteTest> paper_suite_tests(const testgen::PaperSuite& suite) {
  std::vector<SuiteTest> out;
  for (std::size_t i = 0; i < suite.tests.size(); ++i) {
    const auto& e = suite.tests[i];
    out.push_back({e.test, i < suite.bdi_tests ? "bdi" : "random", e.pool, {}});
  }
  return out;
}

verify::TestRecord run_one(const SuiteTest& t, const scenario::ScenarioConfig& config) {
  verify::TestRecord rec;
  rec.test_id = t.test.id;
  rec.generator = t.generator;
  rec.pool = t.pool;
  for (int r = 0; r < verify::kRequirements; ++r) rec.results[r].req = r + 1;
  if (!t.error.empty()) {
    rec.error = t.error;
    return rec;
  }
  try {
    const auto result = scenario::run_test(t.test, config, t.test.seed);
    rec.results = verify::check_all(result.trace, verify::MonitorConfig::from(config));
    rec.tuple = verify::classify_cross_product(result.trace);
    rec.hits = result.hits;
    rec.events = result.trace.events.size();
    rec.end_ms = result.trace.events.empty() ? 0 : result.trace.events.back().t_ms;
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  return rec;
}

std::vector<verify::TestRecord> run_suite_serial(const std::vector<SuiteTest>& tests,
                                                 const scenario::ScenarioConfig& config) {
  std::vector<verify::TestRecord> out;
  out.reserve(tests.size());
  for (const auto& t : tests) out.push_back(run_one(t, config));
  return out;
}

std::vector<verify::TestRecord> run_suite_parallel(const std::vector<SuiteTest>& tests,
                                                   const scenario::ScenarioConfig& config,
                                                   int jobs) {
  std::vector<verify::TestRecord> out(tests.size());
  const auto n = static_cast<std::ptrdiff_t>(tests.size());
  // each slot is written by exactly one iteration, so order does not depend on scheduling
#pragma omp parallel for schedule(dynamic, 1) num_threads(jobs > 0 ? jobs : omp_get_max_threads())
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = run_one(tests[static_cast<std::size_t>(i)], config);
  }
  return out;
}

bool any_failure(const std::vector<verify::TestRecord>& records) {
  for (const auto& rec : records) {
    for (const auto& r : rec.results) {
      if (r.flag_failed()) return true;
    }
  }
  return false;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

}  // namespace bditb::harness
