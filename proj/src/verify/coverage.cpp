#include <algorithm>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "bditb/verify.hpp"

namespace bditb::verify {

std::size_t CoverageState::points_hit() const {
  return static_cast<std::size_t>(
      std::count_if(points.begin(), points.end(), [](std::uint64_t c) { return c > 0; }));
}

double CoverageState::code_coverage() const {
  return points.empty() ? 0.0 : static_cast<double>(points_hit()) / static_cast<double>(points.size());
}

CoverageState empty_coverage() { return {}; }

CoverageState coverage_of_test(const std::vector<std::uint32_t>& hits,
                               const std::array<RequirementResult, kRequirements>& results,
                               int tuple) {
  CoverageState c;
  c.universe = std::string(scenario::instrumentation_version());
  c.points.assign(hits.begin(), hits.end());
  if (c.points.size() != scenario::instrumentation_universe().size()) {
    throw IncompatibleUniverse("hit vector does not match the instrumentation universe");
  }
  for (int r = 0; r < kRequirements; ++r) {
    c.triggered[r] = results[r].flag_nc() ? 0 : 1;
    c.passed[r] = results[r].flag_passed() ? 1 : 0;
    c.failed[r] = results[r].flag_failed() ? 1 : 0;
  }
  if (tuple >= 1 && tuple <= kTuples) c.tuples[tuple - 1] = 1;
  c.tests = 1;
  return c;
}

CoverageState merge_coverage(const CoverageState& a, const CoverageState& b) {
  if (a.universe.empty() && a.tests == 0) return b;
  if (b.universe.empty() && b.tests == 0) return a;
  if (a.universe != b.universe || a.points.size() != b.points.size()) {
    throw IncompatibleUniverse("cannot merge coverage of '" + a.universe + "' and '" +
                               b.universe + "'");
  }
  CoverageState m = a;
  for (std::size_t i = 0; i < m.points.size(); ++i) m.points[i] += b.points[i];
  for (int r = 0; r < kRequirements; ++r) {
    m.triggered[r] += b.triggered[r];
    m.passed[r] += b.passed[r];
    m.failed[r] += b.failed[r];
  }
  for (int t = 0; t < kTuples; ++t) m.tuples[t] += b.tuples[t];
  m.tests += b.tests;
  return m;
}

// ---------------------------------------------------------------------------

namespace {

std::string fraction(std::uint64_t n, std::uint64_t d) {
  return std::to_string(n) + "/" + std::to_string(d);
}

bool is_random(const TestRecord& r) { return r.generator == "random"; }

}  // namespace

std::string verdicts_csv(const std::vector<TestRecord>& records) {
  std::ostringstream out;
  out << "test_id,req_id,passed_spawns,failed_spawns,flag\n";
  for (const auto& rec : records) {
    for (const auto& r : rec.results) {
      out << rec.test_id << ',' << r.req << ',' << r.passed << ',' << r.failed << ','
          << (rec.error.empty() ? r.flag() : "error") << '\n';
    }
  }
  return out.str();
}

std::string requirements_table_csv(const std::vector<TestRecord>& records) {
  std::ostringstream out;
  out << "req,generator,passed,failed,nc\n";
  for (int r = 0; r < kRequirements; ++r) {
    for (const char* gen : {"random", "bdi"}) {
      std::uint64_t n = 0, p = 0, f = 0, nc = 0;
      for (const auto& rec : records) {
        if ((rec.generator == "random") != (std::string(gen) == "random")) continue;
        ++n;
        p += rec.results[r].flag_passed();
        f += rec.results[r].flag_failed();
        nc += rec.results[r].flag_nc();
      }
      out << r + 1 << ',' << gen << ',' << fraction(p, n) << ',' << fraction(f, n) << ','
          << fraction(nc, n) << '\n';
    }
  }
  return out.str();
}

std::string cross_product_csv(const std::vector<TestRecord>& records) {
  std::array<std::uint64_t, kTuples> rnd{}, bdi{};
  std::uint64_t n_rnd = 0, n_bdi = 0;
  for (const auto& rec : records) {
    auto& counts = is_random(rec) ? rnd : bdi;
    ++(is_random(rec) ? n_rnd : n_bdi);
    if (rec.tuple >= 1) ++counts[rec.tuple - 1];
  }
  std::ostringstream out;
  out << "tuple,label,random,bdi,total\n";
  for (int t = 0; t < kTuples; ++t) {
    out << t + 1 << ",\"" << tuple_label(t + 1) << "\"," << fraction(rnd[t], n_rnd) << ','
        << fraction(bdi[t], n_bdi) << ',' << fraction(rnd[t] + bdi[t], n_rnd + n_bdi) << '\n';
  }
  return out.str();
}

std::vector<double> coverage_curve(const std::vector<TestRecord>& records) {
  const std::size_t size = scenario::instrumentation_universe().size();
  std::vector<bool> hit(size, false);
  std::size_t count = 0;
  std::vector<double> curve;
  for (const auto& rec : records) {
    for (std::size_t i = 0; i < rec.hits.size() && i < size; ++i) {
      if (rec.hits[i] && !hit[i]) {
        hit[i] = true;
        ++count;
      }
    }
    curve.push_back(static_cast<double>(count) / static_cast<double>(size));
  }
  return curve;
}

std::size_t plateau_index(const std::vector<double>& curve) {
  if (curve.empty()) return 0;
  const double final_value = curve.back();
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (curve[i] >= final_value) return i + 1;
  }
  return curve.size();
}

std::string coverage_json(const std::vector<TestRecord>& records) {
  using nlohmann::json;
  CoverageState total = empty_coverage();
  for (const auto& rec : records) {
    if (!rec.error.empty()) continue;
    total = merge_coverage(total, coverage_of_test(rec.hits, rec.results, rec.tuple));
  }
  const auto& universe = scenario::instrumentation_universe();
  json points = json::object();
  for (std::size_t i = 0; i < universe.size(); ++i) {
    points[universe[i]] = i < total.points.size() ? total.points[i] : 0;
  }
  json curve = json::array();
  const auto values = coverage_curve(records);
  for (std::size_t i = 0; i < values.size(); ++i) {
    // fixed precision keeps the file byte-stable across platforms
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", values[i]);
    curve.push_back({{"test", records[i].test_id}, {"coverage", std::stod(buf)}});
  }
  json reqs = json::array();
  for (int r = 0; r < kRequirements; ++r) {
    reqs.push_back({{"req", r + 1},
                    {"triggered_tests", total.triggered[r]},
                    {"passed_tests", total.passed[r]},
                    {"failed_tests", total.failed[r]}});
  }
  json doc = {
      {"universe", std::string(scenario::instrumentation_version())},
      {"universe_size", universe.size()},
      {"tests", records.size()},
      {"points_hit", total.points_hit()},
      {"points", points},
      {"requirements", reqs},
      {"tuples", total.tuples},
      {"curve", curve},
      {"plateau_test", plateau_index(values)},
  };
  return doc.dump(1) + "\n";
}

}  // namespace bditb::verify
