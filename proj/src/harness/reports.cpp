#include <algorithm>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "bditb/harness.hpp"

namespace bditb::harness {

using nlohmann::json;

std::string results_jsonl(const std::vector<verify::TestRecord>& records) {
  std::ostringstream out;
  for (const auto& rec : records) {
    json results = json::array();
    for (const auto& r : rec.results) {
      results.push_back({{"req", r.req}, {"passed", r.passed}, {"failed", r.failed},
                         {"pending", r.pending}, {"flag", r.flag()}});
    }
    json j = {{"test_id", rec.test_id}, {"generator", rec.generator}, {"pool", rec.pool},
              {"tuple", rec.tuple},     {"events", rec.events},       {"end_ms", rec.end_ms},
              {"results", results},     {"hits", rec.hits}};
    if (!rec.error.empty()) j["error"] = rec.error;
    out << j.dump() << '\n';
  }
  return out.str();
}

verify::TestRecord record_from_json(const std::string& line) {
  const json j = json::parse(line);
  verify::TestRecord rec;
  rec.test_id = j.at("test_id").get<std::string>();
  rec.generator = j.value("generator", "bdi");
  rec.pool = j.value("pool", "");
  rec.tuple = j.value("tuple", 0);
  rec.events = j.value("events", std::size_t{0});
  rec.end_ms = j.value("end_ms", std::int64_t{0});
  rec.error = j.value("error", "");
  rec.hits = j.value("hits", std::vector<std::uint32_t>{});
  const auto& results = j.at("results");
  if (results.size() != verify::kRequirements) throw Error("record " + rec.test_id + ": bad results");
  for (int r = 0; r < verify::kRequirements; ++r) {
    auto& out = rec.results[r];
    out.req = results[r].at("req").get<int>();
    out.passed = results[r].at("passed").get<std::uint32_t>();
    out.failed = results[r].at("failed").get<std::uint32_t>();
    out.pending = results[r].value("pending", 0u);
  }
  return rec;
}

std::vector<verify::TestRecord> records_from_jsonl(const std::string& text) {
  std::vector<verify::TestRecord> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(record_from_json(line));
  }
  return out;
}

Reports make_reports(const std::vector<verify::TestRecord>& records) {
  Reports r;
  r.files["verdicts.csv"] = verify::verdicts_csv(records);
  r.files["requirements.csv"] = verify::requirements_table_csv(records);
  r.files["cross_product.csv"] = verify::cross_product_csv(records);
  r.files["coverage.json"] = verify::coverage_json(records);
  r.files["results.jsonl"] = results_jsonl(records);
  return r;
}

void write_reports(const std::filesystem::path& dir, const Reports& reports) {
  for (const auto& [name, content] : reports.files) write_file(dir / name, content);
}

std::size_t tests_to_reach(const std::vector<double>& curve, double level) {
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (curve[i] >= level - 1e-12) return i + 1;
  }
  return 0;
}

Comparison compare_suites(const std::map<std::string, std::vector<verify::TestRecord>>& suites) {
  if (suites.empty()) throw MissingSuite("nothing to compare");
  Comparison c;
  for (const auto& [name, records] : suites) {
    SuiteCurve s;
    s.name = name;
    s.curve = verify::coverage_curve(records);
    s.plateau = verify::plateau_index(s.curve);
    s.final_coverage = s.curve.empty() ? 0.0 : s.curve.back();
    s.empty = records.empty();
    c.suites.push_back(std::move(s));
  }
  double best = 0.0;
  for (const auto& s : c.suites) best = std::max(best, s.final_coverage);
  for (auto& s : c.suites) s.to_best = s.empty ? 0 : tests_to_reach(s.curve, best);
  return c;
}

std::string Comparison::to_csv() const {
  std::ostringstream out;
  out << "suite,tests,plateau_test,final_coverage,tests_to_best,note\n";
  char buf[32];
  for (const auto& s : suites) {
    std::snprintf(buf, sizeof buf, "%.6f", s.final_coverage);
    out << s.name << ',' << s.curve.size() << ',' << s.plateau << ',' << buf << ',';
    if (s.to_best) out << s.to_best;
    out << ',' << (s.empty ? "empty input" : s.to_best ? "" : "best coverage not reached") << '\n';
  }
  out << "\ntest";
  for (const auto& s : suites) out << ',' << s.name;
  out << '\n';
  std::size_t longest = 0;
  for (const auto& s : suites) longest = std::max(longest, s.curve.size());
  for (std::size_t i = 0; i < longest; ++i) {
    out << i + 1;
    for (const auto& s : suites) {
      out << ',';
      if (i < s.curve.size()) {
        std::snprintf(buf, sizeof buf, "%.6f", s.curve[i]);
        out << buf;
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace bditb::harness
