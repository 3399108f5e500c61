// Suite execution (serial reference and OpenMP), report files and suite
// comparison used by the command-line tool.
#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "bditb/scenario.hpp"
#include "bditb/testgen.hpp"
#include "bditb/verify.hpp"

namespace bditb::harness {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class MissingSuite : public Error {
 public:
  explicit MissingSuite(const std::string& what) : Error("missing suite: " + what) {}
};

struct SuiteTest {
  scenario::ConcreteTest test;
  std::string generator = "bdi";  // bdi or random
  std::string pool;
  std::string error;  // set when the test file could not be loaded
};

std::vector<SuiteTest> from_entries(const std::vector<testgen::SuiteEntry>& entries,
                                    const std::string& generator);
std::vector<SuiteTest> paper_suite_tests(const testgen::PaperSuite& suite);

/// Simulates one test and evaluates it; errors are captured in the record.
verify::TestRecord run_one(const SuiteTest& test, const scenario::ScenarioConfig& config);

std::vector<verify::TestRecord> run_suite_serial(const std::vector<SuiteTest>& tests,
                                                 const scenario::ScenarioConfig& config);
/// Same records as the serial runner, in the same order, for any thread count.
std::vector<verify::TestRecord> run_suite_parallel(const std::vector<SuiteTest>& tests,
                                                   const scenario::ScenarioConfig& config,
                                                   int jobs);

struct Reports {
  std::map<std::string, std::string> files;  // file name -> content
};

std::string results_jsonl(const std::vector<verify::TestRecord>& records);
verify::TestRecord record_from_json(const std::string& line);
std::vector<verify::TestRecord> records_from_jsonl(const std::string& text);

Reports make_reports(const std::vector<verify::TestRecord>& records);
void write_reports(const std::filesystem::path& dir, const Reports& reports);

struct SuiteCurve {
  std::string name;
  std::vector<double> curve;
  std::size_t plateau = 0;  // 1-based, 0 for an empty suite
  double final_coverage = 0.0;
  std::size_t to_best = 0;  // tests needed to reach the best final coverage of all suites, 0: never
  bool empty = true;
};

/// 1-based index of the first curve value >= level, 0 if never reached.
std::size_t tests_to_reach(const std::vector<double>& curve, double level);

struct Comparison {
  std::vector<SuiteCurve> suites;
  std::string to_csv() const;
};

Comparison compare_suites(const std::map<std::string, std::vector<verify::TestRecord>>& suites);

bool any_failure(const std::vector<verify::TestRecord>& records);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace bditb::harness
