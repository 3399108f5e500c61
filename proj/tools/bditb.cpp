// bditb: generate, run and report handover test suites.
#include <chrono>
#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bditb/harness.hpp"

namespace fs = std::filesystem;
using namespace bditb;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitHarness = 1;
constexpr int kExitFailure = 2;

scenario::ScenarioConfig load_config(const std::string& path, const std::string& mutant) {
  std::string p = path;
  if (p.empty()) {
    if (const char* env = std::getenv("BDITB_CONFIG")) p = env;
  }
  scenario::ScenarioConfig c = p.empty() ? scenario::ScenarioConfig{}
                                         : scenario::config_from_json(harness::read_file(p));
  if (!mutant.empty()) c.mutant = scenario::mutant_from_string(mutant);
  scenario::validate(c);
  return c;
}

std::shared_ptr<const agentlang::MasDefinition> load_agents(const std::string& mas) {
  if (mas.empty()) return testgen::default_mas();
  return std::make_shared<const agentlang::MasDefinition>(agentlang::load_mas(mas));
}


void write_suite(const fs::path& out, const std::vector<testgen::AbstractTestSequence>& abstracts,
                 const std::vector<testgen::SuiteEntry>& tests,
                 const std::vector<std::string>& generators) {
  for (const auto& a : abstracts) {
    harness::write_file(out / "abstract" / (a.id + ".json"), testgen::abstract_to_json(a));
  }
  json list = json::array();
  for (std::size_t i = 0; i < tests.size(); ++i) {
    const auto& e = tests[i];
    const std::string file = "concrete/" + e.test.id + ".json";
    harness::write_file(out / file, scenario::test_to_json(e.test));
    list.push_back({{"id", e.test.id}, {"file", file}, {"generator", generators[i]},
                    {"pool", e.pool}, {"abstract", e.abstract_id}});
  }
  harness::write_file(out / "manifest.json", json({{"tests", list}}).dump(1) + "\n");
}

std::vector<harness::SuiteTest> load_suite(const fs::path& dir) {
  const fs::path manifest = dir / "manifest.json";
  if (!fs::exists(manifest)) throw harness::MissingSuite(manifest.string());
  std::vector<harness::SuiteTest> tests;
  const json doc = json::parse(harness::read_file(manifest));
  for (const auto& j : doc.at("tests")) {
    harness::SuiteTest t;
    t.test.id = j.at("id").get<std::string>();
    t.generator = j.value("generator", "bdi");
    t.pool = j.value("pool", "");
    try {
      t.test = scenario::test_from_json(harness::read_file(dir / j.at("file").get<std::string>()));
    } catch (const std::exception& e) {
      t.error = e.what();
    }
    tests.push_back(std::move(t));
  }
  return tests;
}

int finish_run(const std::vector<verify::TestRecord>& records, const fs::path& out, bool strict,
               double seconds) {
  harness::write_reports(out, harness::make_reports(records));
  std::size_t errors = 0;
  for (const auto& r : records) errors += !r.error.empty();
  std::cout << records.size() << " tests, " << errors << " errors, " << seconds << " s\n";
  std::cout << verify::cross_product_csv(records);
  std::cout << verify::requirements_table_csv(records);
  if (strict && harness::any_failure(records)) return kExitFailure;
  return kExitOk;
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BDI-directed test generation and coverage for the table-assembly handover"};
  app.require_subcommand(1);

  std::string config_path, mutant, mas_path, out = "out", constraints_path, mode = "bdi";
  std::uint64_t seed = 1;
  std::size_t count = 0;
  int jobs = 0;
  bool strict = false;
  bool paper = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "scenario config JSON (default: $BDITB_CONFIG)");
    sub->add_option("--mutant", mutant, "controller fault to inject");
    sub->add_option("--out", out, "output directory");
  };

  auto* gen = app.add_subcommand("generate", "write abstract and concrete tests");
  common(gen);
  gen->add_option("--mode", mode, "bdi or random")->check(CLI::IsMember({"bdi", "random"}));
  gen->add_option("--count", count, "number of tests (bdi: vector budget)");
  gen->add_option("--seed", seed, "seed of the first test; test i uses seed + i");
  gen->add_option("--constraints", constraints_path, "constraint JSON (random mode)");
  gen->add_option("--mas", mas_path, "MAS config (default: bundled agents)");
  gen->add_flag("--paper-suite", paper, "generate the 168-test reference suite");

  std::string tests_dir;
  auto* run = app.add_subcommand("run", "simulate a generated suite and write reports");
  common(run);
  run->add_option("--tests", tests_dir, "directory written by generate")->required();
  run->add_option("--jobs", jobs, "worker threads (0: all cores)");
  run->add_flag("--strict", strict, "exit 2 when any monitor fails");

  std::string results_path;
  auto* rep = app.add_subcommand("report", "rebuild report files from results.jsonl");
  rep->add_option("--results", results_path, "results.jsonl")->required();
  rep->add_option("--out", out, "output directory");

  std::vector<std::string> suites;
  auto* cmp = app.add_subcommand("compare", "coverage curves and plateaus of several suites");
  cmp->add_option("--suite", suites, "name=path/to/results.jsonl")->required();
  cmp->add_option("--out", out, "output CSV file");

  auto* ps = app.add_subcommand("paper-suite", "generate and run the 168-test suite");
  common(ps);
  ps->add_option("--jobs", jobs, "worker threads (0: all cores)");
  ps->add_flag("--strict", strict, "exit 2 when any monitor fails");

  CLI11_PARSE(app, argc, argv);

  try {
    const auto t0 = std::chrono::steady_clock::now();
    if (gen->parsed()) {
      const auto config = load_config(config_path, mutant);
      std::vector<testgen::AbstractTestSequence> abstracts;
      std::vector<testgen::SuiteEntry> tests;
      std::vector<std::string> generators;
      if (paper) {
        const auto suite = testgen::paper_suite(config, load_agents(mas_path));
        abstracts = suite.abstracts;
        tests = suite.tests;
        for (std::size_t i = 0; i < tests.size(); ++i) {
          generators.push_back(i < suite.bdi_tests ? "bdi" : "random");
        }
      } else if (mode == "bdi") {
        testgen::GenerationState state;
        testgen::BdiOptions opt;
        if (count) opt.budget = count;
        for (const auto& r : testgen::bdi_generate(load_agents(mas_path), state, opt)) {
          const std::uint64_t s = seed + tests.size();
          const std::string id = "bdi-" + r.sequence.id.substr(r.sequence.id.find('-') + 1);
          tests.push_back({testgen::concretize(r.sequence, s, config, id), r.sequence.id, "bdi"});
          generators.push_back("bdi");
          abstracts.push_back(r.sequence);
        }
      } else {
        std::vector<testgen::Constraint> constraints;
        if (!constraints_path.empty()) {
          constraints = testgen::constraints_from_json(harness::read_file(constraints_path));
        }
        tests = testgen::random_suite(count, constraints, config, seed, "rnd-", &abstracts);
        generators.assign(tests.size(), "random");
      }
      write_suite(out, abstracts, tests, generators);
      std::cout << abstracts.size() << " abstract, " << tests.size() << " concrete tests in "
                << out << '\n';
      return kExitOk;
    }
    if (run->parsed()) {
      const auto config = load_config(config_path, mutant);
      const auto tests = load_suite(tests_dir);
      const auto records = harness::run_suite_parallel(tests, config, jobs);
      return finish_run(records, out, strict, since(t0));
    }
    if (rep->parsed()) {
      if (!fs::exists(results_path)) throw harness::MissingSuite(results_path);
      const auto records = harness::records_from_jsonl(harness::read_file(results_path));
      harness::write_reports(out, harness::make_reports(records));
      return kExitOk;
    }
    if (cmp->parsed()) {
      std::map<std::string, std::vector<verify::TestRecord>> loaded;
      for (const auto& s : suites) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw harness::Error("--suite expects name=path");
        const std::string path = s.substr(eq + 1);
        if (!fs::exists(path)) throw harness::MissingSuite(path);
        loaded[s.substr(0, eq)] = harness::records_from_jsonl(harness::read_file(path));
      }
      const auto csv = harness::compare_suites(loaded).to_csv();
      harness::write_file(out == "out" ? fs::path("comparison.csv") : fs::path(out), csv);
      std::cout << csv.substr(0, csv.find("\n\n") + 1);
      return kExitOk;
    }
    if (ps->parsed()) {
      const auto config = load_config(config_path, mutant);
      const auto suite = testgen::paper_suite(config);
      std::vector<std::string> generators;
      for (std::size_t i = 0; i < suite.tests.size(); ++i) {
        generators.push_back(i < suite.bdi_tests ? "bdi" : "random");
      }
      write_suite(fs::path(out) / "tests", suite.abstracts, suite.tests, generators);
      std::cout << suite.bdi_abstracts << " BDI abstract sequences, " << suite.bdi_tests
                << " BDI tests, " << suite.tests.size() - suite.bdi_tests << " random tests\n";
      const auto records = harness::run_suite_parallel(harness::paper_suite_tests(suite), config, jobs);
      return finish_run(records, out, strict, since(t0));
    }
  } catch (const std::exception& e) {
    std::cerr << "bditb: " << e.what() << '\n';
    return kExitHarness;
  }
  return kExitOk;
}
