// Prints one line per acceptance criterion and exits non-zero if any fails.
#include <bitset>
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

#include "bditb/harness.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace bditb;
using verify::TestRecord;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool all_passed = true;

void report(int n, bool ok, const std::string& detail) {
  all_passed = all_passed && ok;
  std::printf("criterion %d: %s  %s\n", n, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

std::uint64_t fnv1a(const harness::Reports& r) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const auto& [name, content] : r.files) {
    for (const std::string* s : {&name, &content}) {
      for (unsigned char c : *s) {
        h ^= c;
        h *= 0x100000001b3ull;
      }
    }
  }
  return h;
}

std::string hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<TestRecord> slice(const std::vector<TestRecord>& v, std::size_t from, std::size_t to) {
  return {v.begin() + static_cast<std::ptrdiff_t>(from), v.begin() + static_cast<std::ptrdiff_t>(to)};
}

// Runs `body` n times; returns how many iterations held.
std::size_t count_holds(std::size_t n, const std::function<bool(std::size_t)>& body) {
  std::size_t ok = 0;
  for (std::size_t i = 0; i < n; ++i) ok += body(i);
  return ok;
}

}  // namespace

int main() {
  const scenario::ScenarioConfig config;

  // 1 ------------------------------------------------------------------------
  auto t0 = Clock::now();
  const testgen::PaperSuite suite = testgen::paper_suite(config);
  const double gen_s = seconds_since(t0);
  std::bitset<testgen::kVectorCount> seen;
  for (std::uint32_t i = 0; i < testgen::kVectorCount; ++i) seen.set(testgen::gray_vector(i).bits);
  const std::size_t random_tests = suite.tests.size() - suite.bdi_tests;
  {
    std::ostringstream d;
    d << "vectors=" << seen.count() << " bdi_abstracts=" << suite.bdi_abstracts
      << " tests=" << suite.tests.size() << " (" << suite.bdi_tests << "+" << random_tests
      << ") generation=" << gen_s << "s";
    report(1, seen.count() == 32768 && suite.bdi_abstracts == 130 && suite.bdi_tests == 138 &&
                  random_tests == 30 && gen_s < 1.0,
           d.str());
  }

  // 2 ------------------------------------------------------------------------
  const auto tests = harness::paper_suite_tests(suite);
  t0 = Clock::now();
  const auto records = harness::run_suite_parallel(tests, config, 0);
  const double run_s = seconds_since(t0);
  const auto bdi = slice(records, 0, suite.bdi_tests);
  const auto rnd = slice(records, suite.bdi_tests, records.size());
  {
    std::array<std::size_t, verify::kTuples> hits{};
    std::size_t rnd13 = 0, errors = 0;
    for (const auto& r : records) {
      if (r.tuple >= 1) ++hits[r.tuple - 1];
      errors += !r.error.empty();
    }
    for (const auto& r : rnd) rnd13 += r.tuple == 13;
    std::ostringstream d;
    std::string missing;
    d << "tuples=";
    for (int t = 0; t < verify::kTuples; ++t) {
      d << (t ? "," : "") << hits[t];
      if (!hits[t]) missing += (missing.empty() ? "" : ",") + std::to_string(t + 1);
    }
    d << " random_tuple13=" << rnd13 << "/" << rnd.size() << " errors=" << errors << " runtime=" << run_s
      << "s";
    if (!missing.empty()) d << " missing=" << missing;
    report(2, missing.empty() && rnd13 == 30 && rnd.size() == 30 && errors == 0 && run_s < 300.0, d.str());
  }

  // 3 ------------------------------------------------------------------------
  {
    std::size_t r2 = 0, r4 = 0;
    for (const auto& r : records) {
      r2 += r.results[1].flag_failed();
      r4 += r.results[3].flag_failed();
    }
    std::ostringstream d;
    d << "unmutated R2_failed=" << r2 << " R4_failed=" << r4;
    bool ok = r2 == 0 && r4 == 0;
    const std::pair<scenario::Mutant, int> mutants[] = {{scenario::Mutant::late_release, 1},
                                                        {scenario::Mutant::unconditional_release, 2},
                                                        {scenario::Mutant::regrasp, 3},
                                                        {scenario::Mutant::cap_disabled, 4}};
    for (const auto& [mutant, req] : mutants) {
      scenario::ScenarioConfig mcfg = config;
      mcfg.mutant = mutant;
      const auto mmc = verify::MonitorConfig::from(mcfg);
      std::size_t flagged = 0, oracle_flagged = 0, disagree = 0;
      for (const auto& t : tests) {
        const auto trace = scenario::run_test(t.test, mcfg, t.test.seed).trace;
        const auto got = verify::run_monitor(req, trace, mmc);
        const auto want = req == 1   ? testing::oracle_req1(trace, mmc)
                          : req == 2 ? testing::oracle_req2(trace, mmc)
                          : req == 3 ? testing::oracle_req3(trace, mmc)
                                     : testing::oracle_req4(trace, mmc);
        flagged += verify::summarize(req, got).flag_failed();
        oracle_flagged += verify::summarize(req, want).flag_failed();
        disagree += got != want;
      }
      d << " " << scenario::to_string(mutant) << ":R" << req << "_failed=" << flagged
        << " oracle=" << oracle_flagged;
      if (disagree) d << " disagree=" << disagree;
      ok = ok && flagged >= 1 && flagged == oracle_flagged && disagree == 0;
    }
    report(3, ok, d.str());
  }

  // 4 ------------------------------------------------------------------------
  {
    const auto unconstrained = harness::run_suite_parallel(
        harness::from_entries(testgen::random_suite(138, {}, config, 1, "urnd-"), "random"), config, 0);
    const auto bcurve = verify::coverage_curve(bdi);
    const double bfinal = bcurve.back();
    std::ostringstream d;
    d << "bdi plateau=" << verify::plateau_index(bcurve) << " final=" << bfinal;
    bool ok = true;
    for (const auto& [name, recs] : {std::pair{"random30", &rnd}, std::pair{"random138", &unconstrained}}) {
      const auto curve = verify::coverage_curve(*recs);
      const auto plateau = verify::plateau_index(curve);
      const auto reach = harness::tests_to_reach(bcurve, curve.back());
      d << "; " << name << " plateau=" << plateau << " final=" << curve.back() << " bdi_reaches_it_at=" << reach;
      ok = ok && bfinal >= curve.back() && reach >= 1 && reach < plateau;
    }
    const auto single = harness::run_one(tests.front(), config);
    std::size_t group_hit = 0;
    const char* group[] = {"state:Release", "tr:Decide->Release", "br:decide:gpl_all_ok",
                           "tr:Release->WaitRequest"};
    for (const char* p : group) group_hit += single.hits.at(scenario::point_index(p)) > 0;
    d << "; release group " << group_hit << "/4 by " << single.test_id;
    report(4, ok && group_hit == 4, d.str());
  }

  // 5 ------------------------------------------------------------------------
  {
    Rng rng(2024, 55);
    const std::size_t roundtrip = count_holds(1000, [&](std::size_t i) {
      const auto p = testing::random_program(rng, "p" + std::to_string(i));
      return agentlang::parse_agent(agentlang::unparse(p), p.name) == p;
    });
    const auto mas = testgen::default_mas();
    const std::size_t determinism = count_holds(100, [&](std::size_t) {
      const testgen::BeliefVector v{static_cast<std::uint16_t>(rng.below(testgen::kVectorCount))};
      return bdi::trace_to_jsonl(testgen::run_with_vector(mas, v)) ==
             bdi::trace_to_jsonl(testgen::run_with_vector(mas, v));
    });
    const std::size_t selection = count_holds(500, [&](std::size_t) {
      const auto program = testing::random_program(rng);
      const auto beliefs = testing::random_beliefs(rng);
      auto ev = testing::random_trigger(rng);
      if (!program.plans.empty() && rng.bernoulli(0.5)) ev = program.plans[rng.below(program.plans.size())].trigger;
      return bdi::select_plan(program, beliefs, ev) == testing::oracle_select_plan(program, beliefs, ev);
    });
    const std::size_t monitors = count_holds(500, [&](std::size_t) {
      verify::MonitorConfig c;
      c.delta_ms = 10 + 10 * static_cast<std::int64_t>(rng.below(15));
      const auto tr = testing::random_monitor_trace(rng, c);
      return verify::monitor_req1(tr, c) == testing::oracle_req1(tr, c) &&
             verify::monitor_req2(tr, c) == testing::oracle_req2(tr, c) &&
             verify::monitor_req3(tr, c) == testing::oracle_req3(tr, c) &&
             verify::monitor_req4(tr, c) == testing::oracle_req4(tr, c);
    });
    const std::size_t merge = count_holds(200, [&](std::size_t) {
      const auto a = testing::random_coverage(rng), b = testing::random_coverage(rng),
                 c = testing::random_coverage(rng);
      const auto e = verify::empty_coverage();
      return verify::merge_coverage(a, e) == a && verify::merge_coverage(a, b) == verify::merge_coverage(b, a) &&
             verify::merge_coverage(verify::merge_coverage(a, b), c) ==
                 verify::merge_coverage(a, verify::merge_coverage(b, c));
    });
    double max_speed = 0.0;
    const std::size_t totality = count_holds(1000, [&](std::size_t i) {
      const auto cfg = testing::random_config(rng);
      const auto test = testgen::concretize(testing::random_abstract(rng), i + 1, cfg);
      const auto trace = scenario::run_test(test, cfg, test.seed).trace;
      max_speed = std::max(max_speed, testing::max_joint_speed(trace));
      try {
        const int t = verify::classify_cross_product(trace);
        return t >= 1 && t <= verify::kTuples;
      } catch (const verify::UnclassifiableTrace&) {
        return false;
      }
    });
    std::ostringstream d;
    d << "roundtrip=" << roundtrip << "/1000 determinism=" << determinism << "/100 selection=" << selection
      << "/500 monitors=" << monitors << "/500 merge=" << merge << "/200 classification=" << totality
      << "/1000 max_speed=" << max_speed;
    report(5, roundtrip == 1000 && determinism == 100 && selection == 500 && monitors == 500 && merge == 200 &&
                  totality == 1000 && max_speed <= config.speed_cap + 1e-9,
           d.str());
  }

  // 6 ------------------------------------------------------------------------
  {
    const auto again = harness::paper_suite_tests(testgen::paper_suite(config));
    const auto h1 = fnv1a(harness::make_reports(harness::run_suite_parallel(tests, config, 1)));
    const auto h8 = fnv1a(harness::make_reports(harness::run_suite_parallel(again, config, 8)));
    const auto hs = fnv1a(harness::make_reports(harness::run_suite_serial(again, config)));
    std::ostringstream d;
    d << "jobs1=" << hex(h1) << " jobs8=" << hex(h8) << " serial=" << hex(hs);
    report(6, h1 == h8 && h1 == hs, d.str());
  }

  return all_passed ? 0 : 1;
}
