// Offline requirement monitors, cross-product classification and coverage
// bookkeeping over simulator traces.
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bditb/scenario.hpp"

namespace bditb::verify {

using scenario::SimEvent;
using scenario::SimTrace;

inline constexpr int kRequirements = 4;
inline constexpr int kTuples = 13;
inline constexpr std::int64_t kDefaultDeltaMs = 100;

enum class Verdict { passed, failed, not_checked };
std::string_view to_string(Verdict v);

struct Spawn {
  std::int64_t t_ms = 0;
  Verdict verdict = Verdict::not_checked;
  friend bool operator==(const Spawn&, const Spawn&) = default;
};

struct MonitorConfig {
  std::int64_t decide_ms = 5'000;
  double proximity_threshold_m = 0.05;
  double speed_cap = 0.25;  // the requirement, independent of what the planner was given
  std::int64_t delta_ms = kDefaultDeltaMs;
  std::int64_t tick_ms = 10;

  static MonitorConfig from(const scenario::ScenarioConfig& c);
};

// Trigger intervals and spawn scheduling ------------------------------------

struct Interval {
  std::int64_t begin = 0;  // inclusive
  std::int64_t end = 0;    // exclusive
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Maximal runs of true samples; samples are one tick apart.
std::vector<Interval> true_intervals(const std::vector<std::int64_t>& sample_times,
                                     std::int64_t tick_ms);

/// Once-per-event-change mode: one spawn at the start of every interval.
std::vector<std::int64_t> spawn_once(const std::vector<Interval>& intervals);

/// Every-delta-t mode: ceil(length / delta) spawns per interval.
std::vector<std::int64_t> spawn_every(const std::vector<Interval>& intervals,
                                      std::int64_t delta_ms);

// Monitors -------------------------------------------------------------------

/// Req 1: an all-ok reading is followed by a release within the decision time.
std::vector<Spawn> monitor_req1(const SimTrace& trace, const MonitorConfig& config);
/// Req 2: a reading that is not all-ok is never followed by a release.
std::vector<Spawn> monitor_req2(const SimTrace& trace, const MonitorConfig& config);
/// Req 3: the gripper never closes with the hand nearer than the threshold.
std::vector<Spawn> monitor_req3(const SimTrace& trace, const MonitorConfig& config);
/// Req 4: joint speeds stay within the cap, checked every delta while moving.
std::vector<Spawn> monitor_req4(const SimTrace& trace, const MonitorConfig& config);

std::vector<Spawn> run_monitor(int req, const SimTrace& trace, const MonitorConfig& config);

struct RequirementResult {
  int req = 0;
  std::uint32_t passed = 0;
  std::uint32_t failed = 0;
  std::uint32_t pending = 0;  // spawns left NotChecked at trace end

  std::uint32_t spawns() const { return passed + failed + pending; }
  bool flag_passed() const { return passed > 0; }
  bool flag_failed() const { return failed > 0; }
  bool flag_nc() const { return spawns() == 0; }
  std::string flag() const;  // passed, failed, passed+failed, pending or nc
  friend bool operator==(const RequirementResult&, const RequirementResult&) = default;
};

RequirementResult summarize(int req, const std::vector<Spawn>& spawns);
std::array<RequirementResult, kRequirements> check_all(const SimTrace& trace,
                                                       const MonitorConfig& config);

// Cross-product --------------------------------------------------------------

class UnclassifiableTrace : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 1..13 following the handover count x outcome grid.
int classify_cross_product(const SimTrace& trace);
std::string_view tuple_label(int tuple);

// Coverage -------------------------------------------------------------------

class IncompatibleUniverse : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CoverageState {
  std::string universe;               // empty: identity element
  std::vector<std::uint64_t> points;  // hit counts per instrumentation point
  std::array<std::uint64_t, kRequirements> triggered{};  // tests with >= 1 spawn
  std::array<std::uint64_t, kRequirements> passed{};
  std::array<std::uint64_t, kRequirements> failed{};
  std::array<std::uint64_t, kTuples> tuples{};
  std::uint64_t tests = 0;

  std::size_t points_hit() const;
  double code_coverage() const;  // fraction of the universe hit
  friend bool operator==(const CoverageState&, const CoverageState&) = default;
};

CoverageState empty_coverage();
CoverageState coverage_of_test(const std::vector<std::uint32_t>& hits,
                               const std::array<RequirementResult, kRequirements>& results,
                               int tuple);
CoverageState merge_coverage(const CoverageState& a, const CoverageState& b);

// Reports --------------------------------------------------------------------

struct TestRecord {
  std::string test_id;
  std::string generator;  // bdi or random
  std::string pool;
  std::array<RequirementResult, kRequirements> results{};
  int tuple = 0;          // 0 when the run errored
  std::vector<std::uint32_t> hits;
  std::string error;      // non-empty for harness-level failures
  std::size_t events = 0;
  std::int64_t end_ms = 0;
};

std::string verdicts_csv(const std::vector<TestRecord>& records);
std::string requirements_table_csv(const std::vector<TestRecord>& records);
std::string cross_product_csv(const std::vector<TestRecord>& records);
std::string coverage_json(const std::vector<TestRecord>& records);

/// Cumulative fraction of instrumentation points hit after each test.
std::vector<double> coverage_curve(const std::vector<TestRecord>& records);
/// 1-based index of the first test at which the curve reaches its final value; 0 if empty.
std::size_t plateau_index(const std::vector<double>& curve);

}  // namespace bditb::verify
