// Discrete-time simulation of the table-assembly handover: world state,
// stochastic sensors, a kinematic trajectory planner and the instrumented
// robot control state machine that the testbench exercises.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bditb/rng.hpp"

namespace bditb::scenario {

// ---------------------------------------------------------------------------
// Geometry

struct Vec3 {
  double x = 0, y = 0, z = 0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const { return std::sqrt(dot(*this)); }
  Vec3 normalized() const { return *this * (1.0 / norm()); }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

/// Angle between two non-zero vectors, radians.
double angle_between(const Vec3& a, const Vec3& b);

using Joints = std::array<double, 3>;

struct Geometry {
  Vec3 head{1.30, 0.0, 1.60};
  Vec3 hand_rest{1.00, 0.15, 1.05};
  Vec3 hand_away{1.90, 0.70, 0.90};  // outside the tracker range of the holdout pose
  Vec3 leg_offset{0.10, 0.0, 0.0};  // leg centre relative to the gripper while held
  double base_height = 1.0;
  double upper_arm = 0.35;
  double forearm = 0.35;
};

struct RobotPoses {
  Joints start{0.0, -0.2, 0.4};
  Joints home{0.0, 0.0, 0.8};
  Joints supply{0.6, -0.3, 0.9};
  Joints holdout{0.0, 0.1, 0.4};
};

/// Gripper position of the three-joint arm (base yaw, shoulder and elbow pitch).
Vec3 gripper_position(const Joints& q, const Geometry& g);

// ---------------------------------------------------------------------------
// Configuration

struct SensorModel {
  double gaze_threshold_deg = 15.0;
  double location_threshold_m = 0.15;
  double pressure_low_n = 1.5;
  double pressure_high_n = 6.0;
  double tracking_range_m = 1.2;  // beyond this the hand tracker loses the hand
  double p_gaze = 0.15;
  double p_loc = 0.15;
  double p_press = 0.10;
  double p_voice = 0.05;
};

struct Timeouts {
  std::int64_t wait_request_ms = 60'000;
  std::int64_t wait_ready_ms = 30'000;
  std::int64_t sense_ms = 20'000;
  std::int64_t decide_ms = 5'000;  // release must follow an all-ok reading within this
  std::int64_t table_ms = 300'000;
};

struct RobotTiming {
  std::int64_t signal_latency_ms = 300;
  std::int64_t sense_window_ms = 500;
  std::int64_t decision_latency_ms = 200;
  std::int64_t release_latency_ms = 1'000;
  std::int64_t close_delay_ms = 500;
};

enum class Mutant {
  none,
  unconditional_release,  // releases whatever the sensors say
  cap_disabled,           // planner ignores the joint speed limit
  late_release,           // gripper opens after the decision threshold
  regrasp,                // closes on the leg while the human is taking it
};

struct ScenarioConfig {
  std::int64_t tick_ms = 10;
  std::int64_t max_test_ms = 300'000;
  double speed_cap = 0.25;           // rad/s
  double uncapped_speed = 1.0;       // rad/s used when the cap is disabled
  double proximity_threshold_m = 0.05;
  Geometry geometry;
  RobotPoses poses;
  SensorModel sensors;
  Timeouts timeouts;
  RobotTiming timing;
  Mutant mutant = Mutant::none;

  double effective_speed_cap() const {
    return mutant == Mutant::cap_disabled ? uncapped_speed : speed_cap;
  }
  std::int64_t effective_release_latency_ms() const {
    return mutant == Mutant::late_release ? timeouts.decide_ms + 1'000
                                          : timing.release_latency_ms;
  }
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void validate(const ScenarioConfig& config);  // throws ConfigError
std::string_view to_string(Mutant m);
Mutant mutant_from_string(std::string_view s);

/// Where the leg sits while the robot holds it out to the human.
Vec3 holdout_leg_position(const ScenarioConfig& config);

// ---------------------------------------------------------------------------
// World

enum class Gripper { open, closed, holding_leg };
enum class VoiceCommand { request_leg, ready };
enum class LegHolder { robot, human, supply };

struct WorldState {
  std::int64_t sim_time_ms = 0;
  Vec3 hand_pos;
  Vec3 hand_target;
  double hand_speed = 0.0;  // m/s toward hand_target
  Vec3 gaze_dir{-1.0, 0.0, 0.0};
  double grip_force = 0.0;  // N
  Vec3 leg_pos;
  LegHolder leg_holder = LegHolder::supply;
  Vec3 leg_in_hand;  // leg offset from the hand once handed over
  Joints joints{};
  Gripper gripper = Gripper::open;
  int legs_delivered = 0;
  std::optional<VoiceCommand> voice;
};

WorldState initial_world(const ScenarioConfig& config);

enum class Channel { hand, gaze, grip, voice };

struct HandWaypoint {
  Vec3 target;
  double speed = 0.0;
  friend bool operator==(const HandWaypoint&, const HandWaypoint&) = default;
};

using StimulusValue = std::variant<HandWaypoint, Vec3, double, VoiceCommand>;

struct Stimulus {
  std::int64_t t_ms = 0;
  Channel channel = Channel::voice;
  StimulusValue value;
  int action = -1;  // index of the abstract action this stimulus realises

  friend bool operator==(const Stimulus&, const Stimulus&) = default;
};

struct ConcreteTest {
  std::string id;
  std::uint64_t seed = 0;
  std::vector<Stimulus> stimuli;

  friend bool operator==(const ConcreteTest&, const ConcreteTest&) = default;
};

class StimulusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class UnknownChannel : public StimulusError {
 public:
  explicit UnknownChannel(const std::string& ch) : StimulusError("unknown channel '" + ch + "'") {}
};
class StaleTimestamp : public StimulusError {
 public:
  StaleTimestamp(std::int64_t t, std::int64_t now)
      : StimulusError("stimulus at " + std::to_string(t) + " ms precedes sim time " +
                      std::to_string(now) + " ms") {}
};
class MalformedTest : public StimulusError {
 public:
  using StimulusError::StimulusError;
};

std::string_view to_string(Channel c);
Channel channel_from_string(std::string_view s);  // throws UnknownChannel
std::string_view to_string(VoiceCommand v);

/// Routes one stimulus to the world; time advances to the stimulus time.
void apply_stimulus(WorldState& world, const Stimulus& stimulus);

/// Moves the hand toward its waypoint and keeps a handed-over leg in the hand.
void advance_world(WorldState& world, std::int64_t dt_ms);

// ---------------------------------------------------------------------------
// Sensors

enum class Reading : std::uint8_t { notok = 0, ok = 1 };

struct GplReading {
  Reading g = Reading::notok;
  Reading p = Reading::notok;
  Reading l = Reading::notok;

  bool all_ok() const { return g == Reading::ok && p == Reading::ok && l == Reading::ok; }
  std::string to_string() const;
  friend bool operator==(const GplReading&, const GplReading&) = default;
};

/// Error-free threshold classification of the current pose.
GplReading threshold_gpl(const WorldState& world, const ScenarioConfig& config);

/// Threshold classification followed by independent per-channel degradation.
/// Always consumes exactly three draws from `rng`.
GplReading sense_gpl(const WorldState& world, const ScenarioConfig& config, Rng& rng);

bool hand_tracked(const WorldState& world, const ScenarioConfig& config);

// ---------------------------------------------------------------------------
// Trajectories

struct PathPoint {
  std::int64_t t_ms = 0;
  Joints q{};
};

struct JointPath {
  std::vector<PathPoint> points;

  std::int64_t duration_ms() const { return points.empty() ? 0 : points.back().t_ms; }
  Joints at(std::int64_t t_ms) const;
  /// Commanded joint velocity (rad/s) of the segment active at t.
  Joints velocity(std::int64_t t_ms) const;
};

/// Straight-line joint path whose per-joint speed never exceeds `speed_cap`.
/// Durations are whole milliseconds.
JointPath plan_trajectory(const Joints& from, const Joints& to, double speed_cap);

// ---------------------------------------------------------------------------
// Robot control state machine (code under test)

enum class FsmState {
  WaitRequest,
  PickUp,
  HoldOut,
  SignalHuman,
  WaitReady,
  Sense,
  Decide,
  Release,
  Discard,
  ReportComplete,
  TimedOut,
  End,
};

std::string_view to_string(FsmState s);

/// Instrumentation point ids: states, transitions and decision branches.
const std::vector<std::string>& instrumentation_universe();
std::string_view instrumentation_version();
std::size_t point_index(std::string_view id);  // throws std::out_of_range

enum class EventKind {
  stimulus,
  voice_heard,
  voice_dropped,
  transition,
  attempt,
  gpl,
  signal,
  release,
  discard,
  gripper,
  proximity,  // hand-to-gripper distance sampled at each close onset
  speed,
  end,
};

std::string_view to_string(EventKind k);
EventKind event_kind_from_string(std::string_view s);

struct SimEvent {
  std::int64_t t_ms = 0;
  EventKind kind = EventKind::end;
  int attempt = 0;
  std::string label;   // channel, state, command, reason, gripper action
  std::string detail;  // stimulus value, destination state
  int point = -1;      // instrumentation point (transitions) or action index (stimuli)
  GplReading gpl;
  Joints speed{};      // |commanded joint velocity|, rad/s
  double value = 0.0;  // distance for gripper/proximity events

  friend bool operator==(const SimEvent&, const SimEvent&) = default;
};

struct SimTrace {
  std::string test_id;
  std::vector<SimEvent> events;
  friend bool operator==(const SimTrace&, const SimTrace&) = default;
};

struct TickInputs {
  std::optional<VoiceCommand> heard;
  bool voice_dropped = false;
  std::optional<GplReading> gpl;
  bool hand_tracked = true;
};

struct RobotFsm {
  FsmState state = FsmState::WaitRequest;
  int attempt = 0;  // completed handover attempts
  std::int64_t entered_ms = 0;
  int phase = 0;
  std::int64_t phase_ms = 0;
  std::optional<JointPath> motion;
  std::int64_t motion_start_ms = 0;
  bool startup = true;
  GplReading last_reading;
  std::vector<std::uint32_t> hits;  // per instrumentation point

  /// The driver should take a sensor reading this tick.
  bool wants_reading(std::int64_t now_ms, const ScenarioConfig& config) const;
};

RobotFsm initial_fsm(const ScenarioConfig& config);

/// Advances the controller by one tick at world.sim_time_ms. Robot-side world
/// fields (joints, gripper, leg) are updated in place; events are appended.
void fsm_tick(RobotFsm& fsm, WorldState& world, const TickInputs& inputs,
              const ScenarioConfig& config, std::vector<SimEvent>& out);

// ---------------------------------------------------------------------------
// Test execution

struct SimResult {
  SimTrace trace;
  std::vector<std::uint32_t> hits;
  FsmState final_state = FsmState::WaitRequest;
};

/// Checks stimulus values; throws MalformedTest.
void validate_test(const ConcreteTest& test);

SimResult run_test(const ConcreteTest& test, const ScenarioConfig& config, std::uint64_t seed);

// ---------------------------------------------------------------------------
// File formats (JSON)

std::string test_to_json(const ConcreteTest& test);
ConcreteTest test_from_json(const std::string& text);  // throws MalformedTest / UnknownChannel
std::string config_to_json(const ScenarioConfig& config);
ScenarioConfig config_from_json(const std::string& text);  // missing keys keep defaults
std::string trace_to_jsonl(const SimTrace& trace);
SimTrace trace_from_jsonl(const std::string& text);

}  // namespace bditb::scenario
