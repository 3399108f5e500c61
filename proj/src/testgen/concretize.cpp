#include <algorithm>
#include <cmath>
#include <numbers>

#include "bditb/testgen.hpp"

namespace bditb::testgen {

using scenario::Channel;
using scenario::HandWaypoint;
using scenario::Stimulus;
using scenario::Vec3;
using scenario::VoiceCommand;

namespace {

constexpr std::int64_t kSlackMs = 200;
constexpr std::int64_t kAwaitMinMs = 200;
constexpr std::int64_t kAwaitMaxMs = 1'000;
// Gap range once the robot is holding the leg out and the human still means to
// say ready this round; the whole setup has to fit the robot's ready window.
constexpr std::int64_t kSetupGapMaxMs = 1'500;
constexpr std::int64_t kReadyMarginMs = 1'000;
constexpr int kDirectionTries = 32;

// Expected robot-side durations, used to place human actions where the
// controller can react to them.
struct RobotTimeline {
  std::int64_t to_signal;        // request heard -> signal
  std::int64_t after_ready;      // ready heard -> back in WaitRequest
  std::int64_t after_no_ready;   // signal -> back in WaitRequest via timeout

  explicit RobotTimeline(const scenario::ScenarioConfig& c) {
    const double cap = c.effective_speed_cap();
    auto dur = [&](const scenario::Joints& a, const scenario::Joints& b) {
      return scenario::plan_trajectory(a, b, cap).duration_ms();
    };
    const auto& p = c.poses;
    const std::int64_t tick = c.tick_ms;
    const std::int64_t to_supply = std::max(dur(p.home, p.supply), dur(p.start, p.supply));
    to_signal = to_supply + dur(p.supply, p.holdout) + c.timing.signal_latency_ms + 4 * tick;
    const std::int64_t discard_motion = dur(p.holdout, p.supply) + dur(p.supply, p.home) + 3 * tick;
    const std::int64_t decided = c.timing.sense_window_ms + c.timing.decision_latency_ms + 2 * tick;
    const std::int64_t release = c.effective_release_latency_ms() + c.timing.close_delay_ms +
                                 dur(p.holdout, p.home) + 3 * tick;
    after_ready = decided + std::max(release, discard_motion);
    after_no_ready = c.timeouts.wait_ready_ms + discard_motion + tick;
  }
};

Vec3 random_unit(Rng& rng) {
  // uniform on the sphere
  const double z = rng.uniform(-1.0, 1.0);
  const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {r * std::cos(phi), r * std::sin(phi), z};
}

// Direction at `angle` from `axis` with uniform azimuth.
Vec3 cone_direction(const Vec3& axis, double angle, Rng& rng) {
  const Vec3 a = axis.normalized();
  const Vec3 helper = std::abs(a.z) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
  Vec3 u{a.y * helper.z - a.z * helper.y, a.z * helper.x - a.x * helper.z,
         a.x * helper.y - a.y * helper.x};
  u = u.normalized();
  const Vec3 v{a.y * u.z - a.z * u.y, a.z * u.x - a.x * u.z, a.x * u.y - a.y * u.x};
  const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return a * std::cos(angle) + (u * std::cos(phi) + v * std::sin(phi)) * std::sin(angle);
}

std::int64_t travel_ms(const Vec3& from, const Vec3& to, double speed) {
  return static_cast<std::int64_t>(std::ceil((to - from).norm() / speed * 1000.0));
}

}  // namespace

scenario::ConcreteTest concretize(const AbstractTestSequence& abstract, std::uint64_t seed,
                                  const scenario::ScenarioConfig& config, std::string id) {
  const RobotTimeline robot(config);
  const Vec3 leg = scenario::holdout_leg_position(config);
  const Vec3 gaze_axis = leg - config.geometry.head;
  const double threshold = config.sensors.gaze_threshold_deg * std::numbers::pi / 180.0;

  Rng rng(seed, 3);
  std::int64_t ready_deadline = -1;  // >= 0 while the human is setting up for ready
  auto gap = [&] {
    const std::int64_t hi = ready_deadline >= 0 ? kSetupGapMaxMs : kGapMaxMs;
    return kGapMinMs + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(hi - kGapMinMs + 1)));
  };
  auto gaze_bad = [&] {
    return cone_direction(gaze_axis, rng.uniform(2.0 * threshold, std::numbers::pi / 2.0), rng);
  };

  scenario::ConcreteTest test;
  test.id = id.empty() ? abstract.id : std::move(id);
  test.seed = seed;

  std::int64_t cursor = 0;       // completion time of the previous action
  std::int64_t robot_free = 0;   // robot expected back in WaitRequest
  std::optional<std::int64_t> signal_at;
  bool awaiting_ready = false;
  Vec3 hand = config.geometry.hand_rest;

  for (std::size_t i = 0; i < abstract.actions.size(); ++i) {
    const AbstractAction& a = abstract.actions[i];
    const int idx = static_cast<int>(i);
    auto emit = [&](std::int64_t t, Channel ch, scenario::StimulusValue v) {
      test.stimuli.push_back(Stimulus{t, ch, std::move(v), idx});
    };
    auto voice = [&](std::int64_t t, VoiceCommand cmd) {
      emit(t, Channel::voice, cmd);
      emit(t + kVoiceRepeatMs, Channel::voice, cmd);  // people repeat unanswered commands
    };
    auto move = [&](std::int64_t t, const Vec3& target, double speed) {
      emit(t, Channel::hand, HandWaypoint{target, speed});
      const std::int64_t done = t + travel_ms(hand, target, speed);
      hand = target;
      return done;
    };

    const std::string label = a.label();
    if (a.name == "request_leg") {
      ready_deadline = -1;
      const std::int64_t t = std::max(cursor, robot_free) + gap();
      voice(t, VoiceCommand::request_leg);
      const double speed = rng.uniform_left_open(kFastMin, kFastMax);
      cursor = move(t, config.geometry.hand_rest, speed);
      signal_at = t + kVoiceRepeatMs + robot.to_signal + kSlackMs;
      robot_free = *signal_at + robot.after_no_ready + kSlackMs;
      awaiting_ready = true;
    } else if (a.name == "await_robot_signal") {
      const std::int64_t wait =
          kAwaitMinMs + static_cast<std::int64_t>(rng.below(kAwaitMaxMs - kAwaitMinMs + 1));
      cursor = (signal_at ? std::max(cursor, *signal_at) : cursor) + wait;
      const bool ready_follows = std::any_of(
          abstract.actions.begin() + idx + 1, abstract.actions.end(),
          [&](const AbstractAction& b) { return b.round == a.round && b.name == "say_ready"; });
      if (awaiting_ready && signal_at && ready_follows) {
        ready_deadline = *signal_at + config.timeouts.wait_ready_ms - kReadyMarginMs;
      }
    } else if (label == "set_gaze(ok)") {
      cursor += gap();
      emit(cursor, Channel::gaze, cone_direction(gaze_axis, rng.uniform(0.0, threshold), rng));
    } else if (label == "set_gaze(bad)") {
      cursor += gap();
      emit(cursor, Channel::gaze, gaze_bad());
    } else if (label == "set_pressure(ok)") {
      cursor += gap();
      emit(cursor, Channel::grip,
           rng.uniform(config.sensors.pressure_low_n, config.sensors.pressure_high_n));
    } else if (label == "set_pressure(bad)") {
      cursor += gap();
      emit(cursor, Channel::grip, rng.uniform(0.0, kBadPressureMax));
    } else if (a.name == "move_hand" && a.args.size() == 2) {
      const bool close = a.args[0] == "close";
      const bool fast = a.args[1] == "fast";
      if ((!close && a.args[0] != "far") || (!fast && a.args[1] != "slow")) {
        throw UnregisteredAction(label);
      }
      const double dist = close ? rng.uniform(0.0, kCloseMax) : rng.uniform_left_open(kFarMin, kFarMax);
      const double speed =
          fast ? rng.uniform_left_open(kFastMin, kFastMax) : rng.uniform(kSlowMin, kSlowMax);
      const std::int64_t start = cursor + gap();
      Vec3 target = leg + random_unit(rng) * dist;
      if (ready_deadline >= 0) {
        // a slow long reach can outlast the ready window: redraw the direction
        std::int64_t later = 0;
        for (std::size_t j = i + 1; j < abstract.actions.size(); ++j) {
          if (abstract.actions[j].round != a.round) break;
          later += kSetupGapMaxMs;
          if (abstract.actions[j].name == "say_ready") break;
        }
        const std::int64_t budget = ready_deadline - start - later;
        Vec3 best = target;
        for (int k = 0; k < kDirectionTries && travel_ms(hand, target, speed) > budget; ++k) {
          target = leg + random_unit(rng) * dist;
          if (travel_ms(hand, target, speed) < travel_ms(hand, best, speed)) best = target;
        }
        if (travel_ms(hand, target, speed) > budget) target = best;
      }
      cursor = move(start, target, speed);
    } else if (a.name == "say_ready") {
      cursor += gap();
      voice(cursor, VoiceCommand::ready);
      if (awaiting_ready && signal_at && cursor >= *signal_at) {
        robot_free = cursor + kVoiceRepeatMs + robot.after_ready + kSlackMs;
        awaiting_ready = false;
      }
      ready_deadline = -1;
    } else if (a.name == "go_bored") {
      const std::int64_t t = cursor + gap();
      emit(t, Channel::gaze, gaze_bad());
      emit(t, Channel::grip, 0.0);
      cursor = move(t, config.geometry.hand_away, rng.uniform(kSlowMin, kSlowMax));
    } else if (a.name == "idle") {
      cursor += gap();
    } else {
      throw UnregisteredAction(label);
    }
  }

  std::stable_sort(test.stimuli.begin(), test.stimuli.end(),
                   [](const Stimulus& x, const Stimulus& y) { return x.t_ms < y.t_ms; });
  return test;
}

}  // namespace bditb::testgen
