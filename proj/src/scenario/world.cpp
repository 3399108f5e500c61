#include <algorithm>
#include <cmath>
#include <numbers>

#include "bditb/scenario.hpp"

namespace bditb::scenario {

double angle_between(const Vec3& a, const Vec3& b) {
  const double c = a.dot(b) / (a.norm() * b.norm());
  return std::acos(std::clamp(c, -1.0, 1.0));
}

Vec3 gripper_position(const Joints& q, const Geometry& g) {
  const double reach = g.upper_arm * std::cos(q[1]) + g.forearm * std::cos(q[1] + q[2]);
  const double height = g.base_height + g.upper_arm * std::sin(q[1]) +
                        g.forearm * std::sin(q[1] + q[2]);
  return {reach * std::cos(q[0]), reach * std::sin(q[0]), height};
}

Vec3 holdout_leg_position(const ScenarioConfig& config) {
  return gripper_position(config.poses.holdout, config.geometry) + config.geometry.leg_offset;
}

void validate(const ScenarioConfig& c) {
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  const auto& s = c.sensors;
  if (!prob(s.p_gaze) || !prob(s.p_loc) || !prob(s.p_press) || !prob(s.p_voice)) {
    throw ConfigError("error probabilities must lie in [0, 1]");
  }
  if (!(s.gaze_threshold_deg > 0) || !(s.location_threshold_m > 0) || !(s.tracking_range_m > 0)) {
    throw ConfigError("sensor thresholds must be positive");
  }
  if (!(s.pressure_low_n < s.pressure_high_n)) throw ConfigError("empty pressure band");
  if (c.tick_ms <= 0 || c.max_test_ms <= 0) throw ConfigError("tick and test length must be positive");
  if (!(c.speed_cap > 0) || !(c.uncapped_speed > 0)) throw ConfigError("speed caps must be positive");
  const auto& t = c.timeouts;
  if (t.wait_request_ms <= 0 || t.wait_ready_ms <= 0 || t.sense_ms <= 0 || t.decide_ms <= 0 ||
      t.table_ms <= 0) {
    throw ConfigError("timeouts must be positive");
  }
}

WorldState initial_world(const ScenarioConfig& config) {
  WorldState w;
  w.hand_pos = config.geometry.hand_rest;
  w.hand_target = w.hand_pos;
  w.joints = config.poses.start;
  w.leg_holder = LegHolder::supply;
  w.leg_pos = gripper_position(config.poses.supply, config.geometry) + config.geometry.leg_offset;
  return w;
}

std::string_view to_string(Channel c) {
  switch (c) {
    case Channel::hand: return "hand";
    case Channel::gaze: return "gaze";
    case Channel::grip: return "grip";
    case Channel::voice: return "voice";
  }
  return "?";
}

Channel channel_from_string(std::string_view s) {
  if (s == "hand") return Channel::hand;
  if (s == "gaze") return Channel::gaze;
  if (s == "grip") return Channel::grip;
  if (s == "voice") return Channel::voice;
  throw UnknownChannel(std::string(s));
}

std::string_view to_string(VoiceCommand v) {
  return v == VoiceCommand::request_leg ? "request-leg" : "ready";
}

void apply_stimulus(WorldState& world, const Stimulus& s) {
  if (s.t_ms < world.sim_time_ms) throw StaleTimestamp(s.t_ms, world.sim_time_ms);
  world.sim_time_ms = s.t_ms;
  switch (s.channel) {
    case Channel::hand: {
      const auto& wp = std::get<HandWaypoint>(s.value);
      world.hand_target = wp.target;
      world.hand_speed = wp.speed;
      break;
    }
    case Channel::gaze:
      world.gaze_dir = std::get<Vec3>(s.value).normalized();
      break;
    case Channel::grip:
      world.grip_force = std::get<double>(s.value);
      break;
    case Channel::voice:
      world.voice = std::get<VoiceCommand>(s.value);
      break;
  }
}

void advance_world(WorldState& world, std::int64_t dt_ms) {
  const Vec3 to_go = world.hand_target - world.hand_pos;
  const double dist = to_go.norm();
  const double step = world.hand_speed * static_cast<double>(dt_ms) / 1000.0;
  if (dist <= step || dist == 0.0) {
    world.hand_pos = world.hand_target;
  } else {
    world.hand_pos = world.hand_pos + to_go * (step / dist);
  }
  if (world.leg_holder == LegHolder::human) world.leg_pos = world.hand_pos + world.leg_in_hand;
  world.sim_time_ms += dt_ms;
}

// ---------------------------------------------------------------------------

std::string GplReading::to_string() const {
  auto c = [](Reading r) { return r == Reading::ok ? '1' : '0'; };
  return {c(g), c(p), c(l)};
}

GplReading threshold_gpl(const WorldState& w, const ScenarioConfig& config) {
  const auto& s = config.sensors;
  const double threshold = s.gaze_threshold_deg * std::numbers::pi / 180.0;
  GplReading r;
  const Vec3 to_leg = w.leg_pos - config.geometry.head;
  r.g = angle_between(w.gaze_dir, to_leg) < threshold ? Reading::ok : Reading::notok;
  r.p = (w.grip_force >= s.pressure_low_n && w.grip_force <= s.pressure_high_n) ? Reading::ok
                                                                                 : Reading::notok;
  r.l = (w.hand_pos - w.leg_pos).norm() < s.location_threshold_m ? Reading::ok : Reading::notok;
  return r;
}

GplReading sense_gpl(const WorldState& w, const ScenarioConfig& config, Rng& rng) {
  GplReading r = threshold_gpl(w, config);
  const auto& s = config.sensors;
  // draw unconditionally so the stream position is independent of the pose
  const bool flip_g = rng.bernoulli(s.p_gaze);
  const bool flip_p = rng.bernoulli(s.p_press);
  const bool flip_l = rng.bernoulli(s.p_loc);
  if (flip_g) r.g = Reading::notok;
  if (flip_p) r.p = Reading::notok;
  if (flip_l) r.l = Reading::notok;
  return r;
}

bool hand_tracked(const WorldState& w, const ScenarioConfig& config) {
  return (w.hand_pos - w.leg_pos).norm() <= config.sensors.tracking_range_m;
}

// ---------------------------------------------------------------------------

Joints JointPath::at(std::int64_t t) const {
  if (points.empty()) return {};
  if (t <= points.front().t_ms) return points.front().q;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const auto& a = points[i - 1];
    const auto& b = points[i];
    if (t <= b.t_ms) {
      const double u = static_cast<double>(t - a.t_ms) / static_cast<double>(b.t_ms - a.t_ms);
      Joints q;
      for (std::size_t j = 0; j < q.size(); ++j) q[j] = a.q[j] + (b.q[j] - a.q[j]) * u;
      return q;
    }
  }
  return points.back().q;
}

Joints JointPath::velocity(std::int64_t t) const {
  for (std::size_t i = 1; i < points.size(); ++i) {
    const auto& a = points[i - 1];
    const auto& b = points[i];
    if (t >= a.t_ms && t < b.t_ms) {
      const double secs = static_cast<double>(b.t_ms - a.t_ms) / 1000.0;
      Joints v;
      for (std::size_t j = 0; j < v.size(); ++j) v[j] = std::abs(b.q[j] - a.q[j]) / secs;
      return v;
    }
  }
  return {};
}

JointPath plan_trajectory(const Joints& from, const Joints& to, double speed_cap) {
  JointPath path;
  path.points.push_back({0, from});
  double max_delta = 0.0;
  for (std::size_t j = 0; j < from.size(); ++j) {
    max_delta = std::max(max_delta, std::abs(to[j] - from[j]));
  }
  if (max_delta == 0.0) return path;
  auto ms = static_cast<std::int64_t>(std::ceil(max_delta / speed_cap * 1000.0));
  ms = std::max<std::int64_t>(ms, 1);
  // ceil in floating point can land one ulp short of the cap
  while (max_delta / (static_cast<double>(ms) / 1000.0) > speed_cap) ++ms;
  path.points.push_back({ms, to});
  return path;
}

}  // namespace bditb::scenario
