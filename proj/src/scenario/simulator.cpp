#include <cmath>
#include <sstream>

#include "bditb/scenario.hpp"

namespace bditb::scenario {

namespace {

bool finite(const Vec3& v) { return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z); }

std::string describe(const Stimulus& s) {
  std::ostringstream o;
  o.precision(6);
  switch (s.channel) {
    case Channel::hand: {
      const auto& w = std::get<HandWaypoint>(s.value);
      o << w.target.x << ',' << w.target.y << ',' << w.target.z << '@' << w.speed;
      break;
    }
    case Channel::gaze: {
      const auto& v = std::get<Vec3>(s.value);
      o << v.x << ',' << v.y << ',' << v.z;
      break;
    }
    case Channel::grip:
      o << std::get<double>(s.value);
      break;
    case Channel::voice:
      o << to_string(std::get<VoiceCommand>(s.value));
      break;
  }
  return o.str();
}

}  // namespace

void validate_test(const ConcreteTest& test) {
  std::int64_t last = 0;
  for (std::size_t i = 0; i < test.stimuli.size(); ++i) {
    const Stimulus& s = test.stimuli[i];
    const std::string where = test.id + " stimulus " + std::to_string(i);
    if (s.t_ms < last) throw MalformedTest(where + ": timestamps out of order");
    last = s.t_ms;
    bool ok = false;
    switch (s.channel) {
      case Channel::hand:
        if (const auto* w = std::get_if<HandWaypoint>(&s.value)) {
          ok = finite(w->target) && std::isfinite(w->speed) && w->speed >= 0.0;
        }
        break;
      case Channel::gaze:
        if (const auto* v = std::get_if<Vec3>(&s.value)) ok = finite(*v) && v->norm() > 0.0;
        break;
      case Channel::grip:
        if (const auto* f = std::get_if<double>(&s.value)) ok = std::isfinite(*f) && *f >= 0.0;
        break;
      case Channel::voice:
        ok = std::holds_alternative<VoiceCommand>(s.value);
        break;
    }
    if (!ok) throw MalformedTest(where + ": bad value for channel " + std::string(to_string(s.channel)));
  }
}

SimResult run_test(const ConcreteTest& test, const ScenarioConfig& config, std::uint64_t seed) {
  validate(config);
  validate_test(test);

  Rng sensor_rng(seed, 1);
  Rng voice_rng(seed, 2);
  WorldState world = initial_world(config);
  RobotFsm fsm = initial_fsm(config);
  SimResult result;
  result.trace.test_id = test.id;
  auto& events = result.trace.events;

  std::size_t next = 0;
  for (std::int64_t now = 0;; now += config.tick_ms) {
    // stimuli between ticks take effect on the following tick
    while (next < test.stimuli.size() && test.stimuli[next].t_ms <= now) {
      Stimulus s = test.stimuli[next++];
      s.t_ms = now;
      apply_stimulus(world, s);
      SimEvent e;
      e.t_ms = now;
      e.kind = EventKind::stimulus;
      e.point = s.action;
      e.label = std::string(to_string(s.channel));
      e.detail = describe(s);
      events.push_back(std::move(e));
    }

    TickInputs in;
    if (world.voice) {
      SimEvent e;
      e.t_ms = now;
      e.label = std::string(to_string(*world.voice));
      if (voice_rng.bernoulli(config.sensors.p_voice)) {
        e.kind = EventKind::voice_dropped;
        in.voice_dropped = true;
      } else {
        e.kind = EventKind::voice_heard;
        in.heard = world.voice;
      }
      events.push_back(std::move(e));
      world.voice.reset();
    }
    if (fsm.wants_reading(now, config)) {
      in.hand_tracked = hand_tracked(world, config);
      if (in.hand_tracked) in.gpl = sense_gpl(world, config, sensor_rng);
    }

    fsm_tick(fsm, world, in, config, events);

    if (fsm.state == FsmState::End || now >= config.max_test_ms) {
      SimEvent e;
      e.t_ms = now;
      e.kind = EventKind::end;
      e.attempt = fsm.attempt;
      e.label = fsm.state == FsmState::End ? "fsm_end" : "time_limit";
      e.detail = std::string(to_string(fsm.state));
      events.push_back(std::move(e));
      break;
    }
    advance_world(world, config.tick_ms);
  }

  result.hits = std::move(fsm.hits);
  result.final_state = fsm.state;
  return result;
}

}  // namespace bditb::scenario
