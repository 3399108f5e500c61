#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "bditb/scenario.hpp"

namespace bditb::scenario {

namespace {

constexpr std::string_view kStateNames[] = {
    "WaitRequest", "PickUp", "HoldOut",        "SignalHuman", "WaitReady", "Sense",
    "Decide",      "Release", "Discard", "ReportComplete", "TimedOut",    "End",
};

std::vector<std::string> build_universe() {
  std::vector<std::string> u;
  for (auto s : kStateNames) u.push_back("state:" + std::string(s));
  for (const char* t : {
           "WaitRequest->PickUp", "WaitRequest->TimedOut", "PickUp->HoldOut",
           "HoldOut->SignalHuman", "SignalHuman->WaitReady", "WaitReady->Sense",
           "WaitReady->Discard", "Sense->Decide", "Sense->Discard", "Decide->Release",
           "Decide->Discard", "Release->WaitRequest", "Release->ReportComplete", "Release->End",
           "Discard->WaitRequest", "Discard->End", "ReportComplete->End", "TimedOut->End"}) {
    u.push_back(std::string("tr:") + t);
  }
  for (const char* b : {"startup:move_home", "voice:request_heard", "voice:ready_heard",
                        "voice:ignored", "voice:dropped", "pickup:grasp", "sense:await_window",
                        "sense:hand_untracked", "decide:gpl_all_ok", "decide:gpl_not_ok",
                        "release:close_gripper", "discard:drop_leg", "attempts:limit_reached",
                        "table:complete_in_time", "table:complete_late"}) {
    u.push_back(std::string("br:") + b);
  }
  return u;
}

const std::unordered_map<std::string_view, std::size_t>& index_map() {
  static const auto map = [] {
    std::unordered_map<std::string_view, std::size_t> m;
    const auto& u = instrumentation_universe();
    for (std::size_t i = 0; i < u.size(); ++i) m.emplace(u[i], i);
    return m;
  }();
  return map;
}

bool in_attempt(FsmState s) {
  switch (s) {
    case FsmState::PickUp:
    case FsmState::HoldOut:
    case FsmState::SignalHuman:
    case FsmState::WaitReady:
    case FsmState::Sense:
    case FsmState::Decide:
    case FsmState::Release:
    case FsmState::Discard:
      return true;
    default:
      return false;
  }
}

struct Ctx {
  RobotFsm& fsm;
  WorldState& world;
  const ScenarioConfig& config;
  std::vector<SimEvent>& out;

  std::int64_t now() const { return world.sim_time_ms; }
  int attempt_tag() const { return fsm.attempt + (in_attempt(fsm.state) ? 1 : 0); }

  void hit(std::string_view point) { ++fsm.hits[point_index(point)]; }

  SimEvent& emit(EventKind kind, std::string label = {}, std::string detail = {}) {
    SimEvent e;
    e.t_ms = now();
    e.kind = kind;
    e.attempt = attempt_tag();
    e.label = std::move(label);
    e.detail = std::move(detail);
    out.push_back(std::move(e));
    return out.back();
  }

  void enter(FsmState to) {
    const std::string from_name(to_string(fsm.state));
    const std::string to_name(to_string(to));
    const std::string tr = "tr:" + from_name + "->" + to_name;
    hit(tr);
    SimEvent& e = emit(EventKind::transition, from_name, to_name);
    e.point = static_cast<int>(point_index(tr));
    fsm.state = to;
    fsm.entered_ms = now();
    fsm.phase = 0;
    fsm.phase_ms = now();
    fsm.motion.reset();
    hit("state:" + to_name);
  }

  std::int64_t in_state() const { return now() - fsm.entered_ms; }
  std::int64_t in_phase() const { return now() - fsm.phase_ms; }

  void next_phase() {
    ++fsm.phase;
    fsm.phase_ms = now();
  }

  void start_motion(const Joints& target) {
    fsm.motion = plan_trajectory(world.joints, target, config.effective_speed_cap());
    fsm.motion_start_ms = now();
  }

  // Advances the active motion; true once it has finished (or none was active).
  bool motion_done() {
    if (!fsm.motion) return true;
    const std::int64_t t = now() - fsm.motion_start_ms;
    world.joints = fsm.motion->at(t);
    if (t < fsm.motion->duration_ms()) {
      SimEvent& e = emit(EventKind::speed, "joints");
      e.speed = fsm.motion->velocity(t);
      return false;
    }
    fsm.motion.reset();
    return true;
  }

  Vec3 gripper() const { return gripper_position(world.joints, config.geometry); }

  void close_gripper(const Vec3& at, Gripper result) {
    world.gripper = result;
    const double d = (world.hand_pos - at).norm();
    emit(EventKind::gripper, "close").value = d;
    emit(EventKind::proximity, "hand-gripper").value = d;
  }

  void open_gripper() {
    world.gripper = Gripper::open;
    emit(EventKind::gripper, "open").value = (world.hand_pos - gripper()).norm();
  }

  void finish_attempt(bool released) {
    const int done = fsm.attempt + 1;
    const bool table_done = world.legs_delivered >= 4;
    emit(EventKind::attempt, "end", released ? "released" : "discarded");
    FsmState next = FsmState::WaitRequest;
    if (released && table_done) {
      if (now() <= config.timeouts.table_ms) {
        hit("br:table:complete_in_time");
        next = FsmState::ReportComplete;
      } else {
        hit("br:table:complete_late");
        next = FsmState::End;
      }
    } else if (done >= 4) {
      hit("br:attempts:limit_reached");
      next = FsmState::End;
    }
    enter(next);
    fsm.attempt = done;
  }
};

}  // namespace

std::string_view to_string(FsmState s) { return kStateNames[static_cast<std::size_t>(s)]; }

const std::vector<std::string>& instrumentation_universe() {
  static const std::vector<std::string> u = build_universe();
  return u;
}

std::string_view instrumentation_version() { return "fsm-v1"; }

std::size_t point_index(std::string_view id) {
  const auto& m = index_map();
  auto it = m.find(id);
  if (it == m.end()) throw std::out_of_range("unknown instrumentation point " + std::string(id));
  return it->second;
}

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::stimulus: return "stimulus";
    case EventKind::voice_heard: return "voice_heard";
    case EventKind::voice_dropped: return "voice_dropped";
    case EventKind::transition: return "transition";
    case EventKind::attempt: return "attempt";
    case EventKind::gpl: return "gpl";
    case EventKind::signal: return "signal";
    case EventKind::release: return "release";
    case EventKind::discard: return "discard";
    case EventKind::gripper: return "gripper";
    case EventKind::proximity: return "proximity";
    case EventKind::speed: return "speed";
    case EventKind::end: return "end";
  }
  return "?";
}

EventKind event_kind_from_string(std::string_view s) {
  for (int k = 0; k <= static_cast<int>(EventKind::end); ++k) {
    if (to_string(static_cast<EventKind>(k)) == s) return static_cast<EventKind>(k);
  }
  throw std::invalid_argument("unknown event kind '" + std::string(s) + "'");
}

bool RobotFsm::wants_reading(std::int64_t now_ms, const ScenarioConfig& config) const {
  return state == FsmState::Sense && phase == 0 &&
         now_ms - entered_ms >= config.timing.sense_window_ms;
}

RobotFsm initial_fsm(const ScenarioConfig& /*config*/) {
  RobotFsm fsm;
  fsm.hits.assign(instrumentation_universe().size(), 0);
  fsm.hits[point_index("state:WaitRequest")] = 1;
  return fsm;
}

void fsm_tick(RobotFsm& fsm, WorldState& world, const TickInputs& in,
              const ScenarioConfig& config, std::vector<SimEvent>& out) {
  Ctx c{fsm, world, config, out};
  if (in.voice_dropped) c.hit("br:voice:dropped");

  const bool request = in.heard == VoiceCommand::request_leg;
  const bool ready = in.heard == VoiceCommand::ready;
  const bool consumed = (request && fsm.state == FsmState::WaitRequest) ||
                        (ready && fsm.state == FsmState::WaitReady);
  if (in.heard && !consumed) c.hit("br:voice:ignored");

  switch (fsm.state) {
    case FsmState::WaitRequest: {
      if (fsm.startup && !fsm.motion) {
        c.hit("br:startup:move_home");
        c.start_motion(config.poses.home);
      }
      if (fsm.startup && c.motion_done()) fsm.startup = false;
      if (request) {
        c.hit("br:voice:request_heard");
        fsm.startup = false;
        c.enter(FsmState::PickUp);
        c.emit(EventKind::attempt, "start");
        c.start_motion(config.poses.supply);
        c.motion_done();
      } else if (c.in_state() >= config.timeouts.wait_request_ms) {
        c.enter(FsmState::TimedOut);
      }
      break;
    }
    case FsmState::PickUp: {
      if (!c.motion_done()) break;
      if (fsm.phase == 0) {
        c.hit("br:pickup:grasp");
        c.close_gripper(c.gripper(), Gripper::holding_leg);
        world.leg_holder = LegHolder::robot;
        c.next_phase();
        c.start_motion(config.poses.holdout);
        c.motion_done();
      } else {
        c.enter(FsmState::HoldOut);
      }
      break;
    }
    case FsmState::HoldOut:
      c.enter(FsmState::SignalHuman);
      break;
    case FsmState::SignalHuman:
      if (c.in_state() >= config.timing.signal_latency_ms) {
        c.emit(EventKind::signal, "ready?");
        c.enter(FsmState::WaitReady);
      }
      break;
    case FsmState::WaitReady:
      if (ready) {
        c.hit("br:voice:ready_heard");
        c.enter(FsmState::Sense);
        c.hit("br:sense:await_window");
      } else if (c.in_state() >= config.timeouts.wait_ready_ms) {
        c.emit(EventKind::discard, "ready_timeout");
        c.enter(FsmState::Discard);
        c.start_motion(config.poses.supply);
        c.motion_done();
      }
      break;
    case FsmState::Sense:
      if (in.gpl) {
        fsm.last_reading = *in.gpl;
        c.emit(EventKind::gpl, in.gpl->to_string()).gpl = *in.gpl;
        c.enter(FsmState::Decide);
      } else if (fsm.wants_reading(c.now(), config) && !in.hand_tracked) {
        c.hit("br:sense:hand_untracked");
      }
      if (fsm.state == FsmState::Sense && c.in_state() >= config.timeouts.sense_ms) {
        c.emit(EventKind::discard, "sense_timeout");
        c.enter(FsmState::Discard);
        c.start_motion(config.poses.supply);
        c.motion_done();
      }
      break;
    case FsmState::Decide:
      if (c.in_state() >= config.timing.decision_latency_ms) {
        const bool ok = fsm.last_reading.all_ok();
        c.hit(ok ? "br:decide:gpl_all_ok" : "br:decide:gpl_not_ok");
        if (ok || config.mutant == Mutant::unconditional_release) {
          c.enter(FsmState::Release);
        } else {
          c.emit(EventKind::discard, "gpl_not_ok");
          c.enter(FsmState::Discard);
          c.start_motion(config.poses.supply);
          c.motion_done();
        }
      }
      break;
    case FsmState::Release:
      if (fsm.phase == 0) {
        if (c.in_state() >= config.effective_release_latency_ms()) {
          c.emit(EventKind::release, "leg");
          c.open_gripper();
          world.leg_holder = LegHolder::human;
          world.leg_in_hand = world.leg_pos - world.hand_pos;
          ++world.legs_delivered;
          c.next_phase();
        }
      } else if (fsm.phase == 1) {
        const bool regrasp = config.mutant == Mutant::regrasp;
        if (regrasp || c.in_phase() >= config.timing.close_delay_ms) {
          c.hit("br:release:close_gripper");
          c.close_gripper(regrasp ? world.leg_pos : c.gripper(), Gripper::closed);
          c.next_phase();
          c.start_motion(config.poses.home);
          c.motion_done();
        }
      } else if (c.motion_done()) {
        c.finish_attempt(true);
      }
      break;
    case FsmState::Discard:
      if (!c.motion_done()) break;
      if (fsm.phase == 0) {
        c.hit("br:discard:drop_leg");
        c.open_gripper();
        world.leg_holder = LegHolder::supply;
        c.next_phase();
        c.start_motion(config.poses.home);
        c.motion_done();
      } else {
        c.finish_attempt(false);
      }
      break;
    case FsmState::ReportComplete:
    case FsmState::TimedOut:
      c.enter(FsmState::End);
      break;
    case FsmState::End:
      break;
  }

  if (world.gripper == Gripper::holding_leg) {
    world.leg_pos = c.gripper() + config.geometry.leg_offset;
  }
}

}  // namespace bditb::scenario
