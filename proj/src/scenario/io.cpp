#include <sstream>

#include <json.hpp>

#include "bditb/scenario.hpp"

namespace bditb::scenario {

using nlohmann::json;

namespace {

json vec(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec(const json& j) {
  if (!j.is_array() || j.size() != 3) throw MalformedTest("expected a 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json joints(const Joints& q) { return json::array({q[0], q[1], q[2]}); }

Joints joints(const json& j) {
  if (!j.is_array() || j.size() != 3) throw ConfigError("expected 3 joint values");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

VoiceCommand voice_from_string(const std::string& s) {
  if (s == "request-leg") return VoiceCommand::request_leg;
  if (s == "ready") return VoiceCommand::ready;
  throw MalformedTest("unknown voice command '" + s + "'");
}

template <typename T>
void read(const json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

void read_vec(const json& j, const char* key, Vec3& field) {
  if (j.contains(key)) field = vec(j.at(key));
}

void read_joints(const json& j, const char* key, Joints& field) {
  if (j.contains(key)) field = joints(j.at(key));
}

}  // namespace

std::string_view to_string(Mutant m) {
  switch (m) {
    case Mutant::none: return "none";
    case Mutant::unconditional_release: return "unconditional-release";
    case Mutant::cap_disabled: return "cap-disabled";
    case Mutant::late_release: return "late-release";
    case Mutant::regrasp: return "regrasp";
  }
  return "?";
}

Mutant mutant_from_string(std::string_view s) {
  for (auto m : {Mutant::none, Mutant::unconditional_release, Mutant::cap_disabled,
                 Mutant::late_release, Mutant::regrasp}) {
    if (to_string(m) == s) return m;
  }
  throw ConfigError("unknown mutant '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------

std::string test_to_json(const ConcreteTest& test) {
  json stimuli = json::array();
  for (const auto& s : test.stimuli) {
    json j = {{"t_ms", s.t_ms}, {"channel", std::string(to_string(s.channel))}};
    switch (s.channel) {
      case Channel::hand: {
        const auto& w = std::get<HandWaypoint>(s.value);
        j["value"] = {{"target", vec(w.target)}, {"speed", w.speed}};
        break;
      }
      case Channel::gaze: j["value"] = vec(std::get<Vec3>(s.value)); break;
      case Channel::grip: j["value"] = std::get<double>(s.value); break;
      case Channel::voice: j["value"] = std::string(to_string(std::get<VoiceCommand>(s.value))); break;
    }
    if (s.action >= 0) j["action"] = s.action;
    stimuli.push_back(std::move(j));
  }
  json doc = {{"id", test.id}, {"seed", test.seed}, {"stimuli", std::move(stimuli)}};
  return doc.dump(1) + "\n";
}

ConcreteTest test_from_json(const std::string& text) {
  ConcreteTest test;
  try {
    const json doc = json::parse(text);
    test.id = doc.at("id").get<std::string>();
    test.seed = doc.value("seed", std::uint64_t{0});
    for (const auto& j : doc.at("stimuli")) {
      Stimulus s;
      s.t_ms = j.at("t_ms").get<std::int64_t>();
      s.channel = channel_from_string(j.at("channel").get<std::string>());
      const json& v = j.at("value");
      switch (s.channel) {
        case Channel::hand:
          s.value = HandWaypoint{vec(v.at("target")), v.at("speed").get<double>()};
          break;
        case Channel::gaze: s.value = vec(v); break;
        case Channel::grip: s.value = v.get<double>(); break;
        case Channel::voice: s.value = voice_from_string(v.get<std::string>()); break;
      }
      s.action = j.value("action", -1);
      test.stimuli.push_back(std::move(s));
    }
  } catch (const json::exception& e) {
    throw MalformedTest(std::string("concrete test JSON: ") + e.what());
  }
  validate_test(test);
  return test;
}

// ---------------------------------------------------------------------------

std::string config_to_json(const ScenarioConfig& c) {
  const auto& g = c.geometry;
  const auto& p = c.poses;
  const auto& s = c.sensors;
  const auto& t = c.timeouts;
  const auto& r = c.timing;
  json doc = {
      {"tick_ms", c.tick_ms},
      {"max_test_ms", c.max_test_ms},
      {"speed_cap", c.speed_cap},
      {"uncapped_speed", c.uncapped_speed},
      {"proximity_threshold_m", c.proximity_threshold_m},
      {"mutant", std::string(to_string(c.mutant))},
      {"geometry",
       {{"head", vec(g.head)},
        {"hand_rest", vec(g.hand_rest)},
        {"hand_away", vec(g.hand_away)},
        {"leg_offset", vec(g.leg_offset)},
        {"base_height", g.base_height},
        {"upper_arm", g.upper_arm},
        {"forearm", g.forearm}}},
      {"poses",
       {{"start", joints(p.start)},
        {"home", joints(p.home)},
        {"supply", joints(p.supply)},
        {"holdout", joints(p.holdout)}}},
      {"sensors",
       {{"gaze_threshold_deg", s.gaze_threshold_deg},
        {"location_threshold_m", s.location_threshold_m},
        {"pressure_low_n", s.pressure_low_n},
        {"pressure_high_n", s.pressure_high_n},
        {"tracking_range_m", s.tracking_range_m},
        {"p_gaze", s.p_gaze},
        {"p_loc", s.p_loc},
        {"p_press", s.p_press},
        {"p_voice", s.p_voice}}},
      {"timeouts",
       {{"wait_request_ms", t.wait_request_ms},
        {"wait_ready_ms", t.wait_ready_ms},
        {"sense_ms", t.sense_ms},
        {"decide_ms", t.decide_ms},
        {"table_ms", t.table_ms}}},
      {"timing",
       {{"signal_latency_ms", r.signal_latency_ms},
        {"sense_window_ms", r.sense_window_ms},
        {"decision_latency_ms", r.decision_latency_ms},
        {"release_latency_ms", r.release_latency_ms},
        {"close_delay_ms", r.close_delay_ms}}},
  };
  return doc.dump(2) + "\n";
}

ScenarioConfig config_from_json(const std::string& text) {
  ScenarioConfig c;
  try {
    const json doc = json::parse(text);
    read(doc, "tick_ms", c.tick_ms);
    read(doc, "max_test_ms", c.max_test_ms);
    read(doc, "speed_cap", c.speed_cap);
    read(doc, "uncapped_speed", c.uncapped_speed);
    read(doc, "proximity_threshold_m", c.proximity_threshold_m);
    if (doc.contains("mutant")) c.mutant = mutant_from_string(doc["mutant"].get<std::string>());
    if (doc.contains("geometry")) {
      const json& g = doc["geometry"];
      read_vec(g, "head", c.geometry.head);
      read_vec(g, "hand_rest", c.geometry.hand_rest);
      read_vec(g, "hand_away", c.geometry.hand_away);
      read_vec(g, "leg_offset", c.geometry.leg_offset);
      read(g, "base_height", c.geometry.base_height);
      read(g, "upper_arm", c.geometry.upper_arm);
      read(g, "forearm", c.geometry.forearm);
    }
    if (doc.contains("poses")) {
      const json& p = doc["poses"];
      read_joints(p, "start", c.poses.start);
      read_joints(p, "home", c.poses.home);
      read_joints(p, "supply", c.poses.supply);
      read_joints(p, "holdout", c.poses.holdout);
    }
    if (doc.contains("sensors")) {
      const json& s = doc["sensors"];
      read(s, "gaze_threshold_deg", c.sensors.gaze_threshold_deg);
      read(s, "location_threshold_m", c.sensors.location_threshold_m);
      read(s, "pressure_low_n", c.sensors.pressure_low_n);
      read(s, "pressure_high_n", c.sensors.pressure_high_n);
      read(s, "tracking_range_m", c.sensors.tracking_range_m);
      read(s, "p_gaze", c.sensors.p_gaze);
      read(s, "p_loc", c.sensors.p_loc);
      read(s, "p_press", c.sensors.p_press);
      read(s, "p_voice", c.sensors.p_voice);
    }
    if (doc.contains("timeouts")) {
      const json& t = doc["timeouts"];
      read(t, "wait_request_ms", c.timeouts.wait_request_ms);
      read(t, "wait_ready_ms", c.timeouts.wait_ready_ms);
      read(t, "sense_ms", c.timeouts.sense_ms);
      read(t, "decide_ms", c.timeouts.decide_ms);
      read(t, "table_ms", c.timeouts.table_ms);
    }
    if (doc.contains("timing")) {
      const json& r = doc["timing"];
      read(r, "signal_latency_ms", c.timing.signal_latency_ms);
      read(r, "sense_window_ms", c.timing.sense_window_ms);
      read(r, "decision_latency_ms", c.timing.decision_latency_ms);
      read(r, "release_latency_ms", c.timing.release_latency_ms);
      read(r, "close_delay_ms", c.timing.close_delay_ms);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario config JSON: ") + e.what());
  }
  validate(c);
  return c;
}

// ---------------------------------------------------------------------------

std::string trace_to_jsonl(const SimTrace& trace) {
  std::ostringstream out;
  out << json({{"schema", "bditb.simtrace"}, {"version", 1}, {"test_id", trace.test_id}}).dump()
      << '\n';
  const SimEvent blank;
  for (const auto& e : trace.events) {
    json j = {{"t", e.t_ms}, {"kind", std::string(to_string(e.kind))}};
    if (e.attempt != blank.attempt) j["attempt"] = e.attempt;
    if (!e.label.empty()) j["label"] = e.label;
    if (!e.detail.empty()) j["detail"] = e.detail;
    if (e.point != blank.point) j["point"] = e.point;
    if (e.gpl != blank.gpl) j["gpl"] = e.gpl.to_string();
    if (e.speed != blank.speed) j["speed"] = joints(e.speed);
    if (e.value != blank.value) j["value"] = e.value;
    out << j.dump() << '\n';
  }
  return out.str();
}

SimTrace trace_from_jsonl(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  SimTrace trace;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    if (!header) {
      if (j.value("schema", "") != "bditb.simtrace" || j.value("version", 0) != 1) {
        throw std::runtime_error("unsupported sim trace schema");
      }
      trace.test_id = j.at("test_id").get<std::string>();
      header = true;
      continue;
    }
    SimEvent e;
    e.t_ms = j.at("t").get<std::int64_t>();
    e.kind = event_kind_from_string(j.at("kind").get<std::string>());
    read(j, "attempt", e.attempt);
    read(j, "label", e.label);
    read(j, "detail", e.detail);
    read(j, "point", e.point);
    if (j.contains("gpl")) {
      const auto s = j["gpl"].get<std::string>();
      if (s.size() != 3) throw std::runtime_error("bad gpl field '" + s + "'");
      auto r = [](char ch) { return ch == '1' ? Reading::ok : Reading::notok; };
      e.gpl = {r(s[0]), r(s[1]), r(s[2])};
    }
    if (j.contains("speed")) e.speed = joints(j["speed"]);
    read(j, "value", e.value);
    trace.events.push_back(std::move(e));
  }
  if (!header) throw std::runtime_error("empty sim trace");
  return trace;
}

}  // namespace bditb::scenario
