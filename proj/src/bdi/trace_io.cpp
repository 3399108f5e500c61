#include <sstream>

#include <json.hpp>

#include "bditb/bdi.hpp"

namespace bditb::bdi {

using nlohmann::json;

namespace {

TriggerEvent parse_trigger(const std::string& text) {
  auto prog = agentlang::parse_agent(text + " : true <- true.");
  if (prog.plans.size() != 1) throw Error("bad trigger in trace: " + text);
  return prog.plans[0].trigger;
}

BodyStep parse_step(const std::string& text) {
  auto prog = agentlang::parse_agent("+!x : true <- " + text + ".");
  if (prog.plans.size() != 1 || prog.plans[0].body.size() != 1) {
    throw Error("bad body step in trace: " + text);
  }
  return prog.plans[0].body[0];
}

}  // namespace

std::string trace_to_jsonl(const MasTrace& trace) {
  std::ostringstream out;
  json header = {{"schema", "bditb.mastrace"},
                 {"version", kTraceSchemaVersion},
                 {"agents", trace.agents}};
  out << header.dump() << '\n';
  for (const auto& e : trace.entries) {
    json j = {{"step", e.step}, {"agent", e.agent}, {"trigger", e.trigger.to_string()}};
    j["plan"] = e.fired_plan ? json(*e.fired_plan) : json(nullptr);
    json actions = json::array();
    for (const auto& s : e.emitted) actions.push_back(s.to_string());
    j["actions"] = std::move(actions);
    out << j.dump() << '\n';
  }
  json footer = {{"termination", trace.termination == Termination::quiescent
                                     ? "quiescent"
                                     : "budget-exhausted"},
                 {"rounds", trace.rounds}};
  out << footer.dump() << '\n';
  return out.str();
}

MasTrace trace_from_jsonl(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  MasTrace trace;
  bool have_header = false;
  bool have_footer = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    if (!have_header) {
      if (j.value("schema", "") != "bditb.mastrace" || j.value("version", 0) != kTraceSchemaVersion) {
        throw Error("unsupported MAS trace schema");
      }
      trace.agents = j.at("agents").get<std::vector<std::string>>();
      have_header = true;
    } else if (j.contains("termination")) {
      trace.termination = j["termination"] == "quiescent" ? Termination::quiescent
                                                          : Termination::budget_exhausted;
      trace.rounds = j.at("rounds").get<std::uint64_t>();
      have_footer = true;
    } else {
      TraceEntry e;
      e.step = j.at("step").get<std::uint64_t>();
      e.agent = j.at("agent").get<std::string>();
      e.trigger = parse_trigger(j.at("trigger").get<std::string>());
      if (!j.at("plan").is_null()) e.fired_plan = j["plan"].get<std::size_t>();
      for (const auto& a : j.at("actions")) e.emitted.push_back(parse_step(a.get<std::string>()));
      trace.entries.push_back(std::move(e));
    }
  }
  if (!have_header || !have_footer) throw Error("truncated MAS trace");
  return trace;
}

}  // namespace bditb::bdi
