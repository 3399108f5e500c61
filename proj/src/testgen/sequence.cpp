#include <algorithm>
#include <map>

#include "bditb/testgen.hpp"

namespace bditb::testgen {

const std::vector<std::string>& switch_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n{"never_request", "bored", "skip_ready_command"};
    for (int r = 1; r <= kRounds; ++r) {
      for (const char* s : {"gaze_ok_", "press_ok_", "loc_ok_"}) n.push_back(s + std::to_string(r));
    }
    return n;
  }();
  return names;
}

int BeliefVector::first_non_ok_round() const {
  for (int r = 1; r <= kRounds; ++r) {
    if (!round_ok(r)) return r;
  }
  return kRounds + 1;
}

std::vector<agentlang::Term> BeliefVector::beliefs() const {
  std::vector<agentlang::Term> out;
  for (int i = 0; i < kSwitchCount; ++i) {
    if (get(i)) out.emplace_back(switch_names()[i]);
  }
  return out;
}

std::string BeliefVector::to_string() const {
  std::string s(kSwitchCount, '0');
  for (int i = 0; i < kSwitchCount; ++i) s[i] = get(i) ? '1' : '0';
  return s;
}

BeliefVector BeliefVector::from_string(std::string_view s) {
  if (s.size() != kSwitchCount) throw Error("belief vector must have 15 switches");
  BeliefVector v;
  for (int i = 0; i < kSwitchCount; ++i) {
    if (s[i] == '1') {
      v.bits |= static_cast<std::uint16_t>(1u << i);
    } else if (s[i] != '0') {
      throw Error("belief vector digits must be 0 or 1");
    }
  }
  return v;
}

BeliefVector BeliefVector::from_beliefs(const std::vector<std::string>& names) {
  BeliefVector v;
  const auto& all = switch_names();
  for (const auto& n : names) {
    auto it = std::find(all.begin(), all.end(), n);
    if (it == all.end()) throw Error("unknown belief switch '" + n + "'");
    v.bits |= static_cast<std::uint16_t>(1u << (it - all.begin()));
  }
  return v;
}

// ---------------------------------------------------------------------------

std::string AbstractAction::label() const {
  if (args.empty()) return name;
  std::string s = name + "(";
  for (std::size_t i = 0; i < args.size(); ++i) s += (i ? "," : "") + args[i];
  return s + ")";
}

AbstractAction AbstractAction::from_label(std::string_view label, int round) {
  AbstractAction a;
  a.round = round;
  const auto open = label.find('(');
  if (open == std::string_view::npos) {
    a.name = std::string(label);
  } else {
    if (label.back() != ')') throw Error("malformed action label '" + std::string(label) + "'");
    a.name = std::string(label.substr(0, open));
    std::string_view rest = label.substr(open + 1, label.size() - open - 2);
    while (true) {
      const auto comma = rest.find(',');
      a.args.emplace_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
  }
  const auto& alpha = alphabet();
  if (std::find(alpha.begin(), alpha.end(), a.label()) == alpha.end()) {
    throw Error("action '" + std::string(label) + "' is not in the alphabet");
  }
  return a;
}

const std::vector<std::string>& alphabet() {
  static const std::vector<std::string> a{
      "request_leg",          "await_robot_signal",    "set_gaze(ok)",
      "set_gaze(bad)",        "set_pressure(ok)",      "set_pressure(bad)",
      "move_hand(close,slow)", "move_hand(close,fast)", "move_hand(far,slow)",
      "move_hand(far,fast)",  "say_ready",             "go_bored",
      "idle",
  };
  return a;
}

std::string_view to_string(Generator g) { return g == Generator::bdi ? "bdi" : "random"; }

namespace {

bool is_setup(const AbstractAction& a) {
  return a.name == "set_gaze" || a.name == "set_pressure" || a.name == "move_hand" ||
         a.name == "say_ready";
}

}  // namespace

void assign_rounds(std::vector<AbstractAction>& actions) {
  int requests = 0;
  for (auto& a : actions) {
    if (a.name == "request_leg") ++requests;
    a.round = std::clamp(requests, 1, kRounds);
  }
}

std::optional<std::string> check_sequence(const std::vector<AbstractAction>& actions) {
  int requests = 0;
  int round = 1;
  bool setup_before_first = false;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    const auto& a = actions[i];
    if (a.name == "request_leg") {
      if (++requests > kRounds) return "more than four leg requests at action " + std::to_string(i);
      if (requests == 1 && setup_before_first) {
        return "round 1 sets up before its request (action " + std::to_string(i) + ")";
      }
    } else if (requests == 0 && is_setup(a)) {
      setup_before_first = true;
    }
    round = std::clamp(requests, 1, kRounds);
    if (a.round != round) {
      return "action " + std::to_string(i) + " carries round " + std::to_string(a.round) +
             ", expected " + std::to_string(round);
    }
  }
  return std::nullopt;
}

void validate_sequence(const std::vector<AbstractAction>& actions) {
  if (auto err = check_sequence(actions)) throw InvalidSequence(*err);
}

std::vector<AbstractAction> extract_actions(const bdi::MasTrace& trace, const std::string& agent) {
  std::vector<AbstractAction> out;
  for (const auto& e : trace.entries) {
    if (e.agent != agent) continue;
    for (const auto& s : e.emitted) {
      if (s.kind != agentlang::StepKind::external_action) continue;
      AbstractAction a;
      a.name = s.payload.functor;
      for (const auto& arg : s.payload.args) a.args.push_back(arg.to_string());
      out.push_back(std::move(a));
    }
  }
  assign_rounds(out);
  return out;
}

}  // namespace bditb::testgen
