#include <algorithm>

#include "bditb/verify.hpp"

namespace bditb::verify {

using scenario::EventKind;

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::passed: return "passed";
    case Verdict::failed: return "failed";
    case Verdict::not_checked: return "nc";
  }
  return "?";
}

MonitorConfig MonitorConfig::from(const scenario::ScenarioConfig& c) {
  MonitorConfig m;
  m.decide_ms = c.timeouts.decide_ms;
  m.proximity_threshold_m = c.proximity_threshold_m;
  m.speed_cap = c.speed_cap;
  m.tick_ms = c.tick_ms;
  return m;
}

std::vector<Interval> true_intervals(const std::vector<std::int64_t>& times, std::int64_t tick) {
  std::vector<Interval> out;
  for (std::int64_t t : times) {
    if (!out.empty() && t <= out.back().end) {
      out.back().end = std::max(out.back().end, t + tick);
    } else {
      out.push_back({t, t + tick});
    }
  }
  return out;
}

std::vector<std::int64_t> spawn_once(const std::vector<Interval>& intervals) {
  std::vector<std::int64_t> out;
  for (const auto& i : intervals) out.push_back(i.begin);
  return out;
}

std::vector<std::int64_t> spawn_every(const std::vector<Interval>& intervals, std::int64_t delta) {
  std::vector<std::int64_t> out;
  for (const auto& i : intervals) {
    for (std::int64_t t = i.begin; t < i.end; t += delta) out.push_back(t);
  }
  return out;
}

namespace {

std::int64_t trace_end(const SimTrace& trace) {
  return trace.events.empty() ? 0 : trace.events.back().t_ms;
}

// First release or discard of the attempt after event index i.
const SimEvent* outcome_after(const SimTrace& trace, std::size_t i) {
  const int attempt = trace.events[i].attempt;
  for (std::size_t j = i + 1; j < trace.events.size(); ++j) {
    const SimEvent& e = trace.events[j];
    if ((e.kind == EventKind::release || e.kind == EventKind::discard) && e.attempt == attempt) {
      return &e;
    }
  }
  return nullptr;
}

}  // namespace

std::vector<Spawn> monitor_req1(const SimTrace& trace, const MonitorConfig& config) {
  std::vector<Spawn> out;
  for (std::size_t i = 0; i < trace.events.size(); ++i) {
    const SimEvent& e = trace.events[i];
    if (e.kind != EventKind::gpl || !e.gpl.all_ok()) continue;
    const std::int64_t deadline = e.t_ms + config.decide_ms;
    Spawn s{e.t_ms, Verdict::not_checked};
    if (const SimEvent* o = outcome_after(trace, i)) {
      s.verdict = o->kind == EventKind::release && o->t_ms <= deadline ? Verdict::passed
                                                                      : Verdict::failed;
    } else if (trace_end(trace) > deadline) {
      s.verdict = Verdict::failed;
    }
    out.push_back(s);
  }
  return out;
}

std::vector<Spawn> monitor_req2(const SimTrace& trace, const MonitorConfig&) {
  std::vector<Spawn> out;
  for (std::size_t i = 0; i < trace.events.size(); ++i) {
    const SimEvent& e = trace.events[i];
    if (e.kind != EventKind::gpl || e.gpl.all_ok()) continue;
    Spawn s{e.t_ms, Verdict::not_checked};
    if (const SimEvent* o = outcome_after(trace, i)) {
      s.verdict = o->kind == EventKind::release ? Verdict::failed : Verdict::passed;
    }
    out.push_back(s);
  }
  return out;
}

std::vector<Spawn> monitor_req3(const SimTrace& trace, const MonitorConfig& config) {
  std::vector<Spawn> out;
  for (const auto& e : trace.events) {
    if (e.kind != EventKind::gripper || e.label != "close") continue;
    out.push_back({e.t_ms, e.value < config.proximity_threshold_m ? Verdict::failed
                                                                   : Verdict::passed});
  }
  return out;
}

std::vector<Spawn> monitor_req4(const SimTrace& trace, const MonitorConfig& config) {
  std::vector<const SimEvent*> samples;
  std::vector<std::int64_t> times;
  for (const auto& e : trace.events) {
    if (e.kind != EventKind::speed) continue;
    samples.push_back(&e);
    times.push_back(e.t_ms);
  }
  std::vector<Spawn> out;
  std::size_t k = 0;
  for (const Interval& iv : true_intervals(times, config.tick_ms)) {
    for (std::int64_t t = iv.begin; t < iv.end; t += config.delta_ms) {
      const std::int64_t until = std::min(t + config.delta_ms, iv.end);
      Spawn s{t, Verdict::passed};
      for (; k < samples.size() && samples[k]->t_ms < until; ++k) {
        const auto& v = samples[k]->speed;
        if (*std::max_element(v.begin(), v.end()) > config.speed_cap) s.verdict = Verdict::failed;
      }
      out.push_back(s);
    }
  }
  return out;
}

std::vector<Spawn> run_monitor(int req, const SimTrace& trace, const MonitorConfig& config) {
  switch (req) {
    case 1: return monitor_req1(trace, config);
    case 2: return monitor_req2(trace, config);
    case 3: return monitor_req3(trace, config);
    case 4: return monitor_req4(trace, config);
  }
  throw std::out_of_range("requirement " + std::to_string(req));
}

std::string RequirementResult::flag() const {
  if (flag_nc()) return "nc";
  if (flag_passed() && flag_failed()) return "passed+failed";
  if (flag_failed()) return "failed";
  if (flag_passed()) return "passed";
  return "pending";
}

RequirementResult summarize(int req, const std::vector<Spawn>& spawns) {
  RequirementResult r;
  r.req = req;
  for (const auto& s : spawns) {
    switch (s.verdict) {
      case Verdict::passed: ++r.passed; break;
      case Verdict::failed: ++r.failed; break;
      case Verdict::not_checked: ++r.pending; break;
    }
  }
  return r;
}

std::array<RequirementResult, kRequirements> check_all(const SimTrace& trace,
                                                       const MonitorConfig& config) {
  std::array<RequirementResult, kRequirements> out;
  for (int r = 1; r <= kRequirements; ++r) out[r - 1] = summarize(r, run_monitor(r, trace, config));
  return out;
}

// ---------------------------------------------------------------------------

std::string_view tuple_label(int tuple) {
  static constexpr std::string_view labels[] = {
      "<4 legs, GPL=(1,1,1)x4>",
      "<4 legs, GPL!=(1,1,1) for at least 1 leg>",
      "<4 legs+bored, Sensing timed out>",
      "<3 legs, GPL=(1,1,1)x3>",
      "<3 legs, GPL!=(1,1,1) for at least 1 leg>",
      "<3 legs+bored, Sensing timed out>",
      "<2 legs, GPL=(1,1,1)x2>",
      "<2 legs, GPL!=(1,1,1) for at least 1 leg>",
      "<2 legs+bored, Sensing timed out>",
      "<1 leg, GPL=(1,1,1)>",
      "<1 leg, GPL!=(1,1,1)>",
      "<1 leg+bored, Sensing timed out>",
      "<No leg, Timed out>",
  };
  if (tuple < 1 || tuple > kTuples) throw std::out_of_range("tuple " + std::to_string(tuple));
  return labels[tuple - 1];
}

int classify_cross_product(const SimTrace& trace) {
  struct Attempt {
    bool all_ok = true;
    bool sensed = false;
    bool timed_out = false;
    int outcomes = 0;
  };
  std::map<int, Attempt> attempts;
  int started = 0;
  bool open = false;
  for (const auto& e : trace.events) {
    switch (e.kind) {
      case EventKind::transition:
        if (e.label == "WaitRequest" && e.detail == "PickUp") {
          if (open) throw UnclassifiableTrace("attempt started while another is open");
          ++started;
          open = true;
          attempts[started];
        }
        if ((e.label == "WaitReady" || e.label == "Sense") && e.detail == "Discard") {
          attempts[e.attempt].timed_out = true;
        }
        if (e.label == "Release" || e.label == "Discard") open = false;
        break;
      case EventKind::gpl:
        attempts[e.attempt].sensed = true;
        if (!e.gpl.all_ok()) attempts[e.attempt].all_ok = false;
        break;
      case EventKind::release:
      case EventKind::discard:
        if (e.attempt < 1 || e.attempt > started) {
          throw UnclassifiableTrace("outcome outside any attempt at t=" + std::to_string(e.t_ms));
        }
        if (++attempts[e.attempt].outcomes > 1) {
          throw UnclassifiableTrace("attempt " + std::to_string(e.attempt) + " has two outcomes");
        }
        break;
      case EventKind::end:
        if (open && e.label == "time_limit") attempts[started].timed_out = true;
        break;
      default:
        break;
    }
  }
  if (started > 4) throw UnclassifiableTrace("more than four handover attempts");
  if (attempts.size() != static_cast<std::size_t>(started)) {
    throw UnclassifiableTrace("events reference an attempt that never started");
  }
  if (started == 0) return kTuples;
  int category = 1;
  for (const auto& [n, a] : attempts) {
    if (a.timed_out) {
      category = 3;
      break;
    }
    if (!a.sensed || !a.all_ok) category = 2;
  }
  return (4 - started) * 3 + category;
}

}  // namespace bditb::verify
