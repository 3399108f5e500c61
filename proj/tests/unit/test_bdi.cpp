#include <doctest.h>

#include <functional>

#include "bditb/bdi.hpp"
#include "bditb/testgen.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace bditb;
using namespace bditb::bdi;
using agentlang::parse_agent;
using agentlang::TriggerKind;

namespace {

// The meta, human and robotcode snippets. The human gets the same retry idiom the robot
// uses, since its goal is otherwise processed before leg2 arrives.
std::shared_ptr<const MasDefinition> trio(bool human_retries) {
  auto mas = std::make_shared<MasDefinition>();
  mas->agents.push_back(parse_agent("!control.\n+!control : true <- .send(human,tell,leg2).", "meta"));
  std::string human = "!activate.\n+!activate : leg2 <- .send(robot_code,tell,leg).\n";
  if (human_retries) human += "+!activate : not leg2 <- !activate.\n";
  mas->agents.push_back(parse_agent(human, "human"));
  mas->agents.push_back(parse_agent(
      "!waiting.\n+!waiting : not leg <- !waiting.\n+!waiting : leg <- !grabLeg.", "robotcode"));
  for (std::size_t i = 0; i < mas->agents.size(); ++i) mas->names[mas->agents[i].name] = i;
  mas->names["robot_code"] = 2;
  return mas;
}

std::shared_ptr<const MasDefinition> single(const std::string& src, const std::string& name) {
  auto mas = std::make_shared<MasDefinition>();
  mas->agents.push_back(parse_agent(src, name));
  mas->names[name] = 0;
  return mas;
}

bool sent(const MasTrace& t, const std::string& from, const std::string& to, const std::string& what) {
  for (const auto& e : t.entries) {
    if (e.agent != from) continue;
    for (const auto& s : e.emitted) {
      if (s.kind == agentlang::StepKind::send && s.recipient == to && s.payload.to_string() == what) {
        return true;
      }
    }
  }
  return false;
}

}  // namespace

TEST_CASE("init_mas enqueues the initial goals") {
  const MasState mas = init_mas(trio(false));
  REQUIRE(mas.agents.size() == 3);
  REQUIRE(mas.agents[1].events.size() == 1);
  CHECK(mas.agents[1].events[0].kind == TriggerKind::add_goal);
  CHECK(mas.agents[1].events[0].payload.to_string() == "activate");
  CHECK(mas.agents[2].events.at(0).payload.to_string() == "waiting");
  CHECK(init_mas(single("+!g <- act.", "a")).agents[0].events.empty());
  CHECK_THROWS_AS(init_mas(trio(false), 0), BudgetNonPositive);
}

TEST_CASE("a tell lands in the recipient's beliefs at the end of the round") {
  MasState mas = init_mas(trio(false));
  std::vector<TraceEntry> out;
  step(mas, out);
  const AgentState& human = mas.agents[1];
  CHECK(human.beliefs.count(agentlang::Term("leg2")) == 1);
  REQUIRE_FALSE(human.events.empty());
  CHECK(human.events.back().kind == TriggerKind::add_belief);
  CHECK(human.events.back().payload.to_string() == "leg2");
  // the human popped +!activate in the same round, before leg2 was delivered
  REQUIRE(out.size() == 3);
  CHECK_FALSE(out[1].fired_plan.has_value());
}

TEST_CASE("agents with nothing to do leave no trace entry") {
  MasState mas = init_mas(trio(false));
  std::vector<TraceEntry> out;
  step(mas, out);
  out.clear();
  step(mas, out);  // meta is idle now
  for (const auto& e : out) CHECK(e.agent != "meta");
}

TEST_CASE("robotcode picks the leg plan once leg is believed") {
  MasState mas = init_mas(trio(false));
  inject_belief(mas, "robotcode", agentlang::Term("leg"));
  std::vector<TraceEntry> out;
  step(mas, out);
  const TraceEntry* rc = nullptr;
  for (const auto& e : out) {
    if (e.agent == "robotcode") rc = &e;
  }
  REQUIRE(rc);
  CHECK(rc->fired_plan == std::optional<std::size_t>(1));
  REQUIRE(rc->emitted.size() == 1);
  CHECK(rc->emitted[0].payload.to_string() == "grabLeg");
}

TEST_CASE("run: message chain and termination") {
  SUBCASE("human retrying its goal reaches the robot") {
    const MasTrace t = run(init_mas(trio(true)));
    CHECK(t.termination == Termination::quiescent);
    CHECK(sent(t, "meta", "human", "leg2"));
    CHECK(sent(t, "human", "robot_code", "leg"));
    const auto cov = plan_coverage(t, trio(true)->agents[2]);
    CHECK(cov.fired == 2);
    CHECK(cov.total == 2);
    CHECK(cov.uncovered.empty());
  }
  SUBCASE("the literal snippets leave the robot waiting forever") {
    const MasTrace t = run(init_mas(trio(false), 50));
    CHECK(t.termination == Termination::budget_exhausted);
    CHECK(t.rounds == 50);
    CHECK_FALSE(sent(t, "human", "robot_code", "leg"));
  }
  SUBCASE("robotcode alone exhausts the budget") {
    auto mas = single("!waiting.\n+!waiting : not leg <- !waiting.\n+!waiting : leg <- !grabLeg.",
                      "robotcode");
    const MasTrace t = run(init_mas(mas));
    CHECK(t.termination == Termination::budget_exhausted);
    CHECK(t.rounds == kDefaultStepBudget);
    CHECK(t.entries.size() == kDefaultStepBudget);
  }
  SUBCASE("quiescent runs end with empty queues") {
    MasState mas = init_mas(trio(true));
    std::vector<TraceEntry> out;
    while (!mas.quiescent()) step(mas, out);
    for (const auto& a : mas.agents) {
      CHECK(a.events.empty());
      CHECK(a.mailbox.empty());
      CHECK(a.intentions.empty());
    }
  }
}

TEST_CASE("plan coverage") {
  const auto mas = trio(true);
  const MasTrace t = run(init_mas(mas));
  CHECK(plan_coverage(t, mas->agents[0]).fraction == doctest::Approx(1.0));
  MasTrace empty;
  empty.agents = {"meta", "human", "robotcode"};
  const auto none = plan_coverage(empty, mas->agents[2]);
  CHECK(none.fraction == 0.0);
  CHECK(none.uncovered == std::vector<std::size_t>{0, 1});
  CHECK_THROWS_AS(plan_coverage(t, parse_agent("", "stranger")), UnknownAgent);
}

TEST_CASE("trace JSONL round-trip") {
  const MasTrace t = run(init_mas(trio(true)));
  const std::string text = trace_to_jsonl(t);
  CHECK(text.rfind("{", 0) == 0);
  CHECK(text.find("\"version\":1") != std::string::npos);
  CHECK(trace_from_jsonl(text) == t);
}

TEST_CASE("runs are deterministic") {
  const auto mas = testgen::default_mas();
  Rng rng(7, 0);
  std::hash<std::string> h;
  for (int i = 0; i < 100; ++i) {
    const testgen::BeliefVector v{static_cast<std::uint16_t>(rng.below(testgen::kVectorCount))};
    const auto a = trace_to_jsonl(testgen::run_with_vector(mas, v));
    const auto b = trace_to_jsonl(testgen::run_with_vector(mas, v));
    REQUIRE(h(a) == h(b));
    REQUIRE(a == b);
  }
}

TEST_CASE("plan selection matches a brute-force scan") {
  Rng rng(99, 1);
  int fired = 0;
  for (int i = 0; i < 500; ++i) {
    const auto program = testing::random_program(rng);
    const auto beliefs = testing::random_beliefs(rng);
    // half the events come from the program's own triggers so plans can match
    agentlang::TriggerEvent ev = testing::random_trigger(rng);
    if (!program.plans.empty() && rng.bernoulli(0.5)) {
      ev = program.plans[rng.below(program.plans.size())].trigger;
    }
    const auto got = select_plan(program, beliefs, ev);
    REQUIRE(got == testing::oracle_select_plan(program, beliefs, ev));
    fired += got.has_value();
  }
  CHECK(fired > 50);
}

TEST_CASE("every final belief is initial or was added by the trace") {
  const auto mas = testgen::default_mas();
  for (std::uint32_t i : {0u, 1u, 4095u, 32767u, 12345u}) {
    MasState st = init_mas(mas);
    const testgen::BeliefVector v{static_cast<std::uint16_t>(i)};
    for (const auto& b : v.beliefs()) inject_belief(st, "meta", b);
    std::vector<TraceEntry> out;
    while (!st.quiescent() && st.step_counter < st.step_budget) step(st, out);
    for (std::size_t a = 0; a < st.agents.size(); ++a) {
      const auto& prog = st.program_of(a);
      for (const auto& b : st.agents[a].beliefs) {
        bool origin = std::find(prog.initial_beliefs.begin(), prog.initial_beliefs.end(), b) !=
                      prog.initial_beliefs.end();
        if (prog.name == "meta") {
          const auto vb = v.beliefs();
          origin = origin || std::find(vb.begin(), vb.end(), b) != vb.end();
        }
        for (const auto& e : out) {
          for (const auto& s : e.emitted) {
            origin = origin || (s.payload == b && (s.kind == agentlang::StepKind::add_belief ||
                                                   (s.kind == agentlang::StepKind::send &&
                                                    mas->index_of(s.recipient) == a)));
          }
        }
        CHECK_MESSAGE(origin, prog.name << " " << b.to_string());
      }
    }
  }
}
