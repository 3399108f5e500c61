#include <doctest.h>

#include "bditb/agentlang.hpp"
#include "generators.hpp"

using namespace bditb;
using namespace bditb::agentlang;

namespace {

const char* kHuman = R"(//Agent human
/* Initial beliefs and rules */
/* Initial goals */
!activate.
/* Plans */
+!activate : leg2 <- .send(robot_code,tell,leg).
)";

const char* kRobotcode = R"(//Agent robotcode
/* Initial beliefs and rules */
/* Initial goals */
!waiting.
/* Plans */
+!waiting : not leg <- !waiting.
+!waiting : leg <- !grabLeg.
)";

const char* kMeta = R"(//Agent meta
+!control : true <- .send(human,tell,leg2).
)";

SourceLoader loader(std::map<std::string, std::string> files) {
  return [files](const std::string& path) { return files.at(path); };
}

}  // namespace

TEST_CASE("human snippet parses to one plan with a send") {
  const AgentProgram p = parse_agent(kHuman, "human");
  REQUIRE(p.initial_goals.size() == 1);
  CHECK(p.initial_goals[0] == Term("activate"));
  CHECK(p.initial_beliefs.empty());
  REQUIRE(p.plans.size() == 1);
  const Plan& plan = p.plans[0];
  CHECK(plan.trigger.kind == TriggerKind::add_goal);
  CHECK(plan.trigger.payload == Term("activate"));
  REQUIRE(plan.context.literals.size() == 1);
  CHECK(plan.context.literals[0].term == Term("leg2"));
  CHECK_FALSE(plan.context.literals[0].negated);
  REQUIRE(plan.body.size() == 1);
  CHECK(plan.body[0].kind == StepKind::send);
  CHECK(plan.body[0].recipient == "robot_code");
  CHECK(plan.body[0].performative == Performative::tell);
  CHECK(plan.body[0].payload == Term("leg"));
}

TEST_CASE("empty source gives an empty program") {
  const AgentProgram p = parse_agent("");
  CHECK(p.initial_beliefs.empty());
  CHECK(p.initial_goals.empty());
  CHECK(p.plans.empty());
  CHECK(parse_agent("// only a comment\n/* and a block */").plans.empty());
}

TEST_CASE("robotcode snippet has two waiting plans in source order") {
  const AgentProgram p = parse_agent(kRobotcode, "robotcode");
  REQUIRE(p.plans.size() == 2);
  CHECK(p.plans[0].id == 0);
  CHECK(p.plans[1].id == 1);
  CHECK(p.plans[0].context.literals.at(0).negated);
  CHECK(p.plans[0].context.literals.at(0).term == Term("leg"));
  CHECK(p.plans[0].body.at(0).kind == StepKind::achieve_goal);
  CHECK_FALSE(p.plans[1].context.literals.at(0).negated);
  CHECK(p.plans[1].body.at(0).payload == Term("grabLeg"));
}

TEST_CASE("trigger kinds and step kinds") {
  const AgentProgram p = parse_agent(
      "b(x, y(z)).\n"
      "+b : true <- +c; -d; act(q); .wait(tick); .send(meta, achieve, go).\n"
      "-c <- true.\n"
      "+!g.\n");
  REQUIRE(p.initial_beliefs.size() == 1);
  CHECK(p.initial_beliefs[0].to_string() == "b(x,y(z))");
  REQUIRE(p.plans.size() == 3);
  CHECK(p.plans[0].trigger.kind == TriggerKind::add_belief);
  CHECK(p.plans[1].trigger.kind == TriggerKind::del_belief);
  CHECK(p.plans[1].body.empty());
  CHECK(p.plans[2].body.empty());
  CHECK(p.plans[2].context.literals.empty());
  const auto& body = p.plans[0].body;
  REQUIRE(body.size() == 5);
  CHECK(body[0].kind == StepKind::add_belief);
  CHECK(body[1].kind == StepKind::del_belief);
  CHECK(body[2].kind == StepKind::external_action);
  CHECK(body[3].kind == StepKind::wait);
  CHECK(body[4].kind == StepKind::send);
  CHECK(body[4].performative == Performative::achieve);
}

TEST_CASE("syntax errors carry a position and what was expected") {
  SUBCASE("unterminated body reports the trigger line") {
    try {
      parse_agent("b.\n\n+!g : b <- act1;\n  act2\n");
      FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
      CHECK(e.line() == 3);
      CHECK(e.expected() == "';' or '.'");
    }
  }
  SUBCASE("variables are outside the subset") {
    CHECK_THROWS_AS(parse_agent("+!g : X <- act."), SyntaxError);
  }
  SUBCASE("unknown internal action") {
    try {
      parse_agent("+!g <- .print(hello).");
      FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
      CHECK(e.line() == 1);
      CHECK(e.column() > 1);
    }
  }
  SUBCASE("unknown directive") { CHECK_THROWS_AS(parse_agent("?query."), SyntaxError); }
  SUBCASE("unterminated comment") { CHECK_THROWS_AS(parse_agent("/* open"), SyntaxError); }
}

TEST_CASE("unparse round-trips the snippets") {
  for (const char* src : {kHuman, kRobotcode, kMeta}) {
    const AgentProgram p = parse_agent(src, "x");
    CHECK(parse_agent(unparse(p), "x") == p);
  }
  CHECK(unparse(parse_agent(kRobotcode)).find("not leg") != std::string::npos);
  AgentProgram empty;
  CHECK(parse_agent(unparse(empty)) == empty);
}

TEST_CASE("parse_mas wires three agents through an alias") {
  const std::string cfg =
      "# three agents\n"
      "agent meta meta.asl\n"
      "agent human human.asl\n"
      "agent robotcode robotcode.asl\n"
      "alias robot_code robotcode\n";
  const MasDefinition mas = parse_mas(
      cfg, loader({{"meta.asl", kMeta}, {"human.asl", kHuman}, {"robotcode.asl", kRobotcode}}));
  REQUIRE(mas.agents.size() == 3);
  CHECK(mas.agents[0].name == "meta");
  CHECK(mas.agents[2].name == "robotcode");
  CHECK(mas.index_of("robot_code") == 2);
  CHECK(mas.has("human"));
}

TEST_CASE("parse_mas edge cases") {
  CHECK(parse_mas("", loader({})).agents.empty());
  CHECK(parse_mas("# nothing\n\n", loader({})).agents.empty());

  SUBCASE("send to an undeclared spelling") {
    const std::string cfg = "agent human human.asl\nagent robotcode robotcode.asl\n";
    try {
      parse_mas(cfg, loader({{"human.asl", kHuman}, {"robotcode.asl", kRobotcode}}));
      FAIL("expected UnknownRecipient");
    } catch (const UnknownRecipient& e) {
      CHECK(e.recipient() == "robot_code");
    }
  }
  SUBCASE("duplicate names") {
    const std::string cfg = "agent a x.asl\nagent a x.asl\n";
    CHECK_THROWS_AS(parse_mas(cfg, loader({{"x.asl", ""}})), DuplicateAgentName);
  }
  SUBCASE("unknown directive") {
    CHECK_THROWS_AS(parse_mas("agents a x.asl\n", loader({{"x.asl", ""}})), SyntaxError);
  }
  SUBCASE("agent source errors surface") {
    CHECK_THROWS_AS(parse_mas("agent a x.asl\n", loader({{"x.asl", "+!g <- "}})), SyntaxError);
  }
}

TEST_CASE("round-trip over generated programs") {
  Rng rng(20240611, 0);
  int negated = 0;
  for (int i = 0; i < 1000; ++i) {
    const AgentProgram p = testing::random_program(rng, "a" + std::to_string(i));
    const std::string text = unparse(p);
    const AgentProgram q = parse_agent(text, p.name);
    REQUIRE_MESSAGE(q == p, text);
    for (std::size_t k = 0; k < q.plans.size(); ++k) CHECK(q.plans[k].id == k);
    for (const auto& plan : p.plans) {
      for (const auto& l : plan.context.literals) negated += l.negated;
    }
  }
  CHECK(negated > 0);
}
