// Deterministic multi-agent interpreter for parsed agent programs.
//
// Scheduling: one round processes the agents in declaration order; each agent
// pops at most one event, fires the first applicable plan in source order and
// executes its whole body. Messages sent during a round are delivered when the
// round ends.
#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bditb/agentlang.hpp"

namespace bditb::bdi {

using agentlang::AgentProgram;
using agentlang::BodyStep;
using agentlang::MasDefinition;
using agentlang::Term;
using agentlang::TriggerEvent;

inline constexpr std::uint64_t kDefaultStepBudget = 10'000;
inline constexpr std::size_t kDefaultIntentionLimit = 64;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BudgetNonPositive : public Error {
 public:
  BudgetNonPositive() : Error("step budget must be positive") {}
};

class UnknownAgent : public Error {
 public:
  explicit UnknownAgent(const std::string& name) : Error("unknown agent '" + name + "'") {}
};

struct Message {
  std::string sender;
  agentlang::Performative performative = agentlang::Performative::tell;
  Term content;
};

struct AgentState {
  std::size_t program = 0;  // index into MasState::definition->agents
  std::set<Term> beliefs;
  std::deque<TriggerEvent> events;
  std::vector<std::vector<BodyStep>> intentions;
  std::deque<Message> mailbox;  // in flight, delivered at end of round
};

struct MasState {
  std::shared_ptr<const MasDefinition> definition;
  std::vector<AgentState> agents;
  std::uint64_t step_counter = 0;
  std::uint64_t step_budget = kDefaultStepBudget;
  std::uint64_t rng_seed = 0;  // reserved; scheduling does not consume randomness
  std::size_t intention_limit = kDefaultIntentionLimit;

  const AgentProgram& program_of(std::size_t agent) const {
    return definition->agents[agents[agent].program];
  }
  bool quiescent() const;
};

struct TraceEntry {
  std::uint64_t step = 0;
  std::string agent;
  std::optional<std::size_t> fired_plan;  // empty: event dropped, no applicable plan
  TriggerEvent trigger;
  std::vector<BodyStep> emitted;

  friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

enum class Termination { quiescent, budget_exhausted };

struct MasTrace {
  std::vector<std::string> agents;
  std::vector<TraceEntry> entries;
  Termination termination = Termination::quiescent;
  std::uint64_t rounds = 0;

  friend bool operator==(const MasTrace&, const MasTrace&) = default;
};

MasState init_mas(std::shared_ptr<const MasDefinition> definition,
                  std::uint64_t step_budget = kDefaultStepBudget);

/// Adds a belief (and its +b event) before or between rounds.
void inject_belief(MasState& mas, const std::string& agent, const Term& belief);
void inject_goal(MasState& mas, const std::string& agent, const Term& goal);

/// Index of the first plan whose trigger matches and whose context holds, if any.
std::optional<std::size_t> select_plan(const AgentProgram& program,
                                       const std::set<Term>& beliefs,
                                       const TriggerEvent& event);

bool context_holds(const agentlang::Context& ctx, const std::set<Term>& beliefs);

/// One scheduling round. Appends the round's entries to `out`.
void step(MasState& mas, std::vector<TraceEntry>& out);

MasTrace run(MasState mas);

struct PlanCoverage {
  double fraction = 0.0;
  std::size_t fired = 0;
  std::size_t total = 0;
  std::vector<std::size_t> uncovered;
};

PlanCoverage plan_coverage(const MasTrace& trace, const AgentProgram& program);

/// Line-delimited JSON export; the first line carries the schema and version.
std::string trace_to_jsonl(const MasTrace& trace);
MasTrace trace_from_jsonl(const std::string& text);

inline constexpr int kTraceSchemaVersion = 1;

}  // namespace bditb::bdi
