#include <algorithm>

#include "bditb/bdi.hpp"

namespace bditb::bdi {

using agentlang::Performative;
using agentlang::StepKind;
using agentlang::TriggerKind;

namespace {

std::size_t agent_index(const MasState& mas, const std::string& name) {
  const auto& names = mas.definition->names;
  auto it = names.find(name);
  if (it == names.end()) throw UnknownAgent(name);
  return it->second;
}

void add_belief(AgentState& agent, const Term& b) {
  if (agent.beliefs.insert(b).second) {
    agent.events.push_back({TriggerKind::add_belief, b});
  }
}

}  // namespace

bool MasState::quiescent() const {
  return std::all_of(agents.begin(), agents.end(), [](const AgentState& a) {
    return a.events.empty() && a.intentions.empty() && a.mailbox.empty();
  });
}

MasState init_mas(std::shared_ptr<const MasDefinition> definition, std::uint64_t step_budget) {
  if (step_budget == 0) throw BudgetNonPositive();
  MasState mas;
  mas.definition = std::move(definition);
  mas.step_budget = step_budget;
  const auto& agents = mas.definition->agents;
  mas.agents.resize(agents.size());
  for (std::size_t i = 0; i < agents.size(); ++i) {
    AgentState& st = mas.agents[i];
    st.program = i;
    st.beliefs.insert(agents[i].initial_beliefs.begin(), agents[i].initial_beliefs.end());
    for (const auto& g : agents[i].initial_goals) {
      st.events.push_back({TriggerKind::add_goal, g});
    }
  }
  return mas;
}

void inject_belief(MasState& mas, const std::string& agent, const Term& belief) {
  add_belief(mas.agents[agent_index(mas, agent)], belief);
}

void inject_goal(MasState& mas, const std::string& agent, const Term& goal) {
  mas.agents[agent_index(mas, agent)].events.push_back({TriggerKind::add_goal, goal});
}

bool context_holds(const agentlang::Context& ctx, const std::set<Term>& beliefs) {
  for (const auto& lit : ctx.literals) {
    if ((beliefs.count(lit.term) != 0) == lit.negated) return false;
  }
  return true;
}

std::optional<std::size_t> select_plan(const AgentProgram& program,
                                       const std::set<Term>& beliefs,
                                       const TriggerEvent& event) {
  for (const auto& p : program.plans) {
    if (p.trigger == event && context_holds(p.context, beliefs)) return p.id;
  }
  return std::nullopt;
}

void step(MasState& mas, std::vector<TraceEntry>& out) {
  const auto& def = *mas.definition;
  for (std::size_t i = 0; i < mas.agents.size(); ++i) {
    AgentState& self = mas.agents[i];
    if (self.events.empty()) continue;
    const AgentProgram& prog = def.agents[self.program];
    TriggerEvent ev = std::move(self.events.front());
    self.events.pop_front();

    TraceEntry entry;
    entry.step = mas.step_counter;
    entry.agent = prog.name;
    entry.trigger = ev;
    entry.fired_plan = select_plan(prog, self.beliefs, ev);
    if (entry.fired_plan && self.intentions.size() < mas.intention_limit) {
      self.intentions.push_back(prog.plans[*entry.fired_plan].body);
      // Bodies run to completion inside the round.
      for (const BodyStep& s : self.intentions.back()) {
        switch (s.kind) {
          case StepKind::achieve_goal:
            self.events.push_back({TriggerKind::add_goal, s.payload});
            break;
          case StepKind::add_belief:
            add_belief(self, s.payload);
            break;
          case StepKind::del_belief:
            if (self.beliefs.erase(s.payload)) {
              self.events.push_back({TriggerKind::del_belief, s.payload});
            }
            break;
          case StepKind::send: {
            AgentState& to = mas.agents[def.index_of(s.recipient)];
            to.mailbox.push_back({prog.name, s.performative, s.payload});
            break;
          }
          case StepKind::wait:
          case StepKind::external_action:
            break;
        }
        entry.emitted.push_back(s);
      }
      self.intentions.pop_back();
    } else {
      entry.fired_plan.reset();
    }
    out.push_back(std::move(entry));
  }
  for (AgentState& a : mas.agents) {
    for (Message& m : a.mailbox) {
      if (m.performative == Performative::tell) {
        add_belief(a, m.content);
      } else {
        a.events.push_back({TriggerKind::add_goal, std::move(m.content)});
      }
    }
    a.mailbox.clear();
  }
  ++mas.step_counter;
}

MasTrace run(MasState mas) {
  MasTrace trace;
  for (std::size_t i = 0; i < mas.agents.size(); ++i) {
    trace.agents.push_back(mas.program_of(i).name);
  }
  while (!mas.quiescent()) {
    if (mas.step_counter >= mas.step_budget) {
      trace.termination = Termination::budget_exhausted;
      break;
    }
    step(mas, trace.entries);
  }
  trace.rounds = mas.step_counter;
  return trace;
}

PlanCoverage plan_coverage(const MasTrace& trace, const AgentProgram& program) {
  if (std::find(trace.agents.begin(), trace.agents.end(), program.name) == trace.agents.end()) {
    throw UnknownAgent(program.name);
  }
  std::vector<bool> hit(program.plans.size(), false);
  for (const auto& e : trace.entries) {
    if (e.agent == program.name && e.fired_plan && *e.fired_plan < hit.size()) {
      hit[*e.fired_plan] = true;
    }
  }
  PlanCoverage cov;
  cov.total = program.plans.size();
  for (std::size_t i = 0; i < hit.size(); ++i) {
    if (hit[i]) {
      ++cov.fired;
    } else {
      cov.uncovered.push_back(i);
    }
  }
  cov.fraction = cov.total ? static_cast<double>(cov.fired) / cov.total : 1.0;
  return cov;
}

}  // namespace bditb::bdi
