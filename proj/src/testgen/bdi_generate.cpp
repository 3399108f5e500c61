#include <cstdio>

#include "bditb/testgen.hpp"
#include "default_agents.hpp"

namespace bditb::testgen {

namespace {

struct PlanGuard {
  std::uint16_t need_true = 0;
  std::uint16_t need_false = 0;
};

// Switch literals of each plan context; plans without any are not guardable.
std::vector<PlanGuard> guards_of(const agentlang::AgentProgram& program) {
  const auto& names = switch_names();
  std::vector<PlanGuard> out(program.plans.size());
  for (std::size_t p = 0; p < program.plans.size(); ++p) {
    for (const auto& lit : program.plans[p].context.literals) {
      for (int i = 0; i < kSwitchCount; ++i) {
        if (lit.term.is_atom() && lit.term.functor == names[i]) {
          auto& mask = lit.negated ? out[p].need_false : out[p].need_true;
          mask |= static_cast<std::uint16_t>(1u << i);
        }
      }
    }
  }
  return out;
}

std::string numbered(const std::string& prefix, std::size_t n) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%03zu", n);
  return prefix + buf;
}

}  // namespace

std::shared_ptr<const agentlang::MasDefinition> default_mas() {
  static const auto mas = [] {
    auto load = [](const std::string& path) -> std::string {
      if (path == "meta.asl") return embedded::kMeta;
      if (path == "human.asl") return embedded::kHuman;
      if (path == "robotcode.asl") return embedded::kRobotcode;
      throw Error("no bundled agent source " + path);
    };
    return std::make_shared<const agentlang::MasDefinition>(
        agentlang::parse_mas(embedded::kMasConfig, load));
  }();
  return mas;
}

BeliefVector select_vector(const agentlang::MasDefinition& mas, const GenerationState& state,
                           SelectionStrategy strategy,
                           const std::function<bool(BeliefVector)>& pool) {
  auto eligible = [&](BeliefVector v) { return !state.tried.test(v.bits) && (!pool || pool(v)); };

  if (strategy == SelectionStrategy::greedy_novelty && mas.has("human")) {
    const auto& human = mas.agents[mas.index_of("human")];
    const auto guards = guards_of(human);
    std::vector<PlanGuard> open;
    for (std::size_t p = 0; p < guards.size(); ++p) {
      const bool guardable = guards[p].need_true || guards[p].need_false;
      if (guardable && !state.human_fired.count(p)) open.push_back(guards[p]);
    }
    if (!open.empty()) {
      for (std::uint32_t i = 0; i < kVectorCount; ++i) {
        const BeliefVector v = gray_vector(i);
        if (!eligible(v)) continue;
        for (const auto& g : open) {
          if ((v.bits & g.need_true) == g.need_true && (v.bits & g.need_false) == 0) return v;
        }
      }
    }
  }
  for (std::uint32_t i = 0; i < kVectorCount; ++i) {
    const BeliefVector v = gray_vector(i);
    if (eligible(v)) return v;
  }
  throw NoUntriedVector();
}

bdi::MasTrace run_with_vector(std::shared_ptr<const agentlang::MasDefinition> mas,
                              BeliefVector vector, std::uint64_t step_budget) {
  const std::size_t meta = mas->index_of("meta");
  bdi::MasState state = bdi::init_mas(mas, step_budget);
  for (const auto& b : vector.beliefs()) state.agents[meta].beliefs.insert(b);
  return bdi::run(std::move(state));
}

bool plan_coverage_total(const agentlang::MasDefinition& mas, const GenerationState& state) {
  return state.human_fired.size() == mas.agents[mas.index_of("human")].plans.size() &&
         state.robot_fired.size() == mas.agents[mas.index_of("robotcode")].plans.size();
}

std::vector<BdiRun> bdi_generate(std::shared_ptr<const agentlang::MasDefinition> mas,
                                 GenerationState& state, const BdiOptions& options) {
  std::vector<BdiRun> runs;
  const std::string human = mas->agents[mas->index_of("human")].name;
  const std::string robot = mas->agents[mas->index_of("robotcode")].name;
  while (runs.size() < options.budget) {
    if (options.stop_on_full_coverage && plan_coverage_total(*mas, state)) break;
    const BeliefVector v = select_vector(*mas, state, options.strategy, options.pool);
    state.tried.set(v.bits);
    ++state.vectors_tried;

    BdiRun run{v, run_with_vector(mas, v, options.step_budget), {}};
    for (const auto& e : run.trace.entries) {
      if (!e.fired_plan) continue;
      if (e.agent == human) state.human_fired.insert(*e.fired_plan);
      if (e.agent == robot) state.robot_fired.insert(*e.fired_plan);
    }
    run.sequence.id = numbered(options.id_prefix, options.first_id + runs.size());
    run.sequence.generator = Generator::bdi;
    run.sequence.beliefs = v;
    run.sequence.actions = extract_actions(run.trace, human);
    runs.push_back(std::move(run));
  }
  return runs;
}

}  // namespace bditb::testgen
