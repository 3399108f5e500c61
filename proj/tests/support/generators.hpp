// Random inputs for property tests.
#pragma once

#include <set>
#include <string>
#include <vector>

#include "bditb/agentlang.hpp"
#include "bditb/rng.hpp"
#include "bditb/scenario.hpp"
#include "bditb/testgen.hpp"
#include "bditb/verify.hpp"

namespace bditb::testing {

/// Ground term over a small vocabulary so generated contexts actually match.
agentlang::Term random_term(Rng& rng, int depth = 2);

/// Well-formed program: every step kind, negated literals, empty bodies.
agentlang::AgentProgram random_program(Rng& rng, const std::string& name = "agent");

std::set<agentlang::Term> random_beliefs(Rng& rng);
agentlang::TriggerEvent random_trigger(Rng& rng);

/// Synthetic trace exercising every monitor trigger: attempts with gpl
/// readings and outcomes, gripper closes near the proximity threshold, and
/// speed samples on the tick grid around the cap.
scenario::SimTrace random_monitor_trace(Rng& rng, const verify::MonitorConfig& config);

/// Abstract sequence from either generator, chosen by `rng`.
testgen::AbstractTestSequence random_abstract(Rng& rng);

/// A scenario config with randomized error probabilities.
scenario::ScenarioConfig random_config(Rng& rng);

verify::CoverageState random_coverage(Rng& rng);

}  // namespace bditb::testing
