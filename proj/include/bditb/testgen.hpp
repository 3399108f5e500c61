// Two-tier test generation: abstract action sequences from BDI agent runs or
// constrained random draws, then concretization into timed stimuli.
#pragma once

#include <bitset>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bditb/agentlang.hpp"
#include "bditb/bdi.hpp"
#include "bditb/scenario.hpp"

namespace bditb::testgen {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class NoUntriedVector : public Error {
 public:
  NoUntriedVector() : Error("no untried belief vector left in the selection pool") {}
};
class UnsatisfiableConstraints : public Error {
 public:
  using Error::Error;
};
class UnregisteredAction : public Error {
 public:
  explicit UnregisteredAction(const std::string& a) : Error("no concrete generator for '" + a + "'") {}
};
class InvalidSequence : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Belief vectors

inline constexpr int kSwitchCount = 15;
inline constexpr std::uint32_t kVectorCount = 1u << kSwitchCount;
inline constexpr int kRounds = 4;

/// Switch names in bit order: never_request, bored, skip_ready_command, then
/// gaze_ok_r, press_ok_r, loc_ok_r for r = 1..4.
const std::vector<std::string>& switch_names();

struct BeliefVector {
  std::uint16_t bits = 0;

  bool get(int i) const { return (bits >> i) & 1u; }
  bool never_request() const { return get(0); }
  bool bored() const { return get(1); }
  bool skip_ready() const { return get(2); }
  bool gaze_ok(int round) const { return get(3 + 3 * (round - 1)); }
  bool press_ok(int round) const { return get(4 + 3 * (round - 1)); }
  bool loc_ok(int round) const { return get(5 + 3 * (round - 1)); }
  bool round_ok(int round) const { return gaze_ok(round) && press_ok(round) && loc_ok(round); }
  /// 1..4, or 5 when every round is ok.
  int first_non_ok_round() const;

  std::vector<agentlang::Term> beliefs() const;
  std::string to_string() const;  // 15 chars, bit 0 first
  static BeliefVector from_string(std::string_view s);
  static BeliefVector from_beliefs(const std::vector<std::string>& names);

  friend auto operator<=>(const BeliefVector&, const BeliefVector&) = default;
};

/// Gray-code enumeration order: the i-th vector visited.
inline BeliefVector gray_vector(std::uint32_t i) {
  return {static_cast<std::uint16_t>(i ^ (i >> 1))};
}

// ---------------------------------------------------------------------------
// Abstract sequences

struct AbstractAction {
  std::string name;
  std::vector<std::string> args;
  int round = 1;

  std::string label() const;  // e.g. move_hand(close,fast)
  static AbstractAction from_label(std::string_view label, int round = 1);
  friend bool operator==(const AbstractAction&, const AbstractAction&) = default;
};

/// The thirteen labels of the generation alphabet.
const std::vector<std::string>& alphabet();

enum class Generator { bdi, random };
std::string_view to_string(Generator g);

struct AbstractTestSequence {
  std::string id;
  Generator generator = Generator::bdi;
  std::optional<BeliefVector> beliefs;
  std::vector<AbstractAction> actions;
  friend bool operator==(const AbstractTestSequence&, const AbstractTestSequence&) = default;
};

/// Protocol ordering check; returns a description of the first violation.
std::optional<std::string> check_sequence(const std::vector<AbstractAction>& actions);
void validate_sequence(const std::vector<AbstractAction>& actions);  // throws InvalidSequence

/// Rebuilds round indices from request positions.
void assign_rounds(std::vector<AbstractAction>& actions);

/// External actions of `agent` in trace order, with round indices.
std::vector<AbstractAction> extract_actions(const bdi::MasTrace& trace,
                                            const std::string& agent = "human");

// ---------------------------------------------------------------------------
// BDI-directed generation

/// The bundled meta/human/robotcode agents.
std::shared_ptr<const agentlang::MasDefinition> default_mas();

enum class SelectionStrategy { greedy_novelty, gray };

struct GenerationState {
  std::bitset<kVectorCount> tried;
  std::set<std::size_t> human_fired;
  std::set<std::size_t> robot_fired;
  std::uint32_t vectors_tried = 0;
};

struct BdiOptions {
  SelectionStrategy strategy = SelectionStrategy::greedy_novelty;
  std::size_t budget = 130;
  bool stop_on_full_coverage = true;
  std::function<bool(BeliefVector)> pool;  // empty: whole domain
  std::string id_prefix = "abs-";
  std::size_t first_id = 1;
  std::uint64_t step_budget = bdi::kDefaultStepBudget;
};

struct BdiRun {
  BeliefVector vector;
  bdi::MasTrace trace;
  AbstractTestSequence sequence;
};

/// Picks the next vector for the given strategy without marking it tried.
BeliefVector select_vector(const agentlang::MasDefinition& mas, const GenerationState& state,
                           SelectionStrategy strategy,
                           const std::function<bool(BeliefVector)>& pool = {});

/// Runs the MAS once with `vector` injected into the meta agent.
bdi::MasTrace run_with_vector(std::shared_ptr<const agentlang::MasDefinition> mas,
                              BeliefVector vector,
                              std::uint64_t step_budget = bdi::kDefaultStepBudget);

/// Choose, inject, run, extract, update coverage; repeated until the budget is
/// spent or (optionally) both human and robotcode plan coverage are total.
std::vector<BdiRun> bdi_generate(std::shared_ptr<const agentlang::MasDefinition> mas,
                                 GenerationState& state, const BdiOptions& options);

bool plan_coverage_total(const agentlang::MasDefinition& mas, const GenerationState& state);

// ---------------------------------------------------------------------------
// Constrained random generation

enum class ConstraintKind { fix_element, order_relation, forbid_element };

struct Constraint {
  ConstraintKind kind = ConstraintKind::forbid_element;
  std::string action;        // fix/forbid: name or full label
  std::size_t position = 0;  // fix
  std::string before;        // order: `after` may only occur once `before` has
  std::string after;
  friend bool operator==(const Constraint&, const Constraint&) = default;
};

AbstractTestSequence random_generate(const std::vector<Constraint>& constraints,
                                     std::size_t min_length, std::size_t max_length,
                                     std::uint64_t seed, std::string id = "rnd");

// ---------------------------------------------------------------------------
// Concretization

inline constexpr double kCloseMax = 0.10;
inline constexpr double kFarMin = 0.30;
inline constexpr double kFarMax = 1.00;
inline constexpr double kSlowMin = 0.05;
inline constexpr double kSlowMax = 0.15;
inline constexpr double kFastMin = 0.30;
inline constexpr double kFastMax = 0.60;
inline constexpr std::int64_t kGapMinMs = 500;
inline constexpr std::int64_t kGapMaxMs = 5'000;
inline constexpr std::int64_t kVoiceRepeatMs = 1'000;
inline constexpr double kBadPressureMax = 1.0;

scenario::ConcreteTest concretize(const AbstractTestSequence& abstract, std::uint64_t seed,
                                  const scenario::ScenarioConfig& config = {},
                                  std::string id = {});

// ---------------------------------------------------------------------------
// Reference suite: 138 agent-directed tests then 30 random

struct SuiteEntry {
  scenario::ConcreteTest test;
  std::string abstract_id;
  std::string pool;  // a, b, c4..c1, d, e
};

struct PaperSuite {
  std::vector<AbstractTestSequence> abstracts;  // 130 BDI then 30 random
  std::vector<SuiteEntry> tests;                // 138 BDI then 30 random
  std::size_t bdi_abstracts = 0;
  std::size_t bdi_tests = 0;
};

inline constexpr std::size_t kRandomSuiteSize = 30;
inline constexpr std::size_t kRandomMinLength = 4;
inline constexpr std::size_t kRandomMaxLength = 12;
inline constexpr std::size_t kClassDSeeds = 5;

PaperSuite paper_suite(const scenario::ScenarioConfig& config = {},
                       std::shared_ptr<const agentlang::MasDefinition> mas = nullptr);

/// Constrained random suite; test i (0-based) has seed first_number + i.
std::vector<SuiteEntry> random_suite(std::size_t count, const std::vector<Constraint>& constraints,
                                     const scenario::ScenarioConfig& config,
                                     std::size_t first_number = 1, std::string prefix = "rnd-",
                                     std::vector<AbstractTestSequence>* abstracts = nullptr);

// ---------------------------------------------------------------------------
// File formats (JSON)

std::string abstract_to_json(const AbstractTestSequence& seq);
AbstractTestSequence abstract_from_json(const std::string& text);
std::string constraints_to_json(const std::vector<Constraint>& constraints);
std::vector<Constraint> constraints_from_json(const std::string& text);

}  // namespace bditb::testgen
