// Abstract syntax, parser and printer for the AgentSpeak subset used by the
// test-generation agents. The accepted grammar is in docs/agentspeak-subset.ebnf.
#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bditb::agentlang {

/// Ground first-order term: `functor` or `functor(arg, ...)`.
struct Term {
  std::string functor;
  std::vector<Term> args;

  Term() = default;
  explicit Term(std::string f, std::vector<Term> a = {})
      : functor(std::move(f)), args(std::move(a)) {}

  bool is_atom() const { return args.empty(); }
  std::string to_string() const;

  friend bool operator==(const Term&, const Term&) = default;
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);
};

enum class TriggerKind { add_goal, add_belief, del_belief };

struct TriggerEvent {
  TriggerKind kind = TriggerKind::add_goal;
  Term payload;

  std::string to_string() const;
  friend bool operator==(const TriggerEvent&, const TriggerEvent&) = default;
};

struct Literal {
  Term term;
  bool negated = false;
  friend bool operator==(const Literal&, const Literal&) = default;
};

/// Conjunction of literals; empty means `true`.
struct Context {
  std::vector<Literal> literals;
  friend bool operator==(const Context&, const Context&) = default;
};

enum class StepKind { achieve_goal, add_belief, del_belief, send, wait, external_action };
enum class Performative { tell, achieve };

struct BodyStep {
  StepKind kind = StepKind::external_action;
  Term payload;
  // only meaningful for StepKind::send
  std::string recipient;
  Performative performative = Performative::tell;

  std::string to_string() const;
  friend bool operator==(const BodyStep&, const BodyStep&) = default;
};

struct Plan {
  std::size_t id = 0;
  TriggerEvent trigger;
  Context context;
  std::vector<BodyStep> body;
  int source_line = 0;  // not part of structural equality

  friend bool operator==(const Plan& a, const Plan& b) {
    return a.id == b.id && a.trigger == b.trigger && a.context == b.context && a.body == b.body;
  }
};

struct AgentProgram {
  std::string name;
  std::vector<Term> initial_beliefs;
  std::vector<Term> initial_goals;
  std::vector<Plan> plans;

  friend bool operator==(const AgentProgram&, const AgentProgram&) = default;
};

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(int line, int column, std::string expected, std::string detail);
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& expected() const { return expected_; }

 private:
  int line_;
  int column_;
  std::string expected_;
};

class DuplicateAgentName : public Error {
 public:
  explicit DuplicateAgentName(const std::string& name);
};

class UnknownRecipient : public Error {
 public:
  UnknownRecipient(const std::string& agent, const std::string& recipient);
  const std::string& recipient() const { return recipient_; }

 private:
  std::string recipient_;
};

// ---------------------------------------------------------------------------
// Operations

AgentProgram parse_agent(std::string_view source, std::string name = {});

/// Canonical text; parse_agent(unparse(p), p.name) == p.
std::string unparse(const AgentProgram& program);

/// Agents of a multi-agent system plus the name table used to resolve
/// message recipients. Aliases map to the index of a declared agent.
struct MasDefinition {
  std::vector<AgentProgram> agents;
  std::vector<std::string> paths;
  std::map<std::string, std::size_t> names;

  std::size_t index_of(const std::string& name) const;  // throws UnknownRecipient
  bool has(const std::string& name) const { return names.count(name) != 0; }
};

using SourceLoader = std::function<std::string(const std::string& path)>;

/// Config format, one directive per line, `#` comments:
///   agent <name> <path>
///   alias <alias> <agent-name>
MasDefinition parse_mas(std::string_view config, const SourceLoader& load);

/// Reads a config file from disk; agent paths are relative to its directory.
MasDefinition load_mas(const std::string& config_path);

/// Cross-checks every `.send` recipient against the name table.
void validate_recipients(const MasDefinition& mas);

}  // namespace bditb::agentlang
