#include <filesystem>
#include <fstream>
#include <sstream>

#include "bditb/agentlang.hpp"

namespace bditb::agentlang {

DuplicateAgentName::DuplicateAgentName(const std::string& name)
    : Error("duplicate agent name '" + name + "'") {}

UnknownRecipient::UnknownRecipient(const std::string& agent, const std::string& recipient)
    : Error("agent '" + agent + "' refers to undeclared agent '" + recipient + "'"),
      recipient_(recipient) {}

std::size_t MasDefinition::index_of(const std::string& name) const {
  auto it = names.find(name);
  if (it == names.end()) throw UnknownRecipient("<lookup>", name);
  return it->second;
}

void validate_recipients(const MasDefinition& mas) {
  for (const auto& agent : mas.agents) {
    for (const auto& plan : agent.plans) {
      for (const auto& step : plan.body) {
        if (step.kind == StepKind::send && !mas.has(step.recipient)) {
          throw UnknownRecipient(agent.name, step.recipient);
        }
      }
    }
  }
}

MasDefinition parse_mas(std::string_view config, const SourceLoader& load) {
  MasDefinition mas;
  std::vector<std::pair<std::string, std::string>> aliases;
  std::istringstream in{std::string(config)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream words(line);
    std::string directive;
    if (!(words >> directive)) continue;
    std::string a, b, extra;
    if (!(words >> a >> b) || (words >> extra)) {
      throw SyntaxError(lineno, 1, "'<directive> <name> <value>'",
                        "malformed MAS config line");
    }
    if (directive == "agent") {
      if (mas.names.count(a)) throw DuplicateAgentName(a);
      AgentProgram prog;
      try {
        prog = parse_agent(load(b), a);
      } catch (const SyntaxError& e) {
        throw SyntaxError(e.line(), e.column(), e.expected(), b + ": " + e.what());
      }
      mas.names[a] = mas.agents.size();
      mas.agents.push_back(std::move(prog));
      mas.paths.push_back(b);
    } else if (directive == "alias") {
      aliases.emplace_back(a, b);
    } else {
      throw SyntaxError(lineno, 1, "'agent' or 'alias'", "unknown directive '" + directive + "'");
    }
  }
  for (const auto& [alias, target] : aliases) {
    if (mas.names.count(alias)) throw DuplicateAgentName(alias);
    auto it = mas.names.find(target);
    if (it == mas.names.end()) throw UnknownRecipient("alias " + alias, target);
    mas.names[alias] = it->second;
  }
  validate_recipients(mas);
  return mas;
}

MasDefinition load_mas(const std::string& config_path) {
  namespace fs = std::filesystem;
  auto slurp = [](const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    if (!f) throw Error("cannot read " + p.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
  };
  const fs::path base = fs::path(config_path).parent_path();
  return parse_mas(slurp(config_path),
                   [&](const std::string& rel) { return slurp(base / rel); });
}

}  // namespace bditb::agentlang
