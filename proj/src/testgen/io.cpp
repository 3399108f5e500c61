#include <json.hpp>

#include "bditb/testgen.hpp"

namespace bditb::testgen {

using nlohmann::json;

std::string abstract_to_json(const AbstractTestSequence& seq) {
  json actions = json::array();
  for (const auto& a : seq.actions) actions.push_back({{"action", a.label()}, {"round", a.round}});
  json doc = {{"id", seq.id}, {"generator", std::string(to_string(seq.generator))}};
  if (seq.beliefs) {
    json names = json::array();
    for (const auto& t : seq.beliefs->beliefs()) names.push_back(t.functor);
    doc["beliefs"] = names;
    doc["vector"] = seq.beliefs->to_string();
  } else {
    doc["beliefs"] = nullptr;
  }
  doc["actions"] = std::move(actions);
  return doc.dump(1) + "\n";
}

AbstractTestSequence abstract_from_json(const std::string& text) {
  AbstractTestSequence seq;
  try {
    const json doc = json::parse(text);
    seq.id = doc.at("id").get<std::string>();
    const auto gen = doc.at("generator").get<std::string>();
    if (gen == "bdi") {
      seq.generator = Generator::bdi;
    } else if (gen == "random") {
      seq.generator = Generator::random;
    } else {
      throw Error("unknown generator '" + gen + "'");
    }
    if (doc.contains("beliefs") && !doc["beliefs"].is_null()) {
      seq.beliefs = BeliefVector::from_beliefs(doc["beliefs"].get<std::vector<std::string>>());
    }
    for (const auto& a : doc.at("actions")) {
      seq.actions.push_back(
          AbstractAction::from_label(a.at("action").get<std::string>(), a.value("round", 1)));
    }
  } catch (const json::exception& e) {
    throw Error(std::string("abstract sequence JSON: ") + e.what());
  }
  validate_sequence(seq.actions);
  return seq;
}

std::string constraints_to_json(const std::vector<Constraint>& constraints) {
  json list = json::array();
  for (const auto& c : constraints) {
    switch (c.kind) {
      case ConstraintKind::fix_element:
        list.push_back({{"kind", "fix-element"}, {"position", c.position}, {"action", c.action}});
        break;
      case ConstraintKind::forbid_element:
        list.push_back({{"kind", "forbid-element"}, {"action", c.action}});
        break;
      case ConstraintKind::order_relation:
        list.push_back({{"kind", "order-relation"}, {"before", c.before}, {"after", c.after}});
        break;
    }
  }
  return list.dump(1) + "\n";
}

std::vector<Constraint> constraints_from_json(const std::string& text) {
  std::vector<Constraint> out;
  try {
    for (const auto& j : json::parse(text)) {
      Constraint c;
      const auto kind = j.at("kind").get<std::string>();
      if (kind == "fix-element") {
        c.kind = ConstraintKind::fix_element;
        c.position = j.at("position").get<std::size_t>();
        c.action = j.at("action").get<std::string>();
      } else if (kind == "forbid-element") {
        c.kind = ConstraintKind::forbid_element;
        c.action = j.at("action").get<std::string>();
      } else if (kind == "order-relation") {
        c.kind = ConstraintKind::order_relation;
        c.before = j.at("before").get<std::string>();
        c.after = j.at("after").get<std::string>();
      } else {
        throw Error("unknown constraint kind '" + kind + "'");
      }
      out.push_back(std::move(c));
    }
  } catch (const json::exception& e) {
    throw Error(std::string("constraint JSON: ") + e.what());
  }
  return out;
}

}  // namespace bditb::testgen
