#include <map>
#include <tuple>

#include "bditb/testgen.hpp"

namespace bditb::testgen {

namespace {

bool matches(const std::string& pattern, const AbstractAction& a) {
  return pattern == a.name || pattern == a.label();
}

bool is_setup(const AbstractAction& a) {
  return a.name == "set_gaze" || a.name == "set_pressure" || a.name == "move_hand" ||
         a.name == "say_ready";
}

struct State {
  int requests = 0;
  bool setup_first = false;  // setup seen before any request
  std::uint32_t seen = 0;    // order constraints whose `before` has occurred
  auto key() const { return std::tuple(requests, setup_first, seen); }
};

class Sampler {
 public:
  explicit Sampler(const std::vector<Constraint>& constraints) {
    for (const auto& l : alphabet()) letters_.push_back(AbstractAction::from_label(l));
    for (const auto& c : constraints) {
      auto check_known = [&](const std::string& p) {
        for (const auto& a : letters_) {
          if (matches(p, a)) return;
        }
        throw UnsatisfiableConstraints("constraint names unknown action '" + p + "'");
      };
      switch (c.kind) {
        case ConstraintKind::fix_element:
          check_known(c.action);
          fixes_.push_back(c);
          min_length_ = std::max(min_length_, c.position + 1);
          break;
        case ConstraintKind::forbid_element:
          check_known(c.action);
          forbids_.push_back(c.action);
          break;
        case ConstraintKind::order_relation:
          check_known(c.before);
          check_known(c.after);
          orders_.push_back(c);
          break;
      }
    }
    if (orders_.size() > 31) throw UnsatisfiableConstraints("too many order constraints");
  }

  std::size_t min_length() const { return min_length_; }
  const std::vector<AbstractAction>& letters() const { return letters_; }

  bool allowed(const AbstractAction& a, std::size_t pos, const State& s) const {
    for (const auto& f : forbids_) {
      if (matches(f, a)) return false;
    }
    for (const auto& f : fixes_) {
      if (f.position == pos && !matches(f.action, a)) return false;
    }
    for (std::size_t i = 0; i < orders_.size(); ++i) {
      if (matches(orders_[i].after, a) && !(s.seen >> i & 1u)) return false;
    }
    if (a.name == "request_leg") {
      if (s.requests >= kRounds) return false;
      if (s.requests == 0 && s.setup_first) return false;
    }
    return true;
  }

  State advance(const AbstractAction& a, State s) const {
    if (a.name == "request_leg") {
      ++s.requests;
    } else if (s.requests == 0 && is_setup(a)) {
      s.setup_first = true;
    }
    for (std::size_t i = 0; i < orders_.size(); ++i) {
      if (matches(orders_[i].before, a)) s.seen |= 1u << i;
    }
    return s;
  }

  bool feasible(std::size_t pos, std::size_t length, const State& s) {
    if (pos == length) return length >= min_length_;
    const auto key = std::tuple_cat(std::tuple(pos, length), s.key());
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool ok = false;
    for (const auto& a : letters_) {
      if (allowed(a, pos, s) && feasible(pos + 1, length, advance(a, s))) {
        ok = true;
        break;
      }
    }
    memo_.emplace(key, ok);
    return ok;
  }

 private:
  std::vector<AbstractAction> letters_;
  std::vector<Constraint> fixes_;
  std::vector<std::string> forbids_;
  std::vector<Constraint> orders_;
  std::size_t min_length_ = 0;
  std::map<std::tuple<std::size_t, std::size_t, int, bool, std::uint32_t>, bool> memo_;
};

}  // namespace

AbstractTestSequence random_generate(const std::vector<Constraint>& constraints,
                                     std::size_t min_length, std::size_t max_length,
                                     std::uint64_t seed, std::string id) {
  if (min_length > max_length) throw UnsatisfiableConstraints("empty length range");
  Sampler sampler(constraints);
  std::vector<std::size_t> lengths;
  for (std::size_t n = min_length; n <= max_length; ++n) {
    if (sampler.feasible(0, n, State{})) lengths.push_back(n);
  }
  if (lengths.empty()) {
    throw UnsatisfiableConstraints("no sequence of length " + std::to_string(min_length) + ".." +
                                   std::to_string(max_length) + " meets the constraints");
  }

  Rng rng(seed, 4);
  const std::size_t length = lengths[rng.below(lengths.size())];
  AbstractTestSequence seq;
  seq.id = std::move(id);
  seq.generator = Generator::random;
  State s;
  for (std::size_t pos = 0; pos < length; ++pos) {
    std::vector<const AbstractAction*> candidates;
    for (const auto& a : sampler.letters()) {
      if (sampler.allowed(a, pos, s) && sampler.feasible(pos + 1, length, sampler.advance(a, s))) {
        candidates.push_back(&a);
      }
    }
    const AbstractAction& pick = *candidates[rng.below(candidates.size())];
    seq.actions.push_back(pick);
    s = sampler.advance(pick, s);
  }
  assign_rounds(seq.actions);
  return seq;
}

}  // namespace bditb::testgen
