#include <cstdio>

#include "bditb/testgen.hpp"

namespace bditb::testgen {

namespace {

std::string numbered(const std::string& prefix, std::size_t n) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%03zu", n);
  return prefix + buf;
}

// Behaviour mode is fixed by (bored, skip_ready_command); k is the first
// round the human is not set up for.
struct Pool {
  const char* name;
  std::size_t budget;
  std::function<bool(BeliefVector)> member;
};

std::vector<Pool> paper_pools() {
  auto mode = [](BeliefVector v, bool bored, bool skip) {
    return !v.never_request() && v.bored() == bored && v.skip_ready() == skip;
  };
  auto k = [](BeliefVector v) { return v.first_non_ok_round(); };
  std::vector<Pool> pools;
  pools.push_back({"a", 4, [=](BeliefVector v) { return !v.never_request() && k(v) > kRounds; }});
  pools.push_back({"b", 25, [=](BeliefVector v) { return mode(v, false, false) && k(v) <= kRounds; }});
  const std::size_t c_budget[] = {0, 30, 31, 31, 7};
  for (int n = kRounds; n >= 1; --n) {
    static const char* names[] = {"", "c1", "c2", "c3", "c4"};
    pools.push_back({names[n], c_budget[n], [=](BeliefVector v) {
                       return (mode(v, true, false) && k(v) == n) ||
                              (mode(v, true, true) && k(v) == n + 1 && k(v) <= kRounds);
                     }});
  }
  pools.push_back({"d", 2, [=](BeliefVector v) { return mode(v, false, true) && k(v) <= kRounds; }});
  return pools;
}

}  // namespace

std::vector<SuiteEntry> random_suite(std::size_t count, const std::vector<Constraint>& constraints,
                                     const scenario::ScenarioConfig& config,
                                     std::size_t first_number, std::string prefix,
                                     std::vector<AbstractTestSequence>* abstracts) {
  std::vector<SuiteEntry> out;
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t seed = first_number + i;
    const std::string id = numbered(prefix, i + 1);
    auto seq = random_generate(constraints, kRandomMinLength, kRandomMaxLength, seed, id);
    out.push_back({concretize(seq, seed, config, id), id, "e"});
    if (abstracts) abstracts->push_back(std::move(seq));
  }
  return out;
}

PaperSuite paper_suite(const scenario::ScenarioConfig& config,
                       std::shared_ptr<const agentlang::MasDefinition> mas) {
  if (!mas) mas = default_mas();
  PaperSuite suite;
  GenerationState state;
  std::size_t test_number = 1;

  for (const Pool& pool : paper_pools()) {
    BdiOptions opt;
    opt.budget = pool.budget;
    opt.stop_on_full_coverage = false;
    opt.pool = pool.member;
    opt.first_id = suite.abstracts.size() + 1;
    const auto runs = bdi_generate(mas, state, opt);
    if (runs.size() != pool.budget) throw Error(std::string("pool ") + pool.name + " ran short");
    const std::size_t seeds = std::string(pool.name) == "d" ? kClassDSeeds : 1;
    for (const auto& run : runs) {
      for (std::size_t s = 0; s < seeds; ++s) {
        const std::string id = numbered("bdi-", test_number);
        suite.tests.push_back({concretize(run.sequence, test_number, config, id), run.sequence.id,
                               pool.name});
        ++test_number;
      }
      suite.abstracts.push_back(run.sequence);
    }
  }
  suite.bdi_abstracts = suite.abstracts.size();
  suite.bdi_tests = suite.tests.size();

  Constraint forbid;
  forbid.kind = ConstraintKind::forbid_element;
  forbid.action = "request_leg";
  const std::vector<Constraint> no_requests{forbid};
  auto random = random_suite(kRandomSuiteSize, no_requests, config, test_number, "rnd-",
                             &suite.abstracts);
  for (auto& e : random) suite.tests.push_back(std::move(e));
  return suite;
}

}  // namespace bditb::testgen
