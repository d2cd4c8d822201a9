#include <doctest.h>

#include "evrel/error.hpp"
#include "evrel/simulate.hpp"
#include "helpers.hpp"

using namespace evrel;

TEST_CASE("four-event chain") {
  SimulationConfig cfg;
  cfg.n_events = 4;
  auto r = run_simulation(cfg);
  CHECK(r.workload.temporal.manual_steps == 3);
  CHECK(r.workload.temporal.auto_steps == 3);
  CHECK(r.workload.temporal.reduction == doctest::Approx(0.5));
  CHECK(r.complete);
}

TEST_CASE("chain property for every length") {
  for (std::size_t n = 2; n <= 20; ++n) {
    SimulationConfig cfg;
    cfg.n_events = n;
    auto r = run_simulation(cfg);
    CHECK(r.workload.temporal.manual_steps == n - 1);
    CHECK(r.workload.temporal.total_pairs == n * (n - 1) / 2);
    CHECK(r.max_conflicts == 0);
    CHECK(r.coref_universe == 0);
    CHECK(r.causal_universe == n * (n - 1) / 2);
  }
}

TEST_CASE("random timelines finish conflict-free and deterministically") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    SimulationConfig cfg;
    cfg.n_events = 12;
    cfg.policy = TruthPolicy::kRandomTimeline;
    cfg.seed = seed;
    const auto r = run_simulation(cfg);
    CHECK(r.complete);
    CHECK(r.max_conflicts == 0);
    CHECK(r.workload.temporal.manual_steps + r.workload.temporal.auto_steps == 66);
    CHECK(run_simulation(cfg).to_json() == r.to_json());
  }
}

TEST_CASE("ground truth file round trip") {
  SimulationConfig cfg;
  cfg.n_events = 9;
  cfg.policy = TruthPolicy::kRandomTimeline;
  cfg.seed = 77;
  const auto t = make_ground_truth(cfg);
  const auto back = GroundTruth::from_json(t.to_json());
  CHECK(back.to_json() == t.to_json());
  CHECK(run_simulation(back).to_json() == run_simulation(t).to_json());
  CHECK_THROWS_AS(GroundTruth::from_json(nlohmann::json{{"start_times", "x"}}), Error);
}

TEST_CASE("vague marks never contradict a definite chain") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    SimulationConfig cfg;
    cfg.n_events = 10;
    cfg.policy = TruthPolicy::kRandomTimeline;
    cfg.vague_probability = 0.4;
    cfg.seed = seed;
    const auto t = make_ground_truth(cfg);
    oracle::PathClosure pc(t.size());
    for (std::size_t a = 0; a < t.size(); ++a) {
      for (std::size_t b = a + 1; b < t.size(); ++b) pc.set_direct(a, b, oracle::letter(t.label(a, b)));
    }
    pc.solve();
    for (auto [a, b] : t.vague) CHECK(pc.labels(a, b).empty());
  }
}
