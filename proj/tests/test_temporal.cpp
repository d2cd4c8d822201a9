#include <doctest.h>

#include <random>

#include "evrel/error.hpp"
#include "evrel/temporal.hpp"
#include "helpers.hpp"

using namespace evrel;
using namespace testing_support;

TEST_CASE("accident walkthrough presents three pairs and infers three") {
  RelationMatrix m({"accident", "collided", "damage", "responded"});
  std::vector<PairKey> presented;
  const std::map<std::pair<std::string, std::string>, TemporalLabel> answers = {
      {{"accident", "collided"}, E}, {{"collided", "damage"}, B}, {{"damage", "responded"}, B}};
  std::size_t auto_count = 0;
  while (auto next = m.next_pair()) {
    const auto key = m.key(next->first, next->second);
    presented.push_back(key);
    auto delta = m.apply_annotation(key.first, key.second, answers.at({key.first, key.second}));
    CHECK(delta.conflicts.empty());
    auto_count += delta.inferred.size();
  }
  REQUIRE(presented.size() == 3);
  CHECK(presented[0] == PairKey{"accident", "collided"});
  CHECK(presented[1] == PairKey{"collided", "damage"});
  CHECK(presented[2] == PairKey{"damage", "responded"});
  CHECK(auto_count == 3);
  CHECK(m.label("accident", "damage") == B);
  CHECK(m.label("accident", "responded") == B);
  CHECK(m.label("collided", "responded") == B);
  CHECK(m.label("damage", "accident") == A);
  CHECK(m.cell(PairKey{"accident", "damage"}).provenance == Provenance::kInferred);
  CHECK(m.cell(PairKey{"accident", "damage"}).witness == std::vector<std::string>{"collided"});
  const auto status = m.completion_status();
  CHECK(status.complete);
  CHECK(status.direct_pairs == 3);
  CHECK(status.inferred_pairs == 3);
}

TEST_CASE("answering the accident pair as after contradicts the path through collided") {
  RelationMatrix m({"accident", "collided", "damage", "responded"});
  m.apply_annotation("accident", "collided", E);
  m.apply_annotation("collided", "damage", B);
  auto delta = m.apply_annotation("accident", "damage", A);
  REQUIRE_FALSE(delta.conflicts.empty());
  bool found = false;
  for (const auto& w : delta.conflicts) {
    if (w.pair == PairKey{"accident", "damage"} && w.mediator == "collided") {
      found = true;
      CHECK(w.kind == ConflictKind::kDirectContradiction);
      CHECK(w.direct_label == A);
      CHECK(w.composed_label == B);
      CHECK(w.path == std::vector<std::string>{"accident", "collided", "damage"});
    }
  }
  CHECK(found);
  CHECK_FALSE(m.completion_status().complete);
  CHECK(delta.previous.provenance == Provenance::kInferred);
}

TEST_CASE("two mentions, one answer, nothing inferred") {
  RelationMatrix m(ids(2));
  auto delta = m.apply_annotation("e1", "e2", B);
  CHECK(delta.inferred.empty());
  CHECK(delta.conflicts.empty());
  CHECK_FALSE(m.next_pair().has_value());
}

TEST_CASE("direct vague contradicted by a definite path") {
  RelationMatrix m(ids(3));
  m.apply_annotation("e1", "e2", V);
  m.apply_annotation("e1", "e3", B);
  auto delta = m.apply_annotation("e3", "e2", B);
  REQUIRE(delta.conflicts.size() >= 1);
  const auto& w = delta.conflicts.front();
  CHECK(w.pair == PairKey{"e1", "e2"});
  CHECK(w.mediator == "e3");
  CHECK(w.direct_label == V);
  CHECK(w.composed_label == B);
}

TEST_CASE("equal-before-after triangle reports the mediator e2 witness") {
  RelationMatrix m(ids(3));
  m.apply_annotation("e1", "e2", E);
  m.apply_annotation("e2", "e3", B);
  auto delta = m.apply_annotation("e1", "e3", A);
  bool found = false;
  for (const auto& w : delta.conflicts) {
    if (w.pair == PairKey{"e1", "e3"} && w.mediator == "e2") {
      found = true;
      CHECK(w.composed_label == B);
      CHECK(w.leg_ik == E);
      CHECK(w.leg_kj == B);
      CHECK(w.leg_ik_state.provenance == Provenance::kDirect);
    }
  }
  CHECK(found);
}

TEST_CASE("vague blocks inference") {
  RelationMatrix m(ids(3));
  m.apply_annotation("e1", "e2", V);
  m.apply_annotation("e2", "e3", B);
  CHECK(m.cell(0, 2).provenance == Provenance::kUnannotated);
  const auto status = m.completion_status();
  CHECK_FALSE(status.complete);
  CHECK(status.unannotated_pairs == 1);
}

TEST_CASE("chain closure resolves everything") {
  RelationMatrix m(ids(4));
  m.set_direct(0, 1, B);
  m.set_direct(1, 2, B);
  m.set_direct(2, 3, B);
  m.recompute_closure();
  CHECK(m.completion_status().resolved_pairs == 6);
  CHECK(m.cell(0, 3).label == B);
  CHECK(m.cell(0, 3).witness.size() == 2);
}

TEST_CASE("two-path disagreement on an unannotated pair") {
  RelationMatrix m(ids(4));
  m.apply_annotation("e1", "e2", B);
  m.apply_annotation("e2", "e4", B);
  m.apply_annotation("e1", "e3", A);
  auto delta = m.apply_annotation("e3", "e4", A);
  CHECK(m.cell(0, 3).provenance == Provenance::kUnannotated);
  bool found = false;
  for (const auto& w : delta.conflicts) {
    if (w.kind == ConflictKind::kPathDisagreement && w.pair == PairKey{"e1", "e4"}) {
      found = true;
      CHECK_FALSE(w.direct_label.has_value());
      CHECK_FALSE(w.rival_labels.empty());
    }
  }
  CHECK(found);
}

TEST_CASE("next pair follows the shared second node") {
  RelationMatrix m(ids(4));
  CHECK(m.next_pair() == std::pair<std::size_t, std::size_t>{0, 1});
  m.apply_annotation("e1", "e2", E);
  CHECK(m.next_pair() == std::pair<std::size_t, std::size_t>{1, 2});
  m.apply_annotation("e2", "e3", B);
  CHECK(m.next_pair() == std::pair<std::size_t, std::size_t>{2, 3});
}

TEST_CASE("singleton matrix is trivially complete") {
  RelationMatrix m(ids(1));
  const auto s = m.completion_status();
  CHECK(s.complete);
  CHECK(s.resolved_pairs == 0);
  CHECK_FALSE(m.next_pair().has_value());
}

TEST_CASE("pair errors") {
  RelationMatrix m(ids(3));
  CHECK_THROWS_AS(m.apply_annotation("e1", "e1", B), Error);
  CHECK_THROWS_AS(m.apply_annotation("e1", "zz", B), Error);
}

TEST_CASE("closure equals the path-enumeration oracle on random direct sets") {
  std::mt19937 rng(20240607);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 7)(rng);
    RelationMatrix m(ids(n));
    oracle::PathClosure pc(n);
    std::uniform_real_distribution<double> u(0, 1);
    const double density = u(rng);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (u(rng) >= density) continue;
        const char l = oracle::kLetters[std::uniform_int_distribution<int>(0, 3)(rng)];
        m.set_direct(i, j, oracle::from_letter(l));
        pc.set_direct(i, j, l);
      }
    }
    m.recompute_closure();
    pc.solve();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const auto& c = m.cell(i, j);
        const auto& expect = pc.labels(i, j);
        if (auto d = pc.direct(i, j)) {
          CHECK(c.provenance == Provenance::kDirect);
          CHECK(oracle::letter(c.label) == *d);
        } else if (expect.size() == 1) {
          REQUIRE(c.provenance == Provenance::kInferred);
          CHECK(oracle::letter(c.label) == *expect.begin());
          std::vector<std::string> walk{m.mention_ids()[i]};
          walk.insert(walk.end(), c.witness.begin(), c.witness.end());
          walk.push_back(m.mention_ids()[j]);
          CHECK(fold_walk(m, walk) == *expect.begin());
        } else {
          CHECK(c.provenance == Provenance::kUnannotated);
        }
      }
    }
  }
}

TEST_CASE("closure is idempotent and a pure function of direct cells") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 6;
    RelationMatrix a(ids(n)), b(ids(n));
    std::vector<std::tuple<std::size_t, std::size_t, TemporalLabel>> edits;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (rng() % 2) edits.emplace_back(i, j, oracle::from_letter(oracle::kLetters[rng() % 4]));
      }
    }
    for (auto [i, j, l] : edits) a.apply_annotation(i, j, l == B ? A : B);
    for (auto [i, j, l] : edits) a.apply_annotation(i, j, l);
    for (auto it = edits.rbegin(); it != edits.rend(); ++it) b.set_direct(std::get<0>(*it), std::get<1>(*it), std::get<2>(*it));
    b.recompute_closure();
    CHECK(a == b);
    RelationMatrix c = b;
    c.recompute_closure();
    CHECK(b == c);
  }
}

TEST_CASE("consistent timelines produce no conflicts") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 7;
    const auto t = oracle::random_timeline(n, rng);
    RelationMatrix m(ids(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (rng() % 3) m.set_direct(i, j, oracle::from_letter(t.label(i, j)));
      }
    }
    m.recompute_closure();
    CHECK(m.detect_conflicts().empty());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const auto& c = m.cell(i, j);
        if (c.provenance == Provenance::kInferred) CHECK(oracle::letter(c.label) == t.label(i, j));
      }
    }
  }
}
