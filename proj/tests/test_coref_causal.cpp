#include <doctest.h>

#include "evrel/causal.hpp"
#include "evrel/coref.hpp"
#include "evrel/error.hpp"
#include "helpers.hpp"

using namespace evrel;
using namespace testing_support;

namespace {

// Complete matrix over e1..en from a letter per pair (i < j), row by row.
RelationMatrix complete(std::size_t n, const std::map<std::pair<int, int>, TemporalLabel>& labels,
                        TemporalLabel rest = B) {
  RelationMatrix m(ids(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      auto it = labels.find({static_cast<int>(i + 1), static_cast<int>(j + 1)});
      m.set_direct(i, j, it == labels.end() ? rest : it->second);
    }
  }
  m.recompute_closure();
  return m;
}

}  // namespace

TEST_CASE("equal candidates") {
  auto m = complete(3, {{{1, 2}, E}});
  CHECK(equal_candidates(m, "e1") == std::vector<std::string>{"e2"});
  CHECK(equal_candidates(m, "e2") == std::vector<std::string>{"e1"});
  CHECK(equal_candidates(m, "e3").empty());

  RelationMatrix chain(ids(3));
  chain.apply_annotation("e1", "e2", E);
  chain.apply_annotation("e2", "e3", E);
  CHECK(equal_candidates(chain, "e2") == std::vector<std::string>{"e1", "e3"});

  RelationMatrix partial(ids(3));
  partial.apply_annotation("e1", "e2", E);
  CHECK_THROWS_AS(equal_candidates(partial, "e1"), Error);
}

TEST_CASE("form cluster and move on confirmation") {
  // e1..e4 all co-occur
  auto m = complete(4, {}, E);
  CorefPartition p;
  auto r = form_cluster(p, m, "e1", {"e2"});
  REQUIRE(r.applied);
  p = r.partition;
  REQUIRE(p.clusters().size() == 1);
  CHECK(p.clusters()[0].members == std::vector<std::string>{"e1", "e2"});
  CHECK_FALSE(p.is_handled("e3"));
  CHECK(next_unhandled_coref(p, m) == "e3");

  auto challenged = form_cluster(p, m, "e4", {"e2"});
  CHECK_FALSE(challenged.applied);
  REQUIRE(challenged.conflicts.size() == 1);
  CHECK(challenged.conflicts[0].mention == "e2");
  CHECK(challenged.conflicts[0].current_cluster == "e1");
  CHECK(challenged.partition == p);

  auto moved = form_cluster(p, m, "e4", {"e2"}, true);
  REQUIRE(moved.applied);
  const auto& clusters = moved.partition.clusters();
  REQUIRE(clusters.size() == 2);
  CHECK(clusters[0].members == std::vector<std::string>{"e1"});
  CHECK(clusters[1].members == std::vector<std::string>{"e2", "e4"});
  CHECK(clusters[1].id() == "e2");
}

TEST_CASE("selection outside the equal set is rejected") {
  auto m = complete(3, {{{1, 2}, E}});
  CHECK_THROWS_AS(form_cluster(CorefPartition{}, m, "e1", {"e3"}), Error);
}

TEST_CASE("empty selection and singletons") {
  auto m = complete(4, {{{1, 2}, E}});
  auto r = form_cluster(CorefPartition{}, m, "e1", {});
  CHECK(r.applied);
  CHECK(r.partition.clusters().empty());
  CHECK(r.partition.is_handled("e1"));
  CHECK(next_unhandled_coref(r.partition, m) == "e2");
  CHECK_THROWS_AS(finalize_singletons(r.partition, m), Error);

  auto both = form_cluster(CorefPartition{}, m, "e1", {"e2"}).partition;
  CHECK_FALSE(next_unhandled_coref(both, m).has_value());
  auto done = finalize_singletons(both, m);
  REQUIRE(done.clusters().size() == 3);
  CHECK(done.clusters()[0].members == std::vector<std::string>{"e1", "e2"});
  CHECK(done.clusters()[2].members == std::vector<std::string>{"e4"});
}

TEST_CASE("cluster relation") {
  auto m = complete(3, {{{1, 2}, E}});
  auto p = finalize_singletons(form_cluster(CorefPartition{}, m, "e1", {"e2"}).partition, m);
  CHECK(cluster_relation(m, p.clusters()[0], p.clusters()[1]) == B);
  CHECK(cluster_relation(m, p.clusters()[1], p.clusters()[0]) == A);

  // hand-built corrupt state: {e1,e2} against e3 with mixed labels
  RelationMatrix bad(ids(3));
  bad.set_direct(0, 1, E);
  bad.set_direct(0, 2, B);
  bad.set_direct(1, 2, V);
  CHECK_THROWS_AS(cluster_relation(bad, Cluster{{"e1", "e2"}}, Cluster{{"e3"}}), Error);
}

TEST_CASE("causal candidates are the preceding clusters") {
  // e1 = e2, then e3, then e4; e3 and e4 vague to each other
  auto m = complete(4, {{{1, 2}, E}, {{3, 4}, V}});
  auto p = finalize_singletons(form_cluster(CorefPartition{}, m, "e1", {"e2"}).partition, m);
  CHECK(preceding_candidates(p, m, "e1").empty());
  CHECK(preceding_candidates(p, m, "e3") == std::vector<std::string>{"e1"});
  CHECK(preceding_candidates(p, m, "e4") == std::vector<std::string>{"e1"});
  CHECK_THROWS_AS(preceding_candidates(p, m, "e2"), Error);

  CausalState s;
  CHECK(next_unhandled_causal(s, p, m) == "e3");
  s = record_causes(s, p, m, "e3", {"e1"});
  CHECK(s.links == std::set<CausalLink>{{"e1", "e3"}});
  CHECK_THROWS_AS(record_causes(s, p, m, "e4", {"e3"}), Error);
  s = record_causes(s, p, m, "e4", {});
  CHECK_FALSE(next_unhandled_causal(s, p, m).has_value());
  // re-answering replaces the earlier choice for that effect
  s = record_causes(s, p, m, "e3", {});
  CHECK(s.links.empty());
}

TEST_CASE("no causal transitivity") {
  auto m = complete(3, {});
  auto p = finalize_singletons(CorefPartition{}, m);
  CausalState s;
  s = record_causes(s, p, m, "e2", {"e1"});
  s = record_causes(s, p, m, "e3", {"e2"});
  CHECK(s.links.size() == 2);
  CHECK_FALSE(s.links.count({"e1", "e3"}));
}
