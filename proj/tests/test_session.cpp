#include <doctest.h>

#include "evrel/error.hpp"
#include "evrel/export.hpp"
#include "evrel/session.hpp"
#include "helpers.hpp"

using namespace evrel;
using namespace testing_support;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error");
  return ErrorCode::kIntegrity;
}

AnnotationSession accident_session() {
  auto s = AnnotationSession::start(accident_document(), "ann-1");
  s.set_clock([] { return 1000; });
  s.annotate_temporal("accident", "collided", E);
  s.annotate_temporal("collided", "damage", B);
  s.annotate_temporal("damage", "responded", B);
  return s;
}

void finish(AnnotationSession& s) {
  s.advance();
  s.form_cluster("accident", {"collided"});
  s.advance();
  s.record_causes("damage", {"accident"});
  s.record_causes("responded", {"damage"});
  s.advance();
}

}  // namespace

TEST_CASE("navigation stops at selection") {
  auto s = accident_session();
  s.go_back();
  CHECK(s.phase() == TaskPhase::kSelection);
  CHECK(code_of([&] { s.go_back(); }) == ErrorCode::kPhase);
  s.advance();
  CHECK(s.phase() == TaskPhase::kTemporal);
  CHECK(s.log().back().phase == TaskPhase::kSelection);
}

TEST_CASE("empty document cannot start") {
  Document d;
  d.doc_id = "empty";
  CHECK(code_of([&] { AnnotationSession::start(d, "a"); }) == ErrorCode::kPrecondition);
}

TEST_CASE("selection phase filters mentions") {
  auto doc = accident_document();
  for (auto& m : doc.mentions) m.status = MentionStatus::kCandidate;
  auto s = AnnotationSession::start(doc, "a");
  CHECK(s.phase() == TaskPhase::kSelection);
  CHECK(s.next_unit().pending.size() == 4);
  s.set_mention_status("accident", MentionStatus::kIncluded);
  CHECK(code_of([&] { s.advance(); }) == ErrorCode::kPrecondition);
  s.set_mention_status("collided", MentionStatus::kExcluded);
  s.set_mention_status("damage", MentionStatus::kIncluded);
  s.set_mention_status("responded", MentionStatus::kIncluded);
  CHECK(code_of([&] { s.set_mention_status("ghost", MentionStatus::kIncluded); }) == ErrorCode::kNotFound);
  s.advance();
  CHECK(s.phase() == TaskPhase::kTemporal);
  CHECK(s.matrix().size() == 3);
  CHECK(code_of([&] { s.annotate_temporal("accident", "collided", B); }) == ErrorCode::kPrecondition);
  CHECK(code_of([&] { s.set_mention_status("accident", MentionStatus::kExcluded); }) == ErrorCode::kPhase);
}

TEST_CASE("full workflow and export") {
  auto s = accident_session();
  CHECK(s.steps(TaskPhase::kTemporal).manual_steps == 3);
  CHECK(s.steps(TaskPhase::kTemporal).auto_steps == 3);
  CHECK(code_of([&] { s.export_annotation(); }) == ErrorCode::kPhase);
  CHECK(code_of([&] { s.form_cluster("accident", {"collided"}); }) == ErrorCode::kPhase);
  s.advance();
  auto unit = s.next_unit();
  CHECK(unit.focal == "accident");
  CHECK(unit.candidates == std::vector<std::string>{"collided"});
  CHECK(code_of([&] { s.form_cluster("accident", {"damage"}); }) == ErrorCode::kPrecondition);
  s.form_cluster("accident", {"collided"});
  CHECK(s.next_unit().phase_complete);
  s.advance();
  CHECK(s.partition().clusters().size() == 3);
  unit = s.next_unit();
  CHECK(unit.focal == "damage");
  CHECK(unit.candidates == std::vector<std::string>{"accident"});
  CHECK(code_of([&] { s.record_causes("damage", {"responded"}); }) == ErrorCode::kPrecondition);
  s.record_causes("damage", {"accident"});
  CHECK(code_of([&] { s.advance(); }) == ErrorCode::kPrecondition);
  s.record_causes("responded", {"damage"});
  s.advance();
  CHECK(s.phase() == TaskPhase::kDone);

  const auto exported = s.export_annotation();
  CHECK(exported["clusters"].size() == 3);
  CHECK(exported["temporal"].size() == 3);
  CHECK(exported["stats"]["temporal"]["manual_steps"] == 3);
  CHECK(exported["stats"]["coreference"]["manual_steps"] == 1);
  CHECK(exported["stats"]["causal"]["manual_steps"] == 2);
  const auto back = validate_export(exported);
  CHECK(back.cluster_of("collided") == "accident");
  CHECK(back.causal.count({"accident", "damage"}));
}

TEST_CASE("identical annotation is a no-op") {
  auto s = accident_session();
  const auto before = s.state_json();
  const auto log_size = s.log().size();
  auto r = s.annotate_temporal("collided", "accident", E);
  CHECK_FALSE(r.recorded);
  CHECK(s.log().size() == log_size);
  CHECK(s.state_json() == before);
  r = s.annotate_temporal("damage", "collided", A);
  CHECK_FALSE(r.recorded);
}

TEST_CASE("revision is logged as revise and keeps the step count") {
  auto s = accident_session();
  s.annotate_temporal("accident", "collided", B);
  CHECK(s.log().back().kind == ActionKind::kRevise);
  CHECK(s.steps(TaskPhase::kTemporal).manual_steps == 3);
  CHECK(s.steps(TaskPhase::kTemporal).pairs_presented == 4);
}

TEST_CASE("save and load replays to the same state") {
  auto s = accident_session();
  s.advance();
  s.form_cluster("accident", {"collided"});
  const auto saved = s.save();
  auto loaded = AnnotationSession::load(saved);
  CHECK(loaded.state_json() == s.state_json());
  CHECK(loaded.save() == saved);

  CHECK(code_of([&] { AnnotationSession::load(saved.substr(0, saved.size() / 2)); }) == ErrorCode::kFormat);
  auto j = nlohmann::json::parse(saved);
  j["format_version"] = 99;
  CHECK(code_of([&] { AnnotationSession::load(j.dump()); }) == ErrorCode::kFormat);
  j = nlohmann::json::parse(saved);
  j["log"][1]["seq"] = 1;
  CHECK(code_of([&] { AnnotationSession::load(j.dump()); }) == ErrorCode::kFormat);
  j = nlohmann::json::parse(saved);
  j["log"][0]["payload"]["label"] = "SOMETIME";
  CHECK(code_of([&] { AnnotationSession::load(j.dump()); }) == ErrorCode::kFormat);
}

TEST_CASE("revising upstream invalidates clusters and links") {
  auto s = accident_session();
  finish(s);
  s.go_back();
  s.go_back();
  s.go_back();
  CHECK(s.phase() == TaskPhase::kTemporal);
  s.annotate_temporal("accident", "collided", B);
  s.advance();
  REQUIRE(s.invalidated().size() == 1);
  CHECK(s.invalidated()[0].kind == "cluster");
  CHECK(s.next_unit().phase_complete);
  s.advance();
  CHECK(s.causal().links.count({"accident", "damage"}));
  s.go_back();
  s.go_back();
  s.annotate_temporal("accident", "damage", A);
  CHECK_FALSE(s.matrix().detect_conflicts().empty());
  CHECK(code_of([&] { s.advance(); }) == ErrorCode::kPrecondition);
  s.annotate_temporal("accident", "damage", B);
  s.annotate_temporal("accident", "collided", A);
  CHECK(s.matrix().detect_conflicts().empty());
  s.annotate_temporal("collided", "damage", A);
  CHECK_FALSE(s.matrix().detect_conflicts().empty());
}

TEST_CASE("causal link removed when its order breaks") {
  auto s = accident_session();
  finish(s);
  for (int i = 0; i < 3; ++i) s.go_back();
  // damage and responded become simultaneous
  s.annotate_temporal("damage", "responded", E);
  s.advance();
  REQUIRE_FALSE(s.next_unit().phase_complete);
  CHECK(s.next_unit().focal == "damage");
  s.form_cluster("damage", {});
  CHECK(s.next_unit().focal == "responded");
  s.form_cluster("responded", {});
  s.advance();
  bool dropped = false;
  for (const auto& item : s.invalidated()) {
    if (item.kind == "causal_link" && item.detail["effect"] == "responded") dropped = true;
  }
  CHECK(dropped);
  CHECK_FALSE(s.causal().links.count({"damage", "responded"}));
  CHECK(s.next_unit().focal == "responded");
}
