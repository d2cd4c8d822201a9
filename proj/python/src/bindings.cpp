#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "evrel/document.hpp"
#include "evrel/error.hpp"
#include "evrel/export.hpp"
#include "evrel/json_io.hpp"
#include "evrel/labels.hpp"
#include "evrel/metrics.hpp"
#include "evrel/session.hpp"
#include "evrel/simulate.hpp"
#include "evrel/snapshot.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

evrel::TemporalLabel label_arg(const std::string& text) {
  auto l = evrel::parse_label(text);
  if (!l) throw evrel::Error(evrel::ErrorCode::kValidation, "unknown temporal label '" + text + "'");
  return *l;
}

evrel::RelationKind kind_arg(const std::string& text) {
  auto k = evrel::parse_relation_kind(text);
  if (!k) throw evrel::Error(evrel::ErrorCode::kValidation, "unknown relation kind '" + text + "'");
  return *k;
}

}  // namespace

PYBIND11_MODULE(_evrel, m) {
  static py::exception<evrel::Error> engine_error(m, "EngineError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const evrel::Error& e) {
      json detail = {{"code", std::string(evrel::to_string(e.code()))}, {"message", e.what()},
                     {"blocking", e.blocking()}};
      py::set_error(engine_error, detail.dump().c_str());
    }
  });

  m.def("compose", [](const std::string& ik, const std::string& kj) -> std::optional<std::string> {
    auto c = evrel::compose(label_arg(ik), label_arg(kj));
    if (!c) return std::nullopt;
    return std::string(evrel::to_string(*c));
  });
  m.def("invert", [](const std::string& l) { return std::string(evrel::to_string(evrel::invert(label_arg(l)))); });

  m.def("parse_document", [](const std::string& raw) {
    return evrel::document_to_json(evrel::parse_document(raw)).dump();
  });
  m.def("validate_export", [](const std::string& raw) {
    auto e = evrel::validate_export(json::parse(raw));
    return json{{"doc_id", e.doc_id}, {"annotator_id", e.annotator_id}, {"mentions", e.mentions},
                {"clusters", e.clusters}}.dump();
  });

  m.def("cohen_kappa", [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
    return evrel::to_json(evrel::cohen_kappa(std::span<const std::string>(a), std::span<const std::string>(b))).dump();
  });
  m.def("bcubed_f1", [](const evrel::Partition& system, const evrel::Partition& reference) {
    return evrel::to_json(evrel::bcubed_f1(system, reference)).dump();
  });
  m.def("agreement", [](const std::string& a, const std::string& b, const std::string& kind) {
    auto ea = evrel::validate_export(json::parse(a));
    auto eb = evrel::validate_export(json::parse(b));
    return evrel::to_json(evrel::agreement(ea, eb, kind_arg(kind))).dump();
  });

  m.def(
      "simulate",
      [](std::size_t n, const std::string& policy, std::uint64_t seed) {
        evrel::SimulationConfig cfg;
        cfg.n_events = n;
        auto p = evrel::parse_truth_policy(policy);
        if (!p || *p == evrel::TruthPolicy::kFromFile) {
          throw evrel::Error(evrel::ErrorCode::kUsage, "policy must be chronological or random");
        }
        cfg.policy = *p;
        cfg.seed = seed;
        auto r = evrel::run_simulation(cfg);
        json out = r.to_json();
        out["export"] = r.export_document;
        return out.dump();
      },
      py::arg("events"), py::arg("policy") = "chronological", py::arg("seed") = 1);

  py::class_<evrel::AnnotationSession>(m, "Session")
      .def_static(
          "start",
          [](const std::string& doc, const std::string& annotator, const std::string& sid) {
            return evrel::AnnotationSession::start(evrel::parse_document(doc), annotator, sid);
          },
          py::arg("document"), py::arg("annotator_id"), py::arg("session_id") = "session")
      .def_static("load", [](const std::string& bytes) { return evrel::AnnotationSession::load(bytes); })
      .def("phase", [](const evrel::AnnotationSession& s) { return std::string(evrel::to_string(s.phase())); })
      .def("set_status",
           [](evrel::AnnotationSession& s, const std::string& mention, const std::string& status) {
             auto st = evrel::parse_status(status);
             if (!st) throw evrel::Error(evrel::ErrorCode::kValidation, "unknown status '" + status + "'");
             s.set_mention_status(mention, *st);
           })
      .def("annotate",
           [](evrel::AnnotationSession& s, const std::string& a, const std::string& b, const std::string& label) {
             auto r = s.annotate_temporal(a, b, label_arg(label));
             json inferred = json::array();
             for (const auto& k : r.delta.inferred) inferred.push_back(evrel::to_json(k));
             return json{{"recorded", r.recorded}, {"inferred", inferred},
                         {"conflicts", evrel::to_json(r.delta.conflicts)}}.dump();
           })
      .def(
          "form_cluster",
          [](evrel::AnnotationSession& s, const std::string& focal, const std::vector<std::string>& members,
             bool confirm) {
            auto r = s.form_cluster(focal, members, confirm);
            json conflicts = json::array();
            for (const auto& c : r.conflicts) conflicts.push_back(evrel::to_json(c));
            return json{{"applied", r.applied}, {"membership_conflicts", conflicts}}.dump();
          },
          py::arg("focal"), py::arg("members"), py::arg("confirm") = false)
      .def("record_causes", &evrel::AnnotationSession::record_causes)
      .def("advance", &evrel::AnnotationSession::advance)
      .def("back", &evrel::AnnotationSession::go_back)
      .def("next_unit", [](const evrel::AnnotationSession& s) { return evrel::to_json(s.next_unit()).dump(); })
      .def("snapshot", [](const evrel::AnnotationSession& s) { return evrel::session_snapshot(s).dump(); })
      .def("export", [](const evrel::AnnotationSession& s) { return s.export_annotation().dump(); })
      .def("save", &evrel::AnnotationSession::save)
      .def("state", [](const evrel::AnnotationSession& s) { return s.state_json().dump(); });
}
