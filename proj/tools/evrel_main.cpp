#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "evrel/error.hpp"
#include "evrel/export.hpp"
#include "evrel/metrics.hpp"
#include "evrel/service.hpp"
#include "evrel/session.hpp"
#include "evrel/simulate.hpp"

using nlohmann::json;
using namespace evrel;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot read " + path, {path});
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kNotFound, "cannot write " + path, {path});
  out << content;
}

json parse_json_file(const std::string& path) {
  try {
    return json::parse(slurp(path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kFormat, path + ": " + e.what(), {path});
  }
}

void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& rows) {
  if (j.is_object() && !j.empty()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), rows);
    }
  } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", rows);
  } else {
    rows.emplace_back(prefix, j.is_string() ? j.get<std::string>() : j.dump());
  }
}

void emit(const json& report, bool human) {
  if (!human) {
    std::cout << report.dump(2) << "\n";
    return;
  }
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(report, "", rows);
  std::size_t width = 0;
  for (const auto& [k, v] : rows) width = std::max(width, k.size());
  for (const auto& [k, v] : rows) {
    std::cout << k << std::string(width - k.size() + 2, ' ') << v << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"evrel: event relation annotation engine"};
  app.require_subcommand(1);
  app.fallthrough();
  bool human = false;
  app.add_flag("--human", human, "Tabular text instead of JSON");

  ServiceConfig serve_cfg;
  std::string data_dir, static_dir;
  auto* serve = app.add_subcommand("serve", "Run the annotation service");
  serve->add_option("--port", serve_cfg.port, "Listen port")->envname("EVREL_PORT");
  serve->add_option("--host", serve_cfg.host, "Listen address")->envname("EVREL_HOST");
  serve->add_option("--data", data_dir, "Session persistence directory")->envname("EVREL_DATA");
  serve->add_option("--static", static_dir, "UI bundle directory")->envname("EVREL_STATIC");

  std::string validate_file;
  auto* validate = app.add_subcommand("validate", "Parse and check a document");
  validate->add_option("FILE", validate_file)->required();

  std::string kind_text, export_a, export_b, universe_text = "before";
  auto* iaa = app.add_subcommand("iaa", "Agreement between two exports");
  iaa->add_option("--kind", kind_text)->required()->check(CLI::IsMember({"temporal", "coref", "coreference", "causal"}));
  iaa->add_option("--causal-universe", universe_text)->check(CLI::IsMember({"before", "all"}));
  iaa->add_option("EXPORT_A", export_a)->required();
  iaa->add_option("EXPORT_B", export_b)->required();

  std::string session_file;
  auto* exp = app.add_subcommand("export", "Export a saved session");
  exp->add_option("SESSION_FILE", session_file)->required();

  SimulationConfig sim;
  std::string policy_text = "chronological", truth_file;
  auto* simulate = app.add_subcommand("simulate", "Oracle-annotator workload run");
  simulate->add_option("--events", sim.n_events)->check(CLI::Range(1, 2000));
  simulate->add_option("--policy", policy_text)->check(CLI::IsMember({"chronological", "random", "random-timeline", "file"}));
  simulate->add_option("--seed", sim.seed);
  simulate->add_option("--tie-p", sim.tie_probability)->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--vague-p", sim.vague_probability)->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--coref-p", sim.coref_probability)->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--cause-p", sim.cause_probability)->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--truth", truth_file, "Ground truth JSON for --policy file");
  bool with_export = false;
  std::string export_out, session_out;
  simulate->add_flag("--with-export", with_export, "Include the export document");
  simulate->add_option("--export-out", export_out, "Write the export document to FILE");
  simulate->add_option("--session-out", session_out, "Write the saved session to FILE");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*serve) {
      serve_cfg.data_dir = data_dir;
      serve_cfg.static_dir = static_dir;
      AnnotationService service(serve_cfg);
      std::cerr << "evrel listening on " << serve_cfg.host << ":" << serve_cfg.port << "\n";
      return service.listen() ? 0 : 1;
    }
    if (*validate) {
      Document doc = parse_document(slurp(validate_file));
      const auto included = doc.included_ids();
      emit({{"valid", true}, {"doc_id", doc.doc_id}, {"mentions", doc.mentions.size()},
            {"included", included.size()}, {"pairs", included.empty() ? 0 : included.size() * (included.size() - 1) / 2}},
           human);
      return 0;
    }
    if (*iaa) {
      const auto a = validate_export(parse_json_file(export_a));
      const auto b = validate_export(parse_json_file(export_b));
      const auto kind = *parse_relation_kind(kind_text);
      const auto universe = universe_text == "all" ? CausalUniverse::kAllClusterPairs : CausalUniverse::kBeforeBoth;
      emit(to_json(agreement(a, b, kind, universe)), human);
      return 0;
    }
    if (*exp) {
      auto session = AnnotationSession::load(slurp(session_file));
      emit(session.export_annotation(), human);
      return 0;
    }
    if (*simulate) {
      sim.policy = *parse_truth_policy(policy_text);
      if (sim.policy == TruthPolicy::kFromFile) {
        if (truth_file.empty()) throw Error(ErrorCode::kUsage, "--policy file needs --truth FILE");
        sim.truth = GroundTruth::from_json(parse_json_file(truth_file));
        sim.n_events = sim.truth->size();
      }
      const auto result = run_simulation(sim);
      json out = result.to_json();
      if (with_export) out["export"] = result.export_document;
      if (!export_out.empty()) write_text(export_out, result.export_document.dump(2) + "\n");
      if (!session_out.empty()) write_text(session_out, result.saved_session);
      emit(out, human);
      return result.complete && result.max_conflicts == 0 ? 0 : 1;
    }
  } catch (const Error& e) {
    json err = {{"error", {{"code", std::string(to_string(e.code()))}, {"message", e.what()}, {"blocking", e.blocking()}}}};
    std::cout << err.dump(2) << "\n";
    return e.code() == ErrorCode::kUsage ? 2 : 1;
  } catch (const std::exception& e) {
    std::cout << json{{"error", {{"code", "internal"}, {"message", e.what()}}}}.dump(2) << "\n";
    return 1;
  }
  return 2;
}
