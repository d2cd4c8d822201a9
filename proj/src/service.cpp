#include "evrel/service.hpp"

#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "evrel/error.hpp"
#include "evrel/export.hpp"
#include "evrel/json_io.hpp"
#include "evrel/metrics.hpp"
#include "evrel/snapshot.hpp"

namespace evrel {

using nlohmann::json;

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kValidation:
    case ErrorCode::kUsage:
    case ErrorCode::kFormat: return 400;
    case ErrorCode::kNotFound: return 404;
    case ErrorCode::kPhase:
    case ErrorCode::kPrecondition: return 409;
    case ErrorCode::kIntegrity: return 500;
  }
  return 500;
}

json api_error(const Error& e) {
  return {{"error", {{"code", std::string(to_string(e.code()))}, {"message", e.what()}, {"blocking", e.blocking()}}}};
}

struct AnnotationService::Runtime {
  httplib::Server server;
  std::thread thread;
};

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  const auto tmp = p.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
  }
  std::filesystem::rename(tmp, p);
}

json parse_body(const std::string& body) {
  try {
    return body.empty() ? json::object() : json::parse(body);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kValidation, std::string("malformed request body: ") + e.what());
  }
}

std::string field(const json& body, const char* name) {
  if (!body.is_object() || !body.contains(name) || !body[name].is_string()) {
    throw Error(ErrorCode::kValidation, std::string("missing string field '") + name + "'");
  }
  return body[name].get<std::string>();
}

std::vector<std::string> id_list(const json& body, const char* name) {
  if (!body.contains(name)) return {};
  if (!body[name].is_array()) throw Error(ErrorCode::kValidation, std::string("'") + name + "' must be an array");
  std::vector<std::string> out;
  for (const auto& v : body[name]) {
    if (!v.is_string()) throw Error(ErrorCode::kValidation, std::string("'") + name + "' must hold strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

bool safe_id(const std::string& id) {
  return !id.empty() && id.find_first_of("/\\") == std::string::npos && id != "." && id != "..";
}

}  // namespace

AnnotationService::AnnotationService(ServiceConfig config) : config_(std::move(config)) {
  if (!config_.data_dir.empty()) load_data_dir();
}

AnnotationService::~AnnotationService() { stop(); }

void AnnotationService::load_data_dir() {
  namespace fs = std::filesystem;
  fs::create_directories(config_.data_dir / "documents");
  fs::create_directories(config_.data_dir / "sessions");
  for (const auto& e : fs::directory_iterator(config_.data_dir / "documents")) {
    if (e.path().extension() != ".json") continue;
    Document doc = parse_document(read_file(e.path()));
    documents_[doc.doc_id] = std::move(doc);
  }
  for (const auto& e : fs::directory_iterator(config_.data_dir / "sessions")) {
    if (e.path().extension() != ".json") continue;
    auto s = AnnotationSession::load(read_file(e.path()));
    const std::string id = s.session_id();
    sessions_[id] = std::make_shared<Entry>(std::move(s));
    if (id.size() > 1 && id[0] == 's') {
      try {
        next_session_ = std::max(next_session_, std::stoul(id.substr(1)) + 1);
      } catch (const std::exception&) {
      }
    }
  }
}

void AnnotationService::persist(const std::string& session_id, const AnnotationSession& s) {
  if (config_.data_dir.empty()) return;
  write_file(config_.data_dir / "sessions" / (session_id + ".json"), s.save());
}

std::string AnnotationService::add_document(const json& body) {
  Document doc = document_from_json(body);
  if (!safe_id(doc.doc_id)) throw Error(ErrorCode::kValidation, "doc_id must be a plain file-safe name");
  std::unique_lock lock(registry_mutex_);
  if (auto it = documents_.find(doc.doc_id); it != documents_.end()) {
    if (it->second == doc) return doc.doc_id;
    throw Error(ErrorCode::kPrecondition, "a different document with id " + doc.doc_id + " exists");
  }
  if (!config_.data_dir.empty()) {
    write_file(config_.data_dir / "documents" / (doc.doc_id + ".json"), serialize_document(doc));
  }
  const std::string id = doc.doc_id;
  documents_[id] = std::move(doc);
  return id;
}

std::string AnnotationService::create_session(const std::string& doc_id, const std::string& annotator_id) {
  std::unique_lock lock(registry_mutex_);
  auto it = documents_.find(doc_id);
  if (it == documents_.end()) throw Error(ErrorCode::kNotFound, "unknown document " + doc_id, {doc_id});
  const std::string id = "s" + std::to_string(next_session_++);
  auto s = AnnotationSession::start(it->second, annotator_id, id);
  persist(id, s);
  sessions_[id] = std::make_shared<Entry>(std::move(s));
  return id;
}

std::shared_ptr<AnnotationService::Entry> AnnotationService::entry(const std::string& session_id) {
  std::shared_lock lock(registry_mutex_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) throw Error(ErrorCode::kNotFound, "unknown session " + session_id, {session_id});
  return it->second;
}

template <typename F>
json AnnotationService::mutate(const std::string& session_id, F&& f) {
  auto e = entry(session_id);
  std::lock_guard lock(e->mutex);
  const std::size_t before = e->session.log().size();
  json out = f(e->session);
  if (e->session.log().size() != before) persist(session_id, e->session);
  return out;
}

json AnnotationService::snapshot(const std::string& session_id) {
  auto e = entry(session_id);
  std::lock_guard lock(e->mutex);
  return session_snapshot(e->session);
}

json AnnotationService::next(const std::string& session_id) {
  auto e = entry(session_id);
  std::lock_guard lock(e->mutex);
  return to_json(e->session.next_unit());
}

json AnnotationService::selection(const std::string& session_id, const json& body) {
  const std::string mention = field(body, "mention_id");
  auto status = parse_status(field(body, "status"));
  if (!status) throw Error(ErrorCode::kValidation, "status must be included or excluded");
  return mutate(session_id, [&](AnnotationSession& s) {
    s.set_mention_status(mention, *status);
    return json{{"mention_id", mention}, {"status", std::string(to_string(*status))}};
  });
}

json AnnotationService::temporal(const std::string& session_id, const json& body) {
  const std::string a = field(body, "a");
  const std::string b = field(body, "b");
  const TemporalLabel label = label_from_json(body, "label");
  return mutate(session_id, [&](AnnotationSession& s) {
    auto r = s.annotate_temporal(a, b, label);
    json inferred = json::array();
    for (const auto& k : r.delta.inferred) inferred.push_back(to_json(k));
    return json{{"recorded", r.recorded}, {"inferred", inferred}, {"conflicts", to_json(r.delta.conflicts)}};
  });
}

json AnnotationService::coref(const std::string& session_id, const json& body) {
  const std::string focal = field(body, "focal");
  const auto members = id_list(body, "members");
  const bool confirm = body.value("confirm", false);
  return mutate(session_id, [&](AnnotationSession& s) {
    auto r = s.form_cluster(focal, members, confirm);
    json challenge = json::array();
    for (const auto& c : r.conflicts) challenge.push_back(to_json(c));
    return json{{"applied", r.applied},
                {"membership_conflicts", challenge},
                {"clusters", to_json(s.partition())["clusters"]}};
  });
}

json AnnotationService::causal(const std::string& session_id, const json& body) {
  const std::string focal = field(body, "focal");
  const auto causes = id_list(body, "causes");
  return mutate(session_id, [&](AnnotationSession& s) {
    s.record_causes(focal, causes);
    return json{{"links", to_json(s.causal())["links"]}};
  });
}

json AnnotationService::advance(const std::string& session_id) {
  return mutate(session_id, [&](AnnotationSession& s) {
    s.advance();
    return json{{"phase", std::string(to_string(s.phase()))}};
  });
}

json AnnotationService::back(const std::string& session_id) {
  return mutate(session_id, [&](AnnotationSession& s) {
    s.go_back();
    return json{{"phase", std::string(to_string(s.phase()))}};
  });
}

json AnnotationService::conflicts(const std::string& session_id) {
  auto e = entry(session_id);
  std::lock_guard lock(e->mutex);
  return to_json(e->session.matrix().detect_conflicts());
}

json AnnotationService::export_session(const std::string& session_id) {
  auto e = entry(session_id);
  std::lock_guard lock(e->mutex);
  return e->session.export_annotation();
}

std::string AnnotationService::save(const std::string& session_id) {
  auto e = entry(session_id);
  std::lock_guard lock(e->mutex);
  return e->session.save();
}

json AnnotationService::iaa(const json& body) {
  auto kind = parse_relation_kind(field(body, "kind"));
  if (!kind) throw Error(ErrorCode::kValidation, "kind must be temporal, coref or causal");
  CausalUniverse universe = CausalUniverse::kBeforeBoth;
  if (body.contains("causal_universe")) {
    const std::string u = field(body, "causal_universe");
    if (u == "all") universe = CausalUniverse::kAllClusterPairs;
    else if (u != "before") throw Error(ErrorCode::kValidation, "causal_universe must be before or all");
  }
  std::vector<ExportedAnnotation> exports;
  if (body.contains("exports")) {
    if (!body["exports"].is_array()) throw Error(ErrorCode::kValidation, "'exports' must be an array");
    for (const auto& e : body["exports"]) exports.push_back(validate_export(e));
  }
  for (const auto& id : id_list(body, "session_ids")) exports.push_back(validate_export(export_session(id)));
  auto result = pairwise_agreement(exports, *kind, universe);
  json reports = json::array();
  for (const auto& [pair, report] : result.pairs) {
    json r = to_json(report);
    r["annotators"] = {exports[pair.first].annotator_id, exports[pair.second].annotator_id};
    reports.push_back(std::move(r));
  }
  json out = {{"kind", std::string(to_string(*kind))}, {"reports", reports}, {"average", result.average}};
  if (result.pairs.size() == 1) out["report"] = reports.front();
  return out;
}

void AnnotationService::mount(httplib::Server& server) {
  auto guarded = [](auto&& handler) {
    return [handler](const httplib::Request& req, httplib::Response& res) {
      try {
        auto [status, body] = handler(req);
        res.status = status;
        res.set_content(body, "application/json");
      } catch (const Error& e) {
        res.status = http_status(e.code());
        res.set_content(api_error(e).dump(), "application/json");
      } catch (const std::exception& e) {
        res.status = 500;
        res.set_content(api_error(Error(ErrorCode::kIntegrity, e.what())).dump(), "application/json");
      }
    };
  };
  using Result = std::pair<int, std::string>;
  auto ok = [](const json& j) { return Result{200, j.dump()}; };
  const std::string sid = R"(/sessions/([^/]+))";

  server.Post("/documents", guarded([this, ok](const httplib::Request& req) {
    return ok({{"doc_id", add_document(parse_body(req.body))}});
  }));
  server.Post("/sessions", guarded([this, ok](const httplib::Request& req) {
    const json body = parse_body(req.body);
    const std::string id = create_session(field(body, "doc_id"), body.value("annotator_id", "anonymous"));
    return ok({{"session_id", id}, {"phase", snapshot(id)["phase"]}});
  }));
  server.Get(sid + "/snapshot", guarded([this, ok](const httplib::Request& req) { return ok(snapshot(req.matches[1])); }));
  server.Get(sid + "/next", guarded([this, ok](const httplib::Request& req) { return ok(next(req.matches[1])); }));
  server.Get(sid + "/conflicts", guarded([this, ok](const httplib::Request& req) { return ok(conflicts(req.matches[1])); }));
  server.Get(sid + "/export", guarded([this, ok](const httplib::Request& req) { return ok(export_session(req.matches[1])); }));
  server.Get(sid + "/save", guarded([this](const httplib::Request& req) { return Result{200, save(req.matches[1])}; }));
  server.Post(sid + "/selection", guarded([this, ok](const httplib::Request& req) {
    return ok(selection(req.matches[1], parse_body(req.body)));
  }));
  server.Post(sid + "/temporal", guarded([this, ok](const httplib::Request& req) {
    return ok(temporal(req.matches[1], parse_body(req.body)));
  }));
  server.Post(sid + "/coref", guarded([this, ok](const httplib::Request& req) {
    return ok(coref(req.matches[1], parse_body(req.body)));
  }));
  server.Post(sid + "/causal", guarded([this, ok](const httplib::Request& req) {
    return ok(causal(req.matches[1], parse_body(req.body)));
  }));
  server.Post(sid + "/advance", guarded([this, ok](const httplib::Request& req) { return ok(advance(req.matches[1])); }));
  server.Post(sid + "/back", guarded([this, ok](const httplib::Request& req) { return ok(back(req.matches[1])); }));
  server.Post("/iaa", guarded([this, ok](const httplib::Request& req) { return ok(iaa(parse_body(req.body))); }));

  if (!config_.static_dir.empty()) server.set_mount_point("/", config_.static_dir.string());
}

bool AnnotationService::listen() {
  if (!runtime_) runtime_ = std::make_unique<Runtime>();
  mount(runtime_->server);
  return runtime_->server.listen(config_.host, config_.port);
}

int AnnotationService::start_background() {
  if (!runtime_) runtime_ = std::make_unique<Runtime>();
  mount(runtime_->server);
  const int port = runtime_->server.bind_to_any_port(config_.host);
  if (port < 0) throw Error(ErrorCode::kUsage, "could not bind a port on " + config_.host);
  runtime_->thread = std::thread([this] { runtime_->server.listen_after_bind(); });
  runtime_->server.wait_until_ready();
  return port;
}

void AnnotationService::stop() {
  if (!runtime_) return;
  runtime_->server.stop();
  if (runtime_->thread.joinable()) runtime_->thread.join();
}

}  // namespace evrel
