#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>

#include <json.hpp>

#include "evrel/document.hpp"
#include "evrel/error.hpp"
#include "evrel/session.hpp"

namespace httplib {
class Server;
}

namespace evrel {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path data_dir;    // empty: in-memory only
  std::filesystem::path static_dir;  // empty: no UI bundle
};

int http_status(ErrorCode code);
nlohmann::json api_error(const Error& e);

// HTTP facade over documents and annotation sessions. Writes to one session
// are serialized by that session's mutex; different sessions proceed in
// parallel.
class AnnotationService {
 public:
  explicit AnnotationService(ServiceConfig config);
  ~AnnotationService();

  AnnotationService(const AnnotationService&) = delete;
  AnnotationService& operator=(const AnnotationService&) = delete;

  void mount(httplib::Server& server);

  // Blocks serving on config.host/config.port until stop().
  bool listen();
  // Binds an ephemeral port and serves on a background thread; returns the port.
  int start_background();
  void stop();

  // Operations behind the endpoints, usable without a socket.
  std::string add_document(const nlohmann::json& body);
  std::string create_session(const std::string& doc_id, const std::string& annotator_id);
  nlohmann::json snapshot(const std::string& session_id);
  nlohmann::json next(const std::string& session_id);
  nlohmann::json selection(const std::string& session_id, const nlohmann::json& body);
  nlohmann::json temporal(const std::string& session_id, const nlohmann::json& body);
  nlohmann::json coref(const std::string& session_id, const nlohmann::json& body);
  nlohmann::json causal(const std::string& session_id, const nlohmann::json& body);
  nlohmann::json advance(const std::string& session_id);
  nlohmann::json back(const std::string& session_id);
  nlohmann::json conflicts(const std::string& session_id);
  nlohmann::json export_session(const std::string& session_id);
  std::string save(const std::string& session_id);
  nlohmann::json iaa(const nlohmann::json& body);

 private:
  struct Entry {
    explicit Entry(AnnotationSession s) : session(std::move(s)) {}
    std::mutex mutex;
    AnnotationSession session;
  };

  std::shared_ptr<Entry> entry(const std::string& session_id);
  template <typename F>
  nlohmann::json mutate(const std::string& session_id, F&& f);
  void persist(const std::string& session_id, const AnnotationSession& s);
  void load_data_dir();

  ServiceConfig config_;
  std::shared_mutex registry_mutex_;
  std::map<std::string, Document> documents_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::size_t next_session_ = 1;
  struct Runtime;
  std::unique_ptr<Runtime> runtime_;
};

}  // namespace evrel
