#pragma once

// Session-scoped REST surface over the library: snapshot -> GoR -> classify
// -> key filters / plan -> asynchronous extraction -> OCEL and flattening.
//
// ExtractorService is transport independent (dispatch takes method, path and
// body); ServiceServer binds it to HTTP. A live database connector would slot
// in where sessions load their catalog from a snapshot directory.

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace ocelforge {

enum class SessionState { New, GorBuilt, Classified, Configured, Extracting, Done, Failed };

std::string_view to_string(SessionState s) noexcept;

struct ServiceOptions {
  unsigned jobs = 1;  // table-level parallelism per extraction
  std::optional<std::filesystem::path> static_dir;  // served at "/" when set
};

struct ServiceResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

struct TablePreset {
  std::string name;
  std::string master;
  std::vector<std::string> tables;
};

// Pre-configured table sets for the mainstream processes.
const std::vector<TablePreset>& table_presets();

class ExtractorService {
public:
  explicit ExtractorService(ServiceOptions options = {});
  ~ExtractorService();
  ExtractorService(const ExtractorService&) = delete;
  ExtractorService& operator=(const ExtractorService&) = delete;

  ServiceResponse dispatch(const std::string& method, const std::string& path, const std::string& body);

  // Blocks until the session's running extraction (if any) has finished.
  void wait_for_extraction(const std::string& session_id);

  const ServiceOptions& options() const noexcept { return options_; }

private:
  struct Session;
  std::shared_ptr<Session> find(const std::string& id);

  ServiceOptions options_;
  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t counter_ = 0;
};

// OCELFORGE_PORT when set and valid, else 5000.
int port_from_env();

class ServiceServer {
public:
  explicit ServiceServer(ExtractorService& service);
  ~ServiceServer();
  ServiceServer(const ServiceServer&) = delete;
  ServiceServer& operator=(const ServiceServer&) = delete;

  // Returns the bound port (an ephemeral one when port == 0), or -1.
  int bind(const std::string& host, int port);
  // Serves until stop(); call after bind.
  bool listen();
  void stop();

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ocelforge
