#include "ocelforge/service.hpp"

#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <random>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "ocelforge/error.hpp"
#include "ocelforge/extractor.hpp"
#include "ocelforge/json_io.hpp"
#include "ocelforge/pipeline.hpp"

namespace fs = std::filesystem;

namespace ocelforge {

namespace {

constexpr std::size_t kMaxKeyValues = 200;

struct HttpError {
  int status;
  std::string code;
  std::string message;
};

[[noreturn]] void conflict(const std::string& message) { throw HttpError{409, "StateConflict", message}; }
[[noreturn]] void bad_request(const std::string& message) { throw HttpError{400, "BadRequest", message}; }

ServiceResponse json_response(int status, const json& body) {
  return {status, "application/json", body.dump(2) + "\n"};
}

ServiceResponse error_response(int status, const std::string& code, const std::string& message) {
  return json_response(status, {{"error", code}, {"message", message}});
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  const auto end = path.find('?');
  std::string segment;
  for (std::size_t i = 0; i < std::min(end, path.size()); ++i) {
    if (path[i] == '/') {
      if (!segment.empty()) parts.push_back(std::move(segment));
      segment.clear();
    } else {
      segment.push_back(path[i]);
    }
  }
  if (!segment.empty()) parts.push_back(std::move(segment));
  for (auto& p : parts) p = httplib::detail::decode_url(p, false);
  return parts;
}

json parse_body(const std::string& body) {
  if (body.find_first_not_of(" \t\r\n") == std::string::npos) return json::object();
  try {
    json doc = json::parse(body);
    if (!doc.is_object()) bad_request("request body must be a JSON object");
    return doc;
  } catch (const json::parse_error& e) {
    bad_request(std::string("invalid JSON: ") + e.what());
  }
}

template <typename T>
T body_value(const json& body, const char* key, T fallback) {
  auto it = body.find(key);
  if (it == body.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    bad_request(std::string("field ") + key + " has the wrong type");
  }
}

std::string new_token(std::uint64_t counter) {
  static std::mt19937_64 engine{std::random_device{}()};
  std::ostringstream out;
  out << std::hex << engine() << "-" << counter;
  return out.str();
}

}  // namespace

std::string_view to_string(SessionState s) noexcept {
  switch (s) {
    case SessionState::New: return "new";
    case SessionState::GorBuilt: return "gor_built";
    case SessionState::Classified: return "classified";
    case SessionState::Configured: return "configured";
    case SessionState::Extracting: return "extracting";
    case SessionState::Done: return "done";
    case SessionState::Failed: return "failed";
  }
  return "new";
}

const std::vector<TablePreset>& table_presets() {
  static const std::vector<TablePreset> presets = {
      {"P2P", "EKKO", {"BKPF", "BSEG", "EBAN", "EKBE", "EKET", "EKKO", "EKPA", "EKPO", "RBKP", "RESB", "RKPF", "RSEG"}},
      {"P2P-changes",
       "EKKO",
       {"BKPF", "BSEG", "CDHDR", "CDPOS", "EBAN", "EKBE", "EKET", "EKKO", "EKPA", "EKPO", "RBKP", "RESB", "RKPF",
        "RSEG"}},
      {"O2C-flow", "VBFA", {"VBFA"}},
  };
  return presets;
}

struct ExtractorService::Session {
  std::string id;
  fs::path snapshot;
  Catalog catalog;
  Lookups lookups;
  ClassificationRules rules;

  std::mutex mutex;
  std::condition_variable finished;
  SessionState state = SessionState::New;
  std::optional<GraphOfRelations> gor;
  std::optional<Classification> classification;
  std::optional<ExtractionPlan> plan;

  std::thread worker;
  std::atomic<std::size_t> tables_done{0};
  std::atomic<std::size_t> tables_total{0};
  std::atomic<std::size_t> events_emitted{0};
  std::optional<OcelLog> log;
  std::string ocel_json;
  std::optional<RunDiagnostics> diagnostics;
  std::string failure_code;
  std::string failure_message;

  // Drops everything downstream of `keep` (backward edits).
  void reset_after(SessionState keep) {
    if (keep < SessionState::Classified) classification.reset();
    if (keep < SessionState::Configured) plan.reset();
    log.reset();
    ocel_json.clear();
    diagnostics.reset();
    failure_code.clear();
    failure_message.clear();
    tables_done = 0;
    tables_total = 0;
    events_emitted = 0;
    state = keep;
  }

  void require_not_extracting() const {
    if (state == SessionState::Extracting) conflict("an extraction is running for this session");
  }

  void require_gor() const {
    if (!gor) conflict("build the graph of relations first");
  }
};

ExtractorService::ExtractorService(ServiceOptions options) : options_(std::move(options)) {}

ExtractorService::~ExtractorService() {
  std::map<std::string, std::shared_ptr<Session>> sessions;
  {
    std::lock_guard lock(mutex_);
    sessions = sessions_;
  }
  for (auto& [id, s] : sessions) {
    if (s->worker.joinable()) s->worker.join();
  }
}

std::shared_ptr<ExtractorService::Session> ExtractorService::find(const std::string& id) {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw HttpError{404, "UnknownSession", "no session " + id};
  return it->second;
}

void ExtractorService::wait_for_extraction(const std::string& session_id) {
  auto s = find(session_id);
  std::unique_lock lock(s->mutex);
  s->finished.wait(lock, [&] { return s->state != SessionState::Extracting; });
}

ServiceResponse ExtractorService::dispatch(const std::string& method, const std::string& path,
                                           const std::string& body) {
  try {
    const auto parts = split_path(path);
    if (parts.empty() || parts[0] != "sessions") throw HttpError{404, "NotFound", "no route " + path};

    if (parts.size() == 1) {
      if (method != "POST") throw HttpError{405, "MethodNotAllowed", method + " " + path};
      const json req = parse_body(body);
      const auto snapshot = body_value<std::string>(req, "snapshot", "");
      if (snapshot.empty()) bad_request("\"snapshot\" (server-local directory) is required");
      auto s = std::make_shared<Session>();
      s->snapshot = snapshot;
      s->catalog = load_catalog(s->snapshot);
      s->lookups = load_lookups(s->catalog.data_root());
      if (auto r = req.find("rules"); r != req.end() && !r->is_null()) s->rules = rules_from_json(*r);
      {
        std::lock_guard lock(mutex_);
        s->id = new_token(++counter_);
        sessions_[s->id] = s;
      }
      return json_response(201, {{"id", s->id},
                                 {"state", std::string(to_string(s->state))},
                                 {"tables", s->catalog.tables().size()}});
    }

    auto s = find(parts[1]);
    const std::vector<std::string> rest(parts.begin() + 2, parts.end());
    auto route = [&](const char* m, std::initializer_list<const char*> segments) {
      if (method != m || rest.size() != segments.size()) return false;
      std::size_t i = 0;
      for (const char* seg : segments) {
        if (std::string(seg) != "*" && rest[i] != seg) return false;
        ++i;
      }
      return true;
    };

    std::unique_lock lock(s->mutex);

    if (route("GET", {})) {
      json out = {{"id", s->id},
                  {"state", std::string(to_string(s->state))},
                  {"snapshot", s->snapshot.string()},
                  {"tables", s->catalog.tables().size()}};
      if (s->gor) {
        out["master"] = s->gor->master;
        out["gor_nodes"] = s->gor->nodes;
      }
      if (s->diagnostics) out["diagnostics"] = diagnostics_to_json(*s->diagnostics);
      if (!s->failure_code.empty()) out["error"] = {{"error", s->failure_code}, {"message", s->failure_message}};
      return json_response(200, out);
    }

    if (route("GET", {"tables"})) {
      json tables = json::array();
      for (const auto& [name, t] : s->catalog.tables()) {
        json cols = json::array();
        for (const auto& c : t.columns) {
          cols.push_back({{"field", c.field},
                          {"domain", c.domain},
                          {"kind", std::string(to_string(s->catalog.domain(c.domain).kind))},
                          {"key", c.is_key}});
        }
        tables.push_back({{"name", name}, {"row_count", t.row_count}, {"primary_key", t.primary_key}, {"columns", cols}});
      }
      return json_response(200, tables);
    }

    if (route("GET", {"tables", "presets"})) {
      json out = json::array();
      for (const auto& p : table_presets()) {
        std::vector<std::string> missing;
        for (const auto& t : p.tables) {
          if (!s->catalog.has_table(t)) missing.push_back(t);
        }
        out.push_back({{"name", p.name},
                       {"master", p.master},
                       {"tables", p.tables},
                       {"available", missing.empty()},
                       {"missing", missing}});
      }
      return json_response(200, out);
    }

    if (route("POST", {"gor"})) {
      s->require_not_extracting();
      const json req = parse_body(body);
      const auto master = body_value<std::string>(req, "master", "");
      if (master.empty()) bad_request("\"master\" is required");
      GorOptions opt;
      opt.row_threshold = body_value<std::size_t>(req, "threshold", body_value<std::size_t>(req, "row_threshold", 0));
      opt.max_distance = body_value<int>(req, "max_distance", opt.max_distance);
      if (opt.max_distance < 1) bad_request("max_distance must be positive");
      auto gor = build_gor(s->catalog, master, opt);
      const auto include = body_value<std::vector<std::string>>(req, "include", {});
      if (!include.empty()) gor = extend_gor(gor, s->catalog, {include.begin(), include.end()});
      s->gor = std::move(gor);
      s->reset_after(SessionState::GorBuilt);
      return json_response(200, gor_to_json(*s->gor, &s->catalog));
    }

    if (route("POST", {"gor", "extend"})) {
      s->require_not_extracting();
      s->require_gor();
      const json req = parse_body(body);
      const auto tables = body_value<std::vector<std::string>>(req, "tables", {});
      if (tables.empty()) bad_request("\"tables\" must list at least one table");
      s->gor = extend_gor(*s->gor, s->catalog, {tables.begin(), tables.end()});
      s->reset_after(SessionState::GorBuilt);
      return json_response(200, gor_to_json(*s->gor, &s->catalog));
    }

    if (route("POST", {"classify"})) {
      s->require_not_extracting();
      s->require_gor();
      const json req = parse_body(body);
      ClassificationRules rules = s->rules;
      if (auto o = req.find("overrides"); o != req.end() && !o->is_null()) {
        if (!o->is_object()) bad_request("\"overrides\" must map table names to categories");
        for (const auto& [table, v] : o->items()) {
          if (!v.is_string()) bad_request("override for " + table + " must be a category name");
          auto c = parse_category(v.get<std::string>());
          if (!c) throw Error(ErrorCode::InvalidPlan, "unknown category " + v.get<std::string>());
          rules.overrides[table] = *c;
        }
      }
      GraphOfRelations gor = *s->gor;
      Classification cls = body_value<bool>(req, "include_masters", true)
                               ? classify_including_masters(s->catalog, gor, rules)
                               : classify_all(s->catalog, gor, rules);
      s->rules = std::move(rules);
      s->gor = std::move(gor);
      s->classification = std::move(cls);
      s->reset_after(SessionState::Classified);
      json out = classification_to_json(*s->classification);
      out["gor"] = gor_to_json(*s->gor, &s->catalog, &s->classification->categories);
      return json_response(200, out);
    }

    if (route("GET", {"keys"})) {
      s->require_gor();
      return json_response(200, key_fields_to_json(key_field_union(s->catalog, *s->gor)));
    }

    if (route("GET", {"keys", "*", "values"})) {
      s->require_gor();
      const std::string& field = rest[1];
      std::set<std::string> values;
      bool carried = false;
      for (const auto& n : s->gor->nodes) {
        const auto& t = s->catalog.table(n);
        if (!t.is_key_field(field)) continue;
        carried = true;
        const auto idx = *t.index_of(field);
        scan_table(s->catalog, n, {}, [&](const Row& r) {
          if (!r.value(idx).empty()) values.insert(r.value(idx));
        });
      }
      if (!carried) throw Error(ErrorCode::FilterFieldNotKey, field + " is not a key field of any GoR table");
      json list = json::array();
      for (const auto& v : values) {
        if (list.size() == kMaxKeyValues) break;
        list.push_back(v);
      }
      return json_response(200, {{"field", field},
                                 {"values", list},
                                 {"distinct", values.size()},
                                 {"truncated", values.size() > kMaxKeyValues}});
    }

    if (route("POST", {"plan"})) {
      s->require_not_extracting();
      if (!s->classification) conflict("classify the tables first");
      json doc = parse_body(body);
      doc["gor"] = gor_to_json(*s->gor);
      doc["categories"] = categories_to_json(s->classification->categories);
      doc["detail_links"] = links_to_json(s->classification->links);
      for (const char* k : {"master", "row_threshold", "max_distance", "include"}) doc.erase(k);
      auto plan = validate_plan(plan_from_json(doc, s->catalog, s->rules), s->catalog);
      s->plan = std::move(plan);
      s->reset_after(SessionState::Configured);
      return json_response(200, plan_to_json(*s->plan));
    }

    if (route("POST", {"extract"})) {
      s->require_not_extracting();
      if (!s->plan) conflict("configure the extraction plan first");
      const json req = parse_body(body);
      const unsigned jobs = body_value<unsigned>(req, "jobs", options_.jobs);
      if (s->worker.joinable()) s->worker.join();
      s->reset_after(SessionState::Configured);
      s->state = SessionState::Extracting;
      s->tables_total = s->plan->gor.nodes.size();

      s->worker = std::thread([s, plan = *s->plan, jobs] {
        std::optional<ExtractionResult> result;
        std::string code, message;
        try {
          result = run_extraction(s->catalog, plan, s->lookups, s->rules, std::max(1u, jobs),
                                  [&](const Progress& p) {
                                    s->tables_done = p.tables_done;
                                    s->tables_total = p.tables_total;
                                    s->events_emitted = p.events_emitted;
                                  });
        } catch (const Error& e) {
          code = std::string(to_string(e.code()));
          message = e.what();
        } catch (const std::exception& e) {
          code = "InternalError";
          message = e.what();
        }
        std::string serialized = result ? serialize_json(result->log) : std::string();
        std::lock_guard guard(s->mutex);
        if (result) {
          s->ocel_json = std::move(serialized);
          s->diagnostics = std::move(result->diagnostics);
          s->log = std::move(result->log);
          s->events_emitted = s->diagnostics->events;
          s->state = SessionState::Done;
        } else {
          s->failure_code = std::move(code);
          s->failure_message = std::move(message);
          s->state = SessionState::Failed;
        }
        s->finished.notify_all();
      });
      return json_response(202, {{"state", std::string(to_string(s->state))}, {"tables_total", s->tables_total.load()}});
    }

    if (route("GET", {"extract", "status"})) {
      json out = {{"state", std::string(to_string(s->state))},
                  {"tables_done", s->tables_done.load()},
                  {"tables_total", s->tables_total.load()},
                  {"events_emitted", s->events_emitted.load()}};
      if (s->diagnostics) out["diagnostics"] = diagnostics_to_json(*s->diagnostics);
      if (!s->failure_code.empty()) out["error"] = {{"error", s->failure_code}, {"message", s->failure_message}};
      return json_response(200, out);
    }

    if (route("GET", {"ocel"})) {
      if (s->state != SessionState::Done) conflict("no completed extraction");
      return {200, "application/json", s->ocel_json};
    }

    if (route("POST", {"flatten"})) {
      if (s->state != SessionState::Done) conflict("no completed extraction");
      const json req = parse_body(body);
      const auto case_type = body_value<std::string>(req, "case_type", "");
      if (case_type.empty()) bad_request("\"case_type\" is required");
      const FlatLog flat = flatten(*s->log, case_type);
      std::ostringstream csv;
      write_flat_csv(csv, flat);
      return json_response(200, {{"csv", csv.str()},
                                 {"stats", flatten_stats_to_json(flat, convergence_stats(*s->log, case_type),
                                                                 divergence_stats(flat))}});
    }

    throw HttpError{404, "NotFound", "no route " + method + " " + path};
  } catch (const HttpError& e) {
    return error_response(e.status, e.code, e.message);
  } catch (const Error& e) {
    return error_response(422, std::string(to_string(e.code())), e.what());
  } catch (const std::exception& e) {
    return error_response(500, "InternalError", e.what());
  }
}

int port_from_env() {
  const char* v = std::getenv("OCELFORGE_PORT");
  if (!v || !*v) return 5000;
  char* end = nullptr;
  const long port = std::strtol(v, &end, 10);
  if (*end != '\0' || port <= 0 || port > 65535) return 5000;
  return static_cast<int>(port);
}

struct ServiceServer::Impl {
  ExtractorService& service;
  httplib::Server server;

  explicit Impl(ExtractorService& s) : service(s) {
    if (const auto& dir = service.options().static_dir) server.set_mount_point("/", dir->string());
    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
      const auto out = service.dispatch(req.method, req.path, req.body);
      res.status = out.status;
      res.set_content(out.body, out.content_type);
    };
    server.Get(".*", handler);
    server.Post(".*", handler);
    server.Put(".*", handler);
    server.Delete(".*", handler);
  }
};

ServiceServer::ServiceServer(ExtractorService& service) : impl_(std::make_unique<Impl>(service)) {}
ServiceServer::~ServiceServer() = default;

int ServiceServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool ServiceServer::listen() { return impl_->server.listen_after_bind(); }

void ServiceServer::stop() { impl_->server.stop(); }

}  // namespace ocelforge
