#include "drs/service.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <thread>

#include <httplib.h>

#include "drs/error.hpp"

namespace drs {

namespace {

struct HttpError {
  int status;
  std::string code;
  std::string message;
};

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::pending_choice:
    case ErrorCode::no_pending_choice:
      return 409;
    case ErrorCode::unknown_entry:
      return 404;
    case ErrorCode::storage:
    case ErrorCode::internal:
    case ErrorCode::bind_failure:
    case ErrorCode::cycle:
      return 500;
    default:
      return 400;
  }
}

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& code,
                const std::string& message) {
  send_json(res, {{"error", {{"code", code}, {"message", message}}}}, status);
}

json request_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  json doc = json::parse(req.body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw HttpError{400, "malformed_request", "body must be a JSON object"};
  }
  return doc;
}

std::optional<ChoiceMode> mode_from(const json& doc) {
  if (!doc.contains("choose")) return std::nullopt;
  const auto& v = doc["choose"];
  if (v == "auto") return ChoiceMode::automated;
  if (v == "prompt") return ChoiceMode::prompt;
  throw HttpError{400, "malformed_request", "choose must be auto or prompt"};
}

}  // namespace

struct Service::Impl {
  struct Slot {
    std::mutex mutex;
    Session session;
    explicit Slot(Session s) : session(std::move(s)) {}
  };

  ServiceConfig config;
  // stop() may race with a listen() that has not started serving yet.
  std::mutex lifecycle;
  bool listening = false;
  bool stopped = false;
  std::atomic<bool> finished{false};
  httplib::Server server;
  mutable std::shared_mutex sessions_mutex;
  std::map<std::string, std::shared_ptr<Slot>> sessions;
  std::uint64_t next_id = 1;

  explicit Impl(ServiceConfig c) : config(std::move(c)) {
    // httplib defaults to SO_REUSEPORT, which would let two services share a
    // port (and a data directory) without noticing.
    server.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });
    load_existing();
    routes();
  }

  void load_existing() {
    if (!config.data_dir) return;
    std::filesystem::create_directories(*config.data_dir);
    std::vector<std::filesystem::path> files;
    for (const auto& f : std::filesystem::directory_iterator(*config.data_dir)) {
      if (f.path().extension() == ".jsonl") files.push_back(f.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      std::string id = f.stem().string();
      sessions.emplace(id, std::make_shared<Slot>(
                               Session::open(f, config.default_mode)));
      std::uint64_t n = 0;
      if (id.size() > 1 && id[0] == 's') {
        auto [p, ec] = std::from_chars(id.data() + 1, id.data() + id.size(), n);
        if (ec == std::errc{} && p == id.data() + id.size()) {
          next_id = std::max(next_id, n + 1);
        }
      }
    }
  }

  std::shared_ptr<Slot> find(const std::string& id) const {
    std::shared_lock lock(sessions_mutex);
    auto it = sessions.find(id);
    if (it == sessions.end()) {
      throw HttpError{404, "unknown_session", "no session '" + id + "'"};
    }
    return it->second;
  }

  std::string create(ChoiceMode mode) {
    std::unique_lock lock(sessions_mutex);
    std::string id = "s" + std::to_string(next_id++);
    Session s = config.data_dir
                    ? Session::open(*config.data_dir / (id + ".jsonl"), mode)
                    : Session(mode);
    sessions.emplace(id, std::make_shared<Slot>(std::move(s)));
    return id;
  }

  // Wraps a handler that works on one session under its lock.
  template <typename F>
  httplib::Server::Handler on_session(F body) {
    return [this, body](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        auto slot = find(req.matches[1]);
        std::lock_guard lock(slot->mutex);
        body(req, res, slot->session);
      });
    };
  }

  template <typename F>
  static void guarded(httplib::Response& res, F&& action) {
    try {
      action();
    } catch (const HttpError& e) {
      send_error(res, e.status, e.code, e.message);
    } catch (const Error& e) {
      send_error(res, status_for(e.code()), to_string(e.code()), e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "internal", e.what());
    }
  }

  void routes() {
    server.Post("/sessions", [this](const httplib::Request& req,
                                    httplib::Response& res) {
      guarded(res, [&] {
        auto mode = mode_from(request_body(req)).value_or(config.default_mode);
        send_json(res, {{"id", create(mode)}}, 201);
      });
    });

    server.Post(R"(/sessions/([^/]+)/inputs)",
                on_session([](const httplib::Request& req, httplib::Response& res,
                              Session& s) {
                  json body = request_body(req);
                  if (!body.contains("formula") || !body["formula"].is_string()) {
                    throw HttpError{400, "malformed_request",
                                    "expected {\"formula\": \"...\"}"};
                  }
                  auto outcome = s.submit(body["formula"].get<std::string>(), "http");
                  send_json(res, export_outcome(outcome, s.path()));
                }));

    server.Get(R"(/sessions/([^/]+)/beliefs)",
               on_session([](const httplib::Request& req, httplib::Response& res,
                             Session& s) {
                 std::string status = req.has_param("status")
                                          ? req.get_param_value("status")
                                          : "believed";
                 std::optional<Status> filter;
                 if (status == "believed") {
                   filter = Status::believed;
                 } else if (status == "disbelieved") {
                   filter = Status::disbelieved;
                 } else if (status != "all") {
                   throw HttpError{400, "malformed_request",
                                   "status must be believed, disbelieved or all"};
                 }
                 send_json(res, export_entries(s.path(), filter));
               }));

    server.Get(R"(/sessions/([^/]+)/entries/(\d+))",
               on_session([](const httplib::Request& req, httplib::Response& res,
                             Session& s) {
                 TimeStamp t = 0;
                 const std::string text = req.matches[2];
                 auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), t);
                 if (ec != std::errc{} || !s.path().has_entry(t)) {
                   throw HttpError{404, "unknown_entry", "no entry " + text};
                 }
                 send_json(res, export_entry(s.path().entry(t)));
               }));

    server.Get(R"(/sessions/([^/]+)/hierarchy)",
               on_session([](const httplib::Request&, httplib::Response& res,
                             Session& s) {
                 send_json(res, export_hierarchy(s.path().hierarchy()));
               }));

    server.Get(R"(/sessions/([^/]+)/pending)",
               on_session([](const httplib::Request&, httplib::Response& res,
                             Session& s) {
                 send_json(res, export_pending(s.path(), s.pending()));
               }));

    server.Post(R"(/sessions/([^/]+)/pending)",
                on_session([](const httplib::Request& req, httplib::Response& res,
                              Session& s) {
                  json body = request_body(req);
                  std::set<TimeStamp> chosen;
                  try {
                    chosen = body.at("retract").get<std::set<TimeStamp>>();
                  } catch (const json::exception&) {
                    throw HttpError{400, "malformed_request",
                                    "expected {\"retract\": [t, ...]}"};
                  }
                  auto outcome = s.resolve(chosen, "http");
                  send_json(res, export_report(*outcome.revision));
                }));

    server.Get(R"(/sessions/([^/]+)/export/(journal|snapshot|dot))",
               on_session([](const httplib::Request& req, httplib::Response& res,
                             Session& s) {
                 const std::string what = req.matches[2];
                 if (what == "journal") {
                   res.set_content(s.journal().to_jsonl(), "application/x-ndjson");
                 } else if (what == "snapshot") {
                   res.set_content(dump_snapshot(s.path()), "application/json");
                 } else {
                   res.set_content(s.path().hierarchy().to_dot(), "text/vnd.graphviz");
                 }
               }));

    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (res.body.empty()) {
        send_error(res, res.status, "not_found", "no such resource");
      }
    });
  }
};

Service::Service(ServiceConfig config)
    : impl_(std::make_unique<Impl>(std::move(config))) {}

Service::~Service() { stop(); }

int Service::bind() {
  const auto& c = impl_->config;
  if (c.port == 0) {
    int port = impl_->server.bind_to_any_port(c.host);
    if (port < 0) throw Error(ErrorCode::bind_failure, "cannot bind " + c.host);
    return port;
  }
  if (!impl_->server.bind_to_port(c.host, c.port)) {
    throw Error(ErrorCode::bind_failure,
                "cannot bind " + c.host + ":" + std::to_string(c.port));
  }
  return c.port;
}

void Service::listen() {
  {
    std::lock_guard lock(impl_->lifecycle);
    if (impl_->stopped) return;
    impl_->listening = true;
  }
  impl_->server.listen_after_bind();
  impl_->finished = true;
}

void Service::stop() {
  if (!impl_) return;
  bool listening = false;
  {
    std::lock_guard lock(impl_->lifecycle);
    impl_->stopped = true;
    listening = impl_->listening;
  }
  if (!listening) return;
  while (!impl_->server.is_running() && !impl_->finished) std::this_thread::yield();
  impl_->server.stop();
}

std::size_t Service::session_count() const {
  std::shared_lock lock(impl_->sessions_mutex);
  return impl_->sessions.size();
}

}  // namespace drs
