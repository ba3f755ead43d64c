#include "annoservice/server.hpp"

#include "httplib.h"
#include "spdlog/spdlog.h"

namespace cyents {
namespace {

constexpr const char* kJson = "application/json";
constexpr const char* kTokenHeader = "X-Annotator-Token";

void send(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void send_error(httplib::Response& res, const Error& e) {
  nlohmann::json body = {{"error", error_code_name(e.code())}, {"message", e.what()}};
  if (const auto* v = dynamic_cast<const ValidationError*>(&e)) {
    body["problems"] = nlohmann::json::array();
    for (const auto& p : v->problems()) {
      body["problems"].push_back({{"index", p.index}, {"error", error_code_name(p.code)}, {"reason", p.reason}});
    }
  }
  send(res, http_status_for(e.code()), body);
}

template <typename F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const Error& e) {
      send_error(res, e);
    } catch (const std::exception& e) {
      spdlog::error("{} {}: {}", req.method, req.path, e.what());
      send(res, 500, {{"error", "Internal"}, {"message", e.what()}});
    }
  };
}

bool check_token(const AnnotationService& service, const std::string& annotator, const httplib::Request& req,
                 httplib::Response& res) {
  if (service.authorized(annotator, req.get_header_value(kTokenHeader))) return true;
  send(res, 401, {{"error", "Unauthorized"}, {"message", "missing or wrong annotator token"}});
  return false;
}

}  // namespace

int http_status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownAnnotator:
    case ErrorCode::kNotFound: return 404;
    case ErrorCode::kInsufficientData: return 409;
    case ErrorCode::kValidation:
    case ErrorCode::kSpanOutOfBounds:
    case ErrorCode::kUnknownLabel:
    case ErrorCode::kOverlappingSpans:
    case ErrorCode::kLabelOutsideSchema: return 422;
    case ErrorCode::kParse:
    case ErrorCode::kInvalidArgument: return 400;
    default: return 500;
  }
}

AnnotationServer::AnnotationServer(AnnotationService& service, std::optional<std::string> static_dir)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  routes();
  if (static_dir && !server_->set_mount_point("/", *static_dir)) {
    throw Error(ErrorCode::kIo, "static directory " + *static_dir + " does not exist");
  }
}

AnnotationServer::~AnnotationServer() = default;

void AnnotationServer::routes() {
  auto& s = *server_;
  s.Get("/api/schema", guarded([this](const httplib::Request&, httplib::Response& res) {
          send(res, 200, service_.schema().to_json());
        }));
  s.Get("/api/tasks/next", guarded([this](const httplib::Request& req, httplib::Response& res) {
          if (!req.has_param("annotator")) throw Error(ErrorCode::kInvalidArgument, "missing annotator parameter");
          const std::string annotator = req.get_param_value("annotator");
          service_.assignments(annotator);
          if (!check_token(service_, annotator, req, res)) return;
          send(res, 200, service_.next_task(annotator));
        }));
  s.Get(R"(/api/docs/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
          send(res, 200, service_.document(req.matches[1]).to_json());
        }));
  s.Post("/api/annotations", guarded([this](const httplib::Request& req, httplib::Response& res) {
           std::string annotator, doc_id;
           std::vector<Mention> spans;
           try {
             const auto j = nlohmann::json::parse(req.body);
             annotator = j.at("annotator").get<std::string>();
             doc_id = j.at("doc_id").get<std::string>();
             spans = spans_from_json(j.at("spans"));
           } catch (const nlohmann::json::exception& e) {
             throw Error(ErrorCode::kParse, std::string("request body: ") + e.what());
           }
           service_.assignments(annotator);
           if (!check_token(service_, annotator, req, res)) return;
           send(res, 200, service_.submit(annotator, doc_id, spans).to_json());
         }));
  s.Get("/api/iaa", guarded([this](const httplib::Request& req, httplib::Response& res) {
          if (!req.has_param("group")) throw Error(ErrorCode::kInvalidArgument, "missing group parameter");
          send(res, 200, service_.iaa_status(req.get_param_value("group")).to_json());
        }));
}

int AnnotationServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int p = server_->bind_to_any_port(host);
    if (p < 0) throw Error(ErrorCode::kIo, "cannot bind " + host);
    return p;
  }
  if (!server_->bind_to_port(host, port)) throw Error(ErrorCode::kIo, "cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void AnnotationServer::run() { server_->listen_after_bind(); }

void AnnotationServer::stop() { server_->stop(); }

void AnnotationServer::wait_until_ready() const { server_->wait_until_ready(); }

}  // namespace cyents
