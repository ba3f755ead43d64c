#pragma once

#include <memory>
#include <optional>
#include <string>

#include "annoservice/service.hpp"

namespace httplib {
class Server;
}

namespace cyents {

// JSON over HTTP in front of an AnnotationService. Status codes: 400 bad
// request, 401 token mismatch, 404 unknown annotator/doc/group, 409 not enough
// data for agreement, 422 invalid spans.
class AnnotationServer {
 public:
  AnnotationServer(AnnotationService& service, std::optional<std::string> static_dir = std::nullopt);
  ~AnnotationServer();

  // Returns the bound port; port 0 picks a free one. Throws kIo on failure.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void run();
  void stop();
  void wait_until_ready() const;

 private:
  void routes();

  AnnotationService& service_;
  std::unique_ptr<httplib::Server> server_;
};

int http_status_for(ErrorCode code);

}  // namespace cyents
