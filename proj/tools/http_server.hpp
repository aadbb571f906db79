#pragma once

#include <memory>
#include <mutex>
#include <string>

#include "aiora/northbound.hpp"

namespace httplib {
class Server;
}

namespace aiora {

// Serves the northbound API over HTTP. Every request runs under one engine
// mutex, so API calls are serialized against each other.
class HttpServer {
 public:
  explicit HttpServer(Simulator& sim);
  ~HttpServer();

  // Binds to `port` (0 picks a free one) and returns the bound port, or -1.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  bool serve();
  void stop();

 private:
  Simulator& sim_;
  NorthboundApi api_;
  std::mutex mutex_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace aiora
