#pragma once

#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "aiora/error.hpp"
#include "aiora/simulation.hpp"

namespace aiora {

struct ApiRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;    // decoded
  std::map<std::string, std::string> headers;  // names as sent; lookup is case-insensitive
  std::string body;

  // Splits "/eas?ees=x&capability=a%2Cb" into path and decoded query.
  static ApiRequest make(std::string method, const std::string& target, std::string body = {},
                         std::string stakeholder = {});
};

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

// Transport-independent northbound API over a live simulator. Not
// thread-safe: callers serialize requests.
//
//   POST /continuums                 offer a continuum (Offer, Continuum)
//   POST /continuums/{id}/apps       deploy an application (Manage, ApplicationServer)
//   POST /ees                        register an EES (Manage, Continuum)
//   POST /eas                        register an EAS (Manage, ApplicationServer)
//   GET  /ecs/provision?zone=
//   GET  /eas?ees=&capability=&maxLatencyMs=
//   GET  /twin/snapshot
//   GET  /broker/utilization
//
// The actor is the X-Stakeholder-Id header. A denied operation answers 403
// with the reason string.
class NorthboundApi {
 public:
  explicit NorthboundApi(Simulator& sim) : sim_(sim) {}

  ApiResponse handle(const ApiRequest& request);

 private:
  ApiResponse post_continuum(const std::string& actor, const nlohmann::json& body);
  ApiResponse post_app(const std::string& actor, const std::string& continuum, const nlohmann::json& body);
  ApiResponse post_ees(const std::string& actor, const nlohmann::json& body);
  ApiResponse post_eas(const std::string& actor, const nlohmann::json& body);
  ApiResponse get_provision(const ApiRequest& request);
  ApiResponse get_eas(const ApiRequest& request);
  ApiResponse get_snapshot();
  ApiResponse get_utilization();

  Simulator& sim_;
};

// HTTP status for a library error code.
int http_status(ErrorCode code);

}  // namespace aiora
