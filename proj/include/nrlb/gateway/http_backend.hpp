#pragma once

#include <chrono>
#include <cstdlib>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "nrlb/gateway/backend.hpp"
#include "nrlb/gateway/types.hpp"

namespace nrlb::gateway {

/// Permanent (non-retryable) HTTP failure, e.g. 400 or 401.
class HttpStatusError : public Error {
public:
  HttpStatusError(std::string message, int status)
      : Error(std::move(message)), status_(status) {}
  int status() const { return status_; }

private:
  int status_;
};

struct HttpConfig {
  std::string endpoint;  // e.g. "https://api.openai.com/v1"
  std::string api_key_env = "OPENAI_API_KEY";
  int connect_timeout_s = 10;
  int read_timeout_s = 120;
};

/// OpenAI-compatible chat-completions client:
/// POST {endpoint}/chat/completions with bearer-token auth. Transient
/// failures surface as TransientError so the gateway retry loop can act.
class HttpBackend : public Backend {
public:
  explicit HttpBackend(HttpConfig config) : config_(std::move(config)) {
    if (config_.endpoint.empty()) {
      throw ConfigError("http backend needs an endpoint URL");
    }
    const char* key = std::getenv(config_.api_key_env.c_str());
    if (key == nullptr || *key == '\0') {
      throw CredentialMissingError("environment variable " + config_.api_key_env +
                                   " is not set");
    }
    api_key_ = key;
    split_endpoint(config_.endpoint, base_, path_prefix_);
  }

  ChatResponse complete(const ChatRequest& request, const CallTag&) override {
    httplib::Client client(base_);
    client.set_connection_timeout(config_.connect_timeout_s, 0);
    client.set_read_timeout(config_.read_timeout_s, 0);
    client.set_bearer_token_auth(api_key_);

    auto started = std::chrono::steady_clock::now();
    auto result = client.Post(path_prefix_ + "/chat/completions", request.to_json().dump(),
                              "application/json");
    auto elapsed_ms = static_cast<int>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                           std::chrono::steady_clock::now() - started)
                                           .count());
    if (!result) {
      throw TransientError("http transport failure: " + httplib::to_string(result.error()), 0);
    }
    if (result->status == 429 || result->status >= 500) {
      throw TransientError("http status " + std::to_string(result->status), result->status);
    }
    if (result->status != 200) {
      throw HttpStatusError(
          "http status " + std::to_string(result->status) + ": " + result->body,
          result->status);
    }
    return parse_wire_response(result->body, elapsed_ms);
  }

  BackendKind kind() const override { return BackendKind::Http; }

  static ChatResponse parse_wire_response(const std::string& body, int latency_ms) {
    Json payload = Json::parse(body, nullptr, false);
    if (payload.is_discarded()) {
      throw MalformedResponseError("wire response is not JSON");
    }
    if (!payload.contains("choices") || !payload["choices"].is_array() ||
        payload["choices"].empty()) {
      throw MalformedResponseError("wire response has no choices");
    }
    const Json& choice = payload["choices"][0];
    if (!choice.contains("message") || !choice["message"].contains("content") ||
        !choice["message"]["content"].is_string()) {
      throw MalformedResponseError("wire response choice has no message content");
    }
    ChatResponse response;
    response.content = choice["message"]["content"].get<std::string>();
    response.truncated = choice.value("finish_reason", "") == "length";
    if (payload.contains("usage") && payload["usage"].is_object()) {
      response.prompt_tokens = payload["usage"].value("prompt_tokens", 0);
      response.completion_tokens = payload["usage"].value("completion_tokens", 0);
    }
    response.latency_ms = latency_ms;
    response.backend = BackendKind::Http;
    return response;
  }

private:
  static void split_endpoint(const std::string& endpoint, std::string& base,
                             std::string& prefix) {
    auto scheme_end = endpoint.find("://");
    std::size_t authority_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
    auto path_start = endpoint.find('/', authority_start);
    if (path_start == std::string::npos) {
      base = endpoint;
      prefix.clear();
    } else {
      base = endpoint.substr(0, path_start);
      prefix = endpoint.substr(path_start);
      while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    }
  }

  HttpConfig config_;
  std::string api_key_;
  std::string base_;
  std::string path_prefix_;
};

}  // namespace nrlb::gateway
