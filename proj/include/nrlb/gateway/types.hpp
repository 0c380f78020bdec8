#pragma once

#include <cstdint>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "nrlb/core/error.hpp"
#include "nrlb/core/hash.hpp"

namespace nrlb::gateway {

using Json = nlohmann::json;

enum class Role { System, User, Assistant };

inline std::string to_string(Role role) {
  switch (role) {
    case Role::System: return "system";
    case Role::User: return "user";
    case Role::Assistant: return "assistant";
  }
  return "user";
}

inline Role role_from_string(const std::string& s) {
  if (s == "system") return Role::System;
  if (s == "assistant") return Role::Assistant;
  if (s == "user") return Role::User;
  throw MalformedResponseError("unknown message role: " + s);
}

struct Message {
  Role role = Role::User;
  std::string content;

  bool operator==(const Message&) const = default;
};

struct ChatRequest {
  std::string model_id;
  std::vector<Message> messages;
  double temperature = 0.0;
  double top_p = 0.95;
  int top_k = 20;  // 0 disables the parameter on the wire
  int max_tokens = 4096;

  void validate() const {
    if (messages.empty()) {
      throw InvalidRequestError("chat request needs at least one message");
    }
    if (messages.front().role == Role::Assistant) {
      throw InvalidRequestError("first message must be system or user");
    }
    if (temperature < 0.0) throw InvalidRequestError("temperature must be >= 0");
    if (top_p <= 0.0 || top_p > 1.0) throw InvalidRequestError("top_p must be in (0,1]");
    if (top_k < 0) throw InvalidRequestError("top_k must be >= 0");
    if (max_tokens <= 0) throw InvalidRequestError("max_tokens must be > 0");
  }

  /// Canonical JSON body; also the wire body for the HTTP backend.
  Json to_json() const {
    Json msgs = Json::array();
    for (const auto& m : messages) {
      msgs.push_back({{"role", to_string(m.role)}, {"content", m.content}});
    }
    Json body{{"model", model_id},
              {"messages", std::move(msgs)},
              {"temperature", temperature},
              {"top_p", top_p},
              {"max_tokens", max_tokens}};
    if (top_k > 0) body["top_k"] = top_k;
    return body;
  }

  static ChatRequest from_json(const Json& j) {
    ChatRequest req;
    req.model_id = j.value("model", "");
    req.temperature = j.value("temperature", 0.0);
    req.top_p = j.value("top_p", 0.95);
    req.top_k = j.value("top_k", 0);
    req.max_tokens = j.value("max_tokens", 4096);
    for (const auto& m : j.at("messages")) {
      req.messages.push_back(
          {role_from_string(m.at("role").get<std::string>()), m.at("content").get<std::string>()});
    }
    return req;
  }

  std::string hash() const { return content_hash(to_json().dump()); }
};

enum class BackendKind { Http, Replay, Scripted };

inline std::string to_string(BackendKind kind) {
  switch (kind) {
    case BackendKind::Http: return "http";
    case BackendKind::Replay: return "replay";
    case BackendKind::Scripted: return "scripted";
  }
  return "scripted";
}

struct ChatResponse {
  std::string content;
  int prompt_tokens = 0;
  int completion_tokens = 0;
  int latency_ms = 0;
  BackendKind backend = BackendKind::Scripted;
  bool truncated = false;  // wire signalled a length-limit stop

  std::string hash() const { return content_hash(content); }
};

/// Identifies the pipeline stage making a call; recorded in the ledger and
/// used by the scripted backend to pick a handler.
struct CallTag {
  std::string agent_role;  // "planner", "expert_draft", "reader_elementary", ...
  int round_index = 0;
};

struct LedgerEntry {
  std::string agent_role;
  int round_index = 0;
  std::string request_hash;
  std::string response_hash;

  bool operator==(const LedgerEntry&) const = default;
};

/// Ordered record of every logical gateway call (retries collapse into the
/// single entry appended on success). Appends are serialized internally.
class CallLedger {
public:
  void append(LedgerEntry entry) {
    std::lock_guard<std::mutex> lock(mutex_);
    entries_.push_back(std::move(entry));
  }

  std::vector<LedgerEntry> entries() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return entries_;
  }

  std::size_t total_calls() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return entries_.size();
  }

  std::size_t calls_for_round(int round_index) const {
    std::lock_guard<std::mutex> lock(mutex_);
    std::size_t n = 0;
    for (const auto& e : entries_) {
      if (e.round_index == round_index) ++n;
    }
    return n;
  }

  std::vector<LedgerEntry> slice_for_round(int round_index) const {
    std::lock_guard<std::mutex> lock(mutex_);
    std::vector<LedgerEntry> out;
    for (const auto& e : entries_) {
      if (e.round_index == round_index) out.push_back(e);
    }
    return out;
  }

  void clear() {
    std::lock_guard<std::mutex> lock(mutex_);
    entries_.clear();
  }

private:
  mutable std::mutex mutex_;
  std::vector<LedgerEntry> entries_;
};

}  // namespace nrlb::gateway
