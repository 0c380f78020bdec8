#pragma once

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "nrlb/core/error.hpp"
#include "nrlb/core/strings.hpp"
#include "nrlb/gateway/types.hpp"

namespace nrlb::gateway {

/// Retryable backend failure (timeout, connect error, HTTP 429/5xx). The
/// gateway's retry loop consumes these; everything else propagates.
class TransientError : public Error {
public:
  TransientError(std::string message, int status)
      : Error(std::move(message)), status_(status) {}
  int status() const { return status_; }

private:
  int status_;
};

class Backend {
public:
  virtual ~Backend() = default;
  virtual ChatResponse complete(const ChatRequest& request, const CallTag& tag) = 0;
  virtual BackendKind kind() const = 0;
};

/// Offline test double. Resolution order per call: per-role queue, per-role
/// handler, global queue, default handler. Handlers make the backend a
/// deterministic rule-based mock; queues hold canned replies.
class ScriptedBackend : public Backend {
public:
  using Handler = std::function<std::string(const ChatRequest&, const CallTag&)>;

  void enqueue(std::string content) {
    std::lock_guard<std::mutex> lock(mutex_);
    global_queue_.push_back(std::move(content));
  }

  void enqueue_for(const std::string& agent_role, std::string content) {
    std::lock_guard<std::mutex> lock(mutex_);
    role_queues_[agent_role].push_back(std::move(content));
  }

  void set_handler(const std::string& agent_role, Handler handler) {
    std::lock_guard<std::mutex> lock(mutex_);
    handlers_[agent_role] = std::move(handler);
  }

  void set_default_handler(Handler handler) {
    std::lock_guard<std::mutex> lock(mutex_);
    default_handler_ = std::move(handler);
  }

  ChatResponse complete(const ChatRequest& request, const CallTag& tag) override {
    Handler handler;
    {
      std::lock_guard<std::mutex> lock(mutex_);
      if (auto it = role_queues_.find(tag.agent_role);
          it != role_queues_.end() && !it->second.empty()) {
        std::string content = std::move(it->second.front());
        it->second.pop_front();
        return make_response(request, std::move(content));
      }
      if (auto it = handlers_.find(tag.agent_role); it != handlers_.end()) {
        handler = it->second;
      } else if (!global_queue_.empty()) {
        std::string content = std::move(global_queue_.front());
        global_queue_.pop_front();
        return make_response(request, std::move(content));
      } else {
        handler = default_handler_;
      }
    }
    if (!handler) {
      throw Error("scripted backend has no reply for agent role: " + tag.agent_role);
    }
    return make_response(request, handler(request, tag));
  }

  BackendKind kind() const override { return BackendKind::Scripted; }

private:
  static ChatResponse make_response(const ChatRequest& request, std::string content) {
    ChatResponse response;
    std::size_t prompt_words = 0;
    for (const auto& m : request.messages) prompt_words += strings::count_words(m.content);
    response.prompt_tokens = static_cast<int>(prompt_words);
    response.completion_tokens = static_cast<int>(strings::count_words(content));
    response.content = std::move(content);
    response.backend = BackendKind::Scripted;
    return response;
  }

  std::mutex mutex_;
  std::deque<std::string> global_queue_;
  std::map<std::string, std::deque<std::string>> role_queues_;
  std::map<std::string, Handler> handlers_;
  Handler default_handler_;
};

}  // namespace nrlb::gateway
