#pragma once

#include <chrono>
#include <memory>
#include <mutex>
#include <random>
#include <thread>

#include "nrlb/gateway/backend.hpp"
#include "nrlb/gateway/types.hpp"

namespace nrlb::gateway {

struct RetryPolicy {
  int max_attempts = 3;
  int base_delay_ms = 1000;
  double factor = 2.0;
  double jitter = 0.2;  // +-20%
};

/// Front door for every agent call: validates the request, runs the retry
/// loop around the configured backend, and appends one ledger entry per
/// logical (successful) call.
class LlmGateway {
public:
  explicit LlmGateway(std::shared_ptr<Backend> backend, RetryPolicy retry = RetryPolicy{})
      : backend_(std::move(backend)), retry_(retry) {}

  ChatResponse complete(const ChatRequest& request, const CallTag& tag) {
    request.validate();
    int last_status = 0;
    std::string last_message;
    for (int attempt = 1; attempt <= retry_.max_attempts; ++attempt) {
      try {
        ChatResponse response = backend_->complete(request, tag);
        ledger_.append({tag.agent_role, tag.round_index, request.hash(), response.hash()});
        return response;
      } catch (const TransientError& e) {
        last_status = e.status();
        last_message = e.what();
        if (attempt < retry_.max_attempts) {
          std::this_thread::sleep_for(backoff_delay(attempt));
        }
      }
    }
    throw ExhaustedRetriesError("gave up after " + std::to_string(retry_.max_attempts) +
                                    " attempts; last failure: " + last_message,
                                last_status);
  }

  CallLedger& ledger() { return ledger_; }
  const CallLedger& ledger() const { return ledger_; }
  BackendKind backend_kind() const { return backend_->kind(); }

private:
  std::chrono::milliseconds backoff_delay(int attempt) {
    double delay = retry_.base_delay_ms;
    for (int i = 1; i < attempt; ++i) delay *= retry_.factor;
    double jitter_factor;
    {
      std::lock_guard<std::mutex> lock(rng_mutex_);
      std::uniform_real_distribution<double> dist(1.0 - retry_.jitter, 1.0 + retry_.jitter);
      jitter_factor = dist(rng_);
    }
    return std::chrono::milliseconds(static_cast<long>(delay * jitter_factor));
  }

  std::shared_ptr<Backend> backend_;
  RetryPolicy retry_;
  CallLedger ledger_;
  std::mutex rng_mutex_;
  std::mt19937 rng_{0x5eedu};
};

}  // namespace nrlb::gateway
