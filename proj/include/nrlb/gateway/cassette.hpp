#pragma once

#include <chrono>
#include <deque>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "nrlb/core/io.hpp"
#include "nrlb/gateway/backend.hpp"
#include "nrlb/gateway/types.hpp"

namespace nrlb::gateway {

/// Cassette files are JSON lines; one record per call:
/// {"request_hash", "agent_role", "round_index", "request", "response", "timestamp_ms"}
inline Json cassette_record(const ChatRequest& request, const ChatResponse& response,
                            const CallTag& tag, std::int64_t timestamp_ms) {
  return Json{{"request_hash", request.hash()},
              {"agent_role", tag.agent_role},
              {"round_index", tag.round_index},
              {"request", request.to_json()},
              {"response",
               {{"content", response.content},
                {"prompt_tokens", response.prompt_tokens},
                {"completion_tokens", response.completion_tokens},
                {"latency_ms", response.latency_ms},
                {"truncated", response.truncated}}},
              {"timestamp_ms", timestamp_ms}};
}

/// Wraps any backend and appends every completed call to a cassette file.
class RecordingBackend : public Backend {
public:
  RecordingBackend(std::shared_ptr<Backend> inner, std::filesystem::path cassette_path)
      : inner_(std::move(inner)), path_(std::move(cassette_path)) {
    if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
    out_.open(path_, std::ios::binary | std::ios::trunc);
    if (!out_) throw IoError("cannot open cassette for writing: " + path_.string());
  }

  ChatResponse complete(const ChatRequest& request, const CallTag& tag) override {
    ChatResponse response = inner_->complete(request, tag);
    auto now = std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::system_clock::now().time_since_epoch())
                   .count();
    std::lock_guard<std::mutex> lock(mutex_);
    out_ << cassette_record(request, response, tag, now).dump() << '\n';
    out_.flush();
    return response;
  }

  BackendKind kind() const override { return inner_->kind(); }

private:
  std::shared_ptr<Backend> inner_;
  std::filesystem::path path_;
  std::ofstream out_;
  std::mutex mutex_;
};

/// Replays a cassette. Calls are matched by request hash; repeated identical
/// requests consume recordings in file order. A request with no remaining
/// recording raises CassetteMissError.
class ReplayBackend : public Backend {
public:
  explicit ReplayBackend(const std::filesystem::path& cassette_path) {
    if (!std::filesystem::exists(cassette_path)) {
      throw CassetteMissError("cassette file does not exist: " + cassette_path.string());
    }
    for (const auto& line : split_lines(read_file(cassette_path))) {
      if (strings::trim(line).empty()) continue;
      Json record = Json::parse(line, nullptr, false);
      if (record.is_discarded()) {
        throw MalformedResponseError("cassette line is not valid JSON: " +
                                     cassette_path.string());
      }
      ChatResponse response;
      const Json& r = record.at("response");
      response.content = r.at("content").get<std::string>();
      response.prompt_tokens = r.value("prompt_tokens", 0);
      response.completion_tokens = r.value("completion_tokens", 0);
      response.latency_ms = r.value("latency_ms", 0);
      response.truncated = r.value("truncated", false);
      response.backend = BackendKind::Replay;
      recordings_[record.at("request_hash").get<std::string>()].push_back(std::move(response));
    }
  }

  ChatResponse complete(const ChatRequest& request, const CallTag& tag) override {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = recordings_.find(request.hash());
    if (it == recordings_.end() || it->second.empty()) {
      throw CassetteMissError("no recording for request (agent role: " + tag.agent_role +
                              ", hash: " + request.hash() + ")");
    }
    ChatResponse response = std::move(it->second.front());
    it->second.pop_front();
    return response;
  }

  BackendKind kind() const override { return BackendKind::Replay; }

private:
  std::mutex mutex_;
  std::map<std::string, std::deque<ChatResponse>> recordings_;
};

}  // namespace nrlb::gateway
