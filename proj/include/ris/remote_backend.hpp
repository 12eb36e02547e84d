#pragma once

#include <chrono>
#include <condition_variable>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "ris/classify.hpp"

namespace ris::classify {

// Instruction text sent with every post.
extern const std::string_view kClassifierInstructions;

struct RemoteConfig {
  std::string url;                      // http(s)://host[:port]/path
  std::string token_env{"RIS_API_TOKEN"};  // bearer token variable; unset means no header
  std::string instructions{kClassifierInstructions};
  int max_attempts{3};
  std::chrono::milliseconds initial_backoff{500};
  std::chrono::milliseconds timeout{30000};
  int max_in_flight{4};
  double requests_per_second{0.0};  // 0 disables the rate limit
};

// First 0/1/2 in the response. JSON bodies are searched for a label-like
// field first ("label", "output", "text", "response", "content", "answer").
std::optional<Label> parse_label_response(std::string_view body);

// POSTs {"instructions": ..., "text": ...} and parses the reply leniently.
// Failed attempts are retried with doubling backoff.
class RemoteBackend final : public ClassifierBackend {
 public:
  explicit RemoteBackend(RemoteConfig cfg);

  Classification classify(const corpus::PostRecord& post) override;
  [[nodiscard]] std::string name() const override { return "remote:" + cfg_.url; }

 private:
  void acquire();
  void release();
  void pace();

  RemoteConfig cfg_;
  std::string origin_;
  std::string path_;
  std::string token_;

  std::mutex mu_;
  std::condition_variable cv_;
  int in_flight_{0};
  std::chrono::steady_clock::time_point next_slot_{};
};

}  // namespace ris::classify
