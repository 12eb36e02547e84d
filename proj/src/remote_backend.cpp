#include "ris/remote_backend.hpp"

#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace ris::classify {

const std::string_view kClassifierInstructions =
    "You are a chief economist at the IMF. I would like you to infer the public perception of inflation from "
    "Reddit posts. Please classify each Reddit post into one of the following categories:\n"
    "0: The post indicates deflation, such as the lower price of goods or services (e.g., \"the prices are not "
    "bad\"), affordable services (e.g., \"this champagne is cheap and delicious\"), sales information (e.g., \"you "
    "can get it for only 10 dollars.\"), or a declining and buyer's market.\n"
    "2: The post indicates or includes inflation, such as the higher price of goods or services (e.g., \"it's not "
    "cheap\"), the unreasonable cost of goods or services (e.g., \"the food is overpriced and cold\"), consumers "
    "struggling to afford necessities (e.g., \"items are too expensive to buy\"), shortage of goods of services, "
    "or mention about an asset bubble.\n"
    "1: The post indicates neither deflation (0) nor inflation (2). This category also includes just questions "
    "to a community, social statements not personal experience, factual observations, references to originally "
    "expensive or cheap goods or services (e.g., \"a gorgeous and costly dinner\" or \"an affordable Civic\"), "
    "website promotion, authors' wishes, or illogical text.\n"
    "Please choose a stronger stance when the text includes both 0 and 2 stances. If these stances are of the "
    "same degree, answer 1.";

namespace {

std::optional<Label> first_label_char(std::string_view s) {
  for (char c : s) {
    if (c >= '0' && c <= '2') return static_cast<Label>(c - '0');
  }
  return std::nullopt;
}

}  // namespace

std::optional<Label> parse_label_response(std::string_view body) {
  auto parsed = nlohmann::json::parse(body, nullptr, false);
  if (!parsed.is_discarded() && parsed.is_object()) {
    for (const char* key : {"label", "output", "text", "response", "content", "answer"}) {
      auto it = parsed.find(key);
      if (it == parsed.end()) continue;
      if (it->is_number_integer()) {
        const auto v = it->get<long long>();
        if (v >= 0 && v <= 2) return static_cast<Label>(v);
        return std::nullopt;
      }
      if (it->is_string()) return first_label_char(it->get_ref<const std::string&>());
    }
  }
  return first_label_char(body);
}

RemoteBackend::RemoteBackend(RemoteConfig cfg) : cfg_(std::move(cfg)) {
  const auto scheme_end = cfg_.url.find("://");
  if (scheme_end == std::string::npos) throw std::invalid_argument("remote url needs a scheme: '" + cfg_.url + "'");
  const auto path_start = cfg_.url.find('/', scheme_end + 3);
  origin_ = cfg_.url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : cfg_.url.substr(path_start);
  if (cfg_.max_attempts < 1) cfg_.max_attempts = 1;
  if (cfg_.max_in_flight < 1) cfg_.max_in_flight = 1;
  if (!cfg_.token_env.empty()) {
    if (const char* tok = std::getenv(cfg_.token_env.c_str())) token_ = tok;
  }
}

void RemoteBackend::acquire() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [&] { return in_flight_ < cfg_.max_in_flight; });
  ++in_flight_;
}

void RemoteBackend::release() {
  {
    std::lock_guard lock(mu_);
    --in_flight_;
  }
  cv_.notify_one();
}

void RemoteBackend::pace() {
  if (cfg_.requests_per_second <= 0) return;
  const auto interval = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
      std::chrono::duration<double>(1.0 / cfg_.requests_per_second));
  std::chrono::steady_clock::time_point slot;
  {
    std::lock_guard lock(mu_);
    slot = std::max(std::chrono::steady_clock::now(), next_slot_);
    next_slot_ = slot + interval;
  }
  std::this_thread::sleep_until(slot);
}

Classification RemoteBackend::classify(const corpus::PostRecord& post) {
  const std::string body = nlohmann::json{{"instructions", cfg_.instructions}, {"text", post.text}}.dump();
  httplib::Headers headers;
  if (!token_.empty()) headers.emplace("Authorization", "Bearer " + token_);

  std::string last_error;
  auto backoff = cfg_.initial_backoff;
  for (int attempt = 1; attempt <= cfg_.max_attempts; ++attempt) {
    pace();
    acquire();
    httplib::Client client(origin_);
    client.set_connection_timeout(cfg_.timeout);
    client.set_read_timeout(cfg_.timeout);
    client.set_write_timeout(cfg_.timeout);
    auto res = client.Post(path_, headers, body, "application/json");
    release();

    if (!res) {
      last_error = "request failed: " + httplib::to_string(res.error());
    } else if (res->status != 200) {
      last_error = "HTTP " + std::to_string(res->status);
    } else if (auto label = parse_label_response(res->body)) {
      return {*label, {}};
    } else {
      last_error = "no label in response";
    }
    if (attempt < cfg_.max_attempts) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
  }
  return {std::nullopt, "post '" + post.id + "': " + last_error + " after " + std::to_string(cfg_.max_attempts) +
                            " attempts"};
}

}  // namespace ris::classify
