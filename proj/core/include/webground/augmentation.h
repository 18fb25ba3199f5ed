// Copyright 2026 The Webground Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WEBGROUND_AUGMENTATION_H_
#define WEBGROUND_AUGMENTATION_H_

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace webground {

enum class RequestKind { kDescribeCrop, kCondense, kDirectFree, kDirectFunctional };
enum class DirectStyle { kFree, kFunctional };

struct AugmentationRequest {
  RequestKind kind = RequestKind::kCondense;
  std::optional<std::string> image_ref;
  std::optional<std::map<std::string, std::string>> attributes;
  std::optional<std::string> text;

  // Throws std::invalid_argument when the fields required by `kind` are
  // missing.
  void validate() const;
};

struct DirectResult {
  bool visible = false;
  std::string description;
};

struct ChatMessage {
  std::string role;
  std::string content;
  std::optional<std::string> image;
};

// Wire payload: {"model", "messages": [{"role", "content", "image"?}],
// "correlation_id", "temperature"?}. Replies are {"text", "correlation_id"?}.
struct ChatRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  std::uint64_t correlation_id = 0;
  std::optional<double> temperature;

  std::string to_json() const;
};

struct HttpReply {
  int status = 0;
  std::string body;
};

// Raised by transports when the request never produced an HTTP reply.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Transport {
 public:
  virtual ~Transport() = default;
  virtual HttpReply post_json(const std::string& body) = 0;
};

// Plain-HTTP POST to `endpoint_url` ("http://host[:port]/path").
std::unique_ptr<Transport> make_http_transport(const std::string& endpoint_url,
                                               std::chrono::milliseconds timeout);

struct AugmentationConfig {
  std::string endpoint;
  std::string model_describe = "llava-next-13b";
  std::string model_condense = "llama-3-8b-instruct";
  std::string model_direct = "gpt-4o";
  bool mock = false;
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{200};
  std::chrono::milliseconds timeout{60000};
  double requests_per_second = 0.0;  // 0 disables rate limiting
  int max_in_flight = 4;
  // Decoding parameters were never published for the original calls; unset
  // by default.
  std::optional<double> temperature;

  // AUG_ENDPOINT, AUG_MODEL_DESCRIBE, AUG_MODEL_CONDENSE, AUG_MODEL_DIRECT,
  // AUG_MOCK=1.
  static AugmentationConfig from_env();
};

struct AugmentationStats {
  std::uint64_t requests = 0;
  std::uint64_t successes = 0;
  std::uint64_t transport_failures = 0;  // individual failed attempts
  std::uint64_t skipped = 0;             // calls that returned nothing
};

// Blocking token bucket. A rate of 0 never blocks.
class TokenBucket {
 public:
  explicit TokenBucket(double rate_per_second, double burst = 1.0);
  void acquire();

 private:
  double rate_;
  double burst_;
  double tokens_;
  std::chrono::steady_clock::time_point last_;
  std::mutex mu_;
};

// Client for the description services. Every call returns nothing when the
// augmentation is skipped (transport exhausted, empty or malformed reply).
// Thread-safe; at most `max_in_flight` requests run concurrently.
class AugmentationClient {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  explicit AugmentationClient(AugmentationConfig config, std::unique_ptr<Transport> transport = nullptr,
                              Sleeper sleeper = {});
  ~AugmentationClient();

  bool mock() const { return config_.mock; }
  const AugmentationConfig& config() const { return config_; }

  // Mock: "mock-desc:{element_id}".
  std::optional<std::string> describe_element(std::string_view element_id,
                                              std::string_view crop_ref,
                                              const std::map<std::string, std::string>& attributes);
  // Mock: first ten words of the input.
  std::optional<std::string> condense_description(std::string_view long_desc);
  // Mock: {visible: true, description: "mock-direct"}.
  std::optional<DirectResult> direct_describe(std::string_view annotated_ref, DirectStyle style);

  // The exact payload a request would send (correlation id 0).
  ChatRequest build_request(const AugmentationRequest& req) const;

  AugmentationStats stats() const;

 private:
  std::optional<std::string> call(ChatRequest req);

  AugmentationConfig config_;
  std::unique_ptr<Transport> transport_;
  Sleeper sleeper_;
  TokenBucket bucket_;
  std::counting_semaphore<1024> in_flight_;
  std::atomic<std::uint64_t> next_id_{1};
  std::atomic<std::uint64_t> requests_{0};
  std::atomic<std::uint64_t> successes_{0};
  std::atomic<std::uint64_t> transport_failures_{0};
  std::atomic<std::uint64_t> skipped_{0};
};

// Serializes salient attributes for the describe prompt: a JSON object with
// sorted keys.
std::string format_attributes(const std::map<std::string, std::string>& attributes);

// Strips whitespace and one layer of matching quotes.
std::string strip_reply(std::string_view s);

// Parses a direct-description reply. Accepts "description" or "action" and a
// surrounding ``` fence. Nothing when the reply is not such a JSON object.
std::optional<DirectResult> parse_direct_reply(std::string_view text);

}  // namespace webground

#endif  // WEBGROUND_AUGMENTATION_H_
