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

#include "webground/augmentation.h"

#include <algorithm>
#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "webground/prompts.h"
#include "webground/text.h"

namespace webground {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return (v != nullptr && *v != '\0') ? std::string(v) : std::move(fallback);
}

class HttpTransport : public Transport {
 public:
  HttpTransport(std::string host, std::string path, std::chrono::milliseconds timeout)
      : host_(std::move(host)), path_(std::move(path)), timeout_(timeout) {}

  HttpReply post_json(const std::string& body) override {
    httplib::Client cli(host_);
    cli.set_connection_timeout(timeout_);
    cli.set_read_timeout(timeout_);
    cli.set_write_timeout(timeout_);
    auto res = cli.Post(path_, body, "application/json");
    if (!res) throw TransportError("POST " + host_ + path_ + ": " + httplib::to_string(res.error()));
    return {res->status, res->body};
  }

 private:
  std::string host_;
  std::string path_;
  std::chrono::milliseconds timeout_;
};

// Releases a semaphore slot on scope exit.
class SlotGuard {
 public:
  explicit SlotGuard(std::counting_semaphore<1024>& s) : s_(s) { s_.acquire(); }
  ~SlotGuard() { s_.release(); }
  SlotGuard(const SlotGuard&) = delete;
  SlotGuard& operator=(const SlotGuard&) = delete;

 private:
  std::counting_semaphore<1024>& s_;
};

}  // namespace

void AugmentationRequest::validate() const {
  switch (kind) {
    case RequestKind::kDescribeCrop:
      if (!image_ref || !attributes) {
        throw std::invalid_argument("describe_crop needs an image and attributes");
      }
      break;
    case RequestKind::kCondense:
      if (!text || text->empty()) throw std::invalid_argument("condense needs text");
      break;
    case RequestKind::kDirectFree:
    case RequestKind::kDirectFunctional:
      if (!image_ref) throw std::invalid_argument("direct description needs an image");
      break;
  }
}

std::string ChatRequest::to_json() const {
  ordered_json doc;
  doc["model"] = model;
  ordered_json msgs = ordered_json::array();
  for (const auto& m : messages) {
    ordered_json jm;
    jm["role"] = m.role;
    jm["content"] = m.content;
    if (m.image) jm["image"] = *m.image;
    msgs.push_back(std::move(jm));
  }
  doc["messages"] = std::move(msgs);
  doc["correlation_id"] = correlation_id;
  if (temperature) doc["temperature"] = *temperature;
  return doc.dump();
}

std::unique_ptr<Transport> make_http_transport(const std::string& endpoint_url,
                                               std::chrono::milliseconds timeout) {
  constexpr std::string_view kScheme = "http://";
  if (!endpoint_url.starts_with(kScheme)) {
    throw std::invalid_argument("endpoint must be an http:// URL: " + endpoint_url);
  }
  const std::size_t slash = endpoint_url.find('/', kScheme.size());
  std::string host = endpoint_url.substr(0, slash);
  std::string path = slash == std::string::npos ? "/" : endpoint_url.substr(slash);
  return std::make_unique<HttpTransport>(std::move(host), std::move(path), timeout);
}

AugmentationConfig AugmentationConfig::from_env() {
  AugmentationConfig c;
  c.endpoint = env_or("AUG_ENDPOINT", "");
  c.model_describe = env_or("AUG_MODEL_DESCRIBE", c.model_describe);
  c.model_condense = env_or("AUG_MODEL_CONDENSE", c.model_condense);
  c.model_direct = env_or("AUG_MODEL_DIRECT", c.model_direct);
  c.mock = env_or("AUG_MOCK", "0") == "1";
  return c;
}

TokenBucket::TokenBucket(double rate_per_second, double burst)
    : rate_(rate_per_second),
      burst_(std::max(1.0, burst)),
      tokens_(std::max(1.0, burst)),
      last_(std::chrono::steady_clock::now()) {}

void TokenBucket::acquire() {
  if (rate_ <= 0.0) return;
  std::unique_lock lock(mu_);
  for (;;) {
    const auto now = std::chrono::steady_clock::now();
    const double elapsed = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    tokens_ = std::min(burst_, tokens_ + elapsed * rate_);
    if (tokens_ >= 1.0) {
      tokens_ -= 1.0;
      return;
    }
    const double wait_s = (1.0 - tokens_) / rate_;
    lock.unlock();
    std::this_thread::sleep_for(std::chrono::duration<double>(wait_s));
    lock.lock();
  }
}

AugmentationClient::AugmentationClient(AugmentationConfig config,
                                       std::unique_ptr<Transport> transport, Sleeper sleeper)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      sleeper_(std::move(sleeper)),
      bucket_(config_.requests_per_second),
      in_flight_(std::clamp(config_.max_in_flight, 1, 1024)) {
  if (!sleeper_) sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  if (!config_.mock && !transport_ && !config_.endpoint.empty()) {
    transport_ = make_http_transport(config_.endpoint, config_.timeout);
  }
}

AugmentationClient::~AugmentationClient() = default;

ChatRequest AugmentationClient::build_request(const AugmentationRequest& req) const {
  req.validate();
  ChatRequest out;
  out.temperature = config_.temperature;
  ChatMessage msg;
  msg.role = "user";
  switch (req.kind) {
    case RequestKind::kDescribeCrop:
      out.model = config_.model_describe;
      msg.content = prompts::fill(prompts::kDescribeElement, format_attributes(*req.attributes));
      msg.image = req.image_ref;
      break;
    case RequestKind::kCondense:
      out.model = config_.model_condense;
      msg.content = prompts::fill(prompts::kCondenseDescription, *req.text);
      break;
    case RequestKind::kDirectFree:
      out.model = config_.model_direct;
      msg.content = std::string(prompts::kDirectFree);
      msg.image = req.image_ref;
      break;
    case RequestKind::kDirectFunctional:
      out.model = config_.model_direct;
      msg.content = std::string(prompts::kDirectFunctional);
      msg.image = req.image_ref;
      break;
  }
  out.messages.push_back(std::move(msg));
  return out;
}

std::optional<std::string> AugmentationClient::call(ChatRequest req) {
  if (!transport_) {
    ++skipped_;
    return std::nullopt;
  }
  req.correlation_id = next_id_.fetch_add(1);
  const std::string body = req.to_json();
  SlotGuard slot(in_flight_);
  auto backoff = config_.initial_backoff;
  for (int attempt = 1; attempt <= std::max(1, config_.max_attempts); ++attempt) {
    bucket_.acquire();
    HttpReply reply;
    bool retryable = false;
    try {
      reply = transport_->post_json(body);
      retryable = reply.status == 429 || reply.status >= 500;
    } catch (const TransportError&) {
      retryable = true;
    }
    if (retryable) {
      ++transport_failures_;
      if (attempt < config_.max_attempts) {
        sleeper_(backoff);
        backoff *= 2;
      }
      continue;
    }
    if (reply.status != 200) break;
    json doc;
    try {
      doc = json::parse(reply.body);
    } catch (const json::parse_error&) {
      break;
    }
    if (!doc.is_object() || !doc.contains("text") || !doc["text"].is_string()) break;
    if (auto id = doc.find("correlation_id");
        id != doc.end() && id->is_number_unsigned() && id->get<std::uint64_t>() != req.correlation_id) {
      break;
    }
    std::string text = doc["text"].get<std::string>();
    if (strip_reply(text).empty()) break;
    ++successes_;
    return text;
  }
  ++skipped_;
  return std::nullopt;
}

std::optional<std::string> AugmentationClient::describe_element(
    std::string_view element_id, std::string_view crop_ref,
    const std::map<std::string, std::string>& attributes) {
  ++requests_;
  if (config_.mock) {
    ++successes_;
    return "mock-desc:" + std::string(element_id);
  }
  AugmentationRequest req;
  req.kind = RequestKind::kDescribeCrop;
  req.image_ref = std::string(crop_ref);
  req.attributes = attributes;
  auto text = call(build_request(req));
  if (!text) return std::nullopt;
  return collapse_whitespace(*text);
}

std::optional<std::string> AugmentationClient::condense_description(std::string_view long_desc) {
  ++requests_;
  if (config_.mock) {
    ++successes_;
    return first_words(long_desc, 10);
  }
  AugmentationRequest req;
  req.kind = RequestKind::kCondense;
  req.text = std::string(long_desc);
  auto text = call(build_request(req));
  if (!text) return std::nullopt;
  std::string stripped = strip_reply(*text);
  if (stripped.empty()) {
    ++skipped_;
    return std::nullopt;
  }
  return stripped;
}

std::optional<DirectResult> AugmentationClient::direct_describe(std::string_view annotated_ref,
                                                                DirectStyle style) {
  ++requests_;
  if (config_.mock) {
    ++successes_;
    return DirectResult{true, "mock-direct"};
  }
  AugmentationRequest req;
  req.kind = style == DirectStyle::kFree ? RequestKind::kDirectFree : RequestKind::kDirectFunctional;
  req.image_ref = std::string(annotated_ref);
  auto text = call(build_request(req));
  if (!text) return std::nullopt;
  auto result = parse_direct_reply(*text);
  if (!result) ++skipped_;
  return result;
}

AugmentationStats AugmentationClient::stats() const {
  return {requests_.load(), successes_.load(), transport_failures_.load(), skipped_.load()};
}

std::string format_attributes(const std::map<std::string, std::string>& attributes) {
  json doc = json::object();
  for (const auto& [k, v] : attributes) doc[k] = v;
  return doc.dump();
}

std::string strip_reply(std::string_view s) {
  std::string out = collapse_whitespace(s);
  while (out.size() >= 2) {
    const char f = out.front();
    const char b = out.back();
    if ((f == '"' && b == '"') || (f == '\'' && b == '\'') || (f == '`' && b == '`')) {
      out = collapse_whitespace(std::string_view(out).substr(1, out.size() - 2));
    } else {
      break;
    }
  }
  return out;
}

std::optional<DirectResult> parse_direct_reply(std::string_view text) {
  std::string_view body = text;
  if (const auto fence = body.find("```"); fence != std::string_view::npos) {
    body.remove_prefix(fence + 3);
    if (body.starts_with("json")) body.remove_prefix(4);
    if (const auto close = body.find("```"); close != std::string_view::npos) {
      body = body.substr(0, close);
    }
  }
  json doc;
  try {
    doc = json::parse(body.begin(), body.end());
  } catch (const json::parse_error&) {
    return std::nullopt;
  }
  if (!doc.is_object()) return std::nullopt;
  auto vis = doc.find("visible");
  if (vis == doc.end() || !vis->is_boolean()) return std::nullopt;
  DirectResult r;
  r.visible = vis->get<bool>();
  for (const char* key : {"description", "action"}) {
    if (auto it = doc.find(key); it != doc.end() && it->is_string()) {
      r.description = collapse_whitespace(it->get<std::string>());
      break;
    }
  }
  if (r.visible && r.description.empty()) return std::nullopt;
  return r;
}

}  // namespace webground
