#include <cstdlib>

#include <httplib.h>
#include <json.hpp>

#include "blab/publisher/publisher.hpp"

namespace blab::publisher {

namespace {

// Minimal live binding for the micro-blogging v2 post endpoint. Only used in
// service mode with credentials present; every test path runs the dry-run
// client instead.
class HttpClient : public PublishClient {
 public:
  explicit HttpClient(std::string base_url) : base_url_(std::move(base_url)) {
    const char* token = std::getenv("BLAB_TWITTER_TOKEN");
    if (!token || !*token)
      throw ClientError(ClientError::Kind::Auth,
                        "BLAB_TWITTER_TOKEN is not set");
    token_ = token;
  }

  std::string send(const std::string& text,
                   const std::optional<std::string>& reply_to) override {
    httplib::Client http(base_url_);
    http.set_connection_timeout(10);
    http.set_read_timeout(15);
    nlohmann::json body;
    body["text"] = text;
    if (reply_to) body["reply"]["in_reply_to_tweet_id"] = *reply_to;
    httplib::Headers headers = {{"Authorization", "Bearer " + token_}};
    auto res = http.Post("/2/tweets", headers, body.dump(), "application/json");
    if (!res)
      throw ClientError(ClientError::Kind::Network,
                        "no response from " + base_url_);
    if (res->status == 401 || res->status == 403)
      throw ClientError(ClientError::Kind::Auth,
                        "authentication rejected (" +
                            std::to_string(res->status) + ")");
    if (res->status == 429)
      throw ClientError(ClientError::Kind::RateLimit, "rate limited");
    if (res->status >= 500)
      throw ClientError(ClientError::Kind::Network,
                        "server error " + std::to_string(res->status));
    if (res->status >= 400)
      throw ClientError(ClientError::Kind::Rejected,
                        "rejected with status " + std::to_string(res->status) +
                            ": " + res->body);
    nlohmann::json parsed = nlohmann::json::parse(res->body, nullptr, false);
    if (parsed.is_discarded() || !parsed.contains("data") ||
        !parsed["data"].contains("id"))
      throw ClientError(ClientError::Kind::Rejected,
                        "response carries no post id");
    return parsed["data"]["id"].get<std::string>();
  }

 private:
  std::string base_url_;
  std::string token_;
};

}  // namespace

std::unique_ptr<PublishClient> make_http_client(const std::string& base_url) {
  return std::make_unique<HttpClient>(base_url);
}

}  // namespace blab::publisher
