#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <json.hpp>

#include <cstdlib>
#include <regex>

#include "oilsent/completion.hpp"

namespace oilsent {
namespace {

class HttpCompletionClient : public CompletionClient {
public:
  HttpCompletionClient(HttpClientConfig config, std::string credential)
      : config_(std::move(config)), credential_(std::move(credential)) {
    static const std::regex url(R"(^(https?://[^/]+)(/.*)?$)");
    std::smatch m;
    if (!std::regex_match(config_.endpoint, m, url))
      throw ValidationError("endpoint must be an http(s) URL: " + config_.endpoint);
    origin_ = m[1].str();
    path_ = m[2].matched ? m[2].str() : "/";
  }

  std::string submit(const std::string& prompt) override {
    httplib::Client cli(origin_);
    const auto secs = static_cast<time_t>(config_.timeout_seconds);
    const auto usecs = static_cast<time_t>((config_.timeout_seconds - double(secs)) * 1e6);
    cli.set_connection_timeout(secs, usecs);
    cli.set_read_timeout(secs, usecs);
    cli.set_write_timeout(secs, usecs);

    nlohmann::json body{{"model", config_.model},
                        {"prompt", prompt},
                        {"temperature", config_.temperature},
                        {"max_tokens", config_.max_tokens}};
    httplib::Headers headers{{"Authorization", "Bearer " + credential_}};
    auto res = cli.Post(path_, headers, body.dump(), "application/json");
    if (!res) throw TransportError("request failed: " + httplib::to_string(res.error()));
    if (res->status == 429 || res->status >= 500)
      throw TransportError("endpoint returned HTTP " + std::to_string(res->status));
    if (res->status != 200)
      throw Error("endpoint returned HTTP " + std::to_string(res->status) + ": " + res->body);
    nlohmann::json reply;
    try {
      reply = nlohmann::json::parse(res->body);
      const auto& choice = reply.at("choices").at(0);
      if (choice.contains("text")) return choice.at("text").get<std::string>();
      return choice.at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("unexpected completion payload: ") + e.what());
    }
  }

  std::string model() const override { return config_.model; }

private:
  HttpClientConfig config_;
  std::string credential_;
  std::string origin_;
  std::string path_;
};

}  // namespace

std::unique_ptr<CompletionClient> make_http_client(const HttpClientConfig& config) {
  const char* key = std::getenv(config.credential_env.c_str());
  if (!key || !*key)
    throw ValidationError("credential variable " + config.credential_env + " is not set");
  return std::make_unique<HttpCompletionClient>(config, key);
}

bool http_client_available() { return true; }

}  // namespace oilsent
