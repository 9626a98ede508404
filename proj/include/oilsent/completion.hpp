#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <deque>
#include <optional>
#include <semaphore>
#include <span>
#include <string>
#include <vector>

#include "oilsent/corpus.hpp"
#include "oilsent/error.hpp"
#include "oilsent/fixtures.hpp"
#include "oilsent/metrics.hpp"
#include "oilsent/prompt.hpp"

namespace oilsent {

/// A failure worth retrying: timeout, connection loss, 429 or 5xx.
class TransportError : public IoError {
public:
  using IoError::IoError;
};

class CompletionClient {
public:
  virtual ~CompletionClient() = default;
  /// Returns the completion text. Throws TransportError for retryable failures.
  virtual std::string submit(const std::string& prompt) = 0;
  virtual std::string model() const = 0;
};

/// Replays label columns keyed by simulation id. The simulation is read from
/// the `dict_simK` result name every prompt carries.
class FixtureClient : public CompletionClient {
public:
  explicit FixtureClient(std::span<const fixtures::LabelColumn> columns);

  std::string submit(const std::string& prompt) override;
  std::string model() const override { return "fixture"; }

private:
  std::map<int, std::string> responses_;
};

struct HttpClientConfig {
  std::string endpoint = "https://api.openai.com/v1/completions";
  std::string credential_env = "OPENAI_API_KEY";
  std::string model = "gpt-3.5-turbo-instruct";
  double temperature = 0;
  int max_tokens = 512;
  double timeout_seconds = 60;
};

/// Reads the credential from the environment; throws ValidationError when it
/// is unset. Throws Error when the library was built without the client.
std::unique_ptr<CompletionClient> make_http_client(const HttpClientConfig& config);
bool http_client_available();

struct RetryPolicy {
  int max_retries = 3;
  std::chrono::milliseconds backoff{500};
  double backoff_factor = 2;
  /// Requests per rolling minute; 0 disables the limit.
  int rate_limit_per_minute = 0;
  /// Concurrent requests across run_many.
  int max_in_flight = 4;
};

struct SimulationInputs {
  std::vector<Headline> test;
  std::vector<fixtures::LabeledText> train;
};

struct SimulationResult {
  int sim = 0;
  Predictions predictions;
  std::string prompt;
  std::string raw_response;
  std::string model;
  std::string timestamp;  // UTC, ISO-8601
  int retries = 0;
};

/// Parse failure after a successful call; keeps the raw reply for audit.
class SimulationParseError : public ParseError {
public:
  SimulationParseError(const std::string& what, int sim, std::string raw)
      : ParseError(what), sim_(sim), raw_(std::move(raw)) {}
  int sim() const { return sim_; }
  const std::string& raw_response() const { return raw_; }

private:
  int sim_;
  std::string raw_;
};

class SimulationRunner {
public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;
  using Clock = std::function<std::chrono::steady_clock::time_point()>;

  /// The sleeper and clock default to the real ones; tests inject fakes.
  SimulationRunner(CompletionClient& client, RetryPolicy policy = {},
                   ParseMode mode = ParseMode::Lax, Sleeper sleeper = {}, Clock clock = {});

  SimulationResult run(int sim, const SimulationInputs& inputs);
  /// Runs concurrently under the in-flight cap; results follow `sims` order.
  std::vector<SimulationResult> run_many(std::span<const int> sims, const SimulationInputs& inputs);

private:
  std::string call_with_retries(const std::string& prompt, int& retries);
  void acquire_rate_slot();

  CompletionClient& client_;
  RetryPolicy policy_;
  ParseMode mode_;
  Sleeper sleep_;
  Clock now_;
  std::mutex rate_mutex_;
  std::deque<std::chrono::steady_clock::time_point> recent_;
};

SimulationResult run_simulation(CompletionClient& client, int sim, const SimulationInputs& inputs,
                                RetryPolicy policy = {}, ParseMode mode = ParseMode::Lax);

/// Three-class report of the predictions against gold labels. Throws
/// ValidationError when the id sets differ.
ClassificationReport score_simulation(const Predictions& predictions,
                                      std::span<const std::pair<std::string, int>> gold);

/// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

}  // namespace oilsent
