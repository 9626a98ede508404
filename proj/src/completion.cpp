#include "oilsent/completion.hpp"

#include <ctime>
#include <future>
#include <regex>
#include <thread>

namespace oilsent {

FixtureClient::FixtureClient(std::span<const fixtures::LabelColumn> columns) {
  for (const auto& c : columns) {
    int sim = 0;
    try {
      std::size_t used = 0;
      sim = std::stoi(c.name, &used);
      if (used != c.name.size()) continue;
    } catch (const std::exception&) {
      continue;  // truth and reference-model columns are not prompts
    }
    responses_[sim] = format_response(c.labels);
  }
}

std::string FixtureClient::submit(const std::string& prompt) {
  static const std::regex name(R"(dict_sim(\d+))");
  std::smatch m;
  if (!std::regex_search(prompt, m, name)) throw Error("prompt names no dict_simK result");
  const int sim = std::stoi(m[1].str());
  auto it = responses_.find(sim);
  if (it == responses_.end()) throw Error("no fixture for simulation " + std::to_string(sim));
  return it->second;
}

#ifndef OILSENT_HAVE_HTTP_CLIENT
std::unique_ptr<CompletionClient> make_http_client(const HttpClientConfig&) {
  throw Error("built without the HTTPS completion client");
}
bool http_client_available() { return false; }
#endif

SimulationRunner::SimulationRunner(CompletionClient& client, RetryPolicy policy, ParseMode mode,
                                   Sleeper sleeper, Clock clock)
    : client_(client),
      policy_(policy),
      mode_(mode),
      sleep_(std::move(sleeper)),
      now_(std::move(clock)) {
  if (!sleep_) sleep_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  if (!now_) now_ = [] { return std::chrono::steady_clock::now(); };
  if (policy_.max_retries < 0) throw PreconditionError("max_retries must be non-negative");
  if (policy_.max_in_flight < 1) throw PreconditionError("max_in_flight must be at least 1");
  if (policy_.rate_limit_per_minute < 0)
    throw PreconditionError("rate limit must be non-negative");
}

void SimulationRunner::acquire_rate_slot() {
  if (policy_.rate_limit_per_minute == 0) return;
  const auto window = std::chrono::minutes(1);
  for (;;) {
    std::chrono::milliseconds wait{0};
    {
      std::lock_guard lock(rate_mutex_);
      const auto now = now_();
      while (!recent_.empty() && now - recent_.front() >= window) recent_.pop_front();
      if (recent_.size() < static_cast<std::size_t>(policy_.rate_limit_per_minute)) {
        recent_.push_back(now);
        return;
      }
      wait = std::chrono::duration_cast<std::chrono::milliseconds>(recent_.front() + window - now) +
             std::chrono::milliseconds(1);
    }
    sleep_(wait);
  }
}

std::string SimulationRunner::call_with_retries(const std::string& prompt, int& retries) {
  auto delay = policy_.backoff;
  for (retries = 0;; ++retries) {
    acquire_rate_slot();
    try {
      return client_.submit(prompt);
    } catch (const TransportError& e) {
      if (retries >= policy_.max_retries)
        throw TransportError(std::string(e.what()) + " (gave up after " +
                             std::to_string(retries) + " retries)");
    }
    sleep_(delay);
    delay = std::chrono::milliseconds(
        static_cast<long long>(static_cast<double>(delay.count()) * policy_.backoff_factor));
  }
}

SimulationResult SimulationRunner::run(int sim, const SimulationInputs& inputs) {
  SimulationResult r;
  r.sim = sim;
  const bool needs_train = prompt_spec(sim).needs_training;
  if (needs_train)
    r.prompt = build_prompt(sim, inputs.test, std::span<const fixtures::LabeledText>(inputs.train));
  else
    r.prompt = build_prompt(sim, inputs.test);
  r.model = client_.model();
  r.timestamp = utc_timestamp();
  r.raw_response = call_with_retries(r.prompt, r.retries);
  std::vector<std::string> ids;
  for (const auto& h : inputs.test) ids.push_back(h.id);
  try {
    r.predictions = parse_response(r.raw_response, ids, mode_);
  } catch (const ParseError& e) {
    throw SimulationParseError("simulation " + std::to_string(sim) + ": " + e.what(), sim,
                               r.raw_response);
  }
  return r;
}

std::vector<SimulationResult> SimulationRunner::run_many(std::span<const int> sims,
                                                         const SimulationInputs& inputs) {
  std::counting_semaphore<> slots(policy_.max_in_flight);
  std::vector<std::future<SimulationResult>> pending;
  for (int sim : sims)
    pending.push_back(std::async(std::launch::async, [&, sim] {
      slots.acquire();
      struct Release {
        std::counting_semaphore<>& s;
        ~Release() { s.release(); }
      } release{slots};
      return run(sim, inputs);
    }));
  std::vector<SimulationResult> out;
  std::exception_ptr first_error;
  for (auto& f : pending) {
    try {
      out.push_back(f.get());
    } catch (...) {
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

SimulationResult run_simulation(CompletionClient& client, int sim, const SimulationInputs& inputs,
                                RetryPolicy policy, ParseMode mode) {
  SimulationRunner runner(client, policy, mode);
  return runner.run(sim, inputs);
}

ClassificationReport score_simulation(const Predictions& predictions,
                                      std::span<const std::pair<std::string, int>> gold) {
  if (predictions.size() != gold.size())
    throw ValidationError("prediction and gold id sets differ in size");
  std::vector<int> truth, pred;
  for (const auto& [id, label] : gold) {
    auto it = predictions.find(id);
    if (it == predictions.end()) throw ValidationError("no prediction for gold id " + id);
    truth.push_back(label);
    pred.push_back(it->second);
  }
  const auto classes = sentiment_classes();
  const auto names = sentiment_names();
  return report(confusion(truth, pred, classes, names));
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace oilsent
