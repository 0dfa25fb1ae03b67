#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <random>

#include "reflectbench/provider/provider.hpp"

namespace reflectbench {

struct RetryPolicy {
  int max_retries = 5;
  double base_delay_s = 0.5;
  double max_delay_s = 30.0;

  // Upper bound of the jitter window before retry `attempt` (0-based):
  // min(max_delay, base * 2^attempt).
  double backoff_ceiling(int attempt) const;
};

using Sleeper = std::function<void(double seconds)>;

// Retries transport failures and rate limiting with exponential backoff and
// full jitter (a uniform draw from [0, ceiling]). Other errors surface at
// once. The response's `retries` counts the extra attempts.
class RetryingProvider final : public Provider {
 public:
  RetryingProvider(std::shared_ptr<Provider> inner, RetryPolicy policy, std::uint64_t seed = 0,
                   Sleeper sleeper = {});

  ModelResponse complete(std::span<const Message> transcript,
                         const GenerationParams& params) override;
  std::string describe() const override { return "retry(" + inner_->describe() + ")"; }

 private:
  std::shared_ptr<Provider> inner_;
  RetryPolicy policy_;
  Sleeper sleeper_;
  std::mutex rng_mu_;
  std::mt19937_64 rng_;
};

// Refills `rate_per_s` tokens per second up to `burst`. acquire() blocks
// until a token is available.
class TokenBucket {
 public:
  using Clock = std::chrono::steady_clock;

  TokenBucket(double rate_per_s, double burst);

  void acquire();
  // Non-blocking variant for tests and polling callers.
  bool try_acquire(Clock::time_point now);

 private:
  void refill(Clock::time_point now);

  double rate_per_s_;
  double burst_;
  double tokens_;
  Clock::time_point last_;
  std::mutex mu_;
};

// Caps concurrent in-flight calls to the wrapped provider and, optionally,
// the request rate.
class ThrottledProvider final : public Provider {
 public:
  ThrottledProvider(std::shared_ptr<Provider> inner, int max_in_flight,
                    std::optional<double> rate_per_s = std::nullopt);

  ModelResponse complete(std::span<const Message> transcript,
                         const GenerationParams& params) override;
  std::string describe() const override { return "throttle(" + inner_->describe() + ")"; }

  int peak_in_flight() const;

 private:
  std::shared_ptr<Provider> inner_;
  int max_in_flight_;
  std::unique_ptr<TokenBucket> bucket_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  int in_flight_ = 0;
  int peak_ = 0;
};

}  // namespace reflectbench
