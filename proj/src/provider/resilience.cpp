#include "reflectbench/provider/resilience.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "reflectbench/core/errors.hpp"

namespace reflectbench {

double RetryPolicy::backoff_ceiling(int attempt) const {
  return std::min(max_delay_s, base_delay_s * std::ldexp(1.0, attempt));
}

RetryingProvider::RetryingProvider(std::shared_ptr<Provider> inner, RetryPolicy policy,
                                   std::uint64_t seed, Sleeper sleeper)
    : inner_(std::move(inner)), policy_(policy), sleeper_(std::move(sleeper)), rng_(seed) {
  if (policy_.max_retries < 0) throw Error(ErrorCode::kValidation, "max_retries must be >= 0");
  if (!sleeper_) {
    sleeper_ = [](double s) { std::this_thread::sleep_for(std::chrono::duration<double>(s)); };
  }
}

ModelResponse RetryingProvider::complete(std::span<const Message> transcript,
                                         const GenerationParams& params) {
  for (int attempt = 0;; ++attempt) {
    try {
      ModelResponse response = inner_->complete(transcript, params);
      response.retries += attempt;
      return response;
    } catch (const ProviderError& e) {
      if (!e.retryable() || attempt >= policy_.max_retries) throw;
      double delay;
      {
        std::lock_guard lock(rng_mu_);
        // 53 random bits mapped onto [0, 1).
        const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
        delay = u * policy_.backoff_ceiling(attempt);
      }
      sleeper_(delay);
    }
  }
}

TokenBucket::TokenBucket(double rate_per_s, double burst)
    : rate_per_s_(rate_per_s), burst_(burst), tokens_(burst), last_(Clock::now()) {
  if (rate_per_s <= 0 || burst < 1) {
    throw Error(ErrorCode::kValidation, "token bucket needs rate > 0 and burst >= 1");
  }
}

void TokenBucket::refill(Clock::time_point now) {
  if (now > last_) {
    const double elapsed = std::chrono::duration<double>(now - last_).count();
    tokens_ = std::min(burst_, tokens_ + elapsed * rate_per_s_);
    last_ = now;
  }
}

bool TokenBucket::try_acquire(Clock::time_point now) {
  std::lock_guard lock(mu_);
  refill(now);
  if (tokens_ >= 1.0) {
    tokens_ -= 1.0;
    return true;
  }
  return false;
}

void TokenBucket::acquire() {
  for (;;) {
    double wait_s;
    {
      std::lock_guard lock(mu_);
      refill(Clock::now());
      if (tokens_ >= 1.0) {
        tokens_ -= 1.0;
        return;
      }
      wait_s = (1.0 - tokens_) / rate_per_s_;
    }
    std::this_thread::sleep_for(std::chrono::duration<double>(wait_s));
  }
}

ThrottledProvider::ThrottledProvider(std::shared_ptr<Provider> inner, int max_in_flight,
                                     std::optional<double> rate_per_s)
    : inner_(std::move(inner)), max_in_flight_(max_in_flight) {
  if (max_in_flight_ < 1) throw Error(ErrorCode::kValidation, "max_in_flight must be >= 1");
  if (rate_per_s) bucket_ = std::make_unique<TokenBucket>(*rate_per_s, std::max(1.0, *rate_per_s));
}

ModelResponse ThrottledProvider::complete(std::span<const Message> transcript,
                                          const GenerationParams& params) {
  {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return in_flight_ < max_in_flight_; });
    ++in_flight_;
    peak_ = std::max(peak_, in_flight_);
  }
  struct Release {
    ThrottledProvider* self;
    ~Release() {
      {
        std::lock_guard lock(self->mu_);
        --self->in_flight_;
      }
      self->cv_.notify_one();
    }
  } release{this};
  if (bucket_) bucket_->acquire();
  return inner_->complete(transcript, params);
}

int ThrottledProvider::peak_in_flight() const {
  std::lock_guard lock(mu_);
  return peak_;
}

}  // namespace reflectbench
