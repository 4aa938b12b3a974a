#include "antsim/link.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace antsim {

void LinkConfig::validate() const {
  if (noise_onset <= SimTime{0}) throw std::invalid_argument("link.noise_onset: must be > 0");
  if (!(noise_rate >= 0.0) || !std::isfinite(noise_rate)) {
    throw std::invalid_argument("link.noise_rate: must be finite and >= 0");
  }
  if (!(drop_prob >= 0.0 && drop_prob <= 1.0)) {
    throw std::invalid_argument("link.drop_prob: must lie in [0, 1]");
  }
  if (latency < SimTime{0}) throw std::invalid_argument("link.latency: must be >= 0");
  if (!(range_max > 0.0)) throw std::invalid_argument("link.range_max: must be > 0");
  if (!(distance >= 0.0)) throw std::invalid_argument("link.distance: must be >= 0");
}

Link::Link(LinkConfig cfg)
    : cfg_(std::move(cfg)), noise_rng_(cfg_.seed), drop_rng_(cfg_.seed ^ 0x9E3779B97F4A7C15ULL) {
  cfg_.validate();
}

void Link::reconfigure(const LinkConfig& cfg) {
  cfg.validate();
  const auto seed = cfg_.seed;
  cfg_ = cfg;
  cfg_.seed = seed;  // RNG streams are not reseeded mid-run
}

void Link::send(std::span<const Byte> bytes, SimTime t) {
  if (t < now_) throw std::logic_error("Link::send: time went backwards");
  const bool out_of_range = cfg_.distance > cfg_.range_max;
  for (Byte b : bytes) {
    ++counters_.sent;
    if (out_of_range) {
      ++counters_.dropped;
      continue;
    }
    if (cfg_.drop_prob > 0.0) {
      const double u = static_cast<double>(drop_rng_() >> 11) * 0x1.0p-53;
      if (u < cfg_.drop_prob) {
        ++counters_.dropped;
        continue;
      }
    }
    SimTime due = t + cfg_.latency;
    if (!queue_.empty() && due < queue_.back().t) due = queue_.back().t;
    queue_.push_back({due, cfg_.alteration.apply(b), false});
    ++counters_.in_flight;
  }
}

SimTime Link::next_noise_time() const noexcept {
  if (cfg_.noise_rate <= 0.0) return SimTime::max();
  const double period_ns = 1e9 / cfg_.noise_rate;
  const auto offset = static_cast<std::int64_t>(
      std::llround(static_cast<double>(episode_noise_ + 1) * period_ns));
  return last_delivery_ + cfg_.noise_onset + SimTime{offset};
}

std::vector<Delivery> Link::step(SimTime now) {
  if (now < now_) throw std::logic_error("Link::step: time went backwards");
  now_ = now;
  std::vector<Delivery> out;
  for (;;) {
    const SimTime real_t = queue_.empty() ? SimTime::max() : queue_.front().t;
    const SimTime noise_t = next_noise_time();
    if (real_t <= now && real_t <= noise_t) {
      out.push_back(queue_.front());
      queue_.pop_front();
      --counters_.in_flight;
      ++counters_.delivered;
      last_delivery_ = real_t;
      episode_noise_ = 0;
    } else if (noise_t <= now) {
      out.push_back({noise_t, static_cast<Byte>(noise_rng_() >> 56), true});
      ++episode_noise_;
      ++counters_.noise_emitted;
    } else {
      break;
    }
  }
  return out;
}

}  // namespace antsim
