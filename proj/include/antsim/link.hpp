#pragma once

#include <cstdint>
#include <deque>
#include <random>
#include <span>
#include <vector>

#include "antsim/codec.hpp"
#include "antsim/time.hpp"

namespace antsim {

struct LinkConfig {
  SimTime noise_onset = 75ms;  // idle time after which the receiver starts hearing noise
  double noise_rate = 1000.0;  // noise bytes per second once idle
  double drop_prob = 0.0;
  SimTime latency{0};
  double range_max = 150.0;  // m, hard cutoff
  double distance = 0.0;     // m, current transmitter-receiver separation
  std::uint64_t seed = 0;
  AlterationMap alteration;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// A byte as seen by the receiver. `noise` marks bytes the channel invented.
struct Delivery {
  SimTime t;
  Byte value;
  bool noise;

  friend bool operator==(const Delivery&, const Delivery&) = default;
};

struct LinkCounters {
  std::uint64_t sent = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
  std::uint64_t in_flight = 0;
  std::uint64_t noise_emitted = 0;
};

/// One-way radio channel. Real bytes are dropped, altered and delayed on the
/// transmit path; uniform random noise appears at the receiver whenever no real
/// byte has been delivered for `noise_onset`.
class Link {
 public:
  explicit Link(LinkConfig cfg);

  /// Queue bytes handed over at time `t` (must not precede the last step).
  void send(std::span<const Byte> bytes, SimTime t);

  /// Release everything due by `now`, real and noise interleaved in time order.
  std::vector<Delivery> step(SimTime now);

  LinkCounters stats() const noexcept { return counters_; }

  const LinkConfig& config() const noexcept { return cfg_; }
  /// Live reconfiguration (e.g. moving the robot out of range). Re-validated.
  void reconfigure(const LinkConfig& cfg);

 private:
  SimTime next_noise_time() const noexcept;

  LinkConfig cfg_;
  std::deque<Delivery> queue_;
  SimTime now_{0};
  SimTime last_delivery_{0};
  std::uint64_t episode_noise_ = 0;  // noise bytes emitted since last real delivery
  LinkCounters counters_;
  std::mt19937_64 noise_rng_;
  std::mt19937_64 drop_rng_;
};

}  // namespace antsim
