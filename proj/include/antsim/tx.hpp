#pragma once

#include <deque>
#include <vector>

#include "antsim/codec.hpp"
#include "antsim/time.hpp"

namespace antsim {

struct TxConfig {
  SimTime keepalive_period = 50ms;
  bool keepalive = true;  // send neutral bytes while idle
  bool enabled = true;    // false: transmitter silent (no frames, no keepalives)
  CodecConfig codec;
};

/// Supervisor-side sender: queued command frames plus a keepalive byte whenever
/// the line has been quiet for a full period.
class Transmitter {
 public:
  explicit Transmitter(TxConfig cfg, SimTime start = SimTime{0});

  /// Queue a frame for emission at the next step. Ignored while disabled.
  void command(CommandMode mode, SimTime t);

  /// Bytes to hand to the link at `now`.
  std::vector<Byte> step(SimTime now);

  /// Enabling restarts the keepalive schedule at `now`; disabling discards queued frames.
  void set_enabled(bool enabled, SimTime now);
  bool enabled() const noexcept { return cfg_.enabled; }

  SimTime next_keepalive() const noexcept { return next_keepalive_; }
  std::uint64_t frames_sent() const noexcept { return frames_sent_; }
  std::uint64_t keepalives_sent() const noexcept { return keepalives_sent_; }
  const TxConfig& config() const noexcept { return cfg_; }

 private:
  TxConfig cfg_;
  std::deque<CommandMode> pending_;
  SimTime next_keepalive_;
  std::uint64_t frames_sent_ = 0;
  std::uint64_t keepalives_sent_ = 0;
};

}  // namespace antsim
