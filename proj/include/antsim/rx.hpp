#pragma once

#include <cstdint>
#include <optional>

#include "antsim/codec.hpp"
#include "antsim/time.hpp"

namespace antsim {

struct RxCounters {
  std::uint64_t frames_ok = 0;
  std::uint64_t keepalives = 0;
  std::uint64_t noise_rejected = 0;
  std::uint64_t mode_changes = 0;
  std::uint64_t watchdog_trips = 0;
};

/// Robot-side receiver: undoes the converter alteration, parses, and latches the
/// commanded mode. A watchdog forces Stop when valid traffic stops arriving.
///
/// Only frames and "clean" keepalives refresh the watchdog. A keepalive is clean
/// when no noise byte was rejected since the previous frame or keepalive, so a
/// stray 0x31 inside channel noise cannot hold a severed link open.
class Receiver {
 public:
  Receiver(CodecConfig codec, AlterationMap compensation, SimTime watchdog_timeout = 500ms);

  /// Returns the new mode when a valid frame changes it.
  std::optional<CommandMode> ingest(Byte b, SimTime t);

  /// Returns Stop when the watchdog forces it.
  std::optional<CommandMode> watchdog(SimTime t);

  CommandMode mode() const noexcept { return mode_; }
  SimTime last_valid() const noexcept { return last_valid_; }
  RxCounters counters() const noexcept;
  const ParserState& parser() const noexcept { return parser_; }
  /// Kind of the most recent parser event, for callers that track byte provenance.
  ParseEventKind last_event() const noexcept { return last_event_; }

 private:
  CodecConfig codec_;
  AlterationMap compensation_;
  SimTime timeout_;
  ParserState parser_;
  CommandMode mode_ = CommandMode::Stop;
  SimTime last_valid_{0};
  bool line_clean_ = true;
  ParseEventKind last_event_ = ParseEventKind::None;
  std::uint64_t mode_changes_ = 0;
  std::uint64_t watchdog_trips_ = 0;
};

}  // namespace antsim
