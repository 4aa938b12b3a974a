#include "antsim/rx.hpp"

namespace antsim {

Receiver::Receiver(CodecConfig codec, AlterationMap compensation, SimTime watchdog_timeout)
    : codec_(codec), compensation_(std::move(compensation)), timeout_(watchdog_timeout) {
  codec_.validate();
}

std::optional<CommandMode> Receiver::ingest(Byte b, SimTime t) {
  const auto noise_before = parser_.noise_bytes;
  const ParseEvent ev = parser_push(parser_, compensation_.invert(b), codec_);
  last_event_ = ev.kind;
  if (parser_.noise_bytes != noise_before) line_clean_ = false;

  switch (ev.kind) {
    case ParseEventKind::Keepalive:
      if (line_clean_) last_valid_ = t;
      line_clean_ = true;
      return std::nullopt;
    case ParseEventKind::Frame:
      last_valid_ = t;
      line_clean_ = true;
      if (ev.mode == mode_) return std::nullopt;
      mode_ = ev.mode;
      ++mode_changes_;
      return mode_;
    case ParseEventKind::None:
      break;
  }
  return std::nullopt;
}

std::optional<CommandMode> Receiver::watchdog(SimTime t) {
  if (mode_ == CommandMode::Stop || t - last_valid_ < timeout_) return std::nullopt;
  mode_ = CommandMode::Stop;
  ++mode_changes_;
  ++watchdog_trips_;
  return mode_;
}

RxCounters Receiver::counters() const noexcept {
  return {parser_.frames_ok, parser_.keepalives, parser_.noise_bytes, mode_changes_,
          watchdog_trips_};
}

}  // namespace antsim
