#include "antsim/codec.hpp"

#include <stdexcept>
#include <string>

namespace antsim {

std::optional<CommandMode> mode_from_command_byte(Byte b) noexcept {
  for (auto mode : kAllModes) {
    if (command_byte(mode) == b) return mode;
  }
  return std::nullopt;
}

std::string_view mode_name(CommandMode mode) noexcept {
  switch (mode) {
    case CommandMode::Forward: return "forward";
    case CommandMode::Backward: return "backward";
    case CommandMode::TurnLeft: return "left";
    case CommandMode::TurnRight: return "right";
    case CommandMode::Stop: return "stop";
  }
  return "stop";
}

std::optional<CommandMode> parse_mode_name(std::string_view name) noexcept {
  for (auto mode : kAllModes) {
    if (mode_name(mode) == name) return mode;
  }
  return std::nullopt;
}

void CodecConfig::validate() const {
  if (keepalive == password) {
    throw std::invalid_argument("keepalive byte must differ from password");
  }
}

Frame encode_frame(CommandMode mode, const CodecConfig& cfg) noexcept {
  const Byte plain = command_byte(mode);
  const Byte wire = cfg.obfuscate ? static_cast<Byte>(plain ^ cfg.password) : plain;
  return {cfg.password, wire, checksum(cfg.password, wire)};
}

AlterationMap::AlterationMap() {
  for (int i = 0; i < 256; ++i) {
    forward_[i] = static_cast<Byte>(i);
    inverse_[i] = static_cast<Byte>(i);
  }
}

AlterationMap AlterationMap::from_table(std::span<const int> table) {
  if (table.size() != 256) {
    throw std::invalid_argument("alteration table must have 256 entries, got " +
                                std::to_string(table.size()));
  }
  AlterationMap map;
  std::array<bool, 256> seen{};
  for (std::size_t i = 0; i < 256; ++i) {
    const int v = table[i];
    if (v < 0 || v > 255) {
      throw std::invalid_argument("alteration entry " + std::to_string(i) + " out of byte range: " +
                                  std::to_string(v));
    }
    if (seen[v]) {
      throw std::invalid_argument("alteration table is not a bijection (value " +
                                  std::to_string(v) + " appears twice)");
    }
    seen[v] = true;
    map.forward_[i] = static_cast<Byte>(v);
    map.inverse_[v] = static_cast<Byte>(i);
  }
  return map;
}

AlterationMap AlterationMap::swap(Byte a, Byte b) {
  AlterationMap map;
  std::swap(map.forward_[a], map.forward_[b]);
  std::swap(map.inverse_[a], map.inverse_[b]);
  return map;
}

bool AlterationMap::is_identity() const noexcept {
  for (int i = 0; i < 256; ++i) {
    if (forward_[i] != i) return false;
  }
  return true;
}

namespace {

// Drop leading bytes until the window is empty or starts with the password.
void resync(ParserState& s, Byte password) noexcept {
  std::size_t skip = 0;
  while (skip < s.size && s.window[skip] != password) ++skip;
  if (skip == 0) return;
  for (std::size_t i = skip; i < s.size; ++i) s.window[i - skip] = s.window[i];
  s.size -= skip;
  s.noise_bytes += skip;
}

std::optional<CommandMode> match(const ParserState& s, const CodecConfig& cfg) noexcept {
  const Byte pwd = s.window[0];
  const Byte wire = s.window[1];
  if (pwd != cfg.password || s.window[2] != checksum(pwd, wire)) return std::nullopt;
  const Byte plain = cfg.obfuscate ? static_cast<Byte>(wire ^ pwd) : wire;
  return mode_from_command_byte(plain);
}

}  // namespace

ParseEvent parser_push(ParserState& state, Byte b, const CodecConfig& cfg) noexcept {
  if (b == cfg.keepalive && state.size == 0) {
    ++state.keepalives;
    return {ParseEventKind::Keepalive};
  }

  state.window[state.size++] = b;
  if (state.size == 3) {
    if (auto mode = match(state, cfg)) {
      state.size = 0;
      ++state.frames_ok;
      return {ParseEventKind::Frame, *mode};
    }
    // Slide past the unmatched leading byte.
    state.window[0] = state.window[1];
    state.window[1] = state.window[2];
    state.size = 2;
    ++state.noise_bytes;
  }
  resync(state, cfg.password);
  return {};
}

}  // namespace antsim
