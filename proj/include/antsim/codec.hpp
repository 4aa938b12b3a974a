#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace antsim {

using Byte = std::uint8_t;

/// The five operation modes driven by the supervisor console.
enum class CommandMode : std::uint8_t { Forward, Backward, TurnLeft, TurnRight, Stop };

inline constexpr std::array<CommandMode, 5> kAllModes{
    CommandMode::Forward, CommandMode::Backward, CommandMode::TurnLeft, CommandMode::TurnRight,
    CommandMode::Stop};

/// Plain-text command byte on the wire (before obfuscation): F, B, L, R, S.
constexpr Byte command_byte(CommandMode mode) noexcept {
  switch (mode) {
    case CommandMode::Forward: return 0x46;
    case CommandMode::Backward: return 0x42;
    case CommandMode::TurnLeft: return 0x4C;
    case CommandMode::TurnRight: return 0x52;
    case CommandMode::Stop: return 0x53;
  }
  return 0x53;
}

std::optional<CommandMode> mode_from_command_byte(Byte b) noexcept;

/// Lower-case names used by the JSON interfaces: forward, backward, left, right, stop.
std::string_view mode_name(CommandMode mode) noexcept;
std::optional<CommandMode> parse_mode_name(std::string_view name) noexcept;

struct CodecConfig {
  Byte password = 0xA5;
  bool obfuscate = false;
  Byte keepalive = 0x31;  // ASCII '1'

  /// Throws std::invalid_argument when keepalive == password.
  void validate() const;
};

using Frame = std::array<Byte, 3>;

constexpr Byte checksum(Byte password, Byte command_wire) noexcept {
  return static_cast<Byte>(password ^ command_wire);
}

/// [password, command (optionally XOR password), checksum over wire values]
Frame encode_frame(CommandMode mode, const CodecConfig& cfg) noexcept;

/// Fixed byte substitution applied by the serial converter, and its inverse.
class AlterationMap {
 public:
  AlterationMap();  // identity

  /// Throws std::invalid_argument unless `table` has 256 entries forming a permutation of 0..255.
  static AlterationMap from_table(std::span<const int> table);
  static AlterationMap swap(Byte a, Byte b);

  Byte apply(Byte b) const noexcept { return forward_[b]; }
  Byte invert(Byte b) const noexcept { return inverse_[b]; }

  bool is_identity() const noexcept;
  const std::array<Byte, 256>& table() const noexcept { return forward_; }

  friend bool operator==(const AlterationMap&, const AlterationMap&) = default;

 private:
  std::array<Byte, 256> forward_{};
  std::array<Byte, 256> inverse_{};
};

/// Sliding 3-byte window parser state. The window only ever holds a prefix that
/// starts with the password; anything else is shifted out and counted as noise.
struct ParserState {
  std::array<Byte, 3> window{};
  std::size_t size = 0;
  std::uint64_t frames_ok = 0;
  std::uint64_t keepalives = 0;
  std::uint64_t noise_bytes = 0;
};

enum class ParseEventKind : std::uint8_t { None, Keepalive, Frame };

struct ParseEvent {
  ParseEventKind kind = ParseEventKind::None;
  CommandMode mode = CommandMode::Stop;  // meaningful only for Frame

  friend bool operator==(const ParseEvent&, const ParseEvent&) = default;
};

/// Push one (already de-altered) byte through the parser.
ParseEvent parser_push(ParserState& state, Byte b, const CodecConfig& cfg) noexcept;

}  // namespace antsim
