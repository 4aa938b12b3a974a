#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "antsim/codec.hpp"
#include "antsim/scenario.hpp"
#include "json.hpp"

namespace antsim {

/// Parses {"type":"command","mode":"forward"|"backward"|"left"|"right"|"stop"}.
/// Anything else yields nullopt.
std::optional<CommandMode> parse_command_message(std::string_view text);

struct ServeOptions {
  std::string address = "0.0.0.0";
  std::uint16_t port = 8080;  // 0 picks a free port
  std::filesystem::path assets = "ui/dist";
  Scenario scenario;  // world configuration; duration and script are ignored
};

/// Real-time teleoperation service. HTTP GET serves static assets from
/// `assets`, the WebSocket endpoint /ws accepts command messages and
/// broadcasts telemetry at the scenario's reporting rate.
///
/// The transmitter only runs while at least one client is connected, so a
/// dropped console leaves the robot to the receiver watchdog.
class LiveService {
 public:
  explicit LiveService(ServeOptions options);
  ~LiveService();

  LiveService(const LiveService&) = delete;
  LiveService& operator=(const LiveService&) = delete;

  /// Bind and start the network and simulation threads. Returns immediately.
  void start();
  void stop();

  std::uint16_t port() const;

  /// Most recent telemetry broadcast (thread-safe copy).
  std::optional<nlohmann::json> latest() const;
  std::uint64_t rejected_messages() const;
  std::size_t clients() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace antsim
