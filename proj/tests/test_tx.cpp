#include <vector>

#include "antsim/link.hpp"
#include "antsim/tx.hpp"
#include "doctest.h"

using namespace antsim;

TEST_CASE("command frame goes out on the same step") {
  Transmitter tx(TxConfig{});
  tx.command(CommandMode::Forward, 0ms);
  CHECK(tx.step(0ms) == std::vector<Byte>{0xA5, 0x46, 0xE3});
  CHECK(tx.frames_sent() == 1);
}

TEST_CASE("commands in one tick are emitted in submission order") {
  Transmitter tx(TxConfig{});
  tx.command(CommandMode::Forward, 0ms);
  tx.command(CommandMode::Stop, 0ms);
  CHECK(tx.step(0ms) == std::vector<Byte>{0xA5, 0x46, 0xE3, 0xA5, 0x53, 0xF6});
}

TEST_CASE("idle keepalive cadence") {
  Transmitter tx(TxConfig{});
  CHECK(tx.step(49ms).empty());
  CHECK(tx.step(50ms) == std::vector<Byte>{0x31});

  // 10 s idle at 1 ms ticks: one byte per 50 ms period.
  Transmitter idle(TxConfig{});
  std::vector<SimTime> times;
  for (int ms = 1; ms <= 10000; ++ms) {
    const SimTime t = std::chrono::milliseconds(ms);
    for (Byte b : idle.step(t)) {
      CHECK(b == 0x31);
      times.push_back(t);
    }
  }
  CHECK(times.size() == 10000 / 50);
  SimTime prev{0};
  for (auto t : times) {
    CHECK(t - prev <= 50ms);
    prev = t;
  }
}

TEST_CASE("a frame resets the keepalive timer") {
  Transmitter tx(TxConfig{});
  for (int ms = 0; ms < 49; ++ms) CHECK(tx.step(std::chrono::milliseconds(ms)).empty());
  tx.command(CommandMode::Forward, 49ms);
  CHECK(tx.step(49ms).size() == 3);
  for (int ms = 50; ms < 99; ++ms) CHECK(tx.step(std::chrono::milliseconds(ms)).empty());
  CHECK(tx.step(99ms) == std::vector<Byte>{0x31});
}

TEST_CASE("gap stays below the noise onset for any tick up to 10 ms") {
  for (int tick_ms = 1; tick_ms <= 10; ++tick_ms) {
    LinkConfig lc;
    Link link(lc);
    Transmitter tx(TxConfig{});
    for (int ms = 0; ms <= 20000; ms += tick_ms) {
      const SimTime t = std::chrono::milliseconds(ms);
      if (ms % 1300 == 0) tx.command(CommandMode::TurnLeft, t);
      const auto bytes = tx.step(t);
      link.send(bytes, t);
      link.step(t);
    }
    CHECK_MESSAGE(link.stats().noise_emitted == 0, "tick " << tick_ms << " ms");
  }
}

TEST_CASE("disabled transmitter is silent and resumes on enable") {
  TxConfig cfg;
  cfg.enabled = false;
  Transmitter tx(cfg);
  tx.command(CommandMode::Forward, 0ms);
  for (int ms = 0; ms < 200; ++ms) CHECK(tx.step(std::chrono::milliseconds(ms)).empty());
  tx.set_enabled(true, 200ms);
  CHECK(tx.step(200ms) == std::vector<Byte>{0x31});
  tx.command(CommandMode::Backward, 201ms);
  tx.set_enabled(false, 201ms);
  CHECK(tx.step(201ms).empty());
}

TEST_CASE("keepalive can be switched off") {
  TxConfig cfg;
  cfg.keepalive = false;
  Transmitter tx(cfg);
  for (int ms = 0; ms < 500; ++ms) CHECK(tx.step(std::chrono::milliseconds(ms)).empty());
}
