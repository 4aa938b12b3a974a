#include <random>
#include <vector>

#include "antsim/rx.hpp"
#include "doctest.h"

using namespace antsim;

namespace {

std::optional<CommandMode> feed(Receiver& rx, const Frame& f, SimTime t) {
  std::optional<CommandMode> last;
  for (Byte b : f) {
    if (auto m = rx.ingest(b, t)) last = m;
  }
  return last;
}

}  // namespace

TEST_CASE("frame while stopped changes mode; repeat is idempotent") {
  const CodecConfig codec;
  Receiver rx(codec, AlterationMap{});
  CHECK(rx.mode() == CommandMode::Stop);
  CHECK(feed(rx, encode_frame(CommandMode::Forward, codec), 0ms) == CommandMode::Forward);
  CHECK(rx.mode() == CommandMode::Forward);
  CHECK_FALSE(feed(rx, encode_frame(CommandMode::Forward, codec), 1ms));
  CHECK(rx.counters().mode_changes == 1);
  CHECK(rx.counters().frames_ok == 2);
}

TEST_CASE("last valid frame wins") {
  const CodecConfig codec;
  Receiver rx(codec, AlterationMap{});
  std::mt19937 rng(5);
  CommandMode last = CommandMode::Stop;
  for (int i = 0; i < 500; ++i) {
    last = kAllModes[rng() % 5];
    feed(rx, encode_frame(last, codec), std::chrono::milliseconds(i));
    if (rng() % 3 == 0) rx.ingest(static_cast<Byte>(rng()), std::chrono::milliseconds(i));
  }
  // Drain any partial window left by the trailing garbage byte with a clean frame.
  feed(rx, encode_frame(last, codec), 1s);
  CHECK(rx.mode() == last);
}

TEST_CASE("receiver compensates the converter alteration") {
  CodecConfig codec;
  const auto map = AlterationMap::swap(0x46, 0x4A);  // 'F' <-> 'J'
  Receiver fixed(codec, map);
  Receiver naive(codec, AlterationMap{});
  Frame wire = encode_frame(CommandMode::Forward, codec);
  for (auto& b : wire) b = map.apply(b);
  CHECK(feed(fixed, wire, 0ms) == CommandMode::Forward);
  CHECK_FALSE(feed(naive, wire, 0ms));
  CHECK(naive.counters().noise_rejected > 0);
}

TEST_CASE("seeded noise does not move the latch") {
  const CodecConfig codec;
  Receiver rx(codec, AlterationMap{});
  std::mt19937_64 rng(42);
  for (int i = 0; i < 1'000'000; ++i) rx.ingest(static_cast<Byte>(rng() >> 56), 0ms);
  CHECK(rx.counters().mode_changes <= 5);
  CHECK(rx.counters().noise_rejected > 990'000);
}

TEST_CASE("watchdog") {
  const CodecConfig codec;
  SUBCASE("healthy keepalive stream never fires") {
    Receiver rx(codec, AlterationMap{});
    feed(rx, encode_frame(CommandMode::Forward, codec), 0ms);
    for (int ms = 1; ms < 5000; ++ms) {
      const SimTime t = std::chrono::milliseconds(ms);
      if (ms % 50 == 0) rx.ingest(codec.keepalive, t);
      CHECK_FALSE(rx.watchdog(t));
    }
    CHECK(rx.mode() == CommandMode::Forward);
  }
  SUBCASE("severed link stops the robot at exactly the timeout") {
    Receiver rx(codec, AlterationMap{});
    feed(rx, encode_frame(CommandMode::Forward, codec), 0ms);
    rx.ingest(codec.keepalive, 50ms);
    CHECK_FALSE(rx.watchdog(549ms));
    CHECK(rx.watchdog(550ms) == CommandMode::Stop);
    CHECK(rx.counters().watchdog_trips == 1);
    CHECK_FALSE(rx.watchdog(600ms));
  }
  SUBCASE("already stopped: nothing to do") {
    Receiver rx(codec, AlterationMap{});
    CHECK_FALSE(rx.watchdog(10s));
  }
  SUBCASE("keepalive bytes inside noise do not hold the link open") {
    Receiver rx(codec, AlterationMap{});
    feed(rx, encode_frame(CommandMode::Forward, codec), 0ms);
    rx.ingest(0x00, 100ms);
    rx.ingest(codec.keepalive, 101ms);
    CHECK(rx.last_valid() == 0ms);
    rx.ingest(codec.keepalive, 150ms);  // a second clean keepalive counts again
    CHECK(rx.last_valid() == 150ms);
  }
}
