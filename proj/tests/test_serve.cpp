#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <thread>

#include "antsim/serve.hpp"
#include "doctest.h"

using namespace antsim;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;
using nlohmann::json;

namespace {

class Client {
 public:
  explicit Client(std::uint16_t port) : ws_(ioc_) {
    tcp::resolver resolver(ioc_);
    net::connect(ws_.next_layer(), resolver.resolve("127.0.0.1", std::to_string(port)));
    ws_.handshake("127.0.0.1", "/ws");
  }

  void send(const std::string& text) { ws_.write(net::buffer(text)); }

  json read() {
    beast::flat_buffer buf;
    ws_.read(buf);
    return json::parse(beast::buffers_to_string(buf.data()));
  }

  /// Read telemetry until `pred` holds or `limit` samples pass.
  template <typename Pred>
  std::optional<json> read_until(Pred pred, int limit = 40) {
    for (int i = 0; i < limit; ++i) {
      json j = read();
      if (pred(j)) return j;
    }
    return std::nullopt;
  }

  void close() { ws_.close(websocket::close_code::normal); }

 private:
  net::io_context ioc_;
  websocket::stream<tcp::socket> ws_;
};

ServeOptions options(const std::filesystem::path& assets = {}) {
  ServeOptions o;
  o.address = "127.0.0.1";
  o.port = 0;
  o.assets = assets;
  return o;
}

template <typename Pred>
bool eventually(Pred pred, std::chrono::milliseconds limit) {
  const auto end = std::chrono::steady_clock::now() + limit;
  while (std::chrono::steady_clock::now() < end) {
    if (pred()) return true;
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  return pred();
}

}  // namespace

TEST_CASE("command message parsing") {
  CHECK(parse_command_message(R"({"type":"command","mode":"forward"})") == CommandMode::Forward);
  CHECK(parse_command_message(R"({"type":"command","mode":"left"})") == CommandMode::TurnLeft);
  CHECK(parse_command_message(R"({"type":"command","mode":"right"})") == CommandMode::TurnRight);
  CHECK(parse_command_message(R"({"type":"command","mode":"backward"})") == CommandMode::Backward);
  CHECK(parse_command_message(R"({"type":"command","mode":"stop"})") == CommandMode::Stop);
  CHECK_FALSE(parse_command_message(R"({"type":"command","mode":"fly"})"));
  CHECK_FALSE(parse_command_message(R"({"type":"ping","mode":"stop"})"));
  CHECK_FALSE(parse_command_message(R"({"mode":"stop"})"));
  CHECK_FALSE(parse_command_message("not json"));
  CHECK_FALSE(parse_command_message("[1,2]"));
}

TEST_CASE("live service: command, telemetry, rejection, disconnect") {
  LiveService service(options());
  service.start();
  const auto port = service.port();
  REQUIRE(port != 0);

  {
    Client client(port);
    client.send(R"({"type":"command","mode":"forward"})");
    const auto fwd = client.read_until([](const json& j) { return j["mode"] == "forward"; });
    REQUIRE(fwd);
    CHECK((*fwd)["type"] == "telemetry");
    CHECK((*fwd)["clients"] == 1);

    client.send(R"({"type":"command","mode":"sideways"})");
    client.send("garbage");
    const auto rej =
        client.read_until([](const json& j) { return j["rejected_messages"].get<int>() >= 2; });
    REQUIRE(rej);
    CHECK((*rej)["mode"] == "forward");
    CHECK(service.rejected_messages() == 2);

    // Five-mode console: every button is reflected within a few samples.
    for (const char* mode : {"left", "right", "backward", "stop", "forward"}) {
      client.send(std::string(R"({"type":"command","mode":")") + mode + "\"}");
      CHECK(client.read_until([&](const json& j) { return j["mode"] == mode; }, 5));
    }
    client.close();
  }

  // With no console connected the transmitter halts and the watchdog stops the robot.
  const auto dropped = std::chrono::steady_clock::now();
  REQUIRE(eventually([&] { return service.clients() == 0; }, std::chrono::milliseconds(500)));
  const bool stopped = eventually(
      [&] {
        auto j = service.latest();
        return j && (*j)["mode"] == "stop";
      },
      std::chrono::milliseconds(1500));
  CHECK(stopped);
  const auto waited = std::chrono::steady_clock::now() - dropped;
  CHECK(waited >= std::chrono::milliseconds(400));
  service.stop();
}

TEST_CASE("live service serves static assets") {
  const auto dir = std::filesystem::temp_directory_path() / "antsim_assets_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "index.html") << "<html>antsim console</html>";

  LiveService service(options(dir));
  service.start();

  net::io_context ioc;
  tcp::resolver resolver(ioc);
  beast::tcp_stream stream(ioc);
  stream.connect(resolver.resolve("127.0.0.1", std::to_string(service.port())));

  auto get = [&](const std::string& target) {
    http::request<http::empty_body> req{http::verb::get, target, 11};
    req.set(http::field::host, "127.0.0.1");
    http::write(stream, req);
    beast::flat_buffer buf;
    http::response<http::string_body> res;
    http::read(stream, buf, res);
    return res;
  };

  const auto index = get("/");
  CHECK(index.result() == http::status::ok);
  CHECK(index.body() == "<html>antsim console</html>");
  CHECK(index[http::field::content_type] == "text/html");
  CHECK(get("/missing.js").result() == http::status::not_found);
  CHECK(get("/../etc/passwd").result() == http::status::bad_request);

  beast::error_code ec;
  stream.socket().shutdown(tcp::socket::shutdown_both, ec);
  service.stop();
  std::filesystem::remove_all(dir);
}
