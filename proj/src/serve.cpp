#include "antsim/serve.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <atomic>
#include <deque>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <variant>
#include <vector>

#include "antsim/world.hpp"

namespace antsim {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;
using nlohmann::json;

std::optional<CommandMode> parse_command_message(std::string_view text) {
  const json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (!j.is_object()) return std::nullopt;
  const auto type = j.find("type");
  const auto mode = j.find("mode");
  if (type == j.end() || mode == j.end() || !type->is_string() || !mode->is_string()) {
    return std::nullopt;
  }
  if (type->get<std::string>() != "command") return std::nullopt;
  return parse_mode_name(mode->get<std::string>());
}

namespace {

class WsSession;

struct ClientJoined {};
struct ClientLeft {};
using ControlEvent = std::variant<CommandMode, ClientJoined, ClientLeft>;

// Shared between the network thread and the simulation thread.
class Hub {
 public:
  void join(const std::shared_ptr<WsSession>& s);
  void leave(WsSession* s);
  void on_message(std::string_view text);
  void broadcast(const json& sample);

  std::vector<ControlEvent> drain() {
    std::lock_guard lock(events_mu_);
    return std::exchange(events_, {});
  }

  std::optional<json> latest() const {
    std::lock_guard lock(latest_mu_);
    return latest_;
  }

  std::size_t clients() const {
    std::lock_guard lock(sessions_mu_);
    return sessions_.size();
  }

  std::atomic<std::uint64_t> rejected{0};

 private:
  void push(ControlEvent ev) {
    std::lock_guard lock(events_mu_);
    events_.push_back(ev);
  }

  mutable std::mutex sessions_mu_;
  std::vector<std::weak_ptr<WsSession>> sessions_;
  std::set<const WsSession*> members_;
  std::mutex events_mu_;
  std::vector<ControlEvent> events_;
  mutable std::mutex latest_mu_;
  std::optional<json> latest_;
};

class WsSession : public std::enable_shared_from_this<WsSession> {
 public:
  WsSession(tcp::socket&& socket, Hub& hub) : ws_(std::move(socket)), hub_(hub) {}

  void accept(http::request<http::string_body> req) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(req, beast::bind_front_handler(&WsSession::on_accept, shared_from_this()));
  }

  void send(std::shared_ptr<const std::string> msg) {
    net::post(ws_.get_executor(), [self = shared_from_this(), msg = std::move(msg)] {
      if (self->closed_) return;
      // Slow consumers lose samples rather than grow without bound.
      if (self->outbox_.size() >= 64) return;
      self->outbox_.push_back(msg);
      if (self->outbox_.size() == 1) self->write_next();
    });
  }

 private:
  void on_accept(beast::error_code ec) {
    if (ec) return;
    hub_.join(shared_from_this());
    read_next();
  }

  void read_next() {
    ws_.async_read(buffer_, beast::bind_front_handler(&WsSession::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) {
      closed_ = true;
      hub_.leave(this);
      return;
    }
    hub_.on_message(beast::buffers_to_string(buffer_.data()));
    buffer_.consume(buffer_.size());
    read_next();
  }

  void write_next() {
    ws_.text(true);
    ws_.async_write(net::buffer(*outbox_.front()),
                    beast::bind_front_handler(&WsSession::on_write, shared_from_this()));
  }

  void on_write(beast::error_code ec, std::size_t) {
    if (ec) {
      outbox_.clear();
      return;
    }
    outbox_.pop_front();
    if (!outbox_.empty()) write_next();
  }

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  std::deque<std::shared_ptr<const std::string>> outbox_;
  Hub& hub_;
  bool closed_ = false;
};

void Hub::join(const std::shared_ptr<WsSession>& s) {
  {
    std::lock_guard lock(sessions_mu_);
    sessions_.push_back(s);
    members_.insert(s.get());
  }
  push(ClientJoined{});
}

void Hub::leave(WsSession* s) {
  {
    std::lock_guard lock(sessions_mu_);
    if (members_.erase(s) == 0) return;
    std::erase_if(sessions_, [s](const auto& w) {
      auto p = w.lock();
      return !p || p.get() == s;
    });
  }
  push(ClientLeft{});
}

void Hub::on_message(std::string_view text) {
  if (auto mode = parse_command_message(text)) {
    push(*mode);
  } else {
    ++rejected;
  }
}

void Hub::broadcast(const json& sample) {
  {
    std::lock_guard lock(latest_mu_);
    latest_ = sample;
  }
  auto msg = std::make_shared<const std::string>(sample.dump());
  std::vector<std::shared_ptr<WsSession>> targets;
  {
    std::lock_guard lock(sessions_mu_);
    for (const auto& w : sessions_) {
      if (auto p = w.lock()) targets.push_back(std::move(p));
    }
  }
  for (auto& t : targets) t->send(msg);
}

std::string_view mime_type(const std::filesystem::path& p) {
  const auto ext = p.extension().string();
  if (ext == ".html" || ext == ".htm") return "text/html";
  if (ext == ".js" || ext == ".mjs") return "application/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".json") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".png") return "image/png";
  if (ext == ".ico") return "image/x-icon";
  return "application/octet-stream";
}

class HttpSession : public std::enable_shared_from_this<HttpSession> {
 public:
  HttpSession(tcp::socket&& socket, Hub& hub, std::filesystem::path assets)
      : stream_(std::move(socket)), hub_(hub), assets_(std::move(assets)) {}

  void run() { read_next(); }

 private:
  void read_next() {
    req_ = {};
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, req_,
                     beast::bind_front_handler(&HttpSession::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) return;
    if (websocket::is_upgrade(req_)) {
      if (req_.target() == "/ws") {
        stream_.expires_never();
        std::make_shared<WsSession>(stream_.release_socket(), hub_)->accept(std::move(req_));
        return;
      }
      respond(http::status::not_found, "text/plain", "no websocket endpoint here\n");
      return;
    }
    serve_file();
  }

  void serve_file() {
    if (req_.method() != http::verb::get && req_.method() != http::verb::head) {
      respond(http::status::method_not_allowed, "text/plain", "GET only\n");
      return;
    }
    std::string target(req_.target());
    if (auto q = target.find('?'); q != std::string::npos) target.resize(q);
    if (target.empty() || target.front() != '/' || target.find("..") != std::string::npos) {
      respond(http::status::bad_request, "text/plain", "bad path\n");
      return;
    }
    if (target.back() == '/') target += "index.html";
    const auto path = assets_ / target.substr(1);
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      respond(http::status::not_found, "text/plain", "not found\n");
      return;
    }
    std::ostringstream body;
    body << in.rdbuf();
    respond(http::status::ok, mime_type(path), body.str());
  }

  void respond(http::status status, std::string_view type, std::string body) {
    auto res = std::make_shared<http::response<http::string_body>>(status, req_.version());
    res->set(http::field::content_type, beast::string_view(type.data(), type.size()));
    res->keep_alive(req_.keep_alive());
    if (req_.method() == http::verb::head) {
      res->content_length(body.size());
    } else {
      res->body() = std::move(body);
      res->prepare_payload();
    }
    http::async_write(stream_, *res,
                      [self = shared_from_this(), res](beast::error_code ec, std::size_t) {
                        if (ec) return;
                        if (res->keep_alive()) {
                          self->read_next();
                        } else {
                          beast::error_code ignored;
                          self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
                        }
                      });
  }

  beast::tcp_stream stream_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> req_;
  Hub& hub_;
  std::filesystem::path assets_;
};

}  // namespace

struct LiveService::Impl {
  explicit Impl(ServeOptions opts) : options(std::move(opts)), acceptor(ioc) {}

  void accept_next() {
    acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket s) {
      if (ec) return;
      std::make_shared<HttpSession>(std::move(s), hub, options.assets)->run();
      accept_next();
    });
  }

  void simulate() {
    Scenario scenario = options.scenario;
    scenario.script.clear();
    scenario.tx.enabled = false;
    World world(scenario);
    std::size_t clients = 0;
    const auto tick = scenario.tick;
    const auto wall_start = std::chrono::steady_clock::now();

    while (running.load()) {
      const auto elapsed = std::chrono::steady_clock::now() - wall_start;
      const SimTime target = std::chrono::duration_cast<SimTime>(elapsed);
      while (world.now() + tick <= target && running.load()) {
        for (const auto& ev : hub.drain()) {
          if (const auto* mode = std::get_if<CommandMode>(&ev)) {
            world.submit(*mode);
          } else if (std::holds_alternative<ClientJoined>(ev)) {
            ++clients;
          } else if (clients > 0) {
            --clients;
          }
          world.transmitter().set_enabled(clients > 0, world.now());
        }
        if (auto sample = world.tick()) {
          json j = to_json(*sample);
          j["type"] = "telemetry";
          j["clients"] = clients;
          j["rejected_messages"] = hub.rejected.load();
          hub.broadcast(j);
        }
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(1));
    }
  }

  ServeOptions options;
  net::io_context ioc;
  tcp::acceptor acceptor;
  Hub hub;
  std::atomic<bool> running{false};
  std::thread net_thread;
  std::thread sim_thread;
};

LiveService::LiveService(ServeOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {
  impl_->options.scenario.validate();
}

LiveService::~LiveService() { stop(); }

void LiveService::start() {
  auto& d = *impl_;
  const tcp::endpoint endpoint(net::ip::make_address(d.options.address), d.options.port);
  d.acceptor.open(endpoint.protocol());
  d.acceptor.set_option(net::socket_base::reuse_address(true));
  d.acceptor.bind(endpoint);
  d.acceptor.listen(net::socket_base::max_listen_connections);
  d.running = true;
  d.accept_next();
  d.net_thread = std::thread([&d] { d.ioc.run(); });
  d.sim_thread = std::thread([&d] { d.simulate(); });
}

void LiveService::stop() {
  auto& d = *impl_;
  d.running = false;
  d.ioc.stop();
  if (d.net_thread.joinable()) d.net_thread.join();
  if (d.sim_thread.joinable()) d.sim_thread.join();
}

std::uint16_t LiveService::port() const { return impl_->acceptor.local_endpoint().port(); }

std::optional<json> LiveService::latest() const { return impl_->hub.latest(); }

std::uint64_t LiveService::rejected_messages() const { return impl_->hub.rejected.load(); }

std::size_t LiveService::clients() const { return impl_->hub.clients(); }

}  // namespace antsim
