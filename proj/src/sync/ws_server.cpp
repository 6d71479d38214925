#include "sync/ws_server.hpp"

#include <chrono>
#include <fstream>
#include <map>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>
#include <spdlog/spdlog.h>

#include "common/error.hpp"

namespace marginalia::sync {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;
using Clock = std::chrono::steady_clock;

struct Server::Impl {
  class Connection;

  Impl(std::shared_ptr<const ingest::LectureBundle> bundle, ServerOptions opts)
      : options(std::move(opts)), session(std::move(bundle), options.session), relay(session), acceptor(ioc),
        timer(ioc) {}

  void listen();
  void accept();
  void schedule_tick();
  void on_tick();
  void flush_all();
  void start_clock();
  Millis lecture_now() const;

  ServerOptions options;
  asio::io_context ioc;
  session::Session session;
  Relay relay;
  tcp::acceptor acceptor;
  asio::steady_timer timer;
  std::ofstream record;
  bool started = false;
  Clock::time_point start_time;
  std::map<ConnId, std::shared_ptr<Connection>> conns;
};

class Server::Impl::Connection : public std::enable_shared_from_this<Connection> {
 public:
  Connection(Impl& server, tcp::socket socket) : server_(server), ws_(std::move(socket)) {}

  void start() {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept([self = shared_from_this()](beast::error_code ec) { self->on_accept(ec); });
  }

  void flush() {
    if (writing_ || closed_) return;
    auto next = server_.relay.pop(id_);
    if (!next) {
      if (server_.relay.closing(id_)) close();
      return;
    }
    writing_ = true;
    current_ = std::move(*next);
    ws_.text(true);
    ws_.async_write(asio::buffer(current_), [self = shared_from_this()](beast::error_code ec, std::size_t) {
      self->writing_ = false;
      if (ec) {
        self->drop();
        return;
      }
      self->flush();
    });
  }

  void close() {
    if (closed_) return;
    closed_ = true;
    ws_.async_close(websocket::close_code::normal, [self = shared_from_this()](beast::error_code) { self->drop(); });
  }

 private:
  void on_accept(beast::error_code ec) {
    if (ec) return;
    id_ = server_.relay.open_connection();
    server_.conns[id_] = shared_from_this();
    spdlog::info("client {} connected", id_);
    read();
  }

  void read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->drop();
        return;
      }
      const std::string text = beast::buffers_to_string(self->buffer_.data());
      self->buffer_.consume(self->buffer_.size());
      try {
        self->server_.relay.receive(self->id_, text);
      } catch (const std::exception& e) {
        spdlog::error("client {}: {}", self->id_, e.what());
      }
      self->server_.flush_all();
      if (!self->closed_) self->read();
    });
  }

  void drop() {
    if (id_ == 0) return;
    spdlog::info("client {} disconnected", id_);
    closed_ = true;
    server_.relay.close_connection(id_);
    auto keep = shared_from_this();
    server_.conns.erase(id_);
    id_ = 0;
  }

  Impl& server_;
  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  std::string current_;
  ConnId id_ = 0;
  bool writing_ = false;
  bool closed_ = false;
};

void Server::Impl::listen() {
  beast::error_code ec;
  const tcp::endpoint endpoint(asio::ip::make_address(options.host, ec), options.port);
  if (ec) fail(ErrorCode::InvalidArgument, "bad host address: " + options.host);
  acceptor.open(endpoint.protocol(), ec);
  if (!ec) acceptor.set_option(asio::socket_base::reuse_address(true), ec);
  if (!ec) acceptor.bind(endpoint, ec);
  if (ec == asio::error::address_in_use || ec == asio::error::access_denied) {
    fail(ErrorCode::PortInUse, "port " + std::to_string(options.port) + " is not available");
  }
  if (!ec) acceptor.listen(asio::socket_base::max_listen_connections, ec);
  if (ec) fail(ErrorCode::Io, "cannot listen: " + ec.message());
}

void Server::Impl::accept() {
  acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
    if (ec) return;  // acceptor closed
    std::make_shared<Connection>(*this, std::move(socket))->start();
    accept();
  });
}

Millis Server::Impl::lecture_now() const {
  if (!started) return 0;
  const double wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start_time).count();
  return std::min(session.bundle().duration_ms, static_cast<Millis>(wall_ms * options.speed));
}

void Server::Impl::start_clock() {
  if (started) return;
  started = true;
  start_time = Clock::now();
  spdlog::info("lecture clock started at speed {}", options.speed);
}

void Server::Impl::schedule_tick() {
  timer.expires_after(std::chrono::milliseconds(options.tick_interval_ms));
  timer.async_wait([this](beast::error_code ec) {
    if (!ec) on_tick();
  });
}

void Server::Impl::on_tick() {
  if (started) {
    const Millis now = lecture_now();
    relay.tick(now);
    if (record.is_open()) record.flush();
    flush_all();
    if (options.exit_on_end && now >= session.bundle().duration_ms) {
      spdlog::info("lecture finished");
      ioc.stop();
      return;
    }
  }
  schedule_tick();
}

void Server::Impl::flush_all() {
  std::vector<std::shared_ptr<Connection>> all;
  for (const auto& [id, c] : conns) all.push_back(c);
  for (const auto& c : all) c->flush();
}

Server::Server(std::shared_ptr<const ingest::LectureBundle> bundle, ServerOptions options)
    : impl_(std::make_unique<Impl>(std::move(bundle), std::move(options))) {
  if (impl_->options.speed <= 0) fail(ErrorCode::InvalidArgument, "speed must be positive");
  if (impl_->options.tick_interval_ms <= 0) fail(ErrorCode::InvalidArgument, "tick interval must be positive");
  impl_->listen();
  if (!impl_->options.record_path.empty()) {
    impl_->record.open(impl_->options.record_path, std::ios::binary | std::ios::trunc);
    if (!impl_->record) fail(ErrorCode::Io, "cannot write " + impl_->options.record_path);
    impl_->relay.set_recorder(&impl_->record);
  }
  Impl* impl = impl_.get();
  impl_->relay.set_clock([impl] { return impl->lecture_now(); });
  impl_->relay.set_control_handler([impl](const nlohmann::json& control) {
    if (control.value("action", "") == "start") impl->start_clock();
  });
}

Server::~Server() = default;

std::uint16_t Server::port() const { return impl_->acceptor.local_endpoint().port(); }

void Server::run() {
  if (impl_->options.autostart) impl_->start_clock();
  impl_->accept();
  impl_->schedule_tick();
  impl_->ioc.run();
  impl_->conns.clear();
  if (impl_->record.is_open()) impl_->record.flush();
}

void Server::stop() { impl_->ioc.stop(); }

LatencyStats Server::latency() const { return impl_->relay.latency(); }

std::string Server::digest() const { return impl_->session.digest(); }

}  // namespace marginalia::sync
