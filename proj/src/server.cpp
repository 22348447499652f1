#include "headkey/server.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <deque>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "headkey/errors.hpp"
#include "headkey/session.hpp"

namespace headkey {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;
using nlohmann::json;

namespace {

class Peer {
 public:
  virtual ~Peer() = default;
  virtual void send(std::string line) = 0;

  std::optional<std::uint64_t> session;
};

class Hub {
 public:
  Hub(std::filesystem::path assets, std::optional<std::filesystem::path> log_dir,
      EngineConfig engine)
      : assets_(std::move(assets)), log_dir_(std::move(log_dir)), engine_(engine) {}

  void on_message(const std::shared_ptr<Peer>& peer, const std::string& text) {
    json cmd = json::parse(text, nullptr, false);
    const std::string name =
        cmd.is_object() && cmd.contains("cmd") && cmd["cmd"].is_string() ? cmd["cmd"].get<std::string>()
                                                                          : std::string();
    if (name == "open") return open(peer, cmd);
    if (name == "attach") return attach(peer, cmd);
    if (name == "close") return detach(peer);

    auto it = peer->session ? sessions_.find(*peer->session) : sessions_.end();
    if (it == sessions_.end()) {
      send_unbound_error(*peer, name.empty() ? "malformed command" : "no open session for '" + name + "'");
      return;
    }
    publish(it->second, it->second.session->handle(cmd.is_discarded() ? json() : cmd));
  }

  void detach(const std::shared_ptr<Peer>& peer) {
    if (!peer->session) return;
    auto it = sessions_.find(*peer->session);
    peer->session.reset();
    if (it == sessions_.end()) return;
    auto& subs = it->second.subscribers;
    std::erase_if(subs, [&](const std::weak_ptr<Peer>& w) {
      auto p = w.lock();
      return !p || p == peer;
    });
    if (subs.empty()) sessions_.erase(it);
  }

 private:
  struct Entry {
    std::unique_ptr<Session> session;
    std::vector<std::weak_ptr<Peer>> subscribers;
    std::unique_ptr<std::ofstream> log;
  };

  static void send_unbound_error(Peer& peer, const std::string& message) {
    peer.send(WireEvent{0, "error", {{"message", message}}}.to_line());
  }

  void open(const std::shared_ptr<Peer>& peer, const json& cmd) {
    detach(peer);
    OpenResult r;
    try {
      r = open_session(session_config_from_open(cmd, assets_, engine_));
    } catch (const std::exception& e) {
      send_unbound_error(*peer, e.what());
      return;
    }
    if (!r.session) {
      for (const auto& e : r.events) peer->send(e.to_line());
      return;
    }
    const auto id = next_id_++;
    Entry entry;
    entry.session = std::move(r.session);
    entry.subscribers.push_back(peer);
    if (log_dir_) {
      std::filesystem::create_directories(*log_dir_);
      entry.log = std::make_unique<std::ofstream>(*log_dir_ / ("session-" + std::to_string(id) + ".ndjson"));
    }
    peer->session = id;
    auto& stored = sessions_.emplace(id, std::move(entry)).first->second;
    auto events = std::move(r.events);
    events.front().payload["session"] = id;
    publish(stored, events);
  }

  void attach(const std::shared_ptr<Peer>& peer, const json& cmd) {
    const auto id = cmd.value("session", std::uint64_t{0});
    auto it = sessions_.find(id);
    if (it == sessions_.end()) {
      send_unbound_error(*peer, "no session " + std::to_string(id));
      return;
    }
    detach(peer);
    peer->session = id;
    it->second.subscribers.push_back(peer);
    peer->send(it->second.session->last_state_event().to_line());
  }

  void publish(Entry& entry, const std::vector<WireEvent>& events) {
    for (const auto& e : events) {
      const auto line = e.to_line();
      if (entry.log) *entry.log << line << '\n' << std::flush;
      for (const auto& w : entry.subscribers) {
        if (auto p = w.lock()) p->send(line);
      }
    }
  }

  std::filesystem::path assets_;
  std::optional<std::filesystem::path> log_dir_;
  EngineConfig engine_;
  std::map<std::uint64_t, Entry> sessions_;
  std::uint64_t next_id_ = 1;
};

// ---------------------------------------------------------------------------

class WsPeer : public Peer, public std::enable_shared_from_this<WsPeer> {
 public:
  WsPeer(tcp::socket socket, Hub& hub) : ws_(std::move(socket)), hub_(hub) {}

  void run(http::request<http::string_body> req) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(req, [self = shared_from_this()](beast::error_code ec) {
      if (!ec) self->read();
    });
  }

  void send(std::string line) override {
    outbox_.push_back(std::move(line));
    if (outbox_.size() == 1) write();
  }

 private:
  void read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->hub_.detach(self);
        return;
      }
      const auto text = beast::buffers_to_string(self->buffer_.data());
      self->buffer_.consume(self->buffer_.size());
      self->hub_.on_message(self, text);
      self->read();
    });
  }

  void write() {
    ws_.text(true);
    ws_.async_write(asio::buffer(outbox_.front()),
                    [self = shared_from_this()](beast::error_code ec, std::size_t) {
                      if (ec) {
                        self->outbox_.clear();
                        return;
                      }
                      self->outbox_.pop_front();
                      if (!self->outbox_.empty()) self->write();
                    });
  }

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  std::deque<std::string> outbox_;
  Hub& hub_;
};

class LinePeer : public Peer, public std::enable_shared_from_this<LinePeer> {
 public:
  LinePeer(tcp::socket socket, Hub& hub) : socket_(std::move(socket)), hub_(hub) {}

  void run() { read(); }

  void send(std::string line) override {
    line.push_back('\n');
    outbox_.push_back(std::move(line));
    if (outbox_.size() == 1) write();
  }

 private:
  void read() {
    asio::async_read_until(socket_, buffer_, '\n',
                           [self = shared_from_this()](beast::error_code ec, std::size_t n) {
                             if (ec) {
                               self->hub_.detach(self);
                               return;
                             }
                             std::string line(asio::buffers_begin(self->buffer_.data()),
                                              asio::buffers_begin(self->buffer_.data()) +
                                                  static_cast<std::ptrdiff_t>(n));
                             self->buffer_.consume(n);
                             while (!line.empty() && (line.back() == '\n' || line.back() == '\r'))
                               line.pop_back();
                             if (!line.empty()) self->hub_.on_message(self, line);
                             self->read();
                           });
  }

  void write() {
    asio::async_write(socket_, asio::buffer(outbox_.front()),
                      [self = shared_from_this()](beast::error_code ec, std::size_t) {
                        if (ec) {
                          self->outbox_.clear();
                          return;
                        }
                        self->outbox_.pop_front();
                        if (!self->outbox_.empty()) self->write();
                      });
  }

  tcp::socket socket_;
  asio::streambuf buffer_;
  std::deque<std::string> outbox_;
  Hub& hub_;
};

std::string mime_type(const std::filesystem::path& p) {
  const auto ext = p.extension().string();
  if (ext == ".html") return "text/html";
  if (ext == ".js") return "application/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".json") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  return "application/octet-stream";
}

class HttpConnection : public std::enable_shared_from_this<HttpConnection> {
 public:
  HttpConnection(tcp::socket socket, Hub& hub, std::filesystem::path www)
      : stream_(std::move(socket)), hub_(hub), www_(std::move(www)) {}

  void run() {
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, req_,
                     [self = shared_from_this()](beast::error_code ec, std::size_t) {
                       if (!ec) self->on_request();
                     });
  }

 private:
  void on_request() {
    if (websocket::is_upgrade(req_)) {
      if (req_.target() == "/session") {
        stream_.expires_never();
        std::make_shared<WsPeer>(stream_.release_socket(), hub_)->run(std::move(req_));
        return;
      }
      return respond(http::status::not_found, "text/plain", "unknown endpoint\n");
    }
    if (req_.method() != http::verb::get) {
      return respond(http::status::method_not_allowed, "text/plain", "GET only\n");
    }
    std::string target(req_.target());
    if (auto q = target.find('?'); q != std::string::npos) target.resize(q);
    if (target.empty() || target.back() == '/') target += "index.html";
    if (target.find("..") != std::string::npos) {
      return respond(http::status::bad_request, "text/plain", "bad path\n");
    }
    const auto path = www_ / target.substr(1);
    std::ifstream in(path, std::ios::binary);
    if (!in) return respond(http::status::not_found, "text/plain", "not found\n");
    std::ostringstream body;
    body << in.rdbuf();
    respond(http::status::ok, mime_type(path), body.str());
  }

  void respond(http::status status, const std::string& type, std::string body) {
    auto res = std::make_shared<http::response<http::string_body>>(status, req_.version());
    res->set(http::field::content_type, type);
    res->keep_alive(false);
    res->body() = std::move(body);
    res->prepare_payload();
    http::async_write(stream_, *res, [self = shared_from_this(), res](beast::error_code, std::size_t) {
      beast::error_code ignored;
      self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
    });
  }

  beast::tcp_stream stream_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> req_;
  Hub& hub_;
  std::filesystem::path www_;
};

}  // namespace

struct GatewayServer::Impl {
  explicit Impl(ServerOptions o)
      : opts(std::move(o)), hub(opts.assets_dir, opts.log_dir, opts.engine), ws_acceptor(ioc) {}

  void accept_ws() {
    ws_acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
      if (ec) return;
      std::make_shared<HttpConnection>(std::move(socket), hub, opts.assets_dir / "www")->run();
      accept_ws();
    });
  }

  void accept_tcp() {
    tcp_acceptor->async_accept([this](beast::error_code ec, tcp::socket socket) {
      if (ec) return;
      std::make_shared<LinePeer>(std::move(socket), hub)->run();
      accept_tcp();
    });
  }

  static void listen(tcp::acceptor& acc, const tcp::endpoint& ep) {
    acc.open(ep.protocol());
    acc.set_option(asio::socket_base::reuse_address(true));
    acc.bind(ep);
    acc.listen();
  }

  ServerOptions opts;
  asio::io_context ioc{1};
  Hub hub;
  tcp::acceptor ws_acceptor;
  std::optional<tcp::acceptor> tcp_acceptor;
};

GatewayServer::GatewayServer(ServerOptions opts) : impl_(std::make_unique<Impl>(std::move(opts))) {}

GatewayServer::~GatewayServer() { stop(); }

void GatewayServer::start() {
  const auto addr = asio::ip::make_address(impl_->opts.address);
  Impl::listen(impl_->ws_acceptor, {addr, impl_->opts.ws_port});
  impl_->accept_ws();
  if (impl_->opts.tcp_port) {
    impl_->tcp_acceptor.emplace(impl_->ioc);
    Impl::listen(*impl_->tcp_acceptor, {addr, *impl_->opts.tcp_port});
    impl_->accept_tcp();
  }
}

void GatewayServer::run() { impl_->ioc.run(); }

void GatewayServer::stop() { impl_->ioc.stop(); }

unsigned short GatewayServer::ws_port() const { return impl_->ws_acceptor.local_endpoint().port(); }

unsigned short GatewayServer::tcp_port() const {
  return impl_->tcp_acceptor ? impl_->tcp_acceptor->local_endpoint().port() : 0;
}

}  // namespace headkey
