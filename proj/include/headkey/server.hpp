#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "headkey/config.hpp"

namespace headkey {

struct ServerOptions {
  std::string address = "127.0.0.1";
  unsigned short ws_port = 8765;           // 0 picks an ephemeral port
  std::optional<unsigned short> tcp_port;  // newline-delimited JSON; off when unset
  std::filesystem::path assets_dir = ".";
  std::optional<std::filesystem::path> log_dir;  // per-session event logs
  EngineConfig engine;
};

/// Local gateway. HTTP on `ws_port` serves `<assets>/www/` and upgrades
/// `/session` to a WebSocket; the optional TCP port carries the same
/// protocol as one JSON object per line. Each message from a client is one
/// command (`open`, `attach`, `sample`, `gesture`, `reset`, `close`); events
/// of a session are fanned out to every attached client in seq order.
///
/// All I/O and session work runs on the thread that calls run(), so commands
/// of a session are applied strictly one at a time.
class GatewayServer {
 public:
  explicit GatewayServer(ServerOptions opts);
  ~GatewayServer();
  GatewayServer(const GatewayServer&) = delete;
  GatewayServer& operator=(const GatewayServer&) = delete;

  /// Binds and listens. Ports are known afterwards.
  void start();
  /// Processes I/O until stop().
  void run();
  /// Safe to call from any thread.
  void stop();

  unsigned short ws_port() const;
  unsigned short tcp_port() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace headkey
