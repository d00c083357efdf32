#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include "mln/model.hpp"
#include "mln/session.hpp"

namespace mln::service {

inline constexpr int kDefaultPort = 8787;

/// MIRA_PORT when set to a valid port, kDefaultPort otherwise.
int default_port();

struct Response {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
};

using Query = std::map<std::string, std::string, std::less<>>;

/// The JSON API without a socket. Holds one network and one view state;
/// uploads replace both under a lock, handlers work on a shared_ptr copy of
/// the snapshot and never see a half-replaced network.
class Api {
public:
    Api() = default;
    explicit Api(std::shared_ptr<const NetworkSnapshot> network);

    Response dispatch(std::string_view method, std::string_view path, const Query& query = {},
                      std::string_view body = {});

    std::shared_ptr<const NetworkSnapshot> network() const;
    ViewState view() const;
    void replace(std::shared_ptr<const NetworkSnapshot> network, ViewState view = {});

private:
    struct State {
        std::shared_ptr<const NetworkSnapshot> network;
        ViewState view;
    };
    State state() const;
    std::string metrics(const std::shared_ptr<const NetworkSnapshot>& network, std::size_t bins);

    mutable std::mutex mutex_;
    State state_;

    // Cache keyed by snapshot identity; holding the pointer keeps the
    // address from being reused while the entry lives.
    std::mutex cache_mutex_;
    std::shared_ptr<const NetworkSnapshot> cached_network_;
    std::size_t cached_bins_ = 0;
    std::string cached_metrics_;
};

struct ServerOptions {
    std::string host = "127.0.0.1";
    int port = kDefaultPort;  // 0 picks a free port
    std::string root;         // static assets; empty serves the API only
};

/// HTTP wiring around an Api. start() throws mln::Error with code
/// port-in-use or asset-path-missing.
class Server {
public:
    Server(Api& api, ServerOptions options);
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    /// Binds and serves on a background thread; returns the bound port.
    int start();
    /// Blocks until stop() is called from elsewhere.
    void wait();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace mln::service
