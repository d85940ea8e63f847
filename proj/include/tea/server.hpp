#pragma once

#include <atomic>
#include <istream>
#include <ostream>
#include <thread>

#include "tea/dispatch.hpp"

namespace tea {

// Newline-delimited request/response envelopes over a byte stream. Requests
// may be answered out of order; each id is answered exactly once; a
// malformed line costs one error response, never the connection.
class StreamServer {
public:
    explicit StreamServer(Dispatcher& dispatcher, std::size_t max_concurrency = 8);

    // Processes until EOF, then drains in-flight requests.
    void serve(std::istream& in, std::ostream& out);

private:
    Dispatcher& dispatcher_;
    std::size_t max_concurrency_;
};

// Plain TCP listener; one thread per connection, each running the same
// line discipline. Pass port 0 to bind an ephemeral port.
class SocketServer {
public:
    SocketServer(Dispatcher& dispatcher, std::string host, int port);
    ~SocketServer();

    Status start();
    void stop();  // closes the listener, drains connections, joins
    int port() const { return port_; }

private:
    void accept_loop();
    void serve_connection(int fd);

    Dispatcher& dispatcher_;
    std::string host_;
    int port_;
    int listen_fd_ = -1;
    std::atomic<bool> stopping_{false};
    std::thread accept_thread_;
    std::mutex conns_mu_;
    std::vector<int> conn_fds_;
    std::vector<std::thread> conn_threads_;
};

}  // namespace tea
