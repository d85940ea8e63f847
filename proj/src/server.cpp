#include "tea/server.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <condition_variable>
#include <cstring>
#include <deque>
#include <mutex>

namespace tea {

StreamServer::StreamServer(Dispatcher& dispatcher, std::size_t max_concurrency)
    : dispatcher_(dispatcher), max_concurrency_(max_concurrency ? max_concurrency : 1) {}

void StreamServer::serve(std::istream& in, std::ostream& out) {
    std::mutex queue_mu;
    std::condition_variable queue_cv;
    std::deque<std::string> queue;
    bool done = false;
    std::mutex out_mu;

    auto worker = [&] {
        while (true) {
            std::string line;
            {
                std::unique_lock lock(queue_mu);
                queue_cv.wait(lock, [&] { return done || !queue.empty(); });
                if (queue.empty()) {
                    if (done) return;
                    continue;
                }
                line = std::move(queue.front());
                queue.pop_front();
            }
            auto resp = dispatcher_.dispatch_line(line);
            std::lock_guard lock(out_mu);
            out << resp.to_line() << "\n";
            out.flush();
        }
    };

    std::vector<std::thread> workers;
    for (std::size_t i = 0; i < max_concurrency_; ++i) workers.emplace_back(worker);

    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        {
            std::lock_guard lock(queue_mu);
            queue.push_back(line);
        }
        queue_cv.notify_one();
    }
    {
        std::lock_guard lock(queue_mu);
        done = true;
    }
    queue_cv.notify_all();
    for (auto& w : workers) w.join();
}

SocketServer::SocketServer(Dispatcher& dispatcher, std::string host, int port)
    : dispatcher_(dispatcher), host_(std::move(host)), port_(port) {}

SocketServer::~SocketServer() { stop(); }

Status SocketServer::start() {
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) {
        return make_error(ErrorKind::BackendFailure,
                          std::string("socket: ") + std::strerror(errno));
    }
    int reuse = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &reuse, sizeof(reuse));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(static_cast<uint16_t>(port_));
    if (::inet_pton(AF_INET, host_.c_str(), &addr.sin_addr) != 1) {
        ::close(listen_fd_);
        listen_fd_ = -1;
        return make_error(ErrorKind::ValidationFailed, "invalid listen address '" + host_ + "'");
    }
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
        int err = errno;
        ::close(listen_fd_);
        listen_fd_ = -1;
        return make_error(ErrorKind::BackendFailure, std::string("bind: ") + std::strerror(err));
    }
    if (::listen(listen_fd_, 64) != 0) {
        int err = errno;
        ::close(listen_fd_);
        listen_fd_ = -1;
        return make_error(ErrorKind::BackendFailure, std::string("listen: ") + std::strerror(err));
    }
    if (port_ == 0) {
        sockaddr_in bound{};
        socklen_t len = sizeof(bound);
        if (::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len) == 0) {
            port_ = ntohs(bound.sin_port);
        }
    }
    accept_thread_ = std::thread([this] { accept_loop(); });
    return ok_status();
}

void SocketServer::accept_loop() {
    while (!stopping_.load()) {
        int fd = ::accept(listen_fd_, nullptr, nullptr);
        if (fd < 0) {
            if (stopping_.load() || (errno != EINTR && errno != ECONNABORTED)) return;
            continue;
        }
        std::lock_guard lock(conns_mu_);
        conn_fds_.push_back(fd);
        conn_threads_.emplace_back([this, fd] { serve_connection(fd); });
    }
}

void SocketServer::serve_connection(int fd) {
    std::string buffer;
    char chunk[4096];
    while (true) {
        ssize_t n = ::read(fd, chunk, sizeof(chunk));
        if (n <= 0) break;
        buffer.append(chunk, std::size_t(n));
        std::size_t start = 0;
        while (true) {
            auto nl = buffer.find('\n', start);
            if (nl == std::string::npos) break;
            std::string line = buffer.substr(start, nl - start);
            start = nl + 1;
            if (line.empty()) continue;
            std::string out = dispatcher_.dispatch_line(line).to_line() + "\n";
            std::size_t sent = 0;
            while (sent < out.size()) {
                ssize_t w = ::write(fd, out.data() + sent, out.size() - sent);
                if (w <= 0) {
                    sent = out.size();
                    break;
                }
                sent += std::size_t(w);
            }
        }
        buffer.erase(0, start);
    }
    ::close(fd);
}

void SocketServer::stop() {
    if (stopping_.exchange(true)) return;
    if (listen_fd_ >= 0) {
        ::shutdown(listen_fd_, SHUT_RDWR);
        ::close(listen_fd_);
        listen_fd_ = -1;
    }
    if (accept_thread_.joinable()) accept_thread_.join();
    {
        std::lock_guard lock(conns_mu_);
        for (int fd : conn_fds_) ::shutdown(fd, SHUT_RD);  // readers see EOF and drain
    }
    for (auto& t : conn_threads_) {
        if (t.joinable()) t.join();
    }
}

}  // namespace tea
