#include <sys/socket.h>

#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>
#include <condition_variable>
#include <list>

#include "pixgym/session.hpp"

namespace pixgym {

namespace asio = boost::asio;
namespace beast = boost::beast;
using tcp = asio::ip::tcp;

// One blocking thread per connection. Shutdown relies on shutdown(2) on the
// raw descriptors, which is safe to call while another thread is blocked
// reading from them.
struct SessionServer::Impl {
    SessionManager* manager;
    asio::io_context io;
    std::unique_ptr<tcp::acceptor> acceptor;
    std::thread accept_thread;
    std::mutex mu;
    std::condition_variable stopped_cv;
    bool stopping = false;
    bool stopped = false;
    std::list<std::thread> connections;
    std::vector<int> fds;
    std::uint16_t port = 0;

    void serve(tcp::socket socket) {
        const int fd = socket.native_handle();
        {
            std::lock_guard lock(mu);
            if (stopping) return;
            fds.push_back(fd);
        }
        try {
            beast::websocket::stream<tcp::socket> ws(std::move(socket));
            ws.accept();
            for (;;) {
                beast::flat_buffer buf;
                ws.read(buf);
                const std::string reply = manager->handle_text(beast::buffers_to_string(buf.data()));
                ws.text(true);
                ws.write(asio::buffer(reply));
            }
        } catch (const std::exception&) {
            // Client went away or the server is stopping.
        }
        std::lock_guard lock(mu);
        std::erase(fds, fd);
    }

    void accept_loop() {
        for (;;) {
            tcp::socket socket(io);
            boost::system::error_code ec;
            acceptor->accept(socket, ec);
            std::lock_guard lock(mu);
            if (stopping) return;
            if (ec) continue;
            connections.emplace_back([this, s = std::move(socket)]() mutable { serve(std::move(s)); });
        }
    }
};

SessionServer::SessionServer(SessionManager& manager) : impl_(std::make_unique<Impl>()) {
    impl_->manager = &manager;
}

SessionServer::~SessionServer() { stop(); }

std::uint16_t SessionServer::start(std::uint16_t port, const std::string& address) {
    if (impl_->acceptor) throw std::logic_error("server already started");
    const tcp::endpoint ep(asio::ip::make_address(address), port);
    impl_->acceptor = std::make_unique<tcp::acceptor>(impl_->io, ep);
    impl_->port = impl_->acceptor->local_endpoint().port();
    impl_->accept_thread = std::thread([this] { impl_->accept_loop(); });
    return impl_->port;
}

void SessionServer::stop() {
    if (!impl_->acceptor) return;
    {
        std::lock_guard lock(impl_->mu);
        if (impl_->stopping) return;
        impl_->stopping = true;
        ::shutdown(impl_->acceptor->native_handle(), SHUT_RDWR);
        for (int fd : impl_->fds) ::shutdown(fd, SHUT_RDWR);
    }
    impl_->accept_thread.join();
    for (auto& t : impl_->connections) t.join();
    {
        std::lock_guard lock(impl_->mu);
        impl_->stopped = true;
    }
    impl_->stopped_cv.notify_all();
}

void SessionServer::wait() {
    std::unique_lock lock(impl_->mu);
    impl_->stopped_cv.wait(lock, [&] { return impl_->stopped; });
}

}  // namespace pixgym
