#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstring>
#include <thread>

#include "eqfs/classifier.hpp"
#include "eqfs/error.hpp"

namespace eqfs {

ExternalEvaluator::ExternalEvaluator(const std::string& command, int width, std::chrono::milliseconds timeout)
    : width_(width), timeout_(timeout) {
    int fds[2];
    if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, fds) != 0)
        throw EvaluatorFailure(std::string("socketpair: ") + std::strerror(errno));
    const pid_t pid = ::fork();
    if (pid < 0) {
        ::close(fds[0]);
        ::close(fds[1]);
        throw EvaluatorFailure(std::string("fork: ") + std::strerror(errno));
    }
    if (pid == 0) {
        ::setpgid(0, 0);
        ::dup2(fds[1], STDIN_FILENO);
        ::dup2(fds[1], STDOUT_FILENO);
        ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        ::_exit(127);
    }
    ::setpgid(pid, pid);
    ::close(fds[1]);
    fd_ = fds[0];
    pid_ = pid;

    try {
        send_line("HELLO EQFS 1 " + std::to_string(width_));
        const auto reply = read_line();
        if (reply != "READY") fail("expected READY, got '" + reply + "'");
    } catch (...) {
        stop();
        throw;
    }
}

ExternalEvaluator::~ExternalEvaluator() { stop(); }

void ExternalEvaluator::stop() noexcept {
    if (fd_ >= 0) {
        const char quit[] = "QUIT\n";
        (void)::send(fd_, quit, sizeof quit - 1, MSG_NOSIGNAL);
        ::shutdown(fd_, SHUT_WR);
        ::close(fd_);
        fd_ = -1;
    }
    if (pid_ > 0) {
        int status = 0;
        for (int i = 0; i < 50; ++i) {
            if (::waitpid(pid_, &status, WNOHANG) == pid_) {
                ::kill(-pid_, SIGKILL);
                pid_ = -1;
                return;
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(20));
        }
        // The shell may have forked the evaluator; take down the whole group.
        ::kill(-pid_, SIGKILL);
        ::waitpid(pid_, &status, 0);
        pid_ = -1;
    }
}

void ExternalEvaluator::fail(const std::string& why) {
    std::string detail = why;
    if (pid_ > 0) {
        int status = 0;
        if (::waitpid(pid_, &status, WNOHANG) == pid_) {
            pid_ = -1;
            if (WIFEXITED(status))
                detail += " (process exited with status " + std::to_string(WEXITSTATUS(status)) + ")";
            else if (WIFSIGNALED(status))
                detail += " (process killed by signal " + std::to_string(WTERMSIG(status)) + ")";
        }
    }
    throw EvaluatorFailure("external evaluator: " + detail);
}

void ExternalEvaluator::send_line(const std::string& line) {
    const std::string framed = line + "\n";
    std::size_t sent = 0;
    while (sent < framed.size()) {
        const auto n = ::send(fd_, framed.data() + sent, framed.size() - sent, MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) continue;
            fail(std::string("write failed: ") + std::strerror(errno));
        }
        sent += static_cast<std::size_t>(n);
    }
}

std::string ExternalEvaluator::read_line() {
    const auto deadline = std::chrono::steady_clock::now() + timeout_;
    while (true) {
        if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
            std::string line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            return line;
        }
        const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
        if (left.count() <= 0) fail("timed out after " + std::to_string(timeout_.count()) + " ms");
        pollfd pfd{fd_, POLLIN, 0};
        const int ready = ::poll(&pfd, 1, static_cast<int>(left.count()));
        if (ready < 0) {
            if (errno == EINTR) continue;
            fail(std::string("poll failed: ") + std::strerror(errno));
        }
        if (ready == 0) continue;
        char chunk[512];
        const auto n = ::recv(fd_, chunk, sizeof chunk, 0);
        if (n < 0) {
            if (errno == EINTR) continue;
            fail(std::string("read failed: ") + std::strerror(errno));
        }
        if (n == 0) {
            // Let a dying child be reaped so the status makes it into the message.
            std::this_thread::sleep_for(std::chrono::milliseconds(20));
            fail("unexpected end of stream");
        }
        buffer_.append(chunk, static_cast<std::size_t>(n));
    }
}

double ExternalEvaluator::operator()(const FeatureMask& mask) {
    if (mask.width() != width_)
        throw ContractError("mask width " + std::to_string(mask.width()) + " differs from " + std::to_string(width_));
    std::scoped_lock lock(mutex_);
    if (pid_ < 0) fail("process no longer running");
    send_line("EVAL " + mask.to_string());
    const auto reply = read_line();
    if (reply.rfind("ERR", 0) == 0) {
        const auto msg = reply.size() > 4 ? reply.substr(4) : std::string("unspecified error");
        throw EvaluatorFailure("external evaluator: " + msg);
    }
    if (reply.rfind("OK ", 0) != 0) fail("malformed response '" + reply + "'");
    const std::string number = reply.substr(3);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), value);
    if (ec != std::errc{} || ptr != number.data() + number.size() || !std::isfinite(value))
        fail("malformed accuracy '" + number + "'");
    if (value < 0.0 || value > 1.0) fail("accuracy " + number + " outside [0, 1]");
    return value;
}

}  // namespace eqfs
