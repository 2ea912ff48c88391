#include "eegbci/recorder.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstring>
#include <istream>

#include "eegbci/io.hpp"
#include "eegbci/random.hpp"

namespace eegbci {

MarkerIngest::MarkerIngest(std::int64_t n_samples) : n_samples_(n_samples) {
  if (n_samples < 0) throw Error(ErrorCode::InvalidArgument, "stream length must be >= 0");
}

MarkerIngest::Status MarkerIngest::push(const EventMarker& m) {
  if (aborted_) return Status::Ignored;
  const std::string where = "marker " + std::to_string(lines_);
  if (m.t_sample < 0 || m.t_sample > n_samples_) {
    ++rejected_;
    diagnostics_.push_back(where + ": t_sample " + std::to_string(m.t_sample) + " is beyond the stream end (" +
                           std::to_string(n_samples_) + " samples)");
    return Status::Rejected;
  }
  if (m.t_sample < last_t_) {
    ++rejected_;
    diagnostics_.push_back(where + ": t_sample " + std::to_string(m.t_sample) + " is out of order (previous " +
                           std::to_string(last_t_) + ")");
    return Status::Rejected;
  }
  last_t_ = m.t_sample;
  markers_.push_back(m);
  if (m.phase == Phase::SessionAbort) {
    aborted_ = true;
    return Status::Aborted;
  }
  return Status::Accepted;
}

MarkerIngest::Status MarkerIngest::push_line(const std::string& raw) {
  ++lines_;
  std::string line = raw;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.find_first_not_of(" \t") == std::string::npos) return Status::Ignored;
  if (aborted_) return Status::Ignored;
  try {
    return push(parse_marker_line(line));
  } catch (const Error& e) {
    ++rejected_;
    diagnostics_.push_back("marker " + std::to_string(lines_) + ": " + e.what());
    return Status::Rejected;
  }
}

MarkerLog MarkerIngest::finish() {
  MarkerLog log;
  // Keep everything up to the last completed stimulus; later markers
  // belong to a trial that never finished.
  std::size_t keep = 0;
  bool open = false;
  for (std::size_t i = 0; i < markers_.size(); ++i) {
    if (markers_[i].phase == Phase::StimulusStart) open = true;
    if (markers_[i].phase == Phase::StimulusEnd) {
      open = false;
      keep = i + 1;
    }
  }
  const bool incomplete = open || (aborted_ && keep < markers_.size());
  const std::size_t end = incomplete ? keep : markers_.size();
  std::size_t dropped = 0;
  for (std::size_t i = 0; i < markers_.size(); ++i) {
    if (i < end || markers_[i].phase == Phase::SessionAbort)
      log.markers.push_back(markers_[i]);
    else
      ++dropped;
  }
  if (dropped > 0)
    diagnostics_.push_back("dropped " + std::to_string(dropped) + " marker(s) of an incomplete trial");
  return log;
}

void ingest_stream(std::istream& in, MarkerIngest& ingest) {
  std::string line;
  while (!ingest.aborted() && std::getline(in, line)) ingest.push_line(line);
}

Recording synthetic_source(const SynthConfig& config, double duration_s, std::uint64_t seed) {
  if (!(duration_s > 0.0)) throw Error(ErrorCode::InvalidArgument, "source duration must be positive");
  const auto n = static_cast<std::size_t>(std::llround(duration_s * config.rate_hz));
  const Recording bg = gen_background(config, n, derive_seed(seed, "live-background"));
  return gen_artifacts(bg, config, derive_seed(seed, "live-artifacts")).with_meta("source", "synthetic");
}

namespace {

[[noreturn]] void sys_error(const std::string& what) {
  throw Error(ErrorCode::Io, what + ": " + std::strerror(errno));
}

sockaddr_in make_addr(const std::string& host, std::uint16_t port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1)
    throw Error(ErrorCode::InvalidArgument, "not an IPv4 address: " + host);
  return addr;
}

}  // namespace

MarkerListener::MarkerListener(const std::string& host, std::uint16_t port) {
  const sockaddr_in addr = make_addr(host, port);
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) sys_error("socket");
  const int one = 1;
  ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  if (::bind(fd_, reinterpret_cast<const sockaddr*>(&addr), sizeof addr) < 0) {
    ::close(fd_);
    sys_error("bind " + host + ":" + std::to_string(port));
  }
  if (::listen(fd_, 1) < 0) {
    ::close(fd_);
    sys_error("listen");
  }
  sockaddr_in bound{};
  socklen_t len = sizeof bound;
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&bound), &len);
  port_ = ntohs(bound.sin_port);
}

MarkerListener::~MarkerListener() {
  if (fd_ >= 0) ::close(fd_);
}

void MarkerListener::serve_one(MarkerIngest& ingest, int timeout_ms) {
  pollfd p{fd_, POLLIN, 0};
  const int ready = ::poll(&p, 1, timeout_ms);
  if (ready < 0) sys_error("poll");
  if (ready == 0) throw Error(ErrorCode::Io, "no marker client connected before the timeout");
  const int client = ::accept(fd_, nullptr, nullptr);
  if (client < 0) sys_error("accept");

  std::string pending;
  char buf[4096];
  while (!ingest.aborted()) {
    const ssize_t got = ::recv(client, buf, sizeof buf, 0);
    if (got < 0) {
      if (errno == EINTR) continue;
      ::close(client);
      sys_error("recv");
    }
    if (got == 0) break;
    pending.append(buf, static_cast<std::size_t>(got));
    std::size_t pos;
    while (!ingest.aborted() && (pos = pending.find('\n')) != std::string::npos) {
      ingest.push_line(pending.substr(0, pos));
      pending.erase(0, pos + 1);
    }
  }
  if (!ingest.aborted() && !pending.empty()) ingest.push_line(pending);
  ::close(client);
}

void send_marker_lines(const std::string& host, std::uint16_t port, const std::vector<std::string>& lines) {
  const sockaddr_in addr = make_addr(host, port);
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) sys_error("socket");
  if (::connect(fd, reinterpret_cast<const sockaddr*>(&addr), sizeof addr) < 0) {
    ::close(fd);
    sys_error("connect " + host + ":" + std::to_string(port));
  }
  std::string payload;
  for (const auto& l : lines) payload += l + "\n";
  std::size_t sent = 0;
  while (sent < payload.size()) {
    const ssize_t n = ::send(fd, payload.data() + sent, payload.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      ::close(fd);
      sys_error("send");
    }
    sent += static_cast<std::size_t>(n);
  }
  ::close(fd);
}

}  // namespace eegbci
