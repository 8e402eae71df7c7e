#pragma once

#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace nucleus {

using vid = std::int64_t;  // vertex id
using cid = std::int64_t;  // dense r-clique id

inline constexpr cid kNone = -1;

class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& msg, std::size_t line)
      : std::runtime_error(msg + " (line " + std::to_string(line) + ")"),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class timeout_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class protocol_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Monotonic deadline handed down into round-based loops. Checked at round
// granularity, so overshoot is bounded by one round.
class Deadline {
 public:
  Deadline() : armed_(false) {}
  explicit Deadline(double seconds)
      : armed_(seconds > 0),
        end_(std::chrono::steady_clock::now() +
             std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                 std::chrono::duration<double>(seconds))) {}

  void check(const char* what) const {
    if (armed_ && std::chrono::steady_clock::now() > end_)
      throw timeout_error(std::string("timed out during ") + what);
  }

 private:
  bool armed_;
  std::chrono::steady_clock::time_point end_;
};

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }
  double lap() {
    auto now = std::chrono::steady_clock::now();
    double d = std::chrono::duration<double>(now - start_).count();
    start_ = now;
    return d;
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline std::int64_t binom(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::int64_t r = 1;
  for (std::int64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace nucleus
