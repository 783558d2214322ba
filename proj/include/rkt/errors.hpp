#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rkt {

// Base class for all library errors so callers can catch rkt failures as a group.
class error : public std::runtime_error {
 public:
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Tabular input could not be parsed; carries the zero-based row and field index.
class parse_error : public error {
 public:
  parse_error(std::size_t row, std::size_t field, const std::string& msg)
      : error("parse error at row " + std::to_string(row) + ", field " +
              std::to_string(field) + ": " + msg),
        row_(row),
        field_(field) {}

  std::size_t row() const { return row_; }
  std::size_t field() const { return field_; }

 private:
  std::size_t row_;
  std::size_t field_;
};

// A configuration that can never produce a valid run (e.g. no feasible kernel shape).
class config_error : public error {
 public:
  explicit config_error(const std::string& msg) : error(msg) {}
};

// Kernel span exceeds the signal: (K-1)*d + 1 > N.
class span_error : public error {
 public:
  span_error(std::size_t k, std::size_t d, std::size_t n)
      : error("kernel span (K-1)*d+1 = " + std::to_string((k - 1) * d + 1) +
              " exceeds series length N = " + std::to_string(n) +
              " (K = " + std::to_string(k) + ", d = " + std::to_string(d) + ")"),
        k_(k),
        d_(d),
        n_(n) {}

  std::size_t kernel_length() const { return k_; }
  std::size_t dilation() const { return d_; }
  std::size_t series_length() const { return n_; }

 private:
  std::size_t k_;
  std::size_t d_;
  std::size_t n_;
};

// Shape mismatch between two structured arguments.
class dimension_error : public error {
 public:
  explicit dimension_error(const std::string& msg) : error(msg) {}
};

}  // namespace rkt
