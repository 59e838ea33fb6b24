#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace percept {

// Arguments outside an operation's contract (non-finite inputs, bad ranges,
// out-of-arena positions, misaligned lengths, ...).
using invalid_input = std::invalid_argument;

// Malformed file content; carries the 1-based line number.
class parse_error : public std::runtime_error {
 public:
  parse_error(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class insufficient_data : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class degenerate_input : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class corrupt_checkpoint : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace percept
