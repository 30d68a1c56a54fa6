#pragma once

#include <stdexcept>
#include <string>

namespace phaseret {

enum class Errc {
  invalid_argument,
  dimension_mismatch,
  pole,
  domain,
  not_ready,
  diverged,
  parse,
  io,
};

/// Exception type used throughout the core. The C API maps `code()` onto
/// its status enum.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool condition, Errc code, const std::string& what) {
  if (!condition) fail(code, what);
}

// Literal messages stay unallocated on the success path.
inline void require(bool condition, Errc code, const char* what) {
  if (!condition) [[unlikely]] fail(code, what);
}

}  // namespace phaseret
