#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace umzi {

/// Failure category. The CLI maps each category onto its own exit code.
enum class ErrorKind {
  validation,        ///< bad parameter or config value
  degenerate_source, ///< mu + nu == 0
  negative_vacuum,   ///< mu - nu > 1, the virtual source would need p0 < 0
  bracket,           ///< root/optimum bracket does not enclose a sign change
  undefined_qber,    ///< zero gain, QBER is 0/0
  io,
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind k) noexcept {
  switch (k) {
    case ErrorKind::validation: return "validation";
    case ErrorKind::degenerate_source: return "degenerate-source";
    case ErrorKind::negative_vacuum: return "negative-vacuum";
    case ErrorKind::bracket: return "bracket";
    case ErrorKind::undefined_qber: return "undefined-qber";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

namespace detail {

inline std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorKind::validation, std::string(name) + " must lie in [0, 1], got " + num(p));
}

}  // namespace detail
}  // namespace umzi
