// Error type shared by every layer of the library.
//
// The C API maps ErrorKind one-to-one onto hho_status codes.

#ifndef HHO_ERROR_HPP
#define HHO_ERROR_HPP

#include <stdexcept>
#include <string>

namespace hho {

enum class ErrorKind {
  InvalidArgument,
  Io,
  Mesh,
  Numerical,
  InvalidProblem,
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), m_kind(kind) {}

  ErrorKind kind() const noexcept { return m_kind; }

private:
  ErrorKind m_kind;
};

}  // namespace hho

#endif
