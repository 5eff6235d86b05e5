#include "pctcoef/error.hpp"

namespace pctcoef {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::schema: return "schema";
    case ErrorKind::input: return "input";
    case ErrorKind::data: return "data";
    case ErrorKind::numeric: return "numeric";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::schema: return 1;
    case ErrorKind::input:
    case ErrorKind::data:
    case ErrorKind::io: return 2;
    case ErrorKind::numeric: return 3;
  }
  return 2;
}

}  // namespace pctcoef
