#pragma once

#include <stdexcept>
#include <string>

namespace pctcoef {

/// Broad failure classes. The CLI maps them onto exit codes.
enum class ErrorKind {
  schema,   ///< configuration or variable-spec problem, including bad anchors
  input,    ///< unreadable or empty input file
  data,     ///< data contents violate a policy (forbidden missing, bad binary codes)
  numeric,  ///< collinearity, degenerate variables, too few rows
  io,       ///< output could not be written
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

const char* to_string(ErrorKind kind) noexcept;

/// Process exit status for an error kind: 1 schema, 2 input/data/io, 3 numeric.
int exit_code(ErrorKind kind) noexcept;

}  // namespace pctcoef
