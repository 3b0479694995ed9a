// error.hpp
#pragma once

#include <stdexcept>
#include <string>

namespace predictability {

enum class ErrorCode {
  invalid_cutoff,
  empty_input,
  parameter,
  insufficient_data,
  empty_subset,
  degenerate_dataset,
  out_of_validated_range,
  insufficient_memory,
  infeasible,
  parse,
  io,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so the
// CLI can map it onto an exit status without string matching.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace predictability
