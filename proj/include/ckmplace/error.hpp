#ifndef CKMPLACE_ERROR_HPP
#define CKMPLACE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ckmplace {

enum class ErrorCode {
  parse,
  non_uniform_grid,
  missing_node,
  non_finite_gain,
  invalid_argument,
  out_of_map,
  zero_distance,
  infeasible,
  degenerate,
  budget_exceeded,
  config,
  io,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

} // namespace ckmplace

#endif // CKMPLACE_ERROR_HPP
