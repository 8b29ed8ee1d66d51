#pragma once

#include <stdexcept>
#include <string>

namespace mdpsim {

enum class Err {
  invalid_argument,
  invalid_generator,
  not_ergodic,
  invalid_environment,
  solve_failed,
  invalid_query,
  invalid_path,
  invalid_weight_request,
  config_error,
  io_error,
  stat_check_failed,
};

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Err code() const noexcept { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& what) { throw Error(code, what); }

}  // namespace mdpsim
