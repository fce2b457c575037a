#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace matsel {

/// Domain error raised by every module. `module()` names the originating
/// component ("core-model", "bayes", ...) and `name()` the error kind
/// ("BadLevel", "UnknownAttribute", ...), so front ends can map errors to
/// exit codes and HTTP statuses without parsing messages.
class error : public std::runtime_error {
 public:
  error(std::string module, std::string name, std::string detail)
      : std::runtime_error(name + ": " + detail),
        module_(std::move(module)),
        name_(std::move(name)),
        detail_(std::move(detail)) {}

  [[nodiscard]] const std::string& module() const noexcept { return module_; }
  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] const std::string& detail() const noexcept { return detail_; }

 private:
  std::string module_;
  std::string name_;
  std::string detail_;
};

namespace detail {

[[noreturn]] inline void fail(const char* module, const char* name, std::string detail) {
  throw error(module, name, std::move(detail));
}

}  // namespace detail
}  // namespace matsel
