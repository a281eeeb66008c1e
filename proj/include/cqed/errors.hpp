#pragma once

#include <stdexcept>
#include <string>

namespace cqed {

/// Thrown when an input is outside a function's physical domain.
/// Carries the module and field name so the CLI can report exactly
/// which quantity was rejected.
class domain_error : public std::runtime_error {
 public:
  domain_error(std::string module, std::string field, const std::string& what)
      : std::runtime_error(module + "." + field + ": " + what),
        module_(std::move(module)),
        field_(std::move(field)) {}

  const std::string& module() const noexcept { return module_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::string module_;
  std::string field_;
};

namespace detail {
inline void require_positive(double v, const char* module, const char* field) {
  if (!(v > 0.0)) {
    throw domain_error(module, field, "must be strictly positive, got " + std::to_string(v));
  }
}
}  // namespace detail

}  // namespace cqed
