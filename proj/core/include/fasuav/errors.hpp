#pragma once

#include <stdexcept>
#include <string>

namespace fasuav {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical procedure (series, quadrature, search) failed to converge.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested combination of options has no implementation on this path.
class UnsupportedModeError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Configuration file could not be loaded or failed validation.
/// `key_path()` names the offending entry, e.g. "fas.n_ports".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key_path, const std::string& detail)
      : std::runtime_error(key_path.empty() ? detail : key_path + ": " + detail),
        key_path_(std::move(key_path)) {}

  const std::string& key_path() const noexcept { return key_path_; }

 private:
  std::string key_path_;
};

}  // namespace fasuav
