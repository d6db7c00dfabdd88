// Licensed under the Apache 2.0 license. See LICENSE in the project root.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace composer {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A document failed schema or referential-integrity checks.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

/// The request cannot be satisfied: the sink is not invokable from the
/// closure of available concepts. Carries the wanted concepts that no
/// selected service can produce.
class NoSolutionError : public Error {
 public:
  NoSolutionError(const std::string& what, std::vector<std::string> missing)
      : Error(what), missing_outputs(std::move(missing)) {}
  std::vector<std::string> missing_outputs;
};

}  // namespace composer
