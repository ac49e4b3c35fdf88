#pragma once

#include <stdexcept>
#include <string>

namespace wikies {

// Base type for all failures raised by the library. The CLI maps these to
// exit status 1; anything flag-related is handled before work starts.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (graph/corpus/rule files, query expressions).
// Messages carry a line number or character position.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace wikies
