#ifndef COLA_ERROR_HPP
#define COLA_ERROR_HPP

#include <stdexcept>
#include <string>

namespace cola {

// Every failure raised by the library derives from Error. The CLI maps
// IoError/ConfigError/ParseError to exit code 2 and the domain errors to 3.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

// Malformed input record. `line` is 1-based, 0 when unknown.
class ParseError : public Error {
public:
  ParseError(const std::string &what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

class ArgumentError : public Error {
public:
  using Error::Error;
};

class ValidationError : public Error {
public:
  using Error::Error;
};

class DataError : public Error {
public:
  using Error::Error;
};

class EmptyLotteryError : public Error {
public:
  using Error::Error;
};

class InsufficientEntrantsError : public Error {
public:
  using Error::Error;
};

} // namespace cola

#endif
