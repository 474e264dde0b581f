#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace phytoken {

// Base of every error thrown by the library. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed XML. Line and column are 1-based.
class XmlParseError : public Error {
 public:
  XmlParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error("xml:" + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Well-formed input that violates the plant schema or a document invariant.
// `path` names the offending element, e.g. "plant/shoot[0]/phytomer[2]/petiole[0]".
class ValidationError : public Error {
 public:
  ValidationError(const std::string& path, const std::string& message)
      : Error(path + ": " + message), path_(path) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

// A token sequence that cannot be decoded. `position` indexes the offending token.
class DecodeError : public Error {
 public:
  DecodeError(std::size_t position, const std::string& message)
      : Error("token " + std::to_string(position) + ": " + message), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// Argument outside an operation's domain (non-finite value, id out of range, empty corpus).
class DomainError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  IoError(const std::string& path, const std::string& message)
      : Error(path + ": " + message), path_(path) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace phytoken
