#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "numeric.hpp"

namespace gpss {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Two identical points were given where distinct points are required.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

class DuplicatePointError : public Error {
 public:
  DuplicatePointError(const std::string& point_text)
      : Error("duplicate point " + point_text), point_(point_text) {}
  const std::string& point() const { return point_; }

 private:
  std::string point_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Explicit edge enumeration would exceed the caller's cap.
class CapacityError : public Error {
 public:
  CapacityError(BigInt edges, std::uint64_t cap)
      : Error("hypergraph has " + edges.str() + " edges, cap is " + std::to_string(cap)),
        edges_(std::move(edges)) {}
  const BigInt& edges() const { return edges_; }

 private:
  BigInt edges_;
};

class BoundUndefinedError : public Error {
 public:
  using Error::Error;
};

/// A randomized construction ran out of attempts.
class ExhaustedError : public Error {
 public:
  using Error::Error;
};

}  // namespace gpss
