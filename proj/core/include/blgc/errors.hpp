#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace blgc {

// Base class for every domain error raised by the library. Callers that only
// care about "something in the model was violated" catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownNode : public Error {
 public:
  explicit UnknownNode(std::uint64_t node);
  std::uint64_t node() const noexcept { return node_; }

 private:
  std::uint64_t node_;
};

// Raised while building a graph whose generated topology breaks |N_r(i)| <= D.
class ConstructionViolatesCap : public Error {
 public:
  ConstructionViolatesCap(std::uint64_t node, std::size_t size, std::size_t cap);
  std::uint64_t node() const noexcept { return node_; }
  std::size_t neighborhood_size() const noexcept { return size_; }

 private:
  std::uint64_t node_;
  std::size_t size_;
};

// Raised by an edge mutation that would push some neighborhood over the cap.
// The graph is left untouched.
class CapViolation : public Error {
 public:
  CapViolation(std::uint64_t node, std::size_t size, std::size_t cap);
  std::uint64_t node() const noexcept { return node_; }
  std::size_t neighborhood_size() const noexcept { return size_; }

 private:
  std::uint64_t node_;
  std::size_t size_;
};

class DuplicateEdge : public Error {
 public:
  DuplicateEdge(std::uint64_t u, std::uint64_t v);
};

class MissingEdge : public Error {
 public:
  MissingEdge(std::uint64_t u, std::uint64_t v);
};

class SelfLoop : public Error {
 public:
  explicit SelfLoop(std::uint64_t node);
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t expected, std::size_t actual);
};

class NonFiniteInput : public Error {
 public:
  using Error::Error;
};

class EmptyGraph : public Error {
 public:
  EmptyGraph() : Error("schedule evaluated on an empty graph") {}
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class MonitorViolation : public Error {
 public:
  MonitorViolation(std::uint64_t step, std::uint64_t node, const std::string& what);
  std::uint64_t step() const noexcept { return step_; }
  std::uint64_t node() const noexcept { return node_; }

 private:
  std::uint64_t step_;
  std::uint64_t node_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace blgc
