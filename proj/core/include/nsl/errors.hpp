#ifndef NSL_ERRORS_HPP
#define NSL_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nsl {

// Evaluation failures signal a singular sampling point; callers resample.
class EvalError : public std::runtime_error {
 public:
  enum class Kind { DivisionNearZero, LogOfZero, NonFinite };

  EvalError(Kind kind, const std::string& what, std::size_t begin = 0,
            std::size_t end = 0)
      : std::runtime_error(what), kind_(kind), begin_(begin), end_(end) {}

  Kind kind() const { return kind_; }
  std::size_t span_begin() const { return begin_; }
  std::size_t span_end() const { return end_; }

 private:
  Kind kind_;
  std::size_t begin_, end_;
};

class ParseError : public std::runtime_error {
 public:
  enum class Kind { Syntax, NonIntegerExponent, UnknownFunction };

  ParseError(Kind kind, const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"),
        kind_(kind), offset_(offset) {}

  Kind kind() const { return kind_; }
  std::size_t offset() const { return offset_; }

 private:
  Kind kind_;
  std::size_t offset_;
};

// Root clustering could not decide between merge candidates; resample.
class IllConditioned : public std::runtime_error {
 public:
  explicit IllConditioned(const std::string& what) : std::runtime_error(what) {}
};

class DegenerateMetric : public std::runtime_error {
 public:
  explicit DegenerateMetric(const std::string& what) : std::runtime_error(what) {}
};

class ZeroSpinor : public std::runtime_error {
 public:
  explicit ZeroSpinor(const std::string& what) : std::runtime_error(what) {}
};

// An (n,n) intersection reported other than "--"; upstream bug, not a data error.
class InconsistentOptics : public std::logic_error {
 public:
  explicit InconsistentOptics(const std::string& what) : std::logic_error(what) {}
};

class BothLeadingZero : public std::runtime_error {
 public:
  explicit BothLeadingZero(const std::string& what) : std::runtime_error(what) {}
};

class ArityViolation : public std::runtime_error {
 public:
  explicit ArityViolation(const std::string& what) : std::runtime_error(what) {}
};

class UnboundSlot : public std::runtime_error {
 public:
  explicit UnboundSlot(const std::string& what) : std::runtime_error(what) {}
};

class SamplingFailure : public std::runtime_error {
 public:
  explicit SamplingFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nsl

#endif
