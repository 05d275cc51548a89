#ifndef NSL_METRICFILE_HPP
#define NSL_METRICFILE_HPP

#include <optional>
#include <string>

#include "nsl/catalog.hpp"

namespace nsl {

// Text format of a metric definition:
//
//   mode = real|complex
//   family = <id>            (optional; raw A/Q/B fields otherwise)
//   [params]
//   Lambda = 1
//   [functions]
//   A = "x^3"
//
// The raw bytes are retained so that serialize() round-trips bit-exactly and
// reports can carry a content digest of exactly what was read.
struct MetricFile {
  std::string raw;
  Mode mode = Mode::Complex;
  std::optional<std::string> family;
  Bindings bindings;

  static MetricFile parse(const std::string& text);
  static MetricFile load(const std::string& path);
  const std::string& serialize() const { return raw; }

  // Family instance, or the generic A/Q/B form when no family is named.
  MetricInstance instantiate() const;
};

// FNV-1a 64-bit content digest, hex-encoded.
std::string content_digest(const std::string& bytes);

}  // namespace nsl

#endif
