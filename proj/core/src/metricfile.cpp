#include "nsl/metricfile.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "nsl/errors.hpp"

namespace nsl {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

}  // namespace

MetricFile MetricFile::parse(const std::string& text) {
  MetricFile mf;
  mf.raw = text;
  enum class Section { Header, Params, Functions };
  Section sec = Section::Header;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t == "[params]") { sec = Section::Params; continue; }
    if (t == "[functions]") { sec = Section::Functions; continue; }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ParseError(ParseError::Kind::Syntax,
                       "metric file line " + std::to_string(lineno) + ": expected key = value",
                       0);
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string val = trim(t.substr(eq + 1));
    switch (sec) {
      case Section::Header:
        if (key == "mode") {
          if (val == "real") mf.mode = Mode::Real;
          else if (val == "complex") mf.mode = Mode::Complex;
          else
            throw ParseError(ParseError::Kind::Syntax,
                             "metric file: mode must be real or complex", 0);
        } else if (key == "family") {
          mf.family = val;
        } else {
          throw ParseError(ParseError::Kind::Syntax,
                           "metric file: unknown header key '" + key + "'", 0);
        }
        break;
      case Section::Params: {
        char* end = nullptr;
        const double d = std::strtod(val.c_str(), &end);
        if (end == val.c_str() || *end != '\0') {
          throw ParseError(ParseError::Kind::Syntax,
                           "metric file: parameter '" + key + "' is not a number", 0);
        }
        mf.bindings.params[key] = Cplx(d, 0);
        break;
      }
      case Section::Functions:
        mf.bindings.functions[key] = unquote(val);
        break;
    }
  }
  mf.bindings.mode = mf.mode;
  return mf;
}

MetricFile MetricFile::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError(ParseError::Kind::Syntax, "cannot open metric file '" + path + "'", 0);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

MetricInstance MetricFile::instantiate() const {
  if (family) return nsl::instantiate(*family, bindings);
  // raw A/Q/B form with the default structure claims
  return nsl::instantiate("custom", bindings);
}

std::string content_digest(const std::string& bytes) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
  return std::string(out);
}

}  // namespace nsl
