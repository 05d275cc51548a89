#ifndef NSL_TESTS_RANDOM_EXPR_HPP
#define NSL_TESTS_RANDOM_EXPR_HPP

#include <random>
#include <string>
#include <vector>

#include "nsl/dsl.hpp"

namespace nsl::testing {

// Grammar-directed random expression sources over (q,p,x,y). Depth-bounded;
// exponents small; division biased toward guarded denominators so that most
// sampled points are nonsingular.
inline std::string random_expr(std::mt19937_64& rng, int depth = 3, bool allow_div = true) {
  std::uniform_int_distribution<int> pick(0, 99);
  std::uniform_int_distribution<int> coord(0, 3);
  std::uniform_real_distribution<double> num(-2.0, 2.0);
  static const char* coords[4] = {"q", "p", "x", "y"};

  if (depth <= 0 || pick(rng) < 25) {
    if (pick(rng) < 50) return coords[coord(rng)];
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", num(rng));
    return std::string(buf);
  }
  const int k = pick(rng);
  const std::string a = random_expr(rng, depth - 1, allow_div);
  if (k < 20) return "(" + a + " + " + random_expr(rng, depth - 1, allow_div) + ")";
  if (k < 35) return "(" + a + " - " + random_expr(rng, depth - 1, allow_div) + ")";
  if (k < 55) return "(" + a + ")*(" + random_expr(rng, depth - 1, allow_div) + ")";
  if (k < 63 && allow_div) {
    // keep denominators away from zero on the sample box
    return "(" + a + ")/(3 + (" + random_expr(rng, 1, false) + ")^2)";
  }
  if (k < 72) {
    std::uniform_int_distribution<int> ex(2, 3);
    return "(" + a + ")^" + std::to_string(ex(rng));
  }
  if (k < 82) return "sin(" + a + ")";
  if (k < 92) return "cos(" + a + ")";
  if (k < 98) return "exp((" + a + ")/4)";
  return "ln(3 + (" + random_expr(rng, 1, false) + ")^2)";
}

// Mild polynomial-ish sources for metric function slots; magnitudes stay
// tame so curvature scales remain comparable across instances.
inline std::string random_metric_expr(std::mt19937_64& rng) {
  return random_expr(rng, 3);
}

inline nsl::Point4 random_point(std::mt19937_64& rng, nsl::Mode mode, double box = 1.0) {
  std::uniform_real_distribution<double> uni(-box, box);
  nsl::Point4 p;
  for (int i = 0; i < 4; ++i) {
    p[i] = nsl::Cplx(uni(rng), mode == nsl::Mode::Complex ? uni(rng) : 0.0);
  }
  return p;
}

}  // namespace nsl::testing

#endif
