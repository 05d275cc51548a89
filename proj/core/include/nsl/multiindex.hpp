#ifndef NSL_MULTIINDEX_HPP
#define NSL_MULTIINDEX_HPP

#include <array>
#include <cstdint>
#include <vector>

namespace nsl {

// Exponent vector over the four coordinates, total degree <= 3.
struct MultiIndex {
  std::array<int, 4> e{0, 0, 0, 0};

  int degree() const { return e[0] + e[1] + e[2] + e[3]; }
  int operator[](int k) const { return e[k]; }
  bool operator==(const MultiIndex&) const = default;
};

inline constexpr int kJetOrder = 3;
inline constexpr int kJetVars = 4;
inline constexpr int kJetSize = 35;  // C(4+3,3)

namespace jet_tables {

// Enumeration of the 35 multi-indices, graded by degree, lexicographic inside
// a degree. slot 0 is the constant term; slots 1..4 are the first partials.
const std::array<MultiIndex, kJetSize>& indices();

// slot lookup; -1 for degree > 3.
int slot(const MultiIndex& m);
int slot4(int a, int b, int c, int d);

// alpha! as a double.
double factorial(const MultiIndex& m);

// For each product slot gamma: list of (alpha, beta) unordered pairs with
// alpha + beta = gamma; pairs with alpha == beta appear once, flagged.
struct ProductPair {
  int a, b;      // slots
  bool diagonal; // a == b
};
const std::array<std::vector<ProductPair>, kJetSize>& product_pairs();

}  // namespace jet_tables

}  // namespace nsl

#endif
