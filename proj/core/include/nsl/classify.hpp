#ifndef NSL_CLASSIFY_HPP
#define NSL_CLASSIFY_HPP

#include <string>
#include <vector>

#include "nsl/curvature.hpp"

namespace nsl {

// Labels of the algebraic classification of a totally symmetric 4-index
// spinor: six types over the complex field, ten in the real (neutral) case.
enum class PetrovLabel {
  I, II, D, III, N, O,             // complex
  I_r, I_rc, I_c, II_r, II_rc, D_r, D_c, III_r, N_r, O_r  // real
};

std::string petrov_name(PetrovLabel l);
bool petrov_is_degenerate(PetrovLabel l);

struct RootCluster {
  Cplx value;         // cluster center (ignored when at_infinity)
  int multiplicity;
  bool at_infinity;
  bool real;          // |Im| below the cluster tolerance (infinity counts real)
};

struct PetrovType {
  PetrovLabel label;
  std::vector<RootCluster> roots;  // empty for O
};

struct ClassifyOptions {
  double zero_tol = 1e-8;      // relative zero test on normalized coefficients
  double cluster_tol = 1e-6;   // root merge tolerance after normalization
};

// Root multiplicity pattern of a quartic c[0] z^4 + c[1] z^3 + ... + c[4].
// Leading coefficients below tolerance contribute one cluster at infinity.
// Throws IllConditioned when two clusters sit within a factor 2 of the merge
// tolerance of each other.
std::vector<RootCluster> quartic_root_structure(const std::array<Cplx, 5>& coeffs,
                                                const ClassifyOptions& opt = {});

// Classification from the conformal curvature coefficients C^(1..5)
// (cup[i] = C^(i+1)). When C^(4) and C^(5) vanish the closed degeneracy
// conditions decide; otherwise the root pattern does.
PetrovType petrov_complex(const std::array<Cplx, 5>& cup, const ClassifyOptions& opt = {});
PetrovType petrov_real(const std::array<Cplx, 5>& cup, const ClassifyOptions& opt = {});

// delta = 2 C^(2) C^(2) - 3 C^(3) C^(1).
Cplx type_delta(const std::array<Cplx, 5>& cup);

enum class OpticsClass { MinusMinus, MinusPlus, PlusMinus, PlusPlus };
std::string optics_name(OpticsClass c);

struct CongruenceTag {
  bool self_dual;      // duality of the congruence
  bool nonexpanding;
};

// The full classification symbol
//   { [SD]^{i...} (x) [ASD]^{j...}, [k1,...] }
// with the optics block dropped when every congruence is nonexpanding or one
// side is type O (infinitely many congruences).
struct GeometrySymbol {
  PetrovLabel sd_type;
  PetrovLabel asd_type;
  std::string sd_supers;   // over {n,e}, one char per SD congruence
  std::string asd_supers;  // one char per ASD congruence
  std::vector<OpticsClass> optics;  // ordered (m,m.),(m,n.),(n,m.),(n,n.)
  bool show_optics = false;

  std::string render() const;
};

// Assembles and validates the symbol. `optics` must follow the canonical
// pair order for the given congruence counts; an intersection of two
// nonexpanding congruences reported other than "--" is an error.
GeometrySymbol assemble_symbol(PetrovLabel sd, PetrovLabel asd,
                               const std::vector<CongruenceTag>& congruences,
                               const std::vector<OpticsClass>& optics,
                               bool side_is_o_sd = false, bool side_is_o_asd = false);

}  // namespace nsl

#endif
