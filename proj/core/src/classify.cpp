#include "nsl/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nsl/errors.hpp"

namespace nsl {

std::string petrov_name(PetrovLabel l) {
  switch (l) {
    case PetrovLabel::I: return "I";
    case PetrovLabel::II: return "II";
    case PetrovLabel::D: return "D";
    case PetrovLabel::III: return "III";
    case PetrovLabel::N: return "N";
    case PetrovLabel::O: return "O";
    case PetrovLabel::I_r: return "I_r";
    case PetrovLabel::I_rc: return "I_rc";
    case PetrovLabel::I_c: return "I_c";
    case PetrovLabel::II_r: return "II_r";
    case PetrovLabel::II_rc: return "II_rc";
    case PetrovLabel::D_r: return "D_r";
    case PetrovLabel::D_c: return "D_c";
    case PetrovLabel::III_r: return "III_r";
    case PetrovLabel::N_r: return "N_r";
    case PetrovLabel::O_r: return "O_r";
  }
  return "?";
}

bool petrov_is_degenerate(PetrovLabel l) {
  switch (l) {
    case PetrovLabel::I:
    case PetrovLabel::I_r:
    case PetrovLabel::I_rc:
    case PetrovLabel::I_c: return false;
    default: return true;
  }
}

namespace {

// Durand-Kerner iteration on a monic polynomial of degree n (n <= 4).
std::vector<Cplx> poly_roots(std::vector<Cplx> monic_rest) {
  const int n = int(monic_rest.size());
  if (n == 0) return {};
  std::vector<Cplx> r(n);
  // deterministic non-real starting points
  const Cplx seedbase(0.4, 0.9);
  Cplx acc(1, 0);
  for (int k = 0; k < n; ++k) {
    acc = cx_mul(acc, seedbase);
    r[k] = acc;
  }
  auto eval = [&](Cplx z) {
    Cplx v(1, 0);
    for (int k = 0; k < n; ++k) v = cx_mul(v, z) + monic_rest[k];
    return v;
  };
  for (int it = 0; it < 500; ++it) {
    double moved = 0;
    for (int k = 0; k < n; ++k) {
      Cplx denom(1, 0);
      for (int j = 0; j < n; ++j) {
        if (j != k) denom = cx_mul(denom, r[k] - r[j]);
      }
      if (!(abs2(denom) > 1e-60)) continue;
      const Cplx delta = cx_div(eval(r[k]), denom);
      r[k] -= delta;
      moved = std::max(moved, std::abs(delta));
    }
    if (moved < 1e-15) break;
  }
  return r;
}

}  // namespace

std::vector<RootCluster> quartic_root_structure(const std::array<Cplx, 5>& coeffs,
                                                const ClassifyOptions& opt) {
  double scale = 0;
  for (const auto& c : coeffs) scale = std::max(scale, std::abs(c));
  if (!(scale > 0)) {
    throw IllConditioned("all quartic coefficients vanish");
  }
  std::array<Cplx, 5> c = coeffs;
  for (auto& z : c) z /= scale;

  // Degree deficiency: leading coefficients below tolerance become a single
  // cluster at infinity.
  int lead = 0;
  while (lead < 4 && std::abs(c[lead]) <= opt.zero_tol) ++lead;
  const int deg = 4 - lead;
  const int inf_mult = lead;

  std::vector<RootCluster> clusters;
  if (inf_mult > 0) {
    clusters.push_back(RootCluster{Cplx(0, 0), inf_mult, true, true});
  }
  if (deg > 0) {
    std::vector<Cplx> rest(deg);
    for (int k = 0; k < deg; ++k) rest[k] = cx_div(c[lead + 1 + k], c[lead]);
    std::vector<Cplx> roots = poly_roots(rest);

    double rmax = 0;
    for (const auto& z : roots) rmax = std::max(rmax, std::abs(z));
    const double tolc = opt.cluster_tol * (1.0 + rmax);

    // Greedy agglomerative merge.
    std::vector<int> group(roots.size());
    std::iota(group.begin(), group.end(), 0);
    auto find = [&](int i) {
      while (group[i] != i) i = group[i] = group[group[i]];
      return i;
    };
    for (std::size_t i = 0; i < roots.size(); ++i) {
      for (std::size_t j = i + 1; j < roots.size(); ++j) {
        if (std::abs(roots[i] - roots[j]) <= tolc) group[find(int(i))] = find(int(j));
      }
    }
    std::vector<std::vector<int>> members(roots.size());
    for (std::size_t i = 0; i < roots.size(); ++i) members[find(int(i))].push_back(int(i));

    std::vector<RootCluster> finite;
    for (const auto& m : members) {
      if (m.empty()) continue;
      Cplx center(0, 0);
      for (int i : m) center += roots[i];
      center /= double(m.size());
      RootCluster rc{center, int(m.size()), false, std::abs(center.imag()) <= tolc};
      finite.push_back(rc);
    }
    // Ambiguity band: any two distinct clusters within a factor 2 of the
    // merge tolerance cannot be decided at this precision.
    for (std::size_t i = 0; i < finite.size(); ++i) {
      for (std::size_t j = i + 1; j < finite.size(); ++j) {
        const double d = std::abs(finite[i].value - finite[j].value);
        if (d < 2.0 * tolc) {
          throw IllConditioned("root cluster separation inside the ambiguity band");
        }
      }
    }
    clusters.insert(clusters.end(), finite.begin(), finite.end());
  }
  std::sort(clusters.begin(), clusters.end(),
            [](const RootCluster& a, const RootCluster& b) {
              return a.multiplicity > b.multiplicity;
            });
  return clusters;
}

namespace {

std::array<Cplx, 5> quartic_from_cup(const std::array<Cplx, 5>& cup) {
  // Root polynomial with the binomial weights (1,4,6,4,1); its roots are the
  // generator parameters n of candidate congruences:
  //   C5 n^4 - 4 C4 n^3 + 6 C3 n^2 - 4 C2 n + C1.
  return {cup[4], -4.0 * cup[3], 6.0 * cup[2], -4.0 * cup[1], cup[0]};
}

struct Normalized {
  std::array<Cplx, 5> cup;
  bool all_zero;
};

Normalized normalize(const std::array<Cplx, 5>& cup) {
  double scale = 0;
  for (const auto& c : cup) scale = std::max(scale, std::abs(c));
  Normalized out{cup, false};
  if (!(scale > 0)) {
    out.all_zero = true;
    return out;
  }
  for (auto& c : out.cup) c /= scale;
  return out;
}

std::vector<RootCluster> pattern(const std::array<Cplx, 5>& cup, const ClassifyOptions& opt) {
  return quartic_root_structure(quartic_from_cup(cup), opt);
}

// root pattern attached to condition-decided labels; informational only
std::vector<RootCluster> pattern_soft(const std::array<Cplx, 5>& cup,
                                      const ClassifyOptions& opt) {
  try {
    return pattern(cup, opt);
  } catch (const IllConditioned&) {
    return {};
  }
}

PetrovLabel complex_label_from_pattern(const std::vector<RootCluster>& cl) {
  std::vector<int> mult;
  for (const auto& c : cl) mult.push_back(c.multiplicity);
  std::sort(mult.rbegin(), mult.rend());
  if (mult == std::vector<int>{4}) return PetrovLabel::N;
  if (mult == std::vector<int>{3, 1}) return PetrovLabel::III;
  if (mult == std::vector<int>{2, 2}) return PetrovLabel::D;
  if (mult == std::vector<int>{2, 1, 1}) return PetrovLabel::II;
  return PetrovLabel::I;
}

PetrovLabel real_label_from_pattern(const std::vector<RootCluster>& cl) {
  std::vector<int> mult;
  int real_count = 0, cplx_count = 0;
  int max_mult = 0;
  bool multiple_is_real = true;
  for (const auto& c : cl) {
    mult.push_back(c.multiplicity);
    if (c.real) ++real_count; else ++cplx_count;
    if (c.multiplicity > max_mult) {
      max_mult = c.multiplicity;
      multiple_is_real = c.real;
    }
  }
  std::sort(mult.rbegin(), mult.rend());
  if (mult == std::vector<int>{4}) return PetrovLabel::N_r;
  if (mult == std::vector<int>{3, 1}) return PetrovLabel::III_r;
  if (mult == std::vector<int>{2, 2}) {
    return multiple_is_real && cplx_count == 0 ? PetrovLabel::D_r : PetrovLabel::D_c;
  }
  if (mult == std::vector<int>{2, 1, 1}) {
    return cplx_count == 0 ? PetrovLabel::II_r : PetrovLabel::II_rc;
  }
  if (cplx_count == 0) return PetrovLabel::I_r;
  if (cplx_count == 2) return PetrovLabel::I_rc;
  return PetrovLabel::I_c;
}

}  // namespace

Cplx type_delta(const std::array<Cplx, 5>& cup) {
  return 2.0 * cx_mul(cup[1], cup[1]) - 3.0 * cx_mul(cup[2], cup[0]);
}

PetrovType petrov_complex(const std::array<Cplx, 5>& cup_in, const ClassifyOptions& opt) {
  const Normalized n = normalize(cup_in);
  if (n.all_zero) return PetrovType{PetrovLabel::O, {}};
  const auto& cup = n.cup;
  auto zero = [&](const Cplx& c) { return std::abs(c) <= opt.zero_tol * 2.0; };
  if (zero(cup[4]) && zero(cup[3])) {
    // adapted basis: closed degeneracy conditions
    if (zero(cup[2]) && zero(cup[1]) && zero(cup[0])) return PetrovType{PetrovLabel::O, {}};
    const Cplx delta = type_delta(cup);
    const double dscale = 2.0 * abs2(cup[1]) + 3.0 * std::abs(cup[2]) * std::abs(cup[0]);
    if (!zero(cup[2])) {
      const bool ddeg = std::abs(delta) <= opt.zero_tol * (1.0 + dscale);
      PetrovType t{ddeg ? PetrovLabel::D : PetrovLabel::II, pattern_soft(cup, opt)};
      return t;
    }
    if (!zero(cup[1])) return PetrovType{PetrovLabel::III, pattern_soft(cup, opt)};
    return PetrovType{PetrovLabel::N, pattern_soft(cup, opt)};
  }
  auto cl = pattern(cup, opt);
  return PetrovType{complex_label_from_pattern(cl), std::move(cl)};
}

PetrovType petrov_real(const std::array<Cplx, 5>& cup_in, const ClassifyOptions& opt) {
  const Normalized n = normalize(cup_in);
  if (n.all_zero) return PetrovType{PetrovLabel::O_r, {}};
  const auto& cup = n.cup;
  auto zero = [&](const Cplx& c) { return std::abs(c) <= opt.zero_tol * 2.0; };
  if (zero(cup[4]) && zero(cup[3])) {
    if (zero(cup[2]) && zero(cup[1]) && zero(cup[0])) return PetrovType{PetrovLabel::O_r, {}};
    if (!zero(cup[2])) {
      const double delta = type_delta(cup).real();
      const double dscale = 2.0 * abs2(cup[1]) + 3.0 * std::abs(cup[2]) * std::abs(cup[0]);
      // inside the tolerance band the double root cannot be split: report D_r
      if (std::abs(delta) <= opt.zero_tol * (1.0 + dscale)) {
        return PetrovType{PetrovLabel::D_r, pattern_soft(cup, opt)};
      }
      return PetrovType{delta > 0 ? PetrovLabel::II_r : PetrovLabel::II_rc,
                        pattern_soft(cup, opt)};
    }
    if (!zero(cup[1])) return PetrovType{PetrovLabel::III_r, pattern_soft(cup, opt)};
    return PetrovType{PetrovLabel::N_r, pattern_soft(cup, opt)};
  }
  auto cl = pattern(cup, opt);
  return PetrovType{real_label_from_pattern(cl), std::move(cl)};
}

std::string optics_name(OpticsClass c) {
  switch (c) {
    case OpticsClass::MinusMinus: return "--";
    case OpticsClass::MinusPlus: return "-+";
    case OpticsClass::PlusMinus: return "+-";
    case OpticsClass::PlusPlus: return "++";
  }
  return "??";
}

std::string GeometrySymbol::render() const {
  std::string sd = "[" + petrov_name(sd_type) + "]";
  if (!sd_supers.empty()) sd += "^{" + sd_supers + "}";
  std::string asd = "[" + petrov_name(asd_type) + "]";
  if (!asd_supers.empty()) asd += "^{" + asd_supers + "}";
  std::string core = sd + " (x) " + asd;
  if (!show_optics) return core;
  std::string opt = "[";
  for (std::size_t i = 0; i < optics.size(); ++i) {
    if (i) opt += ",";
    opt += optics_name(optics[i]);
  }
  opt += "]";
  return "{" + core + ", " + opt + "}";
}

GeometrySymbol assemble_symbol(PetrovLabel sd, PetrovLabel asd,
                               const std::vector<CongruenceTag>& congruences,
                               const std::vector<OpticsClass>& optics,
                               bool side_is_o_sd, bool side_is_o_asd) {
  GeometrySymbol sym;
  sym.sd_type = sd;
  sym.asd_type = asd;
  std::vector<bool> sd_nonexp, asd_nonexp;
  for (const auto& c : congruences) {
    if (c.self_dual) {
      sym.sd_supers += c.nonexpanding ? 'n' : 'e';
      sd_nonexp.push_back(c.nonexpanding);
    } else {
      sym.asd_supers += c.nonexpanding ? 'n' : 'e';
      asd_nonexp.push_back(c.nonexpanding);
    }
  }
  const std::size_t want = sd_nonexp.size() * asd_nonexp.size();
  if (optics.size() != want) {
    throw InconsistentOptics("optics list length does not match the congruence pairing");
  }
  sym.optics = optics;
  // canonical order (m,m.),(m,n.),(n,m.),(n,n.)
  std::size_t k = 0;
  bool all_nonexpanding = true;
  for (std::size_t i = 0; i < sd_nonexp.size(); ++i) {
    for (std::size_t j = 0; j < asd_nonexp.size(); ++j, ++k) {
      if (sd_nonexp[i] && asd_nonexp[j] && optics[k] != OpticsClass::MinusMinus) {
        throw InconsistentOptics("intersection of two nonexpanding congruences must be --");
      }
    }
  }
  for (const auto& c : congruences) all_nonexpanding = all_nonexpanding && c.nonexpanding;
  sym.show_optics = !optics.empty() && !all_nonexpanding && !side_is_o_sd && !side_is_o_asd;
  return sym;
}

}  // namespace nsl
