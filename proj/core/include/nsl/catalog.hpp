#ifndef NSL_CATALOG_HPP
#define NSL_CATALOG_HPP

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nsl/congruence.hpp"

namespace nsl {

// What a family slot accepts: expression source bound over the family chart,
// restricted to the listed coordinates.
struct FunctionSlot {
  std::string name;
  unsigned allowed_coords;  // bitmask over chart slots 0..3
  std::string default_expr;
};

struct ParameterSlot {
  std::string name;
  Cplx default_value;
};

struct KillingVectorSpec {
  std::string name;
  std::array<std::string, 4> components;  // DSL over the chart, params allowed
  Cplx chi0{0, 0};                        // homothetic constant
};

struct InstanceCongruence {
  SpinorFieldSpec spec;
  bool claimed_nonexpanding;
};

struct Bindings {
  std::map<std::string, std::string> functions;
  dsl::Params params;
  Mode mode = Mode::Complex;
};

// An evaluable metric with its declared structures and sampling guards.
struct MetricInstance {
  std::string family_id;
  Mode mode = Mode::Complex;
  std::array<std::string, 4> chart = dsl::kDefaultCoords;
  MetricFrame frame;
  std::optional<PlebanskiData> plebanski;
  std::vector<InstanceCongruence> congruences;  // SD first, then ASD
  std::string claimed_type;
  std::map<std::string, ScalarField> fields;    // bound function slots
  std::vector<KillingVectorSpec> killing;
  dsl::Params params;
  Cplx lambda{0, 0};
  bool einstein = false;

  // Rejection sampling over the unit box; loci must stay at distance 1e-3,
  // inequality guards bounded away from zero, and every field evaluable.
  std::vector<FieldFn> singular_guards;
  std::vector<std::function<Cplx(const Point4&)>> inequality_guards;
  uint64_t default_seed = 1;

  Point4 sample(std::mt19937_64& rng, int max_tries = 400) const;
  CurvatureData curvature(const Point4& point) const;  // fast path if available
};

struct MetricFamily {
  std::string id;
  std::string note;
  std::string claimed_pattern;  // with deg/any placeholders, as claimed
  std::string claimed_type;     // concrete symbol of the default instance
  std::array<std::string, 4> chart = dsl::kDefaultCoords;
  std::vector<FunctionSlot> functions;
  std::vector<ParameterSlot> parameters;
  bool in_table = false;  // one of the 16 summary rows
  uint64_t seed = 1;
  std::function<MetricInstance(const MetricFamily&, const Bindings&)> build;
};

// Every registered family (summary rows plus auxiliary entries for the
// symmetry and special-solution suites).
const std::vector<MetricFamily>& all_families();
// The 16 summary rows, in table order.
std::vector<const MetricFamily*> list_families();
const MetricFamily* find_family(const std::string& id);

// Binds defaults for unspecified slots, enforces arity contracts.
MetricInstance instantiate(const std::string& id, const Bindings& bindings = {});

// max over components of |nabla_(mu K_nu) - chi0 g_{mu nu}| at the point,
// divided by (1 + max |g|).
double killing_residual(const MetricInstance& inst, const KillingVectorSpec& K,
                        const Point4& point);

// Reduced symmetry systems; every equation evaluated verbatim, third
// derivatives through order-3 jets.
//
// Nonzero-Lambda family: delta1 = delta1(q), delta2 = delta2(p).
std::array<Cplx, 2> master_lambda_residuals(const ScalarField& delta1,
                                            const ScalarField& delta2,
                                            const ScalarField& Sigma, const ScalarField& Omega,
                                            Cplx lambda, const Point4& point);
// Null-vector case: eps = eps(q,p).
std::array<Cplx, 2> master_null_residuals(const ScalarField& eps, Cplx chi0,
                                          const ScalarField& Phi, const ScalarField& Omega,
                                          const Point4& point);
// Lambda = 0 general case; returns 7 residuals (the "constant" equation
// contributes its two gradient components).
std::array<Cplx, 7> master_heavenly_residuals(const ScalarField& delta1,
                                              const ScalarField& delta2,
                                              const ScalarField& eps1, const ScalarField& eps2,
                                              Cplx a0, Cplx b0, Cplx chi0,
                                              const ScalarField& Phi, const ScalarField& Omega,
                                              const Point4& point);

// Null-Killing catalog check: residuals of the declared null Killing vectors
// and, for the triple-vector family, the expansion flag of the ASD congruence
// attached to each vector.
struct SdKillingReport {
  struct Entry {
    std::string name;
    double residual;
    bool has_congruence;
    bool congruence_expanding;
    double congruence_residual;
  };
  std::vector<Entry> entries;
};
SdKillingReport sd_killing_catalog_check(const MetricInstance& inst, const Point4& point);

// Closed-form candidate generator value C^(1)/(4 C^(2)) of the self-dual
// family with metric data A = M x^2 + P x + Omega, B = -M y^2 + N y,
// as a field with first-order jets.
FieldFn candidate_n_field(Cplx M0, ScalarField N, ScalarField P, ScalarField Omega);

}  // namespace nsl

#endif
