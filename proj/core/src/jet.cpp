#include "nsl/jet.hpp"

#include <algorithm>
#include <stdexcept>

namespace nsl {

namespace jet_tables {

namespace {

std::array<MultiIndex, kJetSize> build_indices() {
  std::array<MultiIndex, kJetSize> out;
  int n = 0;
  for (int deg = 0; deg <= kJetOrder; ++deg) {
    for (int a = deg; a >= 0; --a) {
      for (int b = deg - a; b >= 0; --b) {
        for (int c = deg - a - b; c >= 0; --c) {
          const int d = deg - a - b - c;
          out[n++] = MultiIndex{{a, b, c, d}};
        }
      }
    }
  }
  return out;
}

std::array<int, 256> build_lut() {
  std::array<int, 256> lut;
  lut.fill(-1);
  const auto& idx = indices();
  for (int s = 0; s < kJetSize; ++s) {
    const auto& m = idx[s];
    lut[m[0] + 4 * m[1] + 16 * m[2] + 64 * m[3]] = s;
  }
  return lut;
}

std::array<std::vector<ProductPair>, kJetSize> build_pairs() {
  std::array<std::vector<ProductPair>, kJetSize> out;
  const auto& idx = indices();
  for (int g = 0; g < kJetSize; ++g) {
    const auto& gm = idx[g];
    for (int a = 0; a < kJetSize; ++a) {
      const auto& am = idx[a];
      bool ok = true;
      MultiIndex bm;
      for (int k = 0; k < 4; ++k) {
        bm.e[k] = gm[k] - am[k];
        if (bm.e[k] < 0) { ok = false; break; }
      }
      if (!ok) continue;
      const int b = slot(bm);
      if (b < 0 || b < a) continue;  // unordered pairs, listed once
      out[g].push_back(ProductPair{a, b, a == b});
    }
  }
  return out;
}

}  // namespace

const std::array<MultiIndex, kJetSize>& indices() {
  static const auto table = build_indices();
  return table;
}

int slot(const MultiIndex& m) {
  for (int k = 0; k < 4; ++k) {
    if (m[k] < 0) return -1;
  }
  if (m.degree() > kJetOrder) return -1;
  static const auto lut = build_lut();
  return lut[m[0] + 4 * m[1] + 16 * m[2] + 64 * m[3]];
}

int slot4(int a, int b, int c, int d) { return slot(MultiIndex{{a, b, c, d}}); }

double factorial(const MultiIndex& m) {
  static const double f[4] = {1.0, 1.0, 2.0, 6.0};
  return f[m[0]] * f[m[1]] * f[m[2]] * f[m[3]];
}

const std::array<std::vector<ProductPair>, kJetSize>& product_pairs() {
  static const auto table = build_pairs();
  return table;
}

}  // namespace jet_tables

Jet Jet::constant(Cplx v, Mode mode) {
  Jet j;
  j.mode_ = mode;
  j.c_[0] = v;
  return j;
}

Jet Jet::seed(const Point4& point, int var, Mode mode) {
  if (var < 0 || var >= kJetVars) {
    throw std::out_of_range("jet seed: variable index out of range");
  }
  Jet j;
  j.mode_ = mode;
  j.c_[0] = point[var];
  j.c_[1 + var] = Cplx(1, 0);
  return j;
}

Cplx Jet::partial(const MultiIndex& alpha) const {
  const int s = jet_tables::slot(alpha);
  if (s < 0 || alpha.degree() > valid_) {
    throw std::out_of_range("jet partial: derivative order not available");
  }
  return jet_tables::factorial(alpha) * c_[s];
}

Jet Jet::derivative(int var) const {
  Jet out;
  out.mode_ = mode_;
  out.valid_ = std::max(0, valid_ - 1);
  const auto& idx = jet_tables::indices();
  for (int s = 0; s < kJetSize; ++s) {
    MultiIndex m = idx[s];
    if (m.degree() >= kJetOrder) continue;
    MultiIndex up = m;
    up.e[var] += 1;
    out.c_[s] = double(up.e[var]) * c_[jet_tables::slot(up)];
  }
  return out;
}

bool Jet::all_finite() const {
  for (const auto& z : c_) {
    if (!is_finite(z)) return false;
  }
  return true;
}

namespace {
Mode join(const Jet& a, const Jet& b) {
  return (a.mode() == Mode::Complex || b.mode() == Mode::Complex) ? Mode::Complex
                                                                  : Mode::Real;
}
}  // namespace

Jet jet_neg(const Jet& a) {
  Jet out = a;
  for (auto& z : out.c_) z = -z;
  return out;
}

Jet jet_add(const Jet& a, const Jet& b) {
  Jet out;
  out.mode_ = join(a, b);
  out.valid_ = std::min(a.valid_, b.valid_);
  for (int s = 0; s < kJetSize; ++s) out.c_[s] = a.c_[s] + b.c_[s];
  return out;
}

Jet jet_sub(const Jet& a, const Jet& b) {
  Jet out;
  out.mode_ = join(a, b);
  out.valid_ = std::min(a.valid_, b.valid_);
  for (int s = 0; s < kJetSize; ++s) out.c_[s] = a.c_[s] - b.c_[s];
  return out;
}

Jet jet_mul(const Jet& a, const Jet& b) {
  Jet out;
  out.mode_ = join(a, b);
  out.valid_ = std::min(a.valid_, b.valid_);
  const auto& pairs = jet_tables::product_pairs();
  for (int g = 0; g < kJetSize; ++g) {
    Cplx acc(0, 0);
    for (const auto& pr : pairs[g]) {
      if (pr.diagonal) {
        acc += cx_mul(a.c_[pr.a], b.c_[pr.a]);
      } else {
        // paired terms grouped so mul(a,b) == mul(b,a) coefficient-wise exactly
        acc += cx_mul(a.c_[pr.a], b.c_[pr.b]) + cx_mul(a.c_[pr.b], b.c_[pr.a]);
      }
    }
    out.c_[g] = acc;
  }
  return out;
}

// f(b) = sum_k derivs[k]/k! * u^k with u = b - b(0); u has no constant term,
// so the truncated powers terminate at order 3.
Jet jet_compose(const Jet& b, const std::array<Cplx, kJetOrder + 1>& derivs, Mode mode) {
  Jet u = b;
  u.c_[0] = Cplx(0, 0);
  u.mode_ = mode;
  const Jet u2 = jet_mul(u, u);
  const Jet u3 = jet_mul(u2, u);
  Jet out;
  out.mode_ = mode;
  out.valid_ = b.valid_;
  for (int s = 0; s < kJetSize; ++s) {
    out.c_[s] = cx_mul(derivs[1], u.c_[s]) +
                cx_mul(derivs[2] * 0.5, u2.c_[s]) +
                cx_mul(derivs[3] * (1.0 / 6.0), u3.c_[s]);
  }
  out.c_[0] += derivs[0];
  return out;
}

Jet jet_inv(const Jet& a, std::size_t sb, std::size_t se) {
  const Cplx v = a.value();
  if (!(abs2(v) > kDivGuard)) {
    throw EvalError(EvalError::Kind::DivisionNearZero, "division by near-zero value", sb, se);
  }
  const Cplx iv = cx_div(Cplx(1, 0), v);
  const Cplx iv2 = cx_mul(iv, iv);
  const Cplx iv3 = cx_mul(iv2, iv);
  const Cplx iv4 = cx_mul(iv3, iv);
  // d^k (1/x) = (-1)^k k! / x^{k+1}
  return jet_compose(a, {iv, -iv2, 2.0 * iv3, -6.0 * iv4}, a.mode());
}

Jet jet_div(const Jet& a, const Jet& b, std::size_t sb, std::size_t se) {
  return jet_mul(a, jet_inv(b, sb, se));
}

Jet jet_pow_int(const Jet& a, int n, std::size_t sb, std::size_t se) {
  if (n == 0) return Jet::constant(Cplx(1, 0), a.mode());
  const bool neg = n < 0;
  unsigned m = neg ? unsigned(-(long long)n) : unsigned(n);
  Jet acc = Jet::constant(Cplx(1, 0), a.mode());
  Jet base = a;
  while (m > 0) {
    if (m & 1u) acc = jet_mul(acc, base);
    m >>= 1;
    if (m > 0) base = jet_mul(base, base);
  }
  return neg ? jet_inv(acc, sb, se) : acc;
}

Jet jet_exp(const Jet& a) {
  const Cplx e = cx_exp(a.value());
  return jet_compose(a, {e, e, e, e}, a.mode());
}

Jet jet_log(const Jet& a, std::size_t sb, std::size_t se) {
  const Cplx v = a.value();
  const Cplx l = cx_log(v, a.mode(), sb, se);
  const Cplx iv = cx_div(Cplx(1, 0), v, sb, se);
  const Cplx iv2 = cx_mul(iv, iv);
  const Cplx iv3 = cx_mul(iv2, iv);
  return jet_compose(a, {l, iv, -iv2, 2.0 * iv3}, a.mode());
}

Jet jet_sin(const Jet& a) {
  const Cplx s = cx_sin(a.value());
  const Cplx c = cx_cos(a.value());
  return jet_compose(a, {s, c, -s, -c}, a.mode());
}

Jet jet_cos(const Jet& a) {
  const Cplx s = cx_sin(a.value());
  const Cplx c = cx_cos(a.value());
  return jet_compose(a, {c, -s, -c, s}, a.mode());
}

}  // namespace nsl
