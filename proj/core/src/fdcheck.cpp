#include "nsl/fdcheck.hpp"

#include <cmath>
#include <vector>

namespace nsl {

namespace {

// 1-D central stencils for d^k/dt^k, orders of accuracy O(h^2).
// offsets are in units of h; weights multiply 1/h^k.
struct Stencil {
  std::vector<double> offsets;
  std::vector<double> weights;
};

const Stencil& stencil(int k) {
  static const Stencil s0{{0}, {1}};
  static const Stencil s1{{-1, 1}, {-0.5, 0.5}};
  static const Stencil s2{{-1, 0, 1}, {1, -2, 1}};
  static const Stencil s3{{-2, -1, 1, 2}, {-0.5, 1, -1, 0.5}};
  switch (k) {
    case 0: return s0;
    case 1: return s1;
    case 2: return s2;
    default: return s3;
  }
}

Cplx tensor_stencil(const ValueFn& f, const Point4& p, const MultiIndex& alpha, double h) {
  // Compose the per-axis stencils; evaluate f on the offset grid.
  std::vector<std::pair<Point4, double>> nodes{{p, 1.0}};
  double scale = 1.0;
  for (int axis = 0; axis < 4; ++axis) {
    const int k = alpha[axis];
    if (k == 0) continue;
    const Stencil& st = stencil(k);
    scale *= std::pow(h, k);
    std::vector<std::pair<Point4, double>> next;
    next.reserve(nodes.size() * st.offsets.size());
    for (const auto& [pt, w] : nodes) {
      for (std::size_t i = 0; i < st.offsets.size(); ++i) {
        Point4 q = pt;
        q[axis] += Cplx(st.offsets[i] * h, 0);
        next.emplace_back(q, w * st.weights[i]);
      }
    }
    nodes = std::move(next);
  }
  Cplx acc(0, 0);
  for (const auto& [pt, w] : nodes) acc += w * f(pt);
  return acc / scale;
}

}  // namespace

Cplx fd_partial(const ValueFn& f, const Point4& point, const MultiIndex& alpha, double h) {
  const Cplx coarse = tensor_stencil(f, point, alpha, h);
  const Cplx fine = tensor_stencil(f, point, alpha, h / 2);
  // A pole inside the stencil makes the two estimates blow up and disagree.
  const double mag = std::abs(coarse) + std::abs(fine);
  if (mag > 1e3 && std::abs(coarse - fine) > 0.25 * mag) {
    throw EvalError(EvalError::Kind::NonFinite,
                    "finite differences inconsistent: singular sampling point");
  }
  // Both stencils are O(h^2); Richardson gives O(h^4).
  return (4.0 * fine - coarse) / 3.0;
}

FdCheckResult finite_diff_check(const ScalarField& f, const Point4& point,
                                const MultiIndex& alpha, double h) {
  const int order = alpha.degree();
  double step = h;
  if (order >= 3) step = std::max(h, 4e-3);  // rounding floor for third differences
  ValueFn fn = [&f](const Point4& p) { return f.eval_value(p); };
  const Cplx fd = fd_partial(fn, point, alpha, step);
  const Cplx jv = f.eval_jet(point).partial(alpha);
  const double err = std::abs(fd - jv) / (1.0 + std::abs(jv));
  return FdCheckResult{jv, fd, err};
}

}  // namespace nsl
