#pragma once

#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "qnsp/errors.hpp"
#include "qnsp/spectral/field.hpp"

namespace qnsp {

// ---------------------------------------------------------------------------
// Fourier-symbol differentiation. Every operator zeroes the Nyquist modes.
// ---------------------------------------------------------------------------

inline ScalarField partial(const ScalarField& f, int axis) {
  const Grid& g = f.grid();
  if (axis < 0 || axis >= g.dim()) throw UsageError("axis out of range");
  ScalarField out(g);
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = complex(0.0, g.xi(axis, i)) * f[i];
  return out;
}

inline VectorField grad(const ScalarField& f) {
  std::vector<ScalarField> c;
  c.reserve(f.grid().dim());
  for (int a = 0; a < f.grid().dim(); ++a) c.push_back(partial(f, a));
  return VectorField(std::move(c));
}

inline ScalarField div(const VectorField& v) {
  const Grid& g = v.grid();
  ScalarField out(g);
  for (int a = 0; a < v.dim(); ++a) {
    const ScalarField& c = v[a];
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += complex(0.0, g.xi(a, i)) * c[i];
  }
  return out;
}

inline ScalarField laplacian(const ScalarField& f) {
  const Grid& g = f.grid();
  ScalarField out(g);
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = -g.xi2(i) * f[i];
  return out;
}

inline VectorField laplacian(const VectorField& v) {
  std::vector<ScalarField> c;
  for (const auto& comp : v) c.push_back(laplacian(comp));
  return VectorField(std::move(c));
}

inline TensorField hessian(const ScalarField& f) {
  const int d = f.grid().dim();
  std::vector<ScalarField> c;
  c.reserve(d * d);
  for (int i = 0; i < d; ++i) {
    const ScalarField di = partial(f, i);
    for (int j = 0; j < d; ++j) c.push_back(partial(di, j));
  }
  return TensorField(d, std::move(c));
}

inline VectorField grad_laplacian(const ScalarField& f) { return grad(laplacian(f)); }

/// Velocity gradient (grad u)_{ij} = d_i u_j.
inline TensorField gradient_tensor(const VectorField& v) {
  const int d = v.dim();
  std::vector<ScalarField> c;
  c.reserve(d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) c.push_back(partial(v[j], i));
  return TensorField(d, std::move(c));
}

enum class DiffKind { grad, div, laplacian, hessian, grad_laplacian };

using AnyField = std::variant<ScalarField, VectorField, TensorField>;

/// Rank-checked dispatcher over the differential operators.
inline AnyField differentiate(const AnyField& f, DiffKind kind) {
  const bool scalar = std::holds_alternative<ScalarField>(f);
  const bool vector = std::holds_alternative<VectorField>(f);
  switch (kind) {
    case DiffKind::grad:
      if (scalar) return grad(std::get<ScalarField>(f));
      break;
    case DiffKind::div:
      if (vector) return div(std::get<VectorField>(f));
      break;
    case DiffKind::laplacian:
      if (scalar) return laplacian(std::get<ScalarField>(f));
      if (vector) return laplacian(std::get<VectorField>(f));
      break;
    case DiffKind::hessian:
      if (scalar) return hessian(std::get<ScalarField>(f));
      break;
    case DiffKind::grad_laplacian:
      if (scalar) return grad_laplacian(std::get<ScalarField>(f));
      break;
  }
  throw UsageError("differential operator does not accept a field of this rank");
}

// ---------------------------------------------------------------------------
// Elliptic solves and projections.
// ---------------------------------------------------------------------------

/// Root-mean-square of a field, from its coefficients.
inline double rms(const ScalarField& f) {
  const Grid& g = f.grid();
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += g.multiplicity(i) * std::norm(f[i]);
  return std::sqrt(s);
}

/// Mean-zero g with laplacian(g) = f. Requires mean(f) = 0 to 1e-12 relative to rms(f).
inline ScalarField inverse_laplacian(const ScalarField& f) {
  const double m = f.mean();
  const double scale = std::max(rms(f), 1.0e-300);
  if (std::abs(m) > 1.0e-12 * scale && std::abs(m) > 1.0e-300)
    throw SolvabilityError("inverse Laplacian of a field with non-zero mean", m);
  const Grid& g = f.grid();
  ScalarField out(g);
  for (std::size_t i = 1; i < f.size(); ++i) {
    const double k2 = g.xi2(i);
    if (k2 > 0.0) out[i] = -f[i] / k2;
  }
  return out;
}

/// Leray projector v - grad(inverse_laplacian(div v)), evaluated per mode.
inline VectorField leray_project(const VectorField& v) {
  const Grid& g = v.grid();
  const int d = v.dim();
  VectorField out = v;
  for (std::size_t i = 0; i < g.spec_size(); ++i) {
    const double k2 = g.xi2(i);
    if (k2 <= 0.0) {
      // Mean mode is divergence-free; Nyquist content is projected away.
      if (g.is_nyquist(i))
        for (int a = 0; a < d; ++a) out[a][i] = 0.0;
      continue;
    }
    complex kv = 0.0;
    for (int a = 0; a < d; ++a) kv += g.xi(a, i) * v[a][i];
    for (int a = 0; a < d; ++a) out[a][i] -= g.xi(a, i) * kv / k2;
  }
  return out;
}

/// Gradient part grad(inverse_laplacian(div v)) of a vector field.
inline VectorField gradient_part(const VectorField& v) { return v - leray_project(v); }

// ---------------------------------------------------------------------------
// Dealiased nonlinear evaluation.
// ---------------------------------------------------------------------------

inline std::vector<double> masked_physical(const ScalarField& f) {
  ScalarField m = f;
  m.dealias();
  return m.to_physical();
}

/// Pointwise product with the 2/3-rule mask applied to both inputs and the output.
inline ScalarField dealiased_product(const ScalarField& f, const ScalarField& g) {
  f.check_same_grid(g);
  auto a = masked_physical(f);
  const auto b = masked_physical(g);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
  return ScalarField::from_physical(f.grid(), a).dealias();
}

/// Scalar times vector, componentwise dealiased.
inline VectorField dealiased_product(const ScalarField& s, const VectorField& v) {
  const Grid& g = s.grid();
  const auto a = masked_physical(s);
  std::vector<ScalarField> c;
  for (const auto& comp : v) {
    auto b = masked_physical(comp);
    for (std::size_t i = 0; i < b.size(); ++i) b[i] *= a[i];
    c.push_back(ScalarField::from_physical(g, b).dealias());
  }
  return VectorField(std::move(c));
}

/// Dot product sum_i a_i b_i with every binary product dealiased.
inline ScalarField dealiased_dot(const VectorField& a, const VectorField& b) {
  const Grid& g = a.grid();
  std::vector<double> acc(g.phys_size(), 0.0);
  for (int i = 0; i < a.dim(); ++i) {
    const auto x = masked_physical(a[i]);
    const auto y = masked_physical(b[i]);
    for (std::size_t p = 0; p < acc.size(); ++p) acc[p] += x[p] * y[p];
  }
  return ScalarField::from_physical(g, acc).dealias();
}

/// (a . grad) b for vector b, dealiased.
inline VectorField advect(const VectorField& a, const VectorField& b) {
  const Grid& g = a.grid();
  const int d = a.dim();
  std::vector<std::vector<double>> ap;
  for (int i = 0; i < d; ++i) ap.push_back(masked_physical(a[i]));
  std::vector<ScalarField> out;
  for (int j = 0; j < d; ++j) {
    std::vector<double> acc(g.phys_size(), 0.0);
    for (int i = 0; i < d; ++i) {
      const auto db = masked_physical(partial(b[j], i));
      for (std::size_t p = 0; p < acc.size(); ++p) acc[p] += ap[i][p] * db[p];
    }
    out.push_back(ScalarField::from_physical(g, acc).dealias());
  }
  return VectorField(std::move(out));
}

/// (a . grad) s for scalar s, dealiased.
inline ScalarField advect(const VectorField& a, const ScalarField& s) {
  return dealiased_dot(a, grad(s));
}

/// Applies a scalar function pointwise on the dealiased physical grid and
/// returns the dealiased result.
template <class Fn>
ScalarField apply_pointwise(const ScalarField& f, Fn&& fn) {
  auto v = masked_physical(f);
  for (auto& x : v) x = fn(x);
  return ScalarField::from_physical(f.grid(), v).dealias();
}

/// Frobenius inner product A:B of two tensors, dealiased.
inline ScalarField contract(const TensorField& A, const TensorField& B) {
  const Grid& g = A.grid();
  std::vector<double> acc(g.phys_size(), 0.0);
  for (int i = 0; i < A.dim(); ++i)
    for (int j = 0; j < A.dim(); ++j) {
      const auto x = masked_physical(A(i, j));
      const auto y = masked_physical(B(i, j));
      for (std::size_t p = 0; p < acc.size(); ++p) acc[p] += x[p] * y[p];
    }
  return ScalarField::from_physical(g, acc).dealias();
}

/// Symmetric velocity gradient grad u + (grad u)^T.
inline TensorField strain(const VectorField& u) {
  const int d = u.dim();
  std::vector<ScalarField> c;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) c.push_back(partial(u[j], i) + partial(u[i], j));
  return TensorField(d, std::move(c));
}

/// Tensor-vector product (H v)_j = sum_i H_{ij} v_i, dealiased.
inline VectorField contract_first(const TensorField& H, const VectorField& v) {
  const Grid& g = v.grid();
  const int d = v.dim();
  std::vector<std::vector<double>> vp;
  for (int i = 0; i < d; ++i) vp.push_back(masked_physical(v[i]));
  std::vector<ScalarField> out;
  for (int j = 0; j < d; ++j) {
    std::vector<double> acc(g.phys_size(), 0.0);
    for (int i = 0; i < d; ++i) {
      const auto h = masked_physical(H(i, j));
      for (std::size_t p = 0; p < acc.size(); ++p) acc[p] += h[p] * vp[i][p];
    }
    out.push_back(ScalarField::from_physical(g, acc).dealias());
  }
  return VectorField(std::move(out));
}

}  // namespace qnsp
