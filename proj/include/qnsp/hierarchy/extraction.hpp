#pragma once

// Taylor coefficients of a smooth function of epsilon from samples at the
// geometric nodes eps_j = eps0 * 2^-j, via Newton divided differences.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "qnsp/errors.hpp"
#include "qnsp/spectral/field.hpp"

namespace qnsp {

struct ExtractionOptions {
  double eps0 = 1e-2;
  int extra_nodes = 4;           ///< nodes beyond the coefficient index k
  double max_condition = 1e10;   ///< bound on sum_j |w_j| eps0^k
};

inline std::vector<double> extraction_nodes(int k, const ExtractionOptions& opt) {
  const int m = k + opt.extra_nodes;
  std::vector<double> x(m);
  for (int j = 0; j < m; ++j) x[j] = opt.eps0 * std::ldexp(1.0, -j);
  return x;
}

/// Weights w_j with sum_j w_j F(x_j) equal to the x^k coefficient of the
/// interpolating polynomial of F through the nodes.
struct TaylorWeights {
  std::vector<double> nodes;
  std::vector<double> weights;
  double condition = 0.0;
};

inline TaylorWeights taylor_weights(const std::vector<double>& x, int k, double max_condition = 1e10) {
  const int m = static_cast<int>(x.size());
  if (k < 0 || m <= k) throw ExtractionError("need more nodes than the coefficient index", 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (x[i] == x[j]) throw ExtractionError("extraction nodes must be distinct", INFINITY);

  // Monomial coefficients of the Newton basis pi_i(x) = prod_{l<i} (x - x_l).
  std::vector<std::vector<double>> basis(m, std::vector<double>(m, 0.0));
  basis[0][0] = 1.0;
  for (int i = 1; i < m; ++i)
    for (int d = 0; d < m; ++d) {
      basis[i][d] = -x[i - 1] * basis[i - 1][d];
      if (d > 0) basis[i][d] += basis[i - 1][d - 1];
    }

  TaylorWeights tw{x, std::vector<double>(m, 0.0), 0.0};
  // Divided differences are linear in the data: run them on unit vectors.
  for (int j = 0; j < m; ++j) {
    std::vector<double> dd(m, 0.0);
    dd[j] = 1.0;
    for (int level = 1; level < m; ++level)
      for (int i = m - 1; i >= level; --i) dd[i] = (dd[i] - dd[i - 1]) / (x[i] - x[i - level]);
    double w = 0.0;
    for (int i = 0; i < m; ++i) w += dd[i] * basis[i][k];
    tw.weights[j] = w;
  }
  double xmax = 0.0;
  for (double v : x) xmax = std::max(xmax, std::abs(v));
  for (double w : tw.weights) tw.condition += std::abs(w);
  tw.condition *= std::pow(xmax, k);
  if (!(tw.condition <= max_condition))
    throw ExtractionError("extraction node set is ill-conditioned", tw.condition);
  return tw;
}

/// k-th Taylor coefficient of eps -> op(eps) from its values at the nodes.
template <class Field>
Field extract_coefficient(const std::function<Field(double)>& op, int k, const ExtractionOptions& opt = {}) {
  const TaylorWeights tw = taylor_weights(extraction_nodes(k, opt), k, opt.max_condition);
  Field out = op(tw.nodes[0]);
  out *= tw.weights[0];
  for (std::size_t j = 1; j < tw.nodes.size(); ++j) out.axpy(tw.weights[j], op(tw.nodes[j]));
  return out;
}

}  // namespace qnsp
