// Copyright 2026 The NeiGAD Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "neigad/spectral.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "neigad/error.hpp"
#include "spectral_internal.hpp"

namespace neigad {

DenseEig dense_sym_eig(const DenseMatrix& sym) {
  if (sym.rows() != sym.cols()) throw DimensionError("dense_sym_eig: matrix must be square");
  const std::int64_t n = sym.rows();
  std::vector<double> a = sym.values();
  std::vector<double> w(static_cast<std::size_t>(n));
  const lapack_int info = LAPACKE_dsyevd(LAPACK_ROW_MAJOR, 'V', 'U', static_cast<lapack_int>(n),
                                         a.data(), static_cast<lapack_int>(n), w.data());
  if (info != 0) {
    throw Error("LAPACK dsyevd failed with info=" + std::to_string(info));
  }
  // dsyevd returns ascending eigenvalues with eigenvectors in the columns.
  DenseEig out;
  out.values.resize(static_cast<std::size_t>(n));
  out.vectors = DenseMatrix(n, n);
  for (std::int64_t k = 0; k < n; ++k) {
    const std::int64_t src = n - 1 - k;
    out.values[k] = w[src];
    for (std::int64_t i = 0; i < n; ++i) out.vectors(i, k) = a[i * n + src];
  }
  return out;
}

EigenPairs dense_eig_oracle(const SparseGraph& g) {
  const std::int64_t n = g.num_nodes();
  if (n < 1) throw ParamError("dense_eig_oracle requires a nonempty graph");
  if (n > 1024) {
    throw ParamError("dense_eig_oracle refuses n=" + std::to_string(n) +
                     " > 1024; use top_eigenpairs for large graphs");
  }
  const DenseEig eig = dense_sym_eig(g.densify());

  EigenPairs out;
  out.n = n;
  out.t = n;
  out.eigenvalues = eig.values;
  out.eigenvectors.resize(static_cast<std::size_t>(n * n));
  for (std::int64_t k = 0; k < n; ++k) {
    for (std::int64_t i = 0; i < n; ++i) out.eigenvectors[k * n + i] = eig.vectors(i, k);
  }
  canonicalize_sign(n, n, out.eigenvectors);

  out.residuals.resize(static_cast<std::size_t>(n));
  std::vector<double> av(static_cast<std::size_t>(n));
  for (std::int64_t k = 0; k < n; ++k) {
    const double* col = out.eigenvectors.data() + k * n;
    internal::adj_matvec(g, col, av.data());
    double rss = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
      const double d = av[i] - out.eigenvalues[k] * col[i];
      rss += d * d;
    }
    out.residuals[k] = std::sqrt(rss);
  }

  out.clustered.assign(static_cast<std::size_t>(n), 0);
  constexpr double kClusterGap = 1e-6;
  for (std::int64_t k = 0; k < n; ++k) {
    const bool left = k > 0 && out.eigenvalues[k - 1] - out.eigenvalues[k] < kClusterGap;
    const bool right = k + 1 < n && out.eigenvalues[k] - out.eigenvalues[k + 1] < kClusterGap;
    out.clustered[k] = left || right ? 1 : 0;
  }
  return out;
}

double NeighborAverageReport::max_residual() const {
  double best = 0.0;
  for (std::size_t k = 0; k < residual.size(); ++k) {
    if (!skipped[k]) best = std::max(best, residual[k]);
  }
  return best;
}

NeighborAverageReport neighbor_average_residual(const SparseGraph& g, const EigenPairs& pairs,
                                                double lambda_floor) {
  const std::int64_t n = g.num_nodes();
  if (pairs.n != n) {
    throw DimensionError("eigenpairs were computed for n=" + std::to_string(pairs.n) +
                         ", graph has n=" + std::to_string(n));
  }
  NeighborAverageReport report;
  report.residual.assign(static_cast<std::size_t>(pairs.t), 0.0);
  report.skipped.assign(static_cast<std::size_t>(pairs.t), 0);
  for (std::int64_t k = 0; k < pairs.t; ++k) {
    const double lambda = pairs.eigenvalues[k];
    if (std::abs(lambda) < lambda_floor) {
      report.skipped[k] = 1;
      continue;
    }
    const auto u = pairs.vector(k);
    double worst = 0.0;
    for (std::int64_t j = 0; j < n; ++j) {
      const auto nb = g.neighbors(j);
      if (nb.empty()) continue;  // degree-0 nodes have no neighbor average
      double sum = 0.0;
      for (std::int64_t i : nb) sum += u[i];
      worst = std::max(worst, std::abs(u[j] - sum / lambda));
    }
    report.residual[k] = worst;
  }
  return report;
}

AugmentedFeatures augment_features(const FeatureMatrix& x, const EigenPairs& pairs,
                                   double scale) {
  if (x.rows() != pairs.n) {
    throw DimensionError("feature rows " + std::to_string(x.rows()) + " != eigenpair n " +
                         std::to_string(pairs.n));
  }
  if (!(scale > 0.0)) throw ParamError("eigenvector scale must be positive");

  AugmentedFeatures out;
  out.base_d = x.cols();
  out.t = pairs.t;
  out.scale = scale;
  const std::int64_t n = x.rows();
  const std::int64_t d = x.cols();
  out.values = DenseMatrix(n, d + pairs.t);
  for (std::int64_t i = 0; i < n; ++i) {
    const auto src = x.row(i);
    const auto dst = out.values.row(i);
    std::copy(src.begin(), src.end(), dst.begin());
    for (std::int64_t k = 0; k < pairs.t; ++k) {
      dst[d + k] = scale * pairs.eigenvectors[k * n + i];
    }
  }
  return out;
}

NiScore ni_score(const SparseGraph& g, std::span<const double> u) {
  const std::int64_t n = g.num_nodes();
  if (static_cast<std::int64_t>(u.size()) != n) {
    throw DimensionError("vector length " + std::to_string(u.size()) + " != node count " +
                         std::to_string(n));
  }
  double norm_sq = 0.0;
  for (double x : u) norm_sq += x * x;
  if (std::abs(std::sqrt(norm_sq) - 1.0) > 1e-8) {
    throw ParamError("ni_score requires a unit vector, got norm " +
                     std::to_string(std::sqrt(norm_sq)));
  }

  std::vector<double> cur(u.begin(), u.end());
  std::vector<double> next(static_cast<std::size_t>(n));
  for (int hop = 0; hop < 4; ++hop) {
    internal::adj_matvec(g, cur.data(), next.data());
    cur.swap(next);
  }

  NiScore out;
  out.per_node.resize(static_cast<std::size_t>(n));
  for (std::int64_t j = 0; j < n; ++j) {
    const double d = u[j] - cur[j];
    out.per_node[j] = d * d;
    out.total += d * d;
  }
  return out;
}

AdditivityCheck concat_loss_additivity_check(const DenseMatrix& x, const DenseMatrix& x_prime,
                                             const DenseMatrix& u, const DenseMatrix& u_prime) {
  if (!x.same_shape(x_prime)) throw DimensionError("X and X' shapes differ");
  if (!u.same_shape(u_prime)) throw DimensionError("U and U' shapes differ");
  if (u.rows() != x.rows()) throw DimensionError("X and U row counts differ");

  const std::int64_t n = x.rows();
  const std::int64_t d = x.cols();
  const std::int64_t k = u.cols();

  // Left side on the materialized concatenation.
  DenseMatrix cat(n, d + k), cat_prime(n, d + k);
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = 0; j < d; ++j) {
      cat(i, j) = x(i, j);
      cat_prime(i, j) = x_prime(i, j);
    }
    for (std::int64_t j = 0; j < k; ++j) {
      cat(i, d + j) = u(i, j);
      cat_prime(i, d + j) = u_prime(i, j);
    }
  }

  AdditivityCheck out;
  out.lhs = frobenius_sq_diff(cat, cat_prime);
  out.rhs = frobenius_sq_diff(x, x_prime);
  for (std::int64_t j = 0; j < k; ++j) {
    double col = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
      const double diff = u(i, j) - u_prime(i, j);
      col += diff * diff;
    }
    out.rhs += col;
  }
  out.gap = std::abs(out.lhs - out.rhs);
  return out;
}

std::string eigenpairs_to_csv(const EigenPairs& pairs) {
  std::string out;
  char buf[64];
  for (std::int64_t k = 0; k < pairs.t; ++k) {
    std::snprintf(buf, sizeof buf, "%.12g", pairs.eigenvalues[k]);
    if (k > 0) out += ',';
    out += buf;
  }
  out += '\n';
  for (std::int64_t i = 0; i < pairs.n; ++i) {
    for (std::int64_t k = 0; k < pairs.t; ++k) {
      std::snprintf(buf, sizeof buf, "%.12g", pairs.eigenvectors[k * pairs.n + i]);
      if (k > 0) out += ',';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace neigad
