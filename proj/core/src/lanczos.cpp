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
//
// Thick-restart Lanczos for the top eigenpairs of the symmetric binary
// adjacency matrix. The iteration keeps a small orthonormal basis: after each
// cycle the best Ritz vectors are locked together with the current residual
// direction, the projected matrix becomes diagonal-plus-arrowhead, and the
// Krylov recurrence continues from the residual. Full reorthogonalization is
// applied at every step; the graph sizes this targets make that cheap and it
// keeps the basis orthonormal to machine precision.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "neigad/error.hpp"
#include "neigad/rng.hpp"
#include "neigad/spectral.hpp"
#include "spectral_internal.hpp"

namespace neigad {

namespace internal {

void adj_matvec(const SparseGraph& g, const double* x, double* y) {
  const std::int64_t n = g.num_nodes();
  const auto& offsets = g.row_offsets();
  const auto& cols = g.col_indices();
  for (std::int64_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::int64_t k = offsets[i]; k < offsets[i + 1]; ++k) sum += x[cols[k]];
    y[i] = sum;
  }
}

void jacobi_eigh(const DenseMatrix& sym, std::vector<double>& values, DenseMatrix& vectors) {
  if (sym.rows() != sym.cols()) throw DimensionError("jacobi_eigh: matrix must be square");
  const std::int64_t n = sym.rows();
  DenseMatrix a = sym;
  vectors = identity_matrix(n);

  double scale = 0.0;
  for (double x : a.values()) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) scale = 1.0;

  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (std::int64_t p = 0; p < n; ++p) {
      for (std::int64_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
    }
    if (off <= 1e-16 * scale) break;
    for (std::int64_t p = 0; p < n; ++p) {
      for (std::int64_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-18 * scale) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::int64_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(p, k) = a(k, p);
          a(k, q) = s * akp + c * akq;
          a(q, k) = a(k, q);
        }
        for (std::int64_t k = 0; k < n; ++k) {
          const double vkp = vectors(k, p), vkq = vectors(k, q);
          vectors(k, p) = c * vkp - s * vkq;
          vectors(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::int64_t> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::int64_t x, std::int64_t y) { return a(x, x) > a(y, y); });
  values.resize(static_cast<std::size_t>(n));
  DenseMatrix sorted(n, n);
  for (std::int64_t j = 0; j < n; ++j) {
    values[j] = a(order[j], order[j]);
    for (std::int64_t i = 0; i < n; ++i) sorted(i, j) = vectors(i, order[j]);
  }
  vectors = std::move(sorted);
}

}  // namespace internal

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

void axpy(double coeff, const std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += coeff * x[i];
}

// Two-pass modified Gram-Schmidt of w against basis[0..count).
void reorthogonalize(const std::vector<std::vector<double>>& basis, std::int64_t count,
                     std::vector<double>& w) {
  for (int pass = 0; pass < 2; ++pass) {
    for (std::int64_t i = 0; i < count; ++i) {
      const double c = dot(basis[i], w);
      if (c != 0.0) axpy(-c, basis[i], w);
    }
  }
}

// Orders eigenvalue indices for the requested selection mode.
struct RitzOrder {
  bool by_magnitude;
  bool operator()(double a, double b) const {
    if (by_magnitude) {
      if (std::abs(a) != std::abs(b)) return std::abs(a) > std::abs(b);
    }
    return a > b;
  }
};

}  // namespace

void canonicalize_sign(std::int64_t n, std::int64_t t, std::vector<double>& columns) {
  for (std::int64_t k = 0; k < t; ++k) {
    double* col = columns.data() + k * n;
    double max_abs = 0.0;
    for (std::int64_t i = 0; i < n; ++i) max_abs = std::max(max_abs, std::abs(col[i]));
    if (max_abs == 0.0) continue;
    // Lowest index within a relative whisker of the max, so that near-ties
    // resolve the same way for every solver.
    std::int64_t pivot = 0;
    for (std::int64_t i = 0; i < n; ++i) {
      if (std::abs(col[i]) >= max_abs * (1.0 - 1e-9)) {
        pivot = i;
        break;
      }
    }
    if (col[pivot] < 0.0) {
      for (std::int64_t i = 0; i < n; ++i) col[i] = -col[i];
    }
  }
}

EigenPairs top_eigenpairs(const SparseGraph& g, std::int64_t t, const EigOptions& opts) {
  const std::int64_t n = g.num_nodes();
  if (n < 1) throw ParamError("top_eigenpairs requires a nonempty graph");
  if (t < 1) throw ParamError("eigenpair count t must be at least 1");
  if (t > n) {
    throw ParamError("t=" + std::to_string(t) + " exceeds node count " + std::to_string(n));
  }
  if (t > opts.t_cap) {
    throw ParamError("t=" + std::to_string(t) + " exceeds the configured cap " +
                     std::to_string(opts.t_cap));
  }

  const std::int64_t m = std::min<std::int64_t>(n, std::max<std::int64_t>(2 * t + 10, 24));
  const RitzOrder better{opts.largest_magnitude};

  std::vector<std::vector<double>> basis(static_cast<std::size_t>(m),
                                         std::vector<double>(static_cast<std::size_t>(n)));
  std::vector<double> locked_values(static_cast<std::size_t>(m), 0.0);   // θ of kept Ritz pairs
  std::vector<double> couplings(static_cast<std::size_t>(m), 0.0);       // σ arrowhead entries
  std::vector<double> diag(static_cast<std::size_t>(m), 0.0);            // α
  std::vector<double> offdiag(static_cast<std::size_t>(m), 0.0);         // β
  std::vector<double> w(static_cast<std::size_t>(n));

  // Fixed-seed random start: deterministic output for equal inputs, and a.s.
  // nonzero overlap with every eigenvector (a constant start vector would
  // miss the antisymmetric ones).
  Rng rng(0x5eed1a9c2051ull);
  std::vector<double> v(static_cast<std::size_t>(n));
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  {
    const double nv = norm2(v);
    for (double& x : v) x /= nv;
  }

  std::int64_t locked = 0;  // kept Ritz vectors occupy basis[0..locked)
  std::int64_t steps = 0;
  const double breakdown_tol = 1e-13 * std::max<std::int64_t>(std::int64_t{1}, n);

  std::vector<double> ritz_values;   // all m Ritz values of the last projection
  DenseMatrix ritz_coeffs;           // eigenvectors of the projected matrix
  std::vector<std::int64_t> order;   // Ritz indices sorted by the selection mode

  while (true) {
    // Extend the basis from `locked` to m vectors.
    std::int64_t filled = m;
    for (std::int64_t j = locked; j < m; ++j) {
      basis[j] = v;
      internal::adj_matvec(g, basis[j].data(), w.data());
      ++steps;
      diag[j] = dot(w, basis[j]);
      if (j == locked && locked > 0) {
        for (std::int64_t i = 0; i < locked; ++i) {
          if (couplings[i] != 0.0) axpy(-couplings[i], basis[i], w);
        }
      } else if (j > locked) {
        axpy(-offdiag[j - 1], basis[j - 1], w);
      }
      axpy(-diag[j], basis[j], w);
      reorthogonalize(basis, j + 1, w);
      double beta = norm2(w);
      if (beta > breakdown_tol) {
        offdiag[j] = beta;
        for (std::int64_t i = 0; i < n; ++i) v[i] = w[i] / beta;
        continue;
      }
      // Invariant subspace found: continue from a fresh random direction.
      offdiag[j] = 0.0;
      bool replaced = false;
      for (int attempt = 0; attempt < 4 && !replaced; ++attempt) {
        for (double& x : w) x = rng.uniform(-1.0, 1.0);
        reorthogonalize(basis, j + 1, w);
        const double nw = norm2(w);
        if (nw > 1e-8) {
          for (std::int64_t i = 0; i < n; ++i) v[i] = w[i] / nw;
          replaced = true;
        }
      }
      if (!replaced) {
        filled = j + 1;  // basis spans the whole space
        break;
      }
    }

    // Projected matrix: diag(θ) with arrowhead couplings into column
    // `locked`, then the tridiagonal tail.
    DenseMatrix projected(filled, filled);
    for (std::int64_t i = 0; i < locked; ++i) {
      projected(i, i) = locked_values[i];
      if (locked < filled) {
        projected(i, locked) = couplings[i];
        projected(locked, i) = couplings[i];
      }
    }
    for (std::int64_t j = locked; j < filled; ++j) {
      projected(j, j) = diag[j];
      if (j + 1 < filled) {
        projected(j, j + 1) = offdiag[j];
        projected(j + 1, j) = offdiag[j];
      }
    }
    internal::jacobi_eigh(projected, ritz_values, ritz_coeffs);

    order.resize(static_cast<std::size_t>(filled));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::int64_t a, std::int64_t b) {
      return better(ritz_values[a], ritz_values[b]);
    });

    const double beta_last = filled == m ? offdiag[m - 1] : 0.0;
    const std::int64_t available = std::min<std::int64_t>(t, filled);
    bool est_converged = available == t;
    for (std::int64_t i = 0; i < available; ++i) {
      const double est = std::abs(beta_last * ritz_coeffs(filled - 1, order[i]));
      if (est > opts.tol) est_converged = false;
    }

    const bool exhausted = steps >= opts.max_iter;
    const bool spans_all = filled == n;
    if (est_converged || exhausted || spans_all) {
      // Assemble Ritz vectors and verify residuals explicitly.
      EigenPairs out;
      out.n = n;
      out.t = t;
      out.eigenvalues.resize(static_cast<std::size_t>(t));
      out.eigenvectors.assign(static_cast<std::size_t>(n * t), 0.0);
      out.residuals.resize(static_cast<std::size_t>(t));
      out.clustered.assign(static_cast<std::size_t>(t), 0);
      if (available < t) {
        throw ConvergenceError("eigensolver collapsed to a subspace of dimension " +
                                   std::to_string(available) + " < t",
                               {});
      }
      for (std::int64_t i = 0; i < t; ++i) {
        out.eigenvalues[i] = ritz_values[order[i]];
        double* col = out.eigenvectors.data() + i * n;
        for (std::int64_t j = 0; j < filled; ++j) {
          const double c = ritz_coeffs(j, order[i]);
          if (c != 0.0) {
            const double* bj = basis[j].data();
            for (std::int64_t r = 0; r < n; ++r) col[r] += c * bj[r];
          }
        }
        const double nc = std::sqrt(
            std::inner_product(col, col + n, col, 0.0));
        if (nc > 0.0) {
          for (std::int64_t r = 0; r < n; ++r) col[r] /= nc;
        }
      }
      bool true_converged = true;
      for (std::int64_t i = 0; i < t; ++i) {
        const double* col = out.eigenvectors.data() + i * n;
        internal::adj_matvec(g, col, w.data());
        double rss = 0.0;
        for (std::int64_t r = 0; r < n; ++r) {
          const double d = w[r] - out.eigenvalues[i] * col[r];
          rss += d * d;
        }
        out.residuals[i] = std::sqrt(rss);
        if (out.residuals[i] > opts.tol) true_converged = false;
      }
      if (true_converged || spans_all) {
        if (!true_converged) {
          // Full-space basis cannot improve further; report what was reached.
          throw ConvergenceError("eigensolver residuals above tolerance on the full space",
                                 out.residuals);
        }
        canonicalize_sign(n, t, out.eigenvectors);
        // Clustering is judged against the neighboring Ritz values, which
        // approximate the adjacent true eigenvalues.
        for (std::int64_t i = 0; i < t; ++i) {
          double gap = std::numeric_limits<double>::infinity();
          if (i > 0) gap = std::min(gap, std::abs(out.eigenvalues[i - 1] - out.eigenvalues[i]));
          if (i + 1 < filled) {
            gap = std::min(gap, std::abs(out.eigenvalues[i] - ritz_values[order[i + 1]]));
          }
          out.clustered[i] = gap < opts.cluster_gap ? 1 : 0;
        }
        return out;
      }
      if (exhausted) {
        throw ConvergenceError("eigensolver did not converge within " +
                                   std::to_string(opts.max_iter) + " Lanczos steps",
                               out.residuals);
      }
      // Estimates were optimistic; fall through and restart.
    }

    // Thick restart: lock the best Ritz vectors plus the residual direction.
    const std::int64_t keep = std::min<std::int64_t>(t + 8, filled - 2);
    std::vector<std::vector<double>> kept(static_cast<std::size_t>(keep),
                                          std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (std::int64_t i = 0; i < keep; ++i) {
      for (std::int64_t j = 0; j < filled; ++j) {
        const double c = ritz_coeffs(j, order[i]);
        if (c != 0.0) axpy(c, basis[j], kept[i]);
      }
      locked_values[i] = ritz_values[order[i]];
      couplings[i] = (filled == m ? offdiag[m - 1] : 0.0) * ritz_coeffs(filled - 1, order[i]);
    }
    for (std::int64_t i = 0; i < keep; ++i) basis[i] = std::move(kept[i]);
    locked = keep;
    // `v` already holds the next direction (the normalized residual, or a
    // fresh random vector after a breakdown).
  }
}

}  // namespace neigad
