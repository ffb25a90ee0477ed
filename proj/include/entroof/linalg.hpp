#pragma once

// Jacobi-based spectral kernels: Hermitian eigendecomposition, SVD, polar
// factors and functions of positive-semidefinite matrices.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "entroof/errors.hpp"
#include "entroof/matrix.hpp"

namespace entroof {

namespace tol {
inline constexpr double hermitian_input = 1e-9;   ///< accepted |M - M^dagger| before symmetrizing
inline constexpr double jacobi_offdiag = 1e-12;   ///< off-diagonal Frobenius norm at convergence
inline constexpr int jacobi_max_sweeps = 100;
inline constexpr double psd_clamp = 1e-10;        ///< eigenvalues in [-clamp, 0) are roundoff
inline constexpr double singular_zero = 1e-12;    ///< relative to the largest singular value
}  // namespace tol

struct HermitianEig {
  std::vector<double> eigenvalues;  ///< ascending
  ComplexMatrix eigenvectors;       ///< columns, unitary
};

struct SVDResult {
  ComplexMatrix u;                     ///< m x m unitary
  std::vector<double> singular_values; ///< min(m, n) values, descending
  ComplexMatrix v;                     ///< n x n unitary, M = U diag(s) V^dagger
};

namespace detail {

// Unitary 2x2 rotation acting on the (p, q) plane; zeroes the (p, q) entry of
// a Hermitian block [[app, apq], [conj(apq), aqq]] under J^dagger A J.
struct JacobiRotation {
  double c = 1.0;
  double s = 0.0;
  cplx phase = 1.0;  // apq / |apq|

  static JacobiRotation make(double app, double aqq, cplx apq) {
    JacobiRotation r;
    const double g = std::abs(apq);
    if (g == 0.0) return r;
    r.phase = apq / g;
    const double theta = (aqq - app) / (2.0 * g);
    const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::hypot(theta, 1.0));
    r.c = 1.0 / std::hypot(t, 1.0);
    r.s = t * r.c;
    return r;
  }

  // J = [[c, s*phase], [-s*conj(phase), c]]
  cplx jpp() const { return c; }
  cplx jpq() const { return s * phase; }
  cplx jqp() const { return -s * std::conj(phase); }
  cplx jqq() const { return c; }

  // M <- M J on columns p, q
  void apply_right(ComplexMatrix& m, std::size_t p, std::size_t q) const {
    for (std::size_t k = 0; k < m.rows(); ++k) {
      const cplx mkp = m(k, p);
      const cplx mkq = m(k, q);
      m(k, p) = mkp * jpp() + mkq * jqp();
      m(k, q) = mkp * jpq() + mkq * jqq();
    }
  }

  // M <- J^dagger M on rows p, q
  void apply_left_adjoint(ComplexMatrix& m, std::size_t p, std::size_t q) const {
    for (std::size_t k = 0; k < m.cols(); ++k) {
      const cplx mpk = m(p, k);
      const cplx mqk = m(q, k);
      m(p, k) = std::conj(jpp()) * mpk + std::conj(jqp()) * mqk;
      m(q, k) = std::conj(jpq()) * mpk + std::conj(jqq()) * mqk;
    }
  }
};

inline double offdiag_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// Gram-Schmidt completion: fills columns of `m` flagged in `missing` with
// orthonormal vectors orthogonal to every other column. Each slot takes the
// standard basis vector with the largest orthogonal remainder (lowest index on
// ties), which keeps the result deterministic.
inline void complete_orthonormal_columns(ComplexMatrix& m, std::vector<bool> missing) {
  const std::size_t n = m.rows();
  auto remainder = [&](std::size_t e) {
    cvec v(n);
    v[e] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < m.cols(); ++k) {
        if (missing[k]) continue;
        const cvec col = m.column(k);
        const cplx ov = inner(col, v);
        for (std::size_t i = 0; i < n; ++i) v[i] -= ov * col[i];
      }
    }
    return v;
  };
  for (std::size_t j = 0; j < m.cols(); ++j) {
    if (!missing[j]) continue;
    cvec best;
    double best_norm = 0.0;
    for (std::size_t e = 0; e < n; ++e) {
      cvec v = remainder(e);
      const double nv = norm2(v);
      if (nv > best_norm + 1e-12) {
        best_norm = nv;
        best = std::move(v);
      }
    }
    if (best_norm < 1e-6) throw ConvergenceError("complete_orthonormal_columns: no independent candidate left");
    for (auto& z : best) z /= best_norm;
    m.set_column(j, best);
    missing[j] = false;
  }
}

// One-sided Jacobi for m >= n. Returns thin columns in `g` (orthogonal, norms
// are the singular values) and the accumulated right rotation `v`.
inline void one_sided_jacobi(ComplexMatrix& g, ComplexMatrix& v) {
  const std::size_t n = g.cols();
  // a pair counts as orthogonal below a few ulps; at exactly one ulp the
  // rotation rounds to the identity and the sweep would never finish
  const double eps = std::numeric_limits<double>::epsilon() * std::max<double>(4.0, static_cast<double>(g.rows()));
  // columns below this squared norm are numerically zero next to the largest
  const double negligible = std::pow(std::numeric_limits<double>::epsilon() * g.frobenius_norm(), 2);
  for (int sweep = 0; sweep < tol::jacobi_max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0;
        cplx gamma = 0.0;
        for (std::size_t k = 0; k < g.rows(); ++k) {
          alpha += std::norm(g(k, p));
          beta += std::norm(g(k, q));
          gamma += std::conj(g(k, p)) * g(k, q);
        }
        if (std::min(alpha, beta) <= negligible) continue;
        if (std::abs(gamma) <= eps * std::sqrt(alpha) * std::sqrt(beta) || std::abs(gamma) == 0.0) continue;
        rotated = true;
        const auto rot = JacobiRotation::make(alpha, beta, gamma);
        rot.apply_right(g, p, q);
        rot.apply_right(v, p, q);
      }
    }
    if (!rotated) return;
  }
  throw ConvergenceError("svd: one-sided Jacobi did not converge");
}

}  // namespace detail

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi.
/// The input is symmetrized; eigenvalues come back ascending.
inline HermitianEig eig_hermitian(const ComplexMatrix& m) {
  if (!m.is_square()) throw InvalidArgument("eig_hermitian: matrix is " + m.shape());
  if (hermiticity_error(m) > tol::hermitian_input) {
    throw InvalidArgument("eig_hermitian: input is not Hermitian");
  }
  const std::size_t n = m.rows();
  ComplexMatrix a = (m + m.adjoint()) * 0.5;
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double threshold = tol::jacobi_offdiag * std::max(1.0, a.frobenius_norm());

  bool converged = false;
  for (int sweep = 0; sweep <= tol::jacobi_max_sweeps; ++sweep) {
    if (detail::offdiag_norm(a) <= threshold) {
      converged = true;
      break;
    }
    if (sweep == tol::jacobi_max_sweeps) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        if (std::abs(apq) < std::numeric_limits<double>::min()) continue;
        const auto rot = detail::JacobiRotation::make(a(p, p).real(), a(q, q).real(), apq);
        rot.apply_right(a, p, q);
        rot.apply_left_adjoint(a, p, q);
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        rot.apply_right(v, p, q);
      }
    }
  }
  if (!converged) throw ConvergenceError("eig_hermitian: no convergence after iteration cap");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });
  HermitianEig out{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
  }
  return out;
}

namespace detail {

// full = false keeps only min(m, n) columns of the taller factor.
inline SVDResult svd_impl(const ComplexMatrix& m, bool full) {
  if (m.rows() < m.cols()) {
    SVDResult t = svd_impl(m.adjoint(), full);
    return SVDResult{std::move(t.v), std::move(t.singular_values), std::move(t.u)};
  }
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  ComplexMatrix g = m;
  ComplexMatrix v = ComplexMatrix::identity(cols);
  detail::one_sided_jacobi(g, v);

  std::vector<double> norms(cols);
  for (std::size_t j = 0; j < cols; ++j) norms[j] = norm2(g.column(j));
  std::vector<std::size_t> order(cols);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return norms[i] > norms[j]; });

  const std::size_t ucols = full ? rows : cols;
  SVDResult out{ComplexMatrix(rows, ucols), std::vector<double>(cols), ComplexMatrix(cols, cols)};
  const double smax = cols == 0 ? 0.0 : norms[order[0]];
  std::vector<bool> missing(ucols, true);
  for (std::size_t k = 0; k < cols; ++k) {
    const std::size_t j = order[k];
    for (std::size_t i = 0; i < cols; ++i) out.v(i, k) = v(i, j);
    if (smax > 0.0 && norms[j] > tol::singular_zero * smax) {
      out.singular_values[k] = norms[j];
      for (std::size_t i = 0; i < rows; ++i) out.u(i, k) = g(i, j) / norms[j];
      missing[k] = false;
    }
  }
  complete_orthonormal_columns(out.u, missing);
  return out;
}

}  // namespace detail

/// Full singular value decomposition by one-sided Jacobi.
inline SVDResult svd(const ComplexMatrix& m) { return detail::svd_impl(m, true); }

/// Thin SVD: U is m x k and V is n x k with k = min(m, n).
inline SVDResult svd_thin(const ComplexMatrix& m) { return detail::svd_impl(m, false); }

/// Co-isometry Y (r x s, r <= s, Y Y^dagger = I) maximizing Re Tr[Y^dagger M].
inline ComplexMatrix polar_coisometry(const ComplexMatrix& m) {
  if (m.rows() > m.cols()) throw InvalidArgument("polar_coisometry: expects a wide matrix, got " + m.shape());
  const SVDResult d = svd_thin(m);
  const std::size_t r = m.rows();
  ComplexMatrix y(r, m.cols());
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      cplx acc = 0.0;
      for (std::size_t k = 0; k < r; ++k) acc += d.u(i, k) * std::conj(d.v(j, k));
      y(i, j) = acc;
    }
  return y;
}

/// Sum of singular values.
inline double nuclear_norm(const ComplexMatrix& m) {
  const SVDResult d = svd_thin(m);
  return std::accumulate(d.singular_values.begin(), d.singular_values.end(), 0.0);
}

/// V f(diag) V^dagger for a Hermitian matrix.
inline ComplexMatrix hermitian_function(const HermitianEig& e, const std::function<double(double)>& f) {
  const std::size_t n = e.eigenvalues.size();
  ComplexMatrix r(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double fk = f(e.eigenvalues[k]);
    if (fk == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx vik = e.eigenvectors(i, k) * fk;
      for (std::size_t j = 0; j < n; ++j) r(i, j) += vik * std::conj(e.eigenvectors(j, k));
    }
  }
  return r;
}

/// Eigenvalues of a PSD matrix with roundoff negatives clamped to zero.
/// Throws if an eigenvalue lies below -1e-10.
inline HermitianEig eig_psd(const ComplexMatrix& m) {
  HermitianEig e = eig_hermitian(m);
  for (auto& l : e.eigenvalues) {
    if (l < -tol::psd_clamp) {
      throw InvalidArgument("eig_psd: eigenvalue " + std::to_string(l) + " below -1e-10, input is not PSD");
    }
    l = std::max(l, 0.0);
  }
  return e;
}

inline ComplexMatrix sqrt_psd(const ComplexMatrix& m) {
  return hermitian_function(eig_psd(m), [](double x) { return std::sqrt(x); });
}

}  // namespace entroof
