#pragma once

// Directly computable measures: Uhlmann fidelity, von Neumann and relative
// entropy, and the two-qubit closed forms that are functions of the
// concurrence. All entropic quantities are in bits.

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "entroof/errors.hpp"
#include "entroof/linalg.hpp"
#include "entroof/qstate.hpp"

namespace entroof {

namespace tol {
inline constexpr double log_cutoff = 1e-12;  ///< eigenvalues at or below count as zero in log traces
}

namespace detail {

inline void require_same_dim(const DensityMatrix& a, const DensityMatrix& b, const char* who) {
  if (a.dim() != b.dim()) {
    throw InvalidArgument(std::string(who) + ": dimension mismatch " + std::to_string(a.dim()) + " vs " +
                          std::to_string(b.dim()));
  }
}

inline void require_two_qubit(const DensityMatrix& rho, const char* who) {
  if (!rho.is_two_qubit()) {
    throw InvalidArgument(std::string(who) + ": needs a two-qubit state, got dims " + dims_string(rho.dims()));
  }
}

inline double xlog2x(double x) {
  return x > tol::log_cutoff && x < 1.0 - tol::log_cutoff ? x * std::log2(x) : 0.0;
}

}  // namespace detail

/// Uhlmann fidelity in squared form, F = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2,
/// evaluated as the squared trace norm of A^dagger B for eigen-purifications
/// A A^dagger = rho, B B^dagger = sigma. Eigenvalues below the rank cutoff are
/// dropped rather than square-rooted.
inline double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  detail::require_same_dim(rho, sigma, "fidelity");
  const double root = nuclear_norm(eigen_purification(rho).adjoint() * eigen_purification(sigma));
  return std::clamp(root * root, 0.0, 1.0);
}

/// S(rho) = -Tr[rho log2 rho].
inline double von_neumann_entropy(const DensityMatrix& rho) {
  double s = 0.0;
  for (double l : rho.spectrum().eigenvalues) s -= detail::xlog2x(l);
  return std::max(0.0, s);
}

/// S(rho||sigma) = Tr[rho log2 rho] - Tr[rho log2 sigma]; +infinity when the
/// support of rho is not contained in the support of sigma.
inline double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  detail::require_same_dim(rho, sigma, "relative_entropy");
  if (rho.matrix() == sigma.matrix()) return 0.0;
  const HermitianEig es = sigma.spectrum();
  double cross = 0.0;
  double outside = 0.0;
  for (std::size_t j = 0; j < es.eigenvalues.size(); ++j) {
    const cvec mu = es.eigenvectors.column(j);
    const double w = sandwich(mu, rho.matrix(), mu).real();
    if (es.eigenvalues[j] > tol::log_cutoff) {
      cross += w * std::log2(es.eigenvalues[j]);
    } else {
      outside += w;
    }
  }
  if (outside > tol::log_cutoff) return std::numeric_limits<double>::infinity();
  double self = 0.0;
  for (double l : rho.spectrum().eigenvalues) self += detail::xlog2x(l);
  return std::max(0.0, self - cross);
}

// ---- two qubits -------------------------------------------------------------

namespace detail {

// Squared Schmidt coefficients s1^2 >= s2^2 of the eigenvector of a rank-one
// two-qubit state.
inline std::pair<double, double> pure_schmidt_squares(const DensityMatrix& rho) {
  const HermitianEig e = rho.spectrum();
  const cvec psi = e.eigenvectors.column(3);
  const auto s = svd(ComplexMatrix(2, 2, psi)).singular_values;
  const double n = s[0] * s[0] + s[1] * s[1];
  return {s[0] * s[0] / n, s[1] * s[1] / n};
}

}  // namespace detail

/// Concurrence C together with sqrt(1 - C^2), the quantity every two-qubit
/// closed form depends on. For rank-one states both come from the Schmidt
/// coefficients (C = 2 s1 s2, sqrt(1 - C^2) = s1^2 - s2^2), which stays
/// accurate next to C = 1 where 1 - C^2 cancels.
struct TwoQubitInvariants {
  double concurrence = 0.0;
  double root = 1.0;  ///< sqrt(1 - C^2)
};

/// Wootters concurrence max{0, xi1 - xi2 - xi3 - xi4}, xi the square roots of
/// the eigenvalues of rho (sy x sy) rho* (sy x sy) in decreasing order. They
/// are the singular values of sqrt(rho) (sy x sy) sqrt(rho)*.
inline double wootters_concurrence(const DensityMatrix& rho) {
  detail::require_two_qubit(rho, "concurrence");
  // sy (x) sy = antidiag(-1, 1, 1, -1)
  ComplexMatrix flip(4, 4);
  flip(0, 3) = -1.0;
  flip(1, 2) = 1.0;
  flip(2, 1) = 1.0;
  flip(3, 0) = -1.0;
  const ComplexMatrix root = sqrt_psd(rho.matrix());
  const auto xi = svd(root * flip * root.conjugate()).singular_values;
  const double c = xi[0] - xi[1] - xi[2] - xi[3];
  return std::clamp(c, 0.0, 1.0);
}

inline TwoQubitInvariants two_qubit_invariants(const DensityMatrix& rho) {
  detail::require_two_qubit(rho, "two_qubit_invariants");
  if (rho.rank() == 1) {
    const auto [a, b] = detail::pure_schmidt_squares(rho);
    return {std::clamp(2.0 * std::sqrt(a * b), 0.0, 1.0), std::clamp(a - b, 0.0, 1.0)};
  }
  const double c = wootters_concurrence(rho);
  return {c, std::sqrt(1.0 - c * c)};
}

inline double concurrence(const DensityMatrix& rho) { return two_qubit_invariants(rho).concurrence; }

/// Binary entropy in bits, h(0) = h(1) = 0.
inline double binary_entropy(double x) { return 0.0 - detail::xlog2x(x) - detail::xlog2x(1.0 - x); }

inline double formation_from_root(double root) { return binary_entropy(0.5 + 0.5 * root); }
inline double fs_from_root(double root) { return 0.5 * (1.0 + root); }

inline double formation_from_concurrence(double c) { return formation_from_root(std::sqrt(1.0 - c * c)); }

inline double fs_from_concurrence(double c) { return fs_from_root(std::sqrt(1.0 - c * c)); }

/// 1 - F_s; exact in floating point because F_s lies in [1/2, 1].
inline double geometric_from_concurrence(double c) { return 1.0 - fs_from_concurrence(c); }

inline double bures_from_concurrence(double c) { return 2.0 - 2.0 * std::sqrt(fs_from_concurrence(c)); }

inline double entanglement_of_formation_2q(const DensityMatrix& rho) {
  return formation_from_root(two_qubit_invariants(rho).root);
}

inline double fs_2q(const DensityMatrix& rho) { return fs_from_root(two_qubit_invariants(rho).root); }

inline double geometric_measure_2q(const DensityMatrix& rho) { return 1.0 - fs_2q(rho); }

inline double bures_measure_2q(const DensityMatrix& rho) { return 2.0 - 2.0 * std::sqrt(fs_2q(rho)); }

// ---- measures derived from the fidelity of separability ---------------------

/// Groverian measure sqrt(1 - F_s).
inline double groverian_measure(double f_s) {
  if (!(f_s > 0.0 && f_s <= 1.0)) throw InvalidArgument("groverian_measure: F_s must lie in (0, 1]");
  return std::sqrt(1.0 - f_s);
}

/// Bures measure 2 - 2 sqrt(F_s).
inline double bures_measure(double f_s) {
  if (!(f_s > 0.0 && f_s <= 1.0)) throw InvalidArgument("bures_measure: F_s must lie in (0, 1]");
  return 2.0 - 2.0 * std::sqrt(f_s);
}

/// Lower bound on the relative entropy of entanglement,
/// max{0, -log2(1 - E_G) - S(rho)}.
inline double er_lower_bound(const DensityMatrix& rho, double e_g) {
  if (!(e_g >= 0.0 && e_g < 1.0)) throw InvalidArgument("er_lower_bound: E_G must lie in [0, 1)");
  return std::max(0.0, -std::log2(1.0 - e_g) - von_neumann_entropy(rho));
}

// ---- generalized Vedral-Plenio family ----------------------------------------

namespace detail {
inline void require_gvp_params(double a, double p) {
  if (!(a >= 0.0 && a <= 1.0)) throw InvalidArgument("gvp: a must lie in [0, 1]");
  if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("gvp: p must lie in (0, 1]");
}
}  // namespace detail

/// p|psi><psi| + (1-p)|01><01| with |psi> = sqrt(a)|01> + sqrt(1-a)|10>.
inline DensityMatrix gvp_state(double a, double p) {
  detail::require_gvp_params(a, p);
  const double x = std::sqrt(a), y = std::sqrt(1.0 - a);
  ComplexMatrix m(4, 4);
  m(1, 1) = p * a + (1.0 - p);
  m(1, 2) = p * x * y;
  m(2, 1) = p * x * y;
  m(2, 2) = p * (1.0 - a);
  return DensityMatrix({2, 2}, m);
}

/// Closest separable state of the family with respect to relative entropy:
/// (1 - p + pa)|01><01| + p(1-a)|10><10|.
inline DensityMatrix gvp_closest_state(double a, double p) {
  detail::require_gvp_params(a, p);
  ComplexMatrix m(4, 4);
  m(1, 1) = 1.0 - p + p * a;
  m(2, 2) = p * (1.0 - a);
  return DensityMatrix({2, 2}, m);
}

/// Relative entropy of entanglement on the family, S(rho || gvp_closest_state).
inline double gvp_relative_entropy(double a, double p) {
  return relative_entropy(gvp_state(a, p), gvp_closest_state(a, p));
}

}  // namespace entroof
