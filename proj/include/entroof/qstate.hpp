#pragma once

// Validated quantum-state data model: density matrices, pure states, product
// vectors, pure-state decompositions and separable ensembles, plus the
// purification / unitary-freedom machinery that connects decompositions of
// the same density matrix.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "entroof/errors.hpp"
#include "entroof/linalg.hpp"
#include "entroof/matrix.hpp"
#include "entroof/tensor.hpp"

namespace entroof {

namespace tol {
inline constexpr double state_hermitian = 1e-9;
inline constexpr double state_trace = 1e-9;
inline constexpr double state_negative_eig = 1e-10;
inline constexpr double state_norm = 1e-10;
inline constexpr double weight_sum = 1e-10;
inline constexpr double zero_weight = 1e-12;  ///< decomposition entries below this are pruned
inline constexpr double rank_cutoff = 1e-12;  ///< eigenvalues above this count towards the rank
inline constexpr double unitary_check = 1e-9;
}  // namespace tol

namespace detail {

inline void require_party_dims(const Dims& dims, std::size_t min_dim, const char* who) {
  if (dims.empty()) throw ValidationError("dimension", std::string(who) + ": no parties");
  for (auto d : dims)
    if (d < min_dim) {
      throw ValidationError("dimension", std::string(who) + ": party dimension " + std::to_string(d) +
                                             " below " + std::to_string(min_dim));
    }
}

// First amplitude with modulus above the pruning threshold becomes real >= 0.
inline void canonicalize_phase(cvec& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double m = std::abs(v[i]);
    if (m > tol::zero_weight) {
      const cplx rot = std::conj(v[i]) / m;
      for (auto& w : v) w *= rot;
      v[i] = m;
      return;
    }
  }
}

}  // namespace detail

/// Unit vector with a party-dimension signature. The global phase is fixed so
/// that the first non-negligible amplitude is real and non-negative.
class PureState {
 public:
  PureState(Dims dims, cvec amplitudes) : dims_(std::move(dims)), amps_(std::move(amplitudes)) {
    detail::require_party_dims(dims_, 1, "PureState");
    if (amps_.size() != total_dim(dims_)) {
      throw ValidationError("dimension", "PureState: dims " + dims_string(dims_) + " need " +
                                             std::to_string(total_dim(dims_)) + " amplitudes, got " +
                                             std::to_string(amps_.size()));
    }
    const double n = norm2(amps_);
    if (!std::isfinite(n) || std::abs(n - 1.0) > tol::state_norm) {
      throw ValidationError("normalization", "PureState: norm " + std::to_string(n) + " differs from 1");
    }
    detail::canonicalize_phase(amps_);
  }

  /// Normalizes before validating.
  static PureState from_unnormalized(Dims dims, const cvec& v) { return PureState(std::move(dims), normalized(v)); }

  const Dims& dims() const noexcept { return dims_; }
  std::size_t dim() const noexcept { return amps_.size(); }
  const cvec& amplitudes() const noexcept { return amps_; }
  ComplexMatrix projector() const { return ComplexMatrix::projector(amps_); }

  friend bool operator==(const PureState&, const PureState&) = default;

 private:
  Dims dims_;
  cvec amps_;
};

/// Trace-one positive-semidefinite operator on the product of party spaces.
class DensityMatrix {
 public:
  DensityMatrix(Dims dims, const ComplexMatrix& m) : dims_(std::move(dims)) {
    detail::require_party_dims(dims_, 2, "DensityMatrix");
    const std::size_t d = total_dim(dims_);
    if (!m.is_square() || m.rows() != d) {
      throw ValidationError("dimension", "DensityMatrix: dims " + dims_string(dims_) + " need a " +
                                             std::to_string(d) + "x" + std::to_string(d) + " matrix, got " +
                                             m.shape());
    }
    const double herm = hermiticity_error(m);
    if (herm > tol::state_hermitian) {
      throw ValidationError("hermiticity", "DensityMatrix: |M - M^dagger| = " + std::to_string(herm));
    }
    mat_ = (m + m.adjoint()) * 0.5;
    const double tr = mat_.trace().real();
    if (std::abs(tr - 1.0) > tol::state_trace) {
      throw ValidationError("trace", "DensityMatrix: trace " + std::to_string(tr) + " differs from 1");
    }
    const double lmin = eig_hermitian(mat_).eigenvalues.front();
    if (lmin < -tol::state_negative_eig) {
      throw ValidationError("positivity", "DensityMatrix: eigenvalue " + std::to_string(lmin) + " is negative");
    }
  }

  static DensityMatrix from_pure(const PureState& psi) {
    Dims dims = psi.dims();
    return DensityMatrix(std::move(dims), psi.projector());
  }

  const Dims& dims() const noexcept { return dims_; }
  std::size_t dim() const noexcept { return mat_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return mat_; }

  /// Spectrum with roundoff negatives clamped to zero, ascending.
  HermitianEig spectrum() const { return eig_psd(mat_); }

  std::size_t rank() const {
    const auto ev = spectrum().eigenvalues;
    return static_cast<std::size_t>(
        std::count_if(ev.begin(), ev.end(), [](double l) { return l > tol::rank_cutoff; }));
  }

  double purity() const { return trace_of_product(mat_, mat_).real(); }

  bool is_two_qubit() const { return dims_ == Dims{2, 2}; }

 private:
  Dims dims_;
  ComplexMatrix mat_;
};

/// Tensor product of normalized per-party factors.
class ProductVector {
 public:
  explicit ProductVector(std::vector<cvec> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw ValidationError("dimension", "ProductVector: no parties");
    for (const auto& f : factors_) {
      const double n = norm2(f);
      if (f.empty() || std::abs(n - 1.0) > tol::state_norm) {
        throw ValidationError("normalization", "ProductVector: factor norm " + std::to_string(n));
      }
    }
  }

  const std::vector<cvec>& factors() const noexcept { return factors_; }

  Dims dims() const {
    Dims d;
    for (const auto& f : factors_) d.push_back(f.size());
    return d;
  }

  /// Full vector including the global phase carried by the factors.
  cvec vector() const { return tensor_product(factors_); }

  /// Multiplies the first factor by a unit-modulus phase.
  ProductVector rephased(cplx phase) const {
    auto f = factors_;
    for (auto& z : f.front()) z *= phase;
    return ProductVector(std::move(f));
  }

 private:
  std::vector<cvec> factors_;
};

/// {p_i, |psi_i>} with rho = sum p_i |psi_i><psi_i|.
class Decomposition {
 public:
  Decomposition(std::vector<double> weights, std::vector<PureState> states)
      : weights_(std::move(weights)), states_(std::move(states)) {
    if (weights_.empty() || weights_.size() != states_.size()) {
      throw ValidationError("dimension", "Decomposition: need matching non-empty weight and state lists");
    }
    double sum = 0.0;
    for (double p : weights_) {
      if (!(p > 0.0)) throw ValidationError("probability", "Decomposition: weights must be positive");
      sum += p;
    }
    if (std::abs(sum - 1.0) > tol::weight_sum) {
      throw ValidationError("probability", "Decomposition: weights sum to " + std::to_string(sum));
    }
    for (const auto& s : states_)
      if (s.dims() != states_.front().dims()) {
        throw ValidationError("dimension", "Decomposition: states have different dims");
      }
  }

  std::size_t size() const noexcept { return weights_.size(); }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<PureState>& states() const noexcept { return states_; }
  const Dims& dims() const { return states_.front().dims(); }

  ComplexMatrix reconstruct() const {
    const std::size_t d = states_.front().dim();
    ComplexMatrix r(d, d);
    for (std::size_t k = 0; k < size(); ++k) r += states_[k].projector() * weights_[k];
    return r;
  }

 private:
  std::vector<double> weights_;
  std::vector<PureState> states_;
};

/// {q_j, |phi_j>} with product vectors phi_j: a separable state by construction.
class SeparableEnsemble {
 public:
  SeparableEnsemble(std::vector<double> weights, std::vector<ProductVector> vectors)
      : weights_(std::move(weights)), vectors_(std::move(vectors)) {
    if (weights_.empty() || weights_.size() != vectors_.size()) {
      throw ValidationError("dimension", "SeparableEnsemble: need matching non-empty lists");
    }
    double sum = 0.0;
    for (double q : weights_) {
      if (!(q >= 0.0)) throw ValidationError("probability", "SeparableEnsemble: negative weight");
      sum += q;
    }
    if (std::abs(sum - 1.0) > tol::weight_sum) {
      throw ValidationError("probability", "SeparableEnsemble: weights sum to " + std::to_string(sum));
    }
    for (const auto& v : vectors_)
      if (v.dims() != vectors_.front().dims()) {
        throw ValidationError("dimension", "SeparableEnsemble: vectors have different dims");
      }
  }

  std::size_t size() const noexcept { return weights_.size(); }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<ProductVector>& vectors() const noexcept { return vectors_; }
  Dims dims() const { return vectors_.front().dims(); }

 private:
  std::vector<double> weights_;
  std::vector<ProductVector> vectors_;
};

/// sigma = sum_j q_j |phi_j><phi_j|.
inline DensityMatrix assemble(const SeparableEnsemble& ensemble) {
  const Dims dims = ensemble.dims();
  const std::size_t d = total_dim(dims);
  ComplexMatrix sigma(d, d);
  for (std::size_t j = 0; j < ensemble.size(); ++j) {
    if (ensemble.weights()[j] == 0.0) continue;
    sigma += ComplexMatrix::projector(ensemble.vectors()[j].vector()) * ensemble.weights()[j];
  }
  return DensityMatrix(dims, sigma);
}

// ---- purifications and the unitary freedom of decompositions ---------------

/// Columns sqrt(lambda_l) |lambda_l> for the nonzero eigenvalues of rho, in
/// descending eigenvalue order (ties keep the eigensolver's order).
inline ComplexMatrix eigen_purification(const DensityMatrix& rho) {
  const HermitianEig e = rho.spectrum();
  const std::size_t d = rho.dim();
  std::vector<std::size_t> order;
  for (std::size_t k = d; k-- > 0;)
    if (e.eigenvalues[k] > tol::rank_cutoff) order.push_back(k);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return e.eigenvalues[a] > e.eigenvalues[b]; });
  ComplexMatrix a(d, order.size());
  for (std::size_t l = 0; l < order.size(); ++l) {
    const double s = std::sqrt(e.eigenvalues[order[l]]);
    for (std::size_t i = 0; i < d; ++i) a(i, l) = e.eigenvectors(i, order[l]) * s;
  }
  return a;
}

/// Purification sum_l sqrt(lambda_l) |lambda_l> (x) |l> with an ancilla of
/// dimension rank(rho), appended as the last party.
inline PureState purify(const DensityMatrix& rho) {
  const ComplexMatrix a = eigen_purification(rho);
  const std::size_t r = a.cols();
  cvec amps(rho.dim() * r);
  for (std::size_t i = 0; i < rho.dim(); ++i)
    for (std::size_t l = 0; l < r; ++l) amps[i * r + l] = a(i, l);
  Dims dims = rho.dims();
  dims.push_back(r);
  return PureState::from_unnormalized(std::move(dims), amps);
}

/// Decomposition whose unnormalized members sqrt(p_k)|psi_k> are the columns
/// of `columns`. Entries with p_k below 1e-12 are dropped and the remaining
/// weights renormalized.
inline Decomposition decomposition_from_columns(const Dims& dims, const ComplexMatrix& columns) {
  std::vector<double> weights;
  std::vector<PureState> states;
  for (std::size_t k = 0; k < columns.cols(); ++k) {
    const cvec col = columns.column(k);
    const double nk = norm2(col);
    const double p = nk * nk;
    if (p < tol::zero_weight) continue;
    weights.push_back(p);
    states.push_back(PureState::from_unnormalized(dims, col));
  }
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (auto& p : weights) p /= sum;
  return Decomposition(std::move(weights), std::move(states));
}

/// sqrt(p_k)|psi_k> = sum_l u_kl sqrt(lambda_l)|lambda_l>, eigenvalues taken
/// in descending order and padded with zeros up to s = U.rows().
inline Decomposition decomposition_from_unitary(const DensityMatrix& rho, const ComplexMatrix& u) {
  if (!u.is_square()) throw InvalidArgument("decomposition_from_unitary: U must be square, got " + u.shape());
  const std::size_t s = u.rows();
  const double err = max_abs_diff(u.adjoint() * u, ComplexMatrix::identity(s));
  if (err > tol::unitary_check) {
    throw InvalidArgument("decomposition_from_unitary: U is not unitary (|U^dagger U - I| = " + std::to_string(err) +
                          ")");
  }
  const ComplexMatrix a0 = eigen_purification(rho);
  const std::size_t r = a0.cols();
  if (s < r) {
    throw InvalidArgument("decomposition_from_unitary: s = " + std::to_string(s) + " is below rank " +
                          std::to_string(r));
  }
  // column k = sum_l u_kl a0[:, l]
  ComplexMatrix cols(rho.dim(), s);
  for (std::size_t k = 0; k < s; ++k)
    for (std::size_t l = 0; l < r; ++l) {
      const cplx ukl = u(k, l);
      if (ukl == cplx{}) continue;
      for (std::size_t i = 0; i < rho.dim(); ++i) cols(i, k) += ukl * a0(i, l);
    }
  return decomposition_from_columns(rho.dims(), cols);
}

}  // namespace entroof
