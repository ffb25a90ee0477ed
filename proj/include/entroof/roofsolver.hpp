#pragma once

// Fidelity of separability of a mixed state as a convex roof,
//
//   F_s(rho) = max over decompositions {p_k, psi_k} of sum_k p_k F_s(psi_k),
//
// searched by alternating maximization over the columns of A = A0 Y, where
// A0 is the eigen-purification of rho (d x r) and Y an r x s co-isometry.
// Column k of A is sqrt(p_k) psi_k.
//
//   B step: phi_k = closest product vector of psi_k, B_k = sqrt(p_k F_k) phi_k
//   A step: Y = polar factor of A0^dagger B
//
// Neither step lowers sum_k p_k F_k. The optimum also yields the closest
// separable state, sigma = sum_k q_k |phi_k><phi_k| with q_k proportional to
// p_k F_k.

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "entroof/errors.hpp"
#include "entroof/geometric.hpp"
#include "entroof/linalg.hpp"
#include "entroof/measures.hpp"
#include "entroof/qstate.hpp"
#include "entroof/random.hpp"

namespace entroof {

namespace tol {
inline constexpr double roof_objective = 1e-14;
inline constexpr std::size_t roof_max_iterations = 5000;
inline constexpr std::size_t roof_restarts = 8;
inline constexpr std::size_t roof_inner_restarts = 4;
inline constexpr double empty_column = 1e-14;  ///< columns lighter than this carry no product vector
}  // namespace tol

struct RoofOptions {
  std::size_t s = 0;  ///< decomposition size; 0 selects d^2
  std::size_t restarts = tol::roof_restarts;
  std::uint64_t seed = 0;
  double tolerance = tol::roof_objective;
  std::size_t max_iterations = tol::roof_max_iterations;
  std::size_t inner_restarts = tol::roof_inner_restarts;  ///< product search inside the loop, three or more parties
  std::size_t final_restarts = 0;                         ///< product search for the reported value; 0 = default
};

struct RoofResult {
  double f_s = 0.0;
  double e_g = 0.0;
  Decomposition decomposition;
  std::vector<ProductVector> products;     ///< closest product of each decomposition member, <phi|psi> >= 0
  std::vector<double> member_fidelities;  ///< F_s of each member
  SeparableEnsemble ensemble;
  double stationarity_residual = 0.0;
  std::vector<double> objective_trace;  ///< winning restart, one value per iteration
  std::uint64_t seed = 0;
  std::size_t restart = 0;  ///< index of the winning restart
  std::size_t iterations = 0;
  bool converged = false;
};

inline std::size_t default_decomposition_size(const DensityMatrix& rho) { return rho.dim() * rho.dim(); }

// ---- decompositions, product vectors and the separable state ---------------

/// sigma of a decomposition and its closest product vectors:
/// q_k = p_k F_k / sum_j p_j F_j with F_k = |<phi_k|psi_k>|^2.
inline SeparableEnsemble closest_separable_from(const Decomposition& dec, const std::vector<ProductVector>& products) {
  if (products.size() != dec.size()) {
    throw InvalidArgument("closest_separable_from: " + std::to_string(dec.size()) + " states but " +
                          std::to_string(products.size()) + " product vectors");
  }
  std::vector<double> q(dec.size());
  double total = 0.0;
  for (std::size_t k = 0; k < dec.size(); ++k) {
    q[k] = dec.weights()[k] * std::norm(inner(products[k].vector(), dec.states()[k].amplitudes()));
    total += q[k];
  }
  if (!(total > 0.0)) throw InvalidArgument("closest_separable_from: product vectors orthogonal to every state");
  for (auto& x : q) x /= total;
  return SeparableEnsemble(std::move(q), products);
}

/// Closest product vector of every member, exact for two parties.
inline std::vector<ProductVector> closest_products(const Decomposition& dec, const ProductSearchOptions& opt = {}) {
  std::vector<ProductVector> out;
  for (std::size_t k = 0; k < dec.size(); ++k) {
    ProductSearchOptions o = opt;
    o.seed = derive_seed(opt.seed, k);
    out.push_back(closest_product(dec.dims(), dec.states()[k].amplitudes(), o).product);
  }
  return out;
}

inline SeparableEnsemble closest_separable_from(const Decomposition& dec) {
  return closest_separable_from(dec, closest_products(dec));
}

/// sum_k p_k |<phi_k|psi_k>|^2
inline double roof_objective(const Decomposition& dec, const std::vector<ProductVector>& products) {
  if (products.size() != dec.size()) throw InvalidArgument("roof_objective: length mismatch");
  double sum = 0.0;
  for (std::size_t k = 0; k < dec.size(); ++k) {
    sum += dec.weights()[k] * std::norm(inner(products[k].vector(), dec.states()[k].amplitudes()));
  }
  return sum;
}

/// Pairwise condition an optimal decomposition must meet,
///   max_{i,k} | sqrt(F_k) <psi_i|phi_k> - sqrt(F_i) <phi_i|psi_k> |,
/// with F_i = |<phi_i|psi_i>|^2 and phi_i phased so that <phi_i|psi_i> >= 0.
/// Necessary but not sufficient: non-optimal decompositions can score zero.
inline double stationarity_residual(const Decomposition& dec, const std::vector<ProductVector>& products) {
  if (products.size() != dec.size()) {
    throw InvalidArgument("stationarity_residual: " + std::to_string(dec.size()) + " states but " +
                          std::to_string(products.size()) + " product vectors");
  }
  const std::size_t n = dec.size();
  std::vector<cvec> phi(n);
  std::vector<double> root(n);
  for (std::size_t k = 0; k < n; ++k) {
    phi[k] = products[k].vector();
    root[k] = std::abs(inner(phi[k], dec.states()[k].amplitudes()));
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const cplx lhs = root[k] * inner(dec.states()[i].amplitudes(), phi[k]);
      const cplx rhs = root[i] * inner(phi[i], dec.states()[k].amplitudes());
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  return worst;
}

/// Pure-state concurrence 2|a d - b c| of a two-qubit vector.
inline double pure_concurrence(const PureState& psi) {
  if (psi.dims() != Dims{2, 2}) throw InvalidArgument("pure_concurrence: needs a two-qubit state");
  const auto& a = psi.amplitudes();
  return std::min(1.0, 2.0 * std::abs(a[0] * a[3] - a[1] * a[2]));
}

/// max_{i,k} |C(psi_i) - C(psi_k)| over a two-qubit decomposition.
inline double two_qubit_schmidt_uniformity(const Decomposition& dec) {
  if (dec.dims() != Dims{2, 2}) throw InvalidArgument("two_qubit_schmidt_uniformity: needs two-qubit states");
  double lo = 1.0, hi = 0.0;
  for (const auto& s : dec.states()) {
    const double c = pure_concurrence(s);
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  return hi - lo;
}

// ---- the alternating search ---------------------------------------------------

namespace detail {

struct SeeSawPoint {
  ComplexMatrix a;  ///< d x s, column k = sqrt(p_k) psi_k
  std::vector<std::optional<ProductVector>> phi;
  double objective = 0.0;
};

// B step on every column: closest product vector, warm-started from the
// previous one when the search is iterative so the overlap cannot drop.
inline void update_products(const Dims& dims, SeeSawPoint& pt, std::size_t restarts, std::uint64_t seed) {
  const std::size_t s = pt.a.cols();
  pt.phi.resize(s);
  pt.objective = 0.0;
  for (std::size_t k = 0; k < s; ++k) {
    const cvec col = pt.a.column(k);
    const double nk = norm2(col);
    if (nk * nk < tol::empty_column) continue;
    const cvec psi = scaled(col, 1.0 / nk);
    ProductSearchOptions opt;
    opt.restarts = restarts;
    opt.seed = derive_seed(seed, k);
    opt.warm_start = pt.phi[k];
    ClosestProductResult r = closest_product(dims, psi, opt);
    if (pt.phi[k] && dims.size() > 2) {
      // never accept a worse vector than the one we already had
      const double prev = std::norm(inner(pt.phi[k]->vector(), psi));
      if (prev > r.f_s) r = {prev, detail::aligned_product(pt.phi[k]->factors(), psi), 0, 0, true, {}};
    }
    pt.objective += nk * nk * r.f_s;
    pt.phi[k] = std::move(r.product);
  }
}

// Columns sqrt(p_k F_k) phi_k, i.e. the unnormalized product vectors aligned
// with the current decomposition.
inline ComplexMatrix product_matrix(const SeeSawPoint& pt) {
  ComplexMatrix b(pt.a.rows(), pt.a.cols());
  for (std::size_t k = 0; k < pt.a.cols(); ++k) {
    if (!pt.phi[k]) continue;
    const cvec phi = pt.phi[k]->vector();
    const cplx ov = inner(phi, pt.a.column(k));  // sqrt(p_k F_k), real >= 0
    b.set_column(k, scaled(phi, ov));
  }
  return b;
}

struct SeeSawRun {
  SeeSawPoint best;
  std::vector<double> trace;
  std::size_t iterations = 0;
  bool converged = false;
};

inline SeeSawRun see_saw(const Dims& dims, const ComplexMatrix& a0, ComplexMatrix y, const RoofOptions& opt,
                         std::uint64_t seed) {
  SeeSawRun run;
  SeeSawPoint cur{a0 * y, {}, 0.0};
  update_products(dims, cur, opt.inner_restarts, derive_seed(seed, 0));
  run.trace.push_back(cur.objective);
  for (std::size_t it = 1; it <= opt.max_iterations; ++it) {
    SeeSawPoint next = cur;
    y = polar_coisometry(a0.adjoint() * product_matrix(cur));
    next.a = a0 * y;
    update_products(dims, next, opt.inner_restarts, derive_seed(seed, it));
    run.iterations = it;
    const double gain = next.objective - cur.objective;
    if (gain < 0.0) {
      // roundoff at the fixed point; keep the better point
      run.converged = true;
      break;
    }
    cur = std::move(next);
    run.trace.push_back(cur.objective);
    if (gain < opt.tolerance) {
      run.converged = true;
      break;
    }
  }
  run.best = std::move(cur);
  return run;
}

// First r rows of a Haar unitary: a uniformly random co-isometry.
inline ComplexMatrix random_coisometry(std::size_t r, std::size_t s, std::uint64_t seed) {
  const ComplexMatrix u = haar_random_unitary(s, seed);
  ComplexMatrix y(r, s);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < s; ++j) y(i, j) = u(i, j);
  return y;
}

}  // namespace detail

/// Decomposition from the purification construction applied to a separable
/// ensemble: the A step against B = [sqrt(q_j) phi_j].
inline Decomposition decomposition_from_ensemble(const DensityMatrix& rho, const SeparableEnsemble& ens) {
  if (ens.dims() != rho.dims()) throw InvalidArgument("decomposition_from_ensemble: dims mismatch");
  const ComplexMatrix a0 = eigen_purification(rho);
  ComplexMatrix b(rho.dim(), ens.size());
  for (std::size_t j = 0; j < ens.size(); ++j) {
    b.set_column(j, scaled(ens.vectors()[j].vector(), std::sqrt(ens.weights()[j])));
  }
  if (ens.size() < a0.cols()) {
    throw InvalidArgument("decomposition_from_ensemble: ensemble smaller than rank(rho)");
  }
  return decomposition_from_columns(rho.dims(), a0 * polar_coisometry(a0.adjoint() * b));
}

/// Maximizes sum_k p_k F_s(psi_k) over decompositions of size opt.s.
inline RoofResult solve_roof(const DensityMatrix& rho, const RoofOptions& opt = {}) {
  if (opt.restarts < 1) throw InvalidArgument("solve_roof: restarts must be >= 1");
  if (opt.max_iterations < 1) throw InvalidArgument("solve_roof: max_iterations must be >= 1");
  if (!(opt.tolerance > 0.0)) throw InvalidArgument("solve_roof: tolerance must be positive");
  const Dims& dims = rho.dims();
  const ComplexMatrix a0 = eigen_purification(rho);
  const std::size_t r = a0.cols();
  const std::size_t s = opt.s ? opt.s : default_decomposition_size(rho);
  if (s < r) {
    throw InvalidArgument("solve_roof: s = " + std::to_string(s) + " is below rank " + std::to_string(r));
  }

  std::optional<detail::SeeSawRun> best;
  std::size_t best_index = 0;
  for (std::size_t j = 0; j < opt.restarts; ++j) {
    const std::uint64_t rs = derive_seed(opt.seed, j);
    detail::SeeSawRun run = detail::see_saw(dims, a0, detail::random_coisometry(r, s, rs), opt, rs);
    if (!best || run.best.objective > best->best.objective) {
      best = std::move(run);
      best_index = j;
    }
  }

  // final value at the full product-search budget
  detail::SeeSawPoint& pt = best->best;
  if (dims.size() > 2) {
    detail::update_products(dims, pt, opt.final_restarts ? opt.final_restarts : default_product_restarts(dims.size()),
                            derive_seed(opt.seed, opt.restarts));
  }

  std::vector<double> weights;
  std::vector<PureState> states;
  std::vector<ProductVector> products;
  std::vector<double> fids;
  for (std::size_t k = 0; k < s; ++k) {
    const cvec col = pt.a.column(k);
    const double nk = norm2(col);
    if (nk * nk < tol::zero_weight || !pt.phi[k]) continue;
    PureState psi = PureState::from_unnormalized(dims, col);
    ProductVector phi = detail::aligned_product(pt.phi[k]->factors(), psi.amplitudes());
    fids.push_back(std::norm(inner(phi.vector(), psi.amplitudes())));
    weights.push_back(nk * nk);
    states.push_back(std::move(psi));
    products.push_back(std::move(phi));
  }
  double total = 0.0;
  for (double p : weights) total += p;
  for (auto& p : weights) p /= total;

  Decomposition dec(std::move(weights), std::move(states));
  double f_s = 0.0;
  for (std::size_t k = 0; k < dec.size(); ++k) f_s += dec.weights()[k] * fids[k];
  f_s = std::min(f_s, 1.0);
  SeparableEnsemble ens = closest_separable_from(dec, products);
  const double resid = stationarity_residual(dec, products);
  return RoofResult{f_s,
                    1.0 - f_s,
                    std::move(dec),
                    std::move(products),
                    std::move(fids),
                    std::move(ens),
                    resid,
                    std::move(best->trace),
                    opt.seed,
                    best_index,
                    best->iterations,
                    best->converged};
}

}  // namespace entroof
