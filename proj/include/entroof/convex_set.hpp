#pragma once

// Maximal fidelity between rho and the convex hull of a finite set of states
// X = {sigma_1, ..., sigma_m}:
//
//   F_C(rho) = max over q in the simplex of F(rho, sum_k q_k sigma_k)
//            = max over decompositions rho = sum_k p_k rho_k of sum_k p_k F(rho_k, sigma_k).
//
// Block alternating search. With B = [sqrt(q_1) B_1, ..., sqrt(q_m) B_m], B_k a
// purification of sigma_k padded to d columns, the polar factor W of
// A0^dagger B gives A = A0 W whose column blocks A_k carry p_k rho_k = A_k A_k^dagger.
// The weights are then reset to q_k proportional to F(A_k A_k^dagger, sigma_k).
// Neither step lowers F(rho, sigma(q)).

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "entroof/errors.hpp"
#include "entroof/linalg.hpp"
#include "entroof/measures.hpp"
#include "entroof/qstate.hpp"
#include "entroof/random.hpp"

namespace entroof {

struct ConvexSetSpec {
  std::vector<DensityMatrix> extreme_points;
  std::string label;
};

struct ConvexSetOptions {
  std::size_t restarts = 4;
  std::uint64_t seed = 0;
  double tolerance = 1e-13;
  std::size_t max_iterations = 20000;
};

struct ConvexSetResult {
  double f_c = 0.0;
  std::vector<double> q;                ///< weights of the closest state in the hull
  std::vector<double> block_weights;    ///< p_k
  std::vector<ComplexMatrix> blocks;    ///< p_k rho_k, summing to rho
  std::vector<double> objective_trace;  ///< F(rho, sigma(q)) per iteration, winning restart
  std::size_t iterations = 0;
  bool converged = false;
};

/// sum_k q_k sigma_k
inline DensityMatrix hull_state(const ConvexSetSpec& x, const std::vector<double>& q) {
  if (q.size() != x.extreme_points.size()) throw InvalidArgument("hull_state: weight count mismatch");
  const auto& first = x.extreme_points.front();
  ComplexMatrix m(first.dim(), first.dim());
  for (std::size_t k = 0; k < q.size(); ++k) m += x.extreme_points[k].matrix() * q[k];
  return DensityMatrix(first.dims(), m);
}

namespace detail {

inline void require_convex_set(const DensityMatrix& rho, const ConvexSetSpec& x) {
  if (x.extreme_points.empty()) throw InvalidArgument("convex set '" + x.label + "' has no elements");
  for (const auto& s : x.extreme_points)
    if (s.dim() != rho.dim()) {
      throw InvalidArgument("convex set '" + x.label + "': element of dimension " + std::to_string(s.dim()) +
                            " against state of dimension " + std::to_string(rho.dim()));
    }
}

// Purification of sigma padded with zero columns to width d.
inline ComplexMatrix padded_purification(const DensityMatrix& sigma) {
  const ComplexMatrix b = eigen_purification(sigma);
  ComplexMatrix out(sigma.dim(), sigma.dim());
  for (std::size_t j = 0; j < b.cols(); ++j) out.set_column(j, b.column(j));
  return out;
}

inline ComplexMatrix column_block(const ComplexMatrix& a, std::size_t first, std::size_t width) {
  ComplexMatrix out(a.rows(), width);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < width; ++j) out(i, j) = a(i, first + j);
  return out;
}

struct HullRun {
  std::vector<double> q;
  ComplexMatrix a;
  double value = 0.0;
  std::vector<double> trace;
  std::size_t iterations = 0;
  bool converged = false;
};

inline HullRun hull_see_saw(const ComplexMatrix& a0, const std::vector<ComplexMatrix>& purif, std::vector<double> q,
                            const ConvexSetOptions& opt) {
  const std::size_t d = a0.rows();
  const std::size_t m = purif.size();
  auto stack = [&](const std::vector<double>& w) {
    ComplexMatrix b(d, d * m);
    for (std::size_t k = 0; k < m; ++k) {
      const double sq = std::sqrt(w[k]);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) b(i, k * d + j) = sq * purif[k](i, j);
    }
    return b;
  };

  HullRun run;
  // F(rho, sigma(q)) = || A0^dagger B ||_1^2, maximized over A = A0 W by the polar factor
  auto a_step = [&](const std::vector<double>& w, ComplexMatrix& a) {
    const ComplexMatrix mtx = a0.adjoint() * stack(w);
    const double root = nuclear_norm(mtx);
    a = a0 * polar_coisometry(mtx);
    return std::min(1.0, root * root);
  };

  ComplexMatrix a;
  double value = a_step(q, a);
  run.trace.push_back(value);
  for (std::size_t it = 1; it <= opt.max_iterations; ++it) {
    std::vector<double> nq(m);
    double total = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const double root = nuclear_norm(column_block(a, k * d, d).adjoint() * purif[k]);
      nq[k] = root * root;
      total += nq[k];
    }
    for (auto& x : nq) x /= total;
    ComplexMatrix na;
    const double nv = a_step(nq, na);
    run.iterations = it;
    if (nv < value) {
      run.converged = true;
      break;
    }
    const double gain = nv - value;
    q = std::move(nq);
    a = std::move(na);
    value = nv;
    run.trace.push_back(value);
    if (gain < opt.tolerance) {
      run.converged = true;
      break;
    }
  }
  run.q = std::move(q);
  run.a = std::move(a);
  run.value = value;
  return run;
}

inline std::vector<double> random_simplex_point(std::size_t m, Engine& eng) {
  std::exponential_distribution<double> ex(1.0);
  std::vector<double> q(m);
  double total = 0.0;
  for (auto& x : q) total += (x = ex(eng));
  for (auto& x : q) x /= total;
  return q;
}

}  // namespace detail

/// F_C(rho) for the hull of x, with the maximizing weights and the matching
/// decomposition of rho into one block per element of x.
inline ConvexSetResult convex_set_fidelity(const DensityMatrix& rho, const ConvexSetSpec& x,
                                           const ConvexSetOptions& opt = {}) {
  detail::require_convex_set(rho, x);
  if (opt.restarts < 1) throw InvalidArgument("convex_set_fidelity: restarts must be >= 1");
  const std::size_t m = x.extreme_points.size();
  const std::size_t d = rho.dim();
  const ComplexMatrix a0 = eigen_purification(rho);
  std::vector<ComplexMatrix> purif;
  for (const auto& s : x.extreme_points) purif.push_back(detail::padded_purification(s));

  std::optional<detail::HullRun> best;
  for (std::size_t j = 0; j < opt.restarts; ++j) {
    std::vector<double> q(m, 1.0 / static_cast<double>(m));
    if (j > 0) {
      Engine eng = make_engine(derive_seed(opt.seed, j));
      q = detail::random_simplex_point(m, eng);
    }
    detail::HullRun run = detail::hull_see_saw(a0, purif, std::move(q), opt);
    if (!best || run.value > best->value) best = std::move(run);
  }

  ConvexSetResult out;
  out.f_c = best->value;
  out.q = best->q;
  for (std::size_t k = 0; k < m; ++k) {
    const ComplexMatrix ak = detail::column_block(best->a, k * d, d);
    ComplexMatrix block = ak * ak.adjoint();
    out.block_weights.push_back(block.trace().real());
    out.blocks.push_back(std::move(block));
  }
  out.objective_trace = std::move(best->trace);
  out.iterations = best->iterations;
  out.converged = best->converged;
  return out;
}

}  // namespace entroof
