#pragma once

// Closest product vector of a pure state, F_s(psi) = max |<phi|psi>|^2 over
// product phi. Exact for two parties (leading Schmidt pair), alternating
// per-party contraction with random restarts otherwise.

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "entroof/errors.hpp"
#include "entroof/linalg.hpp"
#include "entroof/qstate.hpp"
#include "entroof/random.hpp"
#include "entroof/tensor.hpp"

namespace entroof {

namespace tol {
inline constexpr double sweep_improvement = 1e-12;
inline constexpr std::size_t max_sweeps = 10000;
}  // namespace tol

struct ClosestProductResult {
  double f_s = 0.0;
  ProductVector product;  ///< phase chosen so that <product|psi> >= 0
  std::size_t iterations = 0;
  std::size_t restarts_used = 0;
  bool converged = false;
  std::vector<double> overlap_trace;  ///< per-sweep |<phi|psi>|^2 of the winning restart
};

struct ProductSearchOptions {
  std::size_t restarts = 0;  ///< 0 selects 16, or 32 for four or more parties
  std::uint64_t seed = 0;
  double tolerance = tol::sweep_improvement;
  std::size_t max_sweeps = tol::max_sweeps;
  std::optional<ProductVector> warm_start;  ///< replaces the first random start
};

inline std::size_t default_product_restarts(std::size_t parties) { return parties >= 4 ? 32 : 16; }

namespace detail {

inline void require_unit(std::span<const cplx> psi, const char* who) {
  const double n = norm2(psi);
  if (std::abs(n - 1.0) > tol::state_norm) {
    throw InvalidArgument(std::string(who) + ": vector norm " + std::to_string(n) + " differs from 1");
  }
}

// Flat-index strides, party 0 most significant.
inline std::vector<std::size_t> strides(const Dims& dims) {
  std::vector<std::size_t> s(dims.size(), 1);
  for (std::size_t p = dims.size(); p-- > 1;) s[p - 1] = s[p] * dims[p];
  return s;
}

// v[a] = sum over indices with i_party = a of conj(prod_{m != party} x_m[i_m]) psi[i].
inline cvec contract_except(const Dims& dims, std::span<const cplx> psi, const std::vector<cvec>& x,
                            std::size_t party) {
  const auto st = strides(dims);
  cvec v(dims[party]);
  for (std::size_t i = 0; i < psi.size(); ++i) {
    if (psi[i] == cplx{}) continue;
    cplx w = psi[i];
    for (std::size_t m = 0; m < dims.size(); ++m) {
      if (m == party) continue;
      w *= std::conj(x[m][(i / st[m]) % dims[m]]);
    }
    v[(i / st[party]) % dims[party]] += w;
  }
  return v;
}

struct SweepRun {
  std::vector<cvec> factors;
  double f = 0.0;
  std::size_t sweeps = 0;
  bool converged = false;
  std::vector<double> trace;
};

inline SweepRun alternate(const Dims& dims, std::span<const cplx> psi, std::vector<cvec> x, double tolerance,
                          std::size_t max_sweeps) {
  SweepRun run;
  double prev = -1.0;
  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    double f = 0.0;
    for (std::size_t j = 0; j < dims.size(); ++j) {
      cvec v = contract_except(dims, psi, x, j);
      const double nv = norm2(v);
      if (nv == 0.0) {
        // psi is orthogonal to every vector with the other factors fixed;
        // any unit vector keeps the overlap at zero
        v.assign(dims[j], cplx{});
        v[0] = 1.0;
      } else {
        for (auto& z : v) z /= nv;
      }
      x[j] = std::move(v);
      f = nv * nv;
    }
    run.trace.push_back(f);
    run.sweeps = sweep + 1;
    if (f - prev < tolerance) {
      run.converged = true;
      break;
    }
    prev = f;
  }
  run.f = run.trace.back();
  run.factors = std::move(x);
  return run;
}

inline std::vector<cvec> random_factors(const Dims& dims, Engine& eng) {
  std::vector<cvec> x;
  for (auto d : dims) x.push_back(random_unit_vector(d, eng));
  return x;
}

// Rotates the first factor so that <phi|psi> is real and non-negative.
inline ProductVector aligned_product(std::vector<cvec> factors, std::span<const cplx> psi) {
  const cplx ov = inner(tensor_product(factors), psi);
  if (std::abs(ov) > 0.0) {
    const cplx phase = ov / std::abs(ov);
    for (auto& z : factors.front()) z *= phase;
  }
  return ProductVector(std::move(factors));
}

}  // namespace detail

/// Exact F_s of a unit vector on two parties: the squared leading Schmidt
/// coefficient, product = u1 (x) conj(v1) from C = U S V^dagger.
inline ClosestProductResult closest_product_bipartite(const Dims& dims, std::span<const cplx> psi) {
  if (dims.size() != 2) {
    throw InvalidArgument("closest_product_bipartite: needs 2 parties, got " + std::to_string(dims.size()));
  }
  detail::require_unit(psi, "closest_product_bipartite");
  const SVDResult d = svd(coefficient_matrix(psi, dims[0], dims[1]));
  cvec a = d.u.column(0);
  cvec b = d.v.column(0);
  for (auto& z : b) z = std::conj(z);
  const double s1 = d.singular_values.front();
  ProductVector product = detail::aligned_product({std::move(a), std::move(b)}, psi);
  return {s1 * s1, std::move(product), 1, 1, true, {s1 * s1}};
}

/// Best of several alternating-contraction runs. Each run updates the parties
/// cyclically, replacing one factor by the normalized contraction of psi with
/// the others, until a sweep gains less than `tolerance`.
inline ClosestProductResult closest_product_multipartite(const Dims& dims, std::span<const cplx> psi,
                                                         const ProductSearchOptions& opt = {}) {
  if (dims.size() < 2) throw InvalidArgument("closest_product_multipartite: needs at least 2 parties");
  if (total_dim(dims) != psi.size()) throw InvalidArgument("closest_product_multipartite: dims do not match vector");
  detail::require_unit(psi, "closest_product_multipartite");
  const std::size_t restarts = opt.restarts ? opt.restarts : default_product_restarts(dims.size());

  std::optional<detail::SweepRun> best;
  bool any_converged = false;
  for (std::size_t r = 0; r < restarts; ++r) {
    std::vector<cvec> start;
    if (r == 0 && opt.warm_start) {
      if (opt.warm_start->dims() != dims) throw InvalidArgument("closest_product_multipartite: warm start dims");
      start = opt.warm_start->factors();
    } else {
      Engine eng = make_engine(derive_seed(opt.seed, r));
      start = detail::random_factors(dims, eng);
    }
    detail::SweepRun run = detail::alternate(dims, psi, std::move(start), opt.tolerance, opt.max_sweeps);
    any_converged = any_converged || run.converged;
    if (!best || run.f > best->f) best = std::move(run);
  }
  ProductVector product = detail::aligned_product(std::move(best->factors), psi);
  const double ov = std::abs(inner(product.vector(), psi));
  return {ov * ov, std::move(product), best->sweeps, restarts, any_converged, std::move(best->trace)};
}

/// Two parties take the exact path, more take the alternating search, and a
/// single party is its own product vector.
inline ClosestProductResult closest_product(const Dims& dims, std::span<const cplx> psi,
                                            const ProductSearchOptions& opt = {}) {
  if (dims.size() == 1) {
    detail::require_unit(psi, "closest_product");
    return {1.0, ProductVector({cvec(psi.begin(), psi.end())}), 0, 1, true, {1.0}};
  }
  if (dims.size() == 2) return closest_product_bipartite(dims, psi);
  return closest_product_multipartite(dims, psi, opt);
}

inline ClosestProductResult fs_pure_bipartite(const PureState& psi) {
  return closest_product_bipartite(psi.dims(), psi.amplitudes());
}

inline ClosestProductResult fs_pure_multipartite(const PureState& psi, std::size_t restarts, std::uint64_t seed) {
  if (restarts < 1) throw InvalidArgument("fs_pure_multipartite: restarts must be >= 1");
  ProductSearchOptions opt;
  opt.restarts = restarts;
  opt.seed = seed;
  return closest_product_multipartite(psi.dims(), psi.amplitudes(), opt);
}

inline ClosestProductResult fs_pure(const PureState& psi, const ProductSearchOptions& opt = {}) {
  return closest_product(psi.dims(), psi.amplitudes(), opt);
}

/// Largest change of any factor under one more contraction step; zero at an
/// exact fixed point of the alternating search.
inline double product_fixed_point_residual(const Dims& dims, std::span<const cplx> psi, const ProductVector& phi) {
  const auto& x = phi.factors();
  double worst = 0.0;
  for (std::size_t j = 0; j < dims.size(); ++j) {
    cvec v = detail::contract_except(dims, psi, x, j);
    const double nv = norm2(v);
    if (nv == 0.0) continue;
    double diff = 0.0;
    for (std::size_t a = 0; a < v.size(); ++a) diff += std::norm(v[a] / nv - x[j][a]);
    worst = std::max(worst, std::sqrt(diff));
  }
  return worst;
}

}  // namespace entroof
