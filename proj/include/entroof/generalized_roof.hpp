#pragma once

// Convex roof of f(E_G) for a convex f with f(0) = 0:
//
//   min over decompositions of sum_k p_k f(1 - F_s(psi_k)).
//
// Starts from the solve_roof decomposition and improves it by projected
// gradient descent on the co-isometry Y (A = A0 Y), retracting with the
// polar factor and accepting only steps that lower the objective.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "entroof/errors.hpp"
#include "entroof/geometric.hpp"
#include "entroof/linalg.hpp"
#include "entroof/roofsolver.hpp"

namespace entroof {

/// f and f' on [0, 1).
struct RoofFunction {
  std::string name;
  std::function<double(double)> value;
  std::function<double(double)> derivative;
};

inline RoofFunction identity_roof_function() {
  return {"identity", [](double x) { return x; }, [](double) { return 1.0; }};
}

/// Bures: 2 - 2 sqrt(1 - x)
inline RoofFunction bures_roof_function() {
  return {"bures", [](double x) { return 2.0 - 2.0 * std::sqrt(1.0 - x); },
          [](double x) { return 1.0 / std::sqrt(1.0 - x); }};
}

/// 1 - sqrt(1 - x); its roof is 1 - max sum_k p_k sqrt(F_s(psi_k)).
inline RoofFunction root_fidelity_roof_function() {
  return {"root-fidelity", [](double x) { return 1.0 - std::sqrt(1.0 - x); },
          [](double x) { return 0.5 / std::sqrt(1.0 - x); }};
}

/// Checks f(0) = 0, f >= 0 and midpoint convexity on a grid over [0, 0.999].
inline void validate_roof_function(const RoofFunction& f) {
  if (!f.value || !f.derivative) throw InvalidArgument("roof function '" + f.name + "' is incomplete");
  if (std::abs(f.value(0.0)) > 1e-12) throw InvalidArgument("roof function '" + f.name + "': f(0) != 0");
  constexpr int n = 1000;
  constexpr double h = 0.999 / n;
  for (int i = 0; i <= n; ++i) {
    const double x = i * h;
    const double v = f.value(x);
    if (!std::isfinite(v) || v < -1e-12) {
      throw InvalidArgument("roof function '" + f.name + "' is negative or not finite at " + std::to_string(x));
    }
    if (i > 0 && i < n && f.value(x - h) + f.value(x + h) - 2.0 * v < -1e-10) {
      throw InvalidArgument("roof function '" + f.name + "' is not convex near " + std::to_string(x));
    }
  }
}

struct GeneralizedRoofOptions {
  RoofOptions roof;  ///< options of the solve_roof seed run
  std::size_t max_iterations = 2000;
  double tolerance = 1e-14;
};

struct GeneralizedRoofResult {
  double value = 0.0;
  double seed_value = 0.0;  ///< objective at the solve_roof decomposition
  Decomposition decomposition;
  std::vector<double> objective_trace;  ///< non-increasing
  std::size_t iterations = 0;
  bool converged = false;
};

namespace detail {

struct RoofColumns {
  ComplexMatrix a;
  std::vector<std::optional<ProductVector>> phi;
  std::vector<double> fid;
  double objective = 0.0;
};

inline void evaluate_columns(const Dims& dims, const RoofFunction& f, RoofColumns& c, std::size_t restarts,
                             std::uint64_t seed) {
  const std::size_t s = c.a.cols();
  c.phi.resize(s);
  c.fid.assign(s, 1.0);
  c.objective = 0.0;
  for (std::size_t k = 0; k < s; ++k) {
    const cvec col = c.a.column(k);
    const double nk = norm2(col);
    if (nk * nk < tol::empty_column) continue;
    const cvec psi = scaled(col, 1.0 / nk);
    ProductSearchOptions opt;
    opt.restarts = restarts;
    opt.seed = derive_seed(seed, k);
    opt.warm_start = c.phi[k];
    ClosestProductResult r = closest_product(dims, psi, opt);
    c.fid[k] = std::min(1.0, r.f_s);
    c.phi[k] = std::move(r.product);
    c.objective += nk * nk * f.value(1.0 - c.fid[k]);
  }
}

}  // namespace detail

inline GeneralizedRoofResult solve_generalized_roof(const DensityMatrix& rho, const RoofFunction& f,
                                                    const GeneralizedRoofOptions& opt = {}) {
  validate_roof_function(f);
  const RoofResult seed = solve_roof(rho, opt.roof);
  const Dims& dims = rho.dims();
  const ComplexMatrix a0 = eigen_purification(rho);
  const std::size_t r = a0.cols();
  const std::size_t s = std::max(seed.decomposition.size(), r);

  // Y = diag(1/lambda) A0^dagger A for the seed columns, re-orthonormalized
  ComplexMatrix a(rho.dim(), s);
  for (std::size_t k = 0; k < seed.decomposition.size(); ++k) {
    a.set_column(k, scaled(seed.decomposition.states()[k].amplitudes(), std::sqrt(seed.decomposition.weights()[k])));
  }
  ComplexMatrix y = a0.adjoint() * a;
  for (std::size_t i = 0; i < r; ++i) {
    const double root = norm2(a0.column(i));
    const double lambda = root * root;
    for (std::size_t j = 0; j < s; ++j) y(i, j) /= lambda;
  }
  y = polar_coisometry(y);

  const std::size_t restarts = tol::roof_inner_restarts;
  detail::RoofColumns cur{a0 * y, {}, {}, 0.0};
  detail::evaluate_columns(dims, f, cur, restarts, opt.roof.seed);

  GeneralizedRoofResult out{cur.objective, cur.objective, seed.decomposition, {cur.objective}, 0, false};
  double step = 1.0;
  for (std::size_t it = 1; it <= opt.max_iterations; ++it) {
    // Euclidean gradient with respect to conj(A), column by column
    ComplexMatrix g(rho.dim(), s);
    for (std::size_t k = 0; k < s; ++k) {
      if (!cur.phi[k]) continue;
      const cvec col = cur.a.column(k);
      const cvec phi = cur.phi[k]->vector();
      const double e = 1.0 - cur.fid[k];
      const cplx ov = inner(phi, col);
      cvec gk(col.size());
      for (std::size_t i = 0; i < col.size(); ++i) {
        gk[i] = f.value(e) * col[i] - f.derivative(e) * (phi[i] * ov - cur.fid[k] * col[i]);
      }
      g.set_column(k, gk);
    }
    const ComplexMatrix gy = a0.adjoint() * g;
    const ComplexMatrix sym = (gy * y.adjoint() + y * gy.adjoint()) * 0.5;
    const ComplexMatrix dir = gy - sym * y;
    const double dnorm = dir.frobenius_norm();
    out.iterations = it;
    if (dnorm < 1e-12) {
      out.converged = true;
      break;
    }

    bool accepted = false;
    step = std::min(step * 2.0, 1e3);
    for (int bt = 0; bt < 50; ++bt) {
      const ComplexMatrix ny = polar_coisometry(y - dir * step);
      detail::RoofColumns trial{a0 * ny, cur.phi, {}, 0.0};
      detail::evaluate_columns(dims, f, trial, restarts, derive_seed(opt.roof.seed, it));
      if (trial.objective < cur.objective - 1e-4 * step * dnorm * dnorm) {
        const double gain = cur.objective - trial.objective;
        y = ny;
        cur = std::move(trial);
        out.objective_trace.push_back(cur.objective);
        accepted = true;
        if (gain < opt.tolerance) out.converged = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      out.converged = true;
      break;
    }
    if (out.converged) break;
  }

  out.value = cur.objective;
  if (out.value < out.seed_value) out.decomposition = decomposition_from_columns(dims, cur.a);
  return out;
}

}  // namespace entroof
