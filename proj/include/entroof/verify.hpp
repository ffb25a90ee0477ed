#pragma once

// Verification campaigns. Each suite draws n seeded samples, checks them
// independently and returns one row per sample in sample order. Samples run
// on a small thread pool; results do not depend on the thread count.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "entroof/convex_set.hpp"
#include "entroof/errors.hpp"
#include "entroof/measures.hpp"
#include "entroof/qstate.hpp"
#include "entroof/random.hpp"
#include "entroof/roofsolver.hpp"

namespace entroof {

namespace tol {
inline constexpr double verify_closed_form = 1e-6;
inline constexpr double verify_round_trip = 1e-6;
inline constexpr double verify_concurrence_spread = 1e-4;
inline constexpr double verify_stationarity = 1e-5;
inline constexpr double verify_witness = 1e-12;
inline constexpr double verify_inequality_slack = 1e-8;
inline constexpr double verify_hull_identity = 1e-6;
}  // namespace tol

enum class VerifySuite { two_qubit_roof, inequalities, stationarity, appendix_a };

inline const std::vector<std::pair<std::string, VerifySuite>>& verify_suite_names() {
  static const std::vector<std::pair<std::string, VerifySuite>> names = {
      {"two-qubit-roof", VerifySuite::two_qubit_roof},
      {"inequalities", VerifySuite::inequalities},
      {"stationarity", VerifySuite::stationarity},
      {"appendix-a", VerifySuite::appendix_a},
  };
  return names;
}

/// One sample. `values` line up with VerifyReport::columns; NaN marks a check
/// that does not apply to the sample.
struct VerifySample {
  std::string label;
  std::uint64_t seed = 0;
  std::vector<double> values;
  bool pass = true;
  std::optional<DensityMatrix> state;  ///< input, for reproduction files
};

struct VerifyReport {
  std::string suite;
  std::vector<std::string> columns;
  std::vector<double> thresholds;  ///< per column; NaN when the column is informational
  std::vector<VerifySample> samples;

  bool passed() const {
    return std::all_of(samples.begin(), samples.end(), [](const VerifySample& s) { return s.pass; });
  }

  /// Largest value of a column over all samples where it applies.
  double worst(std::size_t column) const {
    double w = -std::numeric_limits<double>::infinity();
    for (const auto& s : samples)
      if (!std::isnan(s.values[column])) w = std::max(w, s.values[column]);
    return w;
  }
};

struct VerifyOptions {
  std::size_t n = 100;
  std::uint64_t seed = 0;
  RoofOptions roof;          ///< seed field is replaced per sample
  std::size_t threads = 0;   ///< 0: hardware concurrency
};

namespace detail {

inline constexpr double not_applicable = std::numeric_limits<double>::quiet_NaN();

inline void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n && !failed; i = next++) {
        try {
          body(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

// Marks the sample failed when a value exceeds its column threshold.
inline void grade(VerifySample& s, const std::vector<double>& thresholds) {
  for (std::size_t c = 0; c < thresholds.size(); ++c) {
    if (std::isnan(thresholds[c]) || std::isnan(s.values[c])) continue;
    if (!(s.values[c] <= thresholds[c])) s.pass = false;
  }
}

inline DensityMatrix sample_state(const Dims& dims, std::size_t rank, std::uint64_t seed) {
  Engine eng = make_engine(seed);
  return DensityMatrix(dims, random_density_matrix(dims, rank, eng));
}

inline RoofOptions sample_roof_options(const VerifyOptions& opt, std::uint64_t seed) {
  RoofOptions r = opt.roof;
  r.seed = seed;
  return r;
}

// Two-qubit roof against the closed form, the separable-state round trip
// and the equal-concurrence structure of the optimal decomposition.
inline VerifyReport verify_two_qubit_roof(const VerifyOptions& opt) {
  VerifyReport rep{"two-qubit-roof",
                   {"rank", "f_s", "closed_form_deviation", "round_trip_deviation", "concurrence_spread"},
                   {not_applicable, not_applicable, tol::verify_closed_form, tol::verify_round_trip,
                    tol::verify_concurrence_spread},
                   std::vector<VerifySample>(opt.n)};
  parallel_for(opt.n, opt.threads, [&](std::size_t i) {
    VerifySample& s = rep.samples[i];
    s.seed = derive_seed(opt.seed, i);
    const std::size_t rank = 1 + i % 4;
    const DensityMatrix rho = sample_state({2, 2}, rank, s.seed);
    const RoofResult r = solve_roof(rho, sample_roof_options(opt, s.seed));
    const double closed = fs_2q(rho);
    const double round_trip = std::abs(fidelity(rho, assemble(r.ensemble)) - r.f_s);
    s.label = "random";
    s.values = {static_cast<double>(rank), r.f_s, std::abs(r.f_s - closed), round_trip,
                two_qubit_schmidt_uniformity(r.decomposition)};
    s.state = rho;
    grade(s, rep.thresholds);
  });
  return rep;
}

// Stationarity residual of solver outputs, plus the Bell-pair decomposition
// of the separable mixture (|Phi+><Phi+| + |Psi+><Psi+|)/2: stationary, yet
// its objective 1/2 is far below F_s = 1.
inline VerifyReport verify_stationarity(const VerifyOptions& opt) {
  VerifyReport rep{"stationarity",
                   {"rank", "residual", "objective", "f_s", "optimality_gap"},
                   {not_applicable, tol::verify_stationarity, not_applicable, not_applicable, not_applicable},
                   std::vector<VerifySample>(opt.n + 1)};
  {
    VerifySample& s = rep.samples[0];
    const double h = M_SQRT1_2;
    const PureState phi({2, 2}, {h, 0, 0, h});
    const PureState psi({2, 2}, {0, h, h, 0});
    const Decomposition dec({0.5, 0.5}, {phi, psi});
    const auto products = closest_products(dec);
    const DensityMatrix rho({2, 2}, dec.reconstruct());
    RoofOptions ro = sample_roof_options(opt, opt.seed);
    const double fs = solve_roof(rho, ro).f_s;
    const double residual = stationarity_residual(dec, products);
    const double objective = roof_objective(dec, products);
    s.label = "bell-witness";
    s.seed = opt.seed;
    s.values = {2.0, residual, objective, fs, fs - objective};
    s.state = rho;
    s.pass = residual <= tol::verify_witness && std::abs(objective - 0.5) <= tol::verify_witness &&
             fs >= 1.0 - tol::verify_closed_form;
  }
  parallel_for(opt.n, opt.threads, [&](std::size_t i) {
    VerifySample& s = rep.samples[i + 1];
    s.seed = derive_seed(opt.seed, i);
    const std::size_t rank = 1 + i % 4;
    const DensityMatrix rho = sample_state({2, 2}, rank, s.seed);
    const RoofResult r = solve_roof(rho, sample_roof_options(opt, s.seed));
    s.label = "random";
    s.values = {static_cast<double>(rank), r.stationarity_residual, r.f_s, r.f_s, 0.0};
    s.state = rho;
    grade(s, rep.thresholds);
  });
  return rep;
}

// (rho, sigma) with supp rho inside supp sigma, so S(rho||sigma) is finite.
// Every fourth pair has a rank-deficient sigma and rho compressed onto its
// support; otherwise sigma has full rank.
inline std::pair<DensityMatrix, DensityMatrix> random_supported_pair(const Dims& dims, std::size_t index,
                                                                     Engine& eng) {
  const std::size_t d = total_dim(dims);
  const std::size_t rank_rho = 1 + std::uniform_int_distribution<std::size_t>(0, d - 1)(eng);
  const bool deficient = index % 4 == 3;
  DensityMatrix sigma(dims, random_density_matrix(dims, deficient ? d - 1 : d, eng));
  ComplexMatrix r = random_density_matrix(dims, rank_rho, eng);
  if (deficient) {
    const HermitianEig es = sigma.spectrum();
    ComplexMatrix proj(d, d);
    for (std::size_t j = 0; j < d; ++j) {
      if (es.eigenvalues[j] <= 1e-10) continue;
      const cvec v = es.eigenvectors.column(j);
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) proj(a, b) += v[a] * std::conj(v[b]);
    }
    r = proj * r * proj;
    r = r * (1.0 / r.trace().real());
    r = (r + r.adjoint()) * 0.5;
  }
  return {DensityMatrix(dims, r), std::move(sigma)};
}

// Random pairs in dimensions 2, 3, 4 (cycling). Each slack is a violation
// amount, so a check passes when its value is <= the slack tolerance.
//   fidelity_bound:  S(rho||sigma) >= -S(rho) - log2 F(rho, sigma)
//   overlap_bound:   F(rho, sigma) >= Tr[rho sigma]
// Dimension 4 samples are also solved as two qubits:
//   root_fidelity:   sqrt(F_s(rho)) >= sum_i p_i sqrt(F_s(psi_i))
//   er_bound:        S(rho||sigma_sep) >= max{0, -log2(1 - E_G) - S(rho)}
inline VerifyReport verify_inequalities(const VerifyOptions& opt) {
  const double slack = tol::verify_inequality_slack;
  VerifyReport rep{"inequalities",
                   {"dim", "fidelity_bound_violation", "overlap_bound_violation", "root_fidelity_violation",
                    "er_bound_violation"},
                   {not_applicable, slack, slack, slack, slack},
                   std::vector<VerifySample>(opt.n)};
  parallel_for(opt.n, opt.threads, [&](std::size_t i) {
    VerifySample& s = rep.samples[i];
    s.seed = derive_seed(opt.seed, i);
    const std::size_t d = 2 + i % 3;
    const Dims dims = d == 4 ? Dims{2, 2} : Dims{d};
    Engine eng = make_engine(s.seed);
    const auto [rho, sigma] = random_supported_pair(dims, i, eng);

    const double f = fidelity(rho, sigma);
    const double rel = relative_entropy(rho, sigma);
    const double sr = von_neumann_entropy(rho);
    const double fid_bound = std::isfinite(rel) ? std::max(0.0, -sr - std::log2(f) - rel) : 0.0;
    const double overlap = (rho.matrix() * sigma.matrix()).trace().real();
    double root_violation = not_applicable;
    double er_violation = not_applicable;
    if (d == 4) {
      const RoofResult r = solve_roof(rho, sample_roof_options(opt, s.seed));
      double mixed = 0.0;
      for (std::size_t k = 0; k < r.decomposition.size(); ++k) {
        mixed += r.decomposition.weights()[k] * std::sqrt(r.member_fidelities[k]);
      }
      root_violation = std::max(0.0, mixed - std::sqrt(r.f_s));
      const double bound = er_lower_bound(rho, std::max(0.0, r.e_g));
      const double upper = relative_entropy(rho, assemble(r.ensemble));
      er_violation = std::isfinite(upper) ? std::max(0.0, bound - upper) : 0.0;
    }
    s.label = "random";
    s.values = {static_cast<double>(d), fid_bound, std::max(0.0, overlap - f), root_violation, er_violation};
    s.state = rho;
    grade(s, rep.thresholds);
  });
  return rep;
}

// Hull fidelity on random instances (dimension 2 or 3, two or three extreme
// points). Every grid point of the simplex is feasible, so the solver value
// may not fall below the best grid value; the block decomposition must
// reproduce rho and satisfy sum_k p_k F(rho_k, sigma_k) = F_C.
inline VerifyReport verify_appendix_a(const VerifyOptions& opt) {
  VerifyReport rep{"appendix-a",
                   {"dim", "set_size", "f_c", "grid_excess", "identity_deviation", "reconstruction_error"},
                   {not_applicable, not_applicable, not_applicable, tol::verify_inequality_slack,
                    tol::verify_hull_identity, tol::verify_hull_identity},
                   std::vector<VerifySample>(opt.n)};
  parallel_for(opt.n, opt.threads, [&](std::size_t i) {
    VerifySample& s = rep.samples[i];
    s.seed = derive_seed(opt.seed, i);
    const std::size_t d = 2 + i % 2;
    const std::size_t m = 2 + (i / 2) % 2;
    Engine eng = make_engine(s.seed);
    auto random_rank = [&] { return 1 + std::uniform_int_distribution<std::size_t>(0, d - 1)(eng); };
    const DensityMatrix rho({d}, random_density_matrix({d}, random_rank(), eng));
    ConvexSetSpec x;
    x.label = "random";
    for (std::size_t k = 0; k < m; ++k) x.extreme_points.emplace_back(Dims{d}, random_density_matrix({d}, random_rank(), eng));

    ConvexSetOptions co;
    co.seed = s.seed;
    co.restarts = std::max<std::size_t>(1, opt.roof.restarts / 2);
    const ConvexSetResult r = convex_set_fidelity(rho, x, co);

    constexpr int steps = 40;
    double grid = 0.0;
    std::vector<double> q(m);
    for (int a = 0; a <= steps; ++a) {
      for (int b = 0; b <= (m == 3 ? steps - a : 0); ++b) {
        q[0] = static_cast<double>(a) / steps;
        if (m == 2) {
          q[1] = 1.0 - q[0];
        } else {
          q[1] = static_cast<double>(b) / steps;
          q[2] = 1.0 - q[0] - q[1];
        }
        grid = std::max(grid, fidelity(rho, hull_state(x, q)));
      }
    }
    double identity = 0.0;
    ComplexMatrix sum(d, d);
    for (std::size_t k = 0; k < m; ++k) {
      sum += r.blocks[k];
      const double p = r.block_weights[k];
      if (p > 1e-10) identity += p * fidelity(DensityMatrix({d}, r.blocks[k] * (1.0 / p)), x.extreme_points[k]);
    }
    s.label = "random";
    s.values = {static_cast<double>(d), static_cast<double>(m), r.f_c, std::max(0.0, grid - r.f_c),
                std::abs(identity - r.f_c), max_abs_diff(sum, rho.matrix())};
    s.state = rho;
    grade(s, rep.thresholds);
  });
  return rep;
}

}  // namespace detail

inline VerifyReport run_verify(VerifySuite suite, const VerifyOptions& opt) {
  if (opt.n < 1) throw InvalidArgument("verify: n must be >= 1");
  switch (suite) {
    case VerifySuite::two_qubit_roof:
      return detail::verify_two_qubit_roof(opt);
    case VerifySuite::inequalities:
      return detail::verify_inequalities(opt);
    case VerifySuite::stationarity:
      return detail::verify_stationarity(opt);
    case VerifySuite::appendix_a:
      return detail::verify_appendix_a(opt);
  }
  throw InvalidArgument("verify: unknown suite");
}

}  // namespace entroof
