#pragma once

// One-call summary of every measure for a state. Two-qubit states use the
// concurrence closed forms, pure states the closest-product search, and
// other mixed states the roof solver.

#include <cmath>
#include <optional>
#include <string>

#include "entroof/geometric.hpp"
#include "entroof/measures.hpp"
#include "entroof/qstate.hpp"
#include "entroof/roofsolver.hpp"

namespace entroof {

struct MeasureReport {
  Dims dims;
  std::string source;  ///< "closed-form", "pure" or "roof"
  std::optional<double> concurrence;
  std::optional<double> e_formation;
  double e_geometric = 0.0;
  double e_bures = 0.0;
  double e_groverian = 0.0;
  double f_separability = 1.0;
  double entropy = 0.0;
  double er_lower_bound = 0.0;
};

inline MeasureReport report_all(const DensityMatrix& rho, const RoofOptions& opt = {}) {
  MeasureReport r;
  r.dims = rho.dims();
  if (rho.is_two_qubit()) {
    const TwoQubitInvariants inv = two_qubit_invariants(rho);
    r.source = "closed-form";
    r.concurrence = inv.concurrence;
    r.e_formation = formation_from_root(inv.root);
    r.f_separability = fs_from_root(inv.root);
  } else if (rho.rank() == 1) {
    r.source = "pure";
    const cvec psi = rho.spectrum().eigenvectors.column(rho.dim() - 1);
    ProductSearchOptions po;
    po.seed = opt.seed;
    if (opt.final_restarts) po.restarts = opt.final_restarts;
    r.f_separability = std::min(1.0, closest_product(rho.dims(), normalized(psi), po).f_s);
  } else {
    r.source = "roof";
    r.f_separability = solve_roof(rho, opt).f_s;
  }
  r.e_geometric = 1.0 - r.f_separability;
  r.e_bures = bures_measure(r.f_separability);
  r.e_groverian = groverian_measure(r.f_separability);
  r.entropy = von_neumann_entropy(rho);
  r.er_lower_bound = er_lower_bound(rho, r.e_geometric);
  return r;
}

}  // namespace entroof
