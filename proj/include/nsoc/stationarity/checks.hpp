#pragma once

#include "nsoc/kkt/kkt_solver.hpp"
#include "nsoc/state/state_solver.hpp"

#include <cstdint>
#include <vector>

namespace nsoc::stationarity {

using fe::FeFunction;
using fe::Index;

// Nodal test of chi_i in the convex subdifferential of max at y_i, with
// |y_i| <= zero_tol counted as y_i = 0 and chi compared up to chi_tol.
struct ChiAdmissibilityReport {
  Index n_nodes = 0;
  Index n_zero_band = 0;
  Index n_violations = 0;
  double max_deviation = 0.0;
  std::vector<Index> violating_nodes;  // first few only

  bool passed() const noexcept { return n_violations == 0; }
};

ChiAdmissibilityReport check_chi_admissible(const FeFunction& y, const FeFunction& chi,
                                            double zero_tol = state::kDefaultZeroTol, double chi_tol = 1e-8);

// Euclidean norm of the full limit-system residual at pt.
double check_bouligand_residual(const kkt::ProblemData& data, const kkt::KktPoint& pt);

// Sign condition p <= 0 on the zero band of y.
struct StrongSignReport {
  Index n_zero_band = 0;
  Index n_violations = 0;
  double max_violation = 0.0;
  double violation_fraction = 0.0;  // of zero-band nodes

  bool passed() const noexcept { return n_violations == 0; }
};

StrongSignReport check_strong_sign(const FeFunction& y, const FeFunction& p,
                                   double zero_tol = state::kDefaultZeroTol, double sign_tol = 1e-10);

// Directional derivative of the reduced objective u -> J(S(u), u):
//   F'(u; h) = (y - y_d)^T M S'(u; h) + alpha u^T M h
// evaluated for every sampled h and -h. This samples finitely many
// directions and is therefore only a necessary test of primal stationarity.
struct PrimalStationarityReport {
  std::vector<double> values;  // F'(u; h_k), F'(u; -h_k) interleaved
  double min_value = 0.0;
  Index n_negative = 0;        // values below -tol
  Index n_directions = 0;

  bool passed() const noexcept { return n_negative == 0; }
};

// pt.y must be the state of u = -pt.p / alpha. Throws SolverFailure when a
// derivative solve fails.
PrimalStationarityReport check_primal_stationarity(const kkt::ProblemData& data, const kkt::KktPoint& pt,
                                                   const std::vector<FeFunction>& directions, double tol,
                                                   double zero_tol = state::kDefaultZeroTol);

// 20 uniform random directions in [-1, 1]^n from a fixed seed, then the
// constant function and four nodal bumps near the quadrant centres.
std::vector<FeFunction> sample_directions(const std::shared_ptr<const fe::FeSpace>& space,
                                          std::uint64_t seed = 20240917, int n_random = 20);

// J_h(S_h(u), u) = 1/2 (y - y_d)^T M (y - y_d) + alpha/2 u^T M u. Throws
// SolverFailure if the state solve fails.
double eval_reduced_objective(const kkt::ProblemData& data, const FeFunction& u);

}  // namespace nsoc::stationarity
