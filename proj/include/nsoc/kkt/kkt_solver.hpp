#pragma once

#include "nsoc/fe/operators.hpp"
#include "nsoc/newton_report.hpp"
#include "nsoc/sparse/csr_matrix.hpp"

#include <memory>
#include <utility>
#include <vector>

namespace nsoc::kkt {

using fe::FeFunction;
using fe::FeOperators;
using fe::Index;
using fe::Vector;
using sparse::CsrMatrix;

// Candidate solution (state, adjoint, multiplier) of the discrete system
//   A y + D max(0, y) + (1/alpha) M p = M f
//   A p + D (chi .* p)              = M (y - y_d)
//   y = prox_gamma(y + gamma chi)   (nodal; chi in the subdifferential of max at y)
struct KktPoint {
  FeFunction y;
  FeFunction p;
  FeFunction chi;

  static KktPoint zeros(const std::shared_ptr<const fe::FeSpace>& space);
};

struct KktConfig {
  double alpha = 1e-4;           // Tikhonov weight
  double gamma = 1e-4;           // prox step
  double tol_residual = 1e-12;   // on the Euclidean norm of the full residual
  int max_iter = 25;
  double tol_p_critical = 1e-14; // |p_i| below this counts as p_i = 0

  // Throws ConfigError.
  void validate() const;
};

struct ProblemData {
  std::shared_ptr<const FeOperators> ops;
  FeFunction f;    // state-equation inhomogeneity
  FeFunction y_d;  // desired state
  KktConfig config;

  ProblemData(std::shared_ptr<const FeOperators> ops, FeFunction f, FeFunction y_d, KktConfig config);
  Index size() const noexcept { return ops->size(); }
};

struct IndexSets {
  std::vector<Index> i_plus;   // y_i > 0
  std::vector<Index> i_gamma;  // y_i + gamma chi_i outside [0, gamma]
  std::vector<Index> i_crit;   // |p_i| <= tol and y_i + gamma chi_i in [0, gamma]
};

// Stacked residual (r_state, r_adjoint, r_prox), length 3n. The prox block is
// scaled by the lumped mass: r_prox = D (y - prox_gamma(y + gamma chi)).
Vector residual(const ProblemData& data, const KktPoint& pt);

IndexSets index_sets(const KktPoint& pt, const KktConfig& config);

// Generalized Jacobian of residual() in the unknown order (y, p, chi):
//   [ A + D diag(1_I+)       (1/alpha) M        0                    ]
//   [ -M                     A + D diag(chi)    D diag(p)            ]
//   [ D - D diag(1_Igamma)   0                  -gamma D diag(1_Igamma) ]
CsrMatrix newton_matrix(const ProblemData& data, const KktPoint& pt, const IndexSets& sets);

// Replaces the prox row of every critical index by the unit row on chi_i with
// zero right-hand side, so the step leaves chi_i unchanged. The chi_i columns
// in the first two block rows are kept.
std::pair<CsrMatrix, Vector> apply_active_set_fix(const CsrMatrix& matrix, Vector rhs, const IndexSets& sets);

// Undamped semi-smooth Newton with the active-set fix. Stops when the
// residual norm drops below tol_residual (converged) or after max_iter steps
// or on a singular Newton matrix (failure, reported not thrown).
std::pair<KktPoint, NewtonReport> solve_kkt(const ProblemData& data, const KktPoint& init);

// u = -p / alpha from the gradient equation.
FeFunction recover_control(const KktPoint& pt, double alpha);

}  // namespace nsoc::kkt
