#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tcheb/chebyshev_system.hpp"
#include "tcheb/moment_space.hpp"
#include "tcheb/principal_rep.hpp"
#include "tcheb/regression_models.hpp"

namespace tcheb {

enum class Direction { Upper, Lower };
enum class Branch { Identity, OddCase, EvenCase };
enum class Criterion { D, A };

std::string to_string(Direction d);
std::string to_string(Branch b);
std::string to_string(Criterion c);

struct QCheck {
  Eigen::VectorXd q;
  // Integral of Psi_k^Q against the output minus the same for the input.
  double gain = 0.0;
};

struct AugmentedCheck {
  Eigen::VectorXd q;
  CheckReport report;
};

/// Chebyshev checks of the base system and of the augmented systems
/// {Psi_0, ..., Psi_{k-1}, +-Psi_k^Q}. A base of negative orientation is
/// turned positive by negating Psi_{k-1}, which leaves the moment
/// constraints unchanged.
struct PreconditionReport {
  Direction direction = Direction::Upper;
  CheckReport base;
  bool base_flipped = false;
  std::vector<AugmentedCheck> augmented;
  bool passed = false;
  std::string failure;
};

struct ReductionOptions {
  CheckOptions check;
  PrincipalOptions principal;
  double loewner_tolerance = 1e-8;
  // Test hook: negates Psi_k^Q in the augmented systems.
  bool flip_kth = false;
};

struct ReductionReport {
  Design input;
  Design output;
  Direction direction = Direction::Upper;
  Branch branch = Branch::Identity;
  HalfIndex input_index{0};
  std::size_t k = 0;
  MomentPoint moments_in;
  MomentPoint moments_out;
  double loewner_min_eigenvalue = 0.0;
  std::vector<QCheck> q_checks;
  PreconditionReport preconditions;
  double residual_norm = 0.0;
  bool refined = true;
};

struct DominationReport {
  Eigen::VectorXd difference_spectrum;
  bool dominates = false;
  double tolerance = 0.0;
};

PreconditionReport check_preconditions(const PsiSystem& psi, Direction direction,
                                       const ReductionOptions& options = {});

/// The dominating design of the chosen class. Designs of index below k/2
/// are returned unchanged; otherwise the upper (lower) principal
/// representation of their moment point. Throws PreconditionError when the
/// augmented systems fail the Chebyshev check.
ReductionReport reduce_design(const RegressionModel& model, const Eigen::VectorXd& theta, const Design& xi,
                              Direction direction, const ReductionOptions& options = {});

/// Eigenvalues of M(xi1) - M(xi2); dominates iff the smallest is at least
/// -tolerance * max(1, spectral norm of M(xi1), M(xi2)).
DominationReport verify_domination(const RegressionModel& model, const Eigen::VectorXd& theta, const Design& xi1,
                                   const Design& xi2, double tolerance = 1e-8);

/// log det M for D, -trace M^{-1} for A; -infinity when M is singular.
double criterion_value(Criterion criterion, const Eigen::MatrixXd& information);

struct OptimizeOptions {
  std::size_t restarts = 20;
  std::size_t iterations = 500;
  std::uint64_t seed = 0;
  ReductionOptions reduction;
};

struct OptimizeResult {
  Design design;
  double value = 0.0;
  RepresentationStructure structure;
};

/// Multi-start Nelder-Mead over designs with the support pattern of the
/// chosen class. Throws PreconditionError or DegeneracyError.
OptimizeResult optimize_in_class(const RegressionModel& model, const Eigen::VectorXd& theta, Criterion criterion,
                                 Direction direction, const OptimizeOptions& options = {});

}  // namespace tcheb
