#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "tcheb/chebyshev_system.hpp"
#include "tcheb/moment_space.hpp"
#include "tcheb/simplex_lp.hpp"

namespace tcheb {

enum class Side { Upper, Lower };
enum class Parity { Odd, Even };

/// Support pattern of a principal representation. Interior points plus
/// weights always give exactly k unknowns.
struct RepresentationStructure {
  std::size_t num_points = 0;
  bool includes_a = false;
  bool includes_b = false;
  Parity parity = Parity::Odd;

  std::size_t interior_points() const noexcept {
    return num_points - (includes_a ? 1 : 0) - (includes_b ? 1 : 0);
  }
  std::size_t unknowns() const noexcept { return interior_points() + num_points; }

  friend bool operator==(const RepresentationStructure&, const RepresentationStructure&) = default;
};

RepresentationStructure principal_structure(std::size_t k, Side side);

struct GridLpOptions {
  // Additional nodes merged into the equispaced grid (e.g. the support of
  // the design that generated c0, which guarantees feasibility).
  std::vector<double> extra_nodes;
  double feasibility_tolerance = 1e-8;
};

struct GridLpResult {
  double value = 0.0;
  Design design;
  // Sorted LP nodes and the node indices carrying positive weight.
  std::vector<double> nodes;
  std::vector<std::size_t> support;
  std::vector<double> support_weights;
};

/// Extremizes sum_g w_g objective(x_g) over nonnegative grid weights that
/// reproduce every coordinate of c0. Throws InfeasibleError when c0 is not
/// in the discretized moment space. Basic weights below the feasibility
/// tolerance are dropped from the returned support.
GridLpResult grid_lp_extremum(const ChebyshevSystem& system, const MomentPoint& c0, const RealFunction& objective,
                              Sense sense, std::size_t grid_size, const GridLpOptions& options = {});

struct NewtonOptions {
  double tolerance = 1e-11;
  std::size_t max_iterations = 50;
  // Reciprocal condition number below which the Jacobian is singular.
  double singular_rcond = 1e-14;
};

struct PrincipalResult {
  Design design;
  double residual_norm = 0.0;
  double lp_objective = 0.0;
  std::size_t newton_iterations = 0;
  RepresentationStructure structure;
  // False when c0 turned out to be a boundary point and the merged LP
  // solution was returned instead of a Newton-refined principal design.
  bool refined = true;
};

/// Newton iteration on the k moment equations in the free support points
/// and all weights, keeping points ordered inside (A, B) and weights
/// positive. Throws ConvergenceError or SingularityError.
PrincipalResult refine_newton(const ChebyshevSystem& system, const MomentPoint& c0,
                              const RepresentationStructure& structure, const Design& initial,
                              const NewtonOptions& options = {});

struct PrincipalOptions {
  std::size_t grid_size = 2001;
  // Probe objective used for structure discovery; defaults to
  // Psi_{k-1}(x) (x - A)/(B - A) with x^k as fallback.
  std::optional<Probe> probe;
  std::vector<double> extra_nodes;
  double feasibility_tolerance = 1e-8;
  // gamma gap (relative to max(1, |gamma_upper|)) below which c0 is a
  // boundary point.
  double boundary_tolerance = 1e-9;
  NewtonOptions newton;
};

PrincipalResult upper_principal(const ChebyshevSystem& system, const MomentPoint& c0,
                                const PrincipalOptions& options = {});
PrincipalResult lower_principal(const ChebyshevSystem& system, const MomentPoint& c0,
                                const PrincipalOptions& options = {});
PrincipalResult principal_representation(const ChebyshevSystem& system, const MomentPoint& c0, Side side,
                                         const PrincipalOptions& options = {});

}  // namespace tcheb
