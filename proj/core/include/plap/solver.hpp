#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "plap/assembly.hpp"
#include "plap/linalg.hpp"
#include "plap/space.hpp"

namespace plap {

struct LineSearchConfig {
  double factor{0.5};
  int max_halvings{30};
  double armijo{1e-4};
};

struct SolverConfig {
  double p_target{2.0};
  /// Stage exponents; empty selects continuation_schedule(p_target).
  std::vector<double> continuation;
  /// Stage converged when ||r|| <= newton_tol * (1 + ||r_0||), r in scaled units.
  double newton_tol{1e-10};
  int newton_max_iter{50};
  double eps{1e-8};
  LineSearchConfig line_search;
  CgConfig cg;
};

struct StageRecord {
  double p{0.0};
  int newton_iterations{0};
  /// Final residual l2 norm at the stage exponent, in gradient-scaled units.
  double residual_norm{0.0};
  /// J[U; p] with eps = 0.
  double energy{0.0};
  /// Gradient scale used for the stage (max cell gradient of its initial iterate).
  double gradient_scale{1.0};
  std::size_t cg_iterations{0};
  bool converged{false};
};

struct SolveReport {
  std::vector<StageRecord> stages;
  std::size_t total_cg_iterations{0};
};

struct SolveResult {
  DiscreteFunction solution;
  SolveReport report;
};

/// Thrown when a stage cannot be converged, even after one bisection retry.
/// Carries the solution of the last converged stage, when there is one.
class SolveError : public std::runtime_error {
 public:
  SolveError(const std::string& what, std::optional<DiscreteFunction> last_solution,
             std::optional<double> last_p, SolveReport report)
      : std::runtime_error(what), last_solution_(std::move(last_solution)), last_p_(last_p),
        report_(std::move(report)) {}
  const std::optional<DiscreteFunction>& last_solution() const { return last_solution_; }
  const std::optional<double>& last_p() const { return last_p_; }
  const SolveReport& report() const { return report_; }

 private:
  std::optional<DiscreteFunction> last_solution_;
  std::optional<double> last_p_;
  SolveReport report_;
};

/// 2, 3, ..., 10, then previous * 1.25 rounded down, clipped at p_target.
/// Throws std::invalid_argument for p_target < 2.
std::vector<double> continuation_schedule(double p_target);
/// Same rule started after p_start (exclusive); ends at p_target.
std::vector<double> continuation_schedule(double p_start, double p_target);

struct NewtonStepReport {
  double lambda{0.0};
  double residual_norm{0.0};
  double step_norm{0.0};
  double energy_before{0.0};
  double energy_after{0.0};
  std::size_t cg_iterations{0};
  int halvings{0};
};

struct NewtonStepResult {
  DiscreteFunction next;
  NewtonStepReport report;
};

/// One damped Newton step on the free dofs: J d = -r, then backtracking until
/// E(u + lambda d) <= E(u) + armijo * lambda * E'(u) d. Energies are in the
/// assembler's scaled units. Throws CgError or std::runtime_error on failure.
NewtonStepResult newton_step(const Assembler& assembler, const DiscreteFunction& u, double p,
                             const SolverConfig& cfg, double scale = 1.0);

/// Galerkin p-harmonic function with nodal Dirichlet data g, reached by
/// continuation in p. Stage 1 starts from the interpolant of g.
SolveResult solve_plaplace(std::shared_ptr<const Space> space, const BoundaryData& g,
                           const SolverConfig& cfg);

/// Warm-started continuation from a converged solution at p_start up to
/// cfg.p_target, following cfg.continuation when given (entries <= p_start
/// are skipped) or continuation_schedule(p_start, p_target).
SolveResult continue_plaplace(const DiscreteFunction& start, double p_start,
                              const SolverConfig& cfg);

}  // namespace plap
