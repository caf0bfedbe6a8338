#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "plap/geometry.hpp"
#include "plap/mesh.hpp"
#include "plap/solver.hpp"
#include "plap/space.hpp"

namespace plap {

/// u(x, y) = 3/8 (|x|^{4/3} - |y|^{4/3}), an infinity-harmonic function that
/// is C^{1,1/3} across the coordinate axes.
double aronsson(double x, double y);
Vec2 aronsson_grad(double x, double y);
BoundaryData aronsson_data();

/// |grad u (x) grad u : D^2 u| at pt from central differences of step h.
double infinity_laplacian_fd(const ScalarField& u, Point pt, double h);

/// infinity_laplacian_fd applied to aronsson. Throws std::invalid_argument
/// when pt is within 10 * fd_step of an axis.
double verify_infinity_harmonic(Point pt, double fd_step);

struct SweepCurve {
  std::vector<double> p;
  std::vector<double> error;

  /// Index of the smallest p attaining the minimal error.
  std::size_t argmin() const;
};

/// Thrown by p_sweep when a solve fails; carries the points computed so far.
class SweepError : public std::runtime_error {
 public:
  SweepError(const std::string& what, SweepCurve partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const SweepCurve& partial() const { return partial_; }

 private:
  SweepCurve partial_;
};

/// L-infinity error against `exact` at every p of an increasing grid (p >= 2).
/// One continuation chain: each grid point restarts from the previous solution.
SweepCurve p_sweep(std::shared_ptr<const Space> space, const BoundaryData& g,
                   const ScalarField& exact, const std::vector<double>& p_grid,
                   const SolverConfig& base = {});

/// log(e_coarse / e_fine) / log(h_coarse / h_fine).
double eoc(double e_coarse, double e_fine, double h_coarse, double h_fine);

enum class ExperimentCase { aronsson_singular, aronsson_smooth };

std::string_view to_string(ExperimentCase c);
ExperimentCase parse_experiment_case(std::string_view name);
/// [-1.0001, 0.9999]^2 (singularity off the mesh lines) or [0.5, 1.5]^2.
Rect case_domain(ExperimentCase c);

std::vector<double> default_p_grid();

struct ExperimentRow {
  std::size_t dim{0};
  double h{0.0};
  double best_error{0.0};
  double eoc{0.0};
  double p_star{0.0};
};

struct StudyOptions {
  MeshKind kind{MeshKind::alternating};
  int base_n{4};
  std::vector<double> p_grid{default_p_grid()};
  SolverConfig solver{};
  /// Called after each level with a one-line summary; may be empty.
  std::function<void(const std::string&)> log;
};

struct ConvergenceStudy {
  std::vector<ExperimentRow> rows;
  std::vector<SweepCurve> curves;
};

/// Meshes with n = base_n * 2^j, j < levels; one p sweep per level.
ConvergenceStudy convergence_study(ExperimentCase c, int levels, const StudyOptions& opts = {});

}  // namespace plap
