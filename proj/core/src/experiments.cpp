#include "plap/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "plap/mesh.hpp"

namespace plap {

double aronsson(double x, double y) {
  return 0.375 * (std::pow(std::abs(x), 4.0 / 3.0) - std::pow(std::abs(y), 4.0 / 3.0));
}

Vec2 aronsson_grad(double x, double y) {
  const auto component = [](double t) {
    return t == 0.0 ? 0.0 : std::copysign(0.5 * std::cbrt(std::abs(t)), t);
  };
  return {component(x), -component(y)};
}

BoundaryData aronsson_data() { return {&aronsson, &aronsson_grad}; }

double infinity_laplacian_fd(const ScalarField& u, Point pt, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  const double x = pt.x;
  const double y = pt.y;
  const double c = u(x, y);
  const double e = u(x + h, y);
  const double w = u(x - h, y);
  const double n = u(x, y + h);
  const double s = u(x, y - h);
  const double ux = (e - w) / (2.0 * h);
  const double uy = (n - s) / (2.0 * h);
  const double uxx = (e - 2.0 * c + w) / (h * h);
  const double uyy = (n - 2.0 * c + s) / (h * h);
  const double uxy = (u(x + h, y + h) - u(x + h, y - h) - u(x - h, y + h) + u(x - h, y - h)) /
                     (4.0 * h * h);
  return std::abs(ux * ux * uxx + 2.0 * ux * uy * uxy + uy * uy * uyy);
}

double verify_infinity_harmonic(Point pt, double fd_step) {
  if (!(fd_step > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  if (std::abs(pt.x) <= 10.0 * fd_step || std::abs(pt.y) <= 10.0 * fd_step)
    throw std::invalid_argument("point too close to the singular axes");
  return infinity_laplacian_fd(&aronsson, pt, fd_step);
}

std::size_t SweepCurve::argmin() const {
  if (error.empty()) throw std::logic_error("argmin of an empty sweep");
  // min_element returns the first minimum, i.e. the smallest p.
  return static_cast<std::size_t>(std::min_element(error.begin(), error.end()) - error.begin());
}

SweepCurve p_sweep(std::shared_ptr<const Space> space, const BoundaryData& g,
                   const ScalarField& exact, const std::vector<double>& p_grid,
                   const SolverConfig& base) {
  if (p_grid.empty()) throw std::invalid_argument("empty p grid");
  for (std::size_t i = 0; i < p_grid.size(); ++i) {
    if (!(p_grid[i] >= 2.0)) throw std::invalid_argument("p grid entries must be >= 2");
    if (i > 0 && !(p_grid[i] > p_grid[i - 1]))
      throw std::invalid_argument("p grid must be strictly increasing");
  }

  SweepCurve curve;
  SolverConfig cfg = base;
  cfg.continuation.clear();
  std::optional<DiscreteFunction> last;
  for (double p : p_grid) {
    cfg.p_target = p;
    try {
      SolveResult res = last ? continue_plaplace(*last, curve.p.back(), cfg)
                             : solve_plaplace(space, g, cfg);
      curve.p.push_back(p);
      curve.error.push_back(linf_error(res.solution, exact));
      last = std::move(res.solution);
    } catch (const SolveError& e) {
      throw SweepError(e.what(), curve);
    }
  }
  return curve;
}

double eoc(double e_coarse, double e_fine, double h_coarse, double h_fine) {
  if (!(e_coarse > 0.0 && e_fine > 0.0 && h_coarse > 0.0 && h_fine > 0.0))
    throw std::invalid_argument("eoc needs positive errors and mesh sizes");
  if (!(h_fine < h_coarse)) throw std::invalid_argument("eoc needs h_fine < h_coarse");
  return std::log(e_coarse / e_fine) / std::log(h_coarse / h_fine);
}

std::string_view to_string(ExperimentCase c) {
  return c == ExperimentCase::aronsson_singular ? "aronsson_singular" : "aronsson_smooth";
}

ExperimentCase parse_experiment_case(std::string_view name) {
  if (name == "aronsson_singular" || name == "aronsson") return ExperimentCase::aronsson_singular;
  if (name == "aronsson_smooth") return ExperimentCase::aronsson_smooth;
  throw std::invalid_argument("unknown experiment case '" + std::string(name) + "'");
}

Rect case_domain(ExperimentCase c) {
  if (c == ExperimentCase::aronsson_singular) return {-1.0001, 0.9999, -1.0001, 0.9999};
  return {0.5, 1.5, 0.5, 1.5};
}

std::vector<double> default_p_grid() {
  return {2, 3, 4, 5, 10, 15, 20, 30, 45, 60, 75, 100, 125, 150, 185, 200};
}

ConvergenceStudy convergence_study(ExperimentCase c, int levels, const StudyOptions& opts) {
  if (levels < 1) throw std::invalid_argument("convergence study needs levels >= 1");
  if (opts.base_n < 1) throw std::invalid_argument("base_n must be >= 1");
  const Rect domain = case_domain(c);
  const BoundaryData g = aronsson_data();

  ConvergenceStudy study;
  for (int level = 0; level < levels; ++level) {
    const int n = opts.base_n << level;
    auto mesh = std::make_shared<const Mesh>(build_structured_mesh(domain, n, opts.kind));
    auto space = make_space(mesh);
    SweepCurve curve = p_sweep(space, g, g.g, opts.p_grid, opts.solver);

    ExperimentRow row;
    row.dim = space->num_dofs();
    row.h = mesh_size(*mesh);
    const std::size_t best = curve.argmin();
    row.best_error = curve.error[best];
    row.p_star = curve.p[best];
    if (!study.rows.empty()) {
      const auto& prev = study.rows.back();
      row.eoc = eoc(prev.best_error, row.best_error, prev.h, row.h);
    }
    if (opts.log) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "level %d: dim %zu h %.4g best_error %.6g p* %g eoc %.3f",
                    level, row.dim, row.h, row.best_error, row.p_star, row.eoc);
      opts.log(buf);
    }
    study.rows.push_back(row);
    study.curves.push_back(std::move(curve));
  }
  return study;
}

}  // namespace plap
