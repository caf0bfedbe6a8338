#include "plap/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iterator>
#include <string>

namespace plap {

namespace {

class StageFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void validate(const SolverConfig& cfg) {
  if (!(cfg.p_target > 1.0)) throw std::invalid_argument("p_target must exceed 1");
  if (!(cfg.newton_tol > 0.0)) throw std::invalid_argument("newton_tol must be positive");
  if (cfg.newton_max_iter < 1) throw std::invalid_argument("newton_max_iter must be >= 1");
  if (!(cfg.eps >= 0.0)) throw std::invalid_argument("eps must be >= 0");
  const auto& ls = cfg.line_search;
  if (!(ls.factor > 0.0 && ls.factor < 1.0) || ls.max_halvings < 0 || !(ls.armijo > 0.0) ||
      !(ls.armijo < 1.0))
    throw std::invalid_argument("invalid line-search parameters");
}

void validate_stages(const std::vector<double>& stages, double p_target) {
  if (stages.empty()) throw std::invalid_argument("empty continuation");
  for (std::size_t i = 0; i < stages.size(); ++i) {
    if (!(stages[i] > 1.0)) throw std::invalid_argument("continuation exponents must exceed 1");
    if (i > 0 && !(stages[i] > stages[i - 1]))
      throw std::invalid_argument("continuation must be strictly increasing");
  }
  if (stages.back() != p_target) throw std::invalid_argument("continuation must end at p_target");
}

double max_gradient(const DiscreteFunction& u) {
  double m = 0.0;
  for (std::size_t c = 0; c < u.V().mesh().num_cells(); ++c)
    m = std::max(m, norm(cell_gradient(u, c)));
  return m;
}

StageRecord run_stage(const Assembler& assembler, DiscreteFunction& u, double p,
                      const SolverConfig& cfg) {
  StageRecord rec;
  rec.p = p;
  const double gmax = max_gradient(u);
  rec.gradient_scale = gmax > 0.0 ? gmax : 1.0;
  const RegularisedNorm reg{cfg.eps};

  double rnorm = norm2(assembler.residual(u, p, reg, rec.gradient_scale));
  const double target = cfg.newton_tol * (1.0 + rnorm);

  // At least one step is always taken: at p = 2 it is the exact solve.
  while (true) {
    if (rec.newton_iterations > 0 && rnorm <= target) {
      rec.converged = true;
      break;
    }
    if (rec.newton_iterations >= cfg.newton_max_iter) break;
    NewtonStepResult step = [&] {
      try {
        return newton_step(assembler, u, p, cfg, rec.gradient_scale);
      } catch (const CgError& e) {
        rec.cg_iterations += e.partial().iterations;
        throw StageFailure(e.what());
      }
    }();
    rec.cg_iterations += step.report.cg_iterations;
    ++rec.newton_iterations;
    u = std::move(step.next);
    rnorm = norm2(assembler.residual(u, p, reg, rec.gradient_scale));
  }
  rec.residual_norm = rnorm;
  rec.energy = assembler.energy(u, p, RegularisedNorm{0.0});
  return rec;
}

std::string describe(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", p);
  return buf;
}

// Runs the stages in order starting from u (already converged at prev_p, if
// given). A failing stage is retried once through the midpoint exponent.
SolveResult run_chain(const Assembler& assembler, DiscreteFunction u, std::optional<double> prev_p,
                      const std::vector<double>& stages, const SolverConfig& cfg) {
  SolveReport report;
  std::optional<DiscreteFunction> last_good;
  if (prev_p) last_good = u;

  const auto attempt = [&](double p, DiscreteFunction& state) -> bool {
    DiscreteFunction trial = state;
    StageRecord rec;
    try {
      rec = run_stage(assembler, trial, p, cfg);
    } catch (const std::runtime_error&) {
      // CG failure or line search exhausted
      rec.p = p;
      rec.converged = false;
    }
    report.total_cg_iterations += rec.cg_iterations;
    report.stages.push_back(rec);
    if (rec.converged) state = std::move(trial);
    return rec.converged;
  };

  for (double p : stages) {
    bool ok = attempt(p, u);
    if (!ok && prev_p) {
      const double mid = 0.5 * (*prev_p + p);
      ok = attempt(mid, u) && attempt(p, u);
    }
    if (!ok) {
      throw SolveError("continuation stage p = " + describe(p) + " failed to converge",
                       last_good, prev_p, std::move(report));
    }
    prev_p = p;
    last_good = u;
  }
  return {std::move(u), std::move(report)};
}

}  // namespace

std::vector<double> continuation_schedule(double p_start, double p_target) {
  if (!(p_target >= 2.0)) throw std::invalid_argument("continuation target must be >= 2");
  if (!(p_start > 1.0)) throw std::invalid_argument("continuation start must exceed 1");
  std::vector<double> out;
  double cur = p_start;
  while (cur < p_target) {
    double next = cur < 10.0 ? cur + 1.0 : std::floor(1.25 * cur);
    if (next <= cur) next = cur + 1.0;
    next = std::min(next, p_target);
    out.push_back(next);
    cur = next;
  }
  return out;
}

std::vector<double> continuation_schedule(double p_target) {
  if (!(p_target >= 2.0)) throw std::invalid_argument("continuation target must be >= 2");
  std::vector<double> out{2.0};
  const auto rest = continuation_schedule(2.0, p_target);
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

NewtonStepResult newton_step(const Assembler& assembler, const DiscreteFunction& u, double p,
                             const SolverConfig& cfg, double scale) {
  const RegularisedNorm reg{cfg.eps};
  const auto r = assembler.residual(u, p, reg, scale);
  const auto jac = assembler.jacobian(u, p, reg, scale);
  std::vector<double> rhs(r.size());
  std::transform(r.begin(), r.end(), rhs.begin(), [](double v) { return -v; });
  const CgResult cg = cg_solve(jac, rhs, cfg.cg);

  NewtonStepReport rep;
  rep.residual_norm = norm2(r);
  rep.step_norm = norm2(cg.x);
  rep.cg_iterations = cg.iterations;
  rep.energy_before = assembler.energy(u, p, reg, scale);

  // r is the scaled first variation divided by p, so E'(u) d = p (r . d) / scale^2.
  const double slope = p * dot(r, cg.x) / (scale * scale);
  const double slack = 1e-14 * std::abs(rep.energy_before);
  const auto& ls = cfg.line_search;

  double lambda = 1.0;
  for (int h = 0; h <= ls.max_halvings; ++h) {
    DiscreteFunction trial = u;
    trial.add_to_free(cg.x, lambda);
    const double e = assembler.energy(trial, p, reg, scale);
    if (e <= rep.energy_before + ls.armijo * lambda * slope + slack) {
      rep.lambda = lambda;
      rep.energy_after = e;
      rep.halvings = h;
      return {std::move(trial), rep};
    }
    lambda *= ls.factor;
  }
  throw std::runtime_error("line search exhausted at p = " + describe(p));
}

SolveResult solve_plaplace(std::shared_ptr<const Space> space, const BoundaryData& g,
                           const SolverConfig& cfg) {
  validate(cfg);
  std::vector<double> stages =
      cfg.continuation.empty() ? continuation_schedule(cfg.p_target) : cfg.continuation;
  validate_stages(stages, cfg.p_target);
  if (stages.front() != 2.0) throw std::invalid_argument("continuation must start at p = 2");
  const Assembler assembler(space);
  return run_chain(assembler, interpolate(g, space), std::nullopt, stages, cfg);
}

SolveResult continue_plaplace(const DiscreteFunction& start, double p_start,
                              const SolverConfig& cfg) {
  validate(cfg);
  if (!(cfg.p_target >= p_start)) throw std::invalid_argument("p_target below p_start");
  std::vector<double> stages;
  if (cfg.continuation.empty()) {
    if (cfg.p_target > p_start) stages = continuation_schedule(p_start, cfg.p_target);
  } else {
    std::copy_if(cfg.continuation.begin(), cfg.continuation.end(), std::back_inserter(stages),
                 [p_start](double q) { return q > p_start; });
  }
  if (stages.empty()) return {start, {}};
  validate_stages(stages, cfg.p_target);
  const Assembler assembler(start.space);
  return run_chain(assembler, start, p_start, stages, cfg);
}

}  // namespace plap
