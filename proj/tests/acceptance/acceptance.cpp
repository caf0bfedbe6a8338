// Acceptance gate. Prints one PASS/FAIL line per criterion; exit status is 0
// only when every line passes.
//
// PLAP_ACCEPTANCE_LEVELS=8 runs the tables on all eight published levels
// (dim up to 263169); the default is the five desk-scale levels.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "plap/assembly.hpp"
#include "plap/experiments.hpp"
#include "plap/solver.hpp"

using namespace plap;

namespace {

int failures = 0;

void verdict(const char* id, const std::string& name, bool ok) {
  std::printf("[%s] %s %s\n", ok ? "PASS" : "FAIL", id, name.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

void detail(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
void detail(const char* fmt, ...) {
  va_list ap;
  va_start(ap, fmt);
  std::printf("       ");
  std::vprintf(fmt, ap);
  std::printf("\n");
  va_end(ap);
}

struct Published {
  std::vector<double> best_error;
  std::vector<double> p_star;
  std::vector<double> eoc;
};

// Reference rows of the two convergence tables.
const Published table1{{0.0162, 0.00836, 0.00390, 0.00278, 0.00166, 0.00130, 0.00104, 0.000805},
                       {5, 5, 10, 15, 20, 30, 45, 60},
                       {0.00, 0.95, 1.10, 0.49, 0.74, 0.35, 0.33, 0.37}};
const Published table2{
    {0.00301, 0.000883, 0.000244, 0.0000946, 0.0000448, 0.0000218, 0.0000105, 0.0000052},
    {5, 10, 20, 30, 50, 75, 125, 185},
    {0.00, 1.77, 1.86, 1.37, 1.08, 1.04, 1.06, 1.01}};

// p must be a grid value with no other grid value strictly between it and
// target (target itself need not be on the grid).
bool within_one_step(double p, double target, const std::vector<double>& grid) {
  if (std::find(grid.begin(), grid.end(), p) == grid.end()) return false;
  const double lo = std::min(p, target), hi = std::max(p, target);
  return std::none_of(grid.begin(), grid.end(), [&](double q) { return q > lo && q < hi; });
}

struct StudyRun {
  ConvergenceStudy study;
  double seconds{0.0};
  bool complete{true};
};

// A solver failure keeps the levels finished before it so the remaining
// criteria still run; the table criterion then fails.
StudyRun run_study(ExperimentCase c, int levels) {
  int finished = 0;
  StudyOptions opts;
  opts.log = [&](const std::string& line) {
    detail("%s", line.c_str());
    ++finished;
  };
  StudyRun run;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    run.study = convergence_study(c, levels, opts);
  } catch (const std::exception& e) {
    detail("level %d: %s", finished, e.what());
    run.complete = false;
    if (finished > 0) run.study = convergence_study(c, finished);
  }
  run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return run;
}

bool compare_rows(const ConvergenceStudy& st, const Published& ref) {
  const auto grid = default_p_grid();
  bool ok = true;
  for (std::size_t i = 0; i < st.rows.size(); ++i) {
    const auto& r = st.rows[i];
    const double rel = std::abs(r.best_error - ref.best_error[i]) / ref.best_error[i];
    const bool e_ok = rel <= 0.25;
    const bool p_ok = within_one_step(r.p_star, ref.p_star[i], grid);
    detail("dim %6zu  error %.4g vs %.4g (%+.0f%%) %s   p* %g vs %g %s", r.dim, r.best_error,
           ref.best_error[i], 100.0 * (r.best_error / ref.best_error[i] - 1.0),
           e_ok ? "ok" : "MISS", r.p_star, ref.p_star[i], p_ok ? "ok" : "MISS");
    ok = ok && e_ok && p_ok;
  }
  return ok;
}

std::shared_ptr<const Space> space_on(Rect r, int n, MeshKind k = MeshKind::alternating) {
  return make_space(std::make_shared<const Mesh>(build_structured_mesh(r, n, k)));
}

double affine(double x, double y) { return 0.3 + 0.7 * x - 0.4 * y; }
Vec2 affine_grad(double, double) { return {0.7, -0.4}; }

bool consistency_suite() {
  std::mt19937 rng(2024);
  const double t = 1e-6;
  double worst_r = 0.0, worst_j = 0.0;
  for (double p : {2.0, 3.0, 5.0, 10.0})
    for (ExperimentCase c : {ExperimentCase::aronsson_singular, ExperimentCase::aronsson_smooth}) {
      const auto s = space_on(case_domain(c), 4);
      const Assembler a(s);
      const RegularisedNorm reg{1e-8};
      for (int trial = 0; trial < 5; ++trial) {
        const auto bc = interpolate(aronsson_data(), s);
        const DiscreteFunction u(s, oracle::random_state(*s, bc.coeffs, rng, 0.5));
        const auto r = a.residual(u, p, reg);
        const auto v = oracle::random_vector(s->num_free(), rng);
        auto up = u, um = u;
        up.add_to_free(v, t);
        um.add_to_free(v, -t);
        const double dd = (a.energy(up, p, reg) - a.energy(um, p, reg)) / (2 * t * p);
        worst_r = std::max(worst_r, oracle::rel_diff(dot(r, v), dd));

        const auto jv = spmv(a.jacobian(u, p, reg), v);
        const auto rp = a.residual(up, p, reg), rm = a.residual(um, p, reg);
        std::vector<double> fd(rp.size());
        for (std::size_t i = 0; i < fd.size(); ++i) fd[i] = (rp[i] - rm[i]) / (2 * t);
        worst_j = std::max(worst_j, oracle::rel_diff(jv, fd));
      }
    }
  detail("residual vs energy FD: worst rel %.2e (< 1e-6)", worst_r);
  detail("jacobian vs residual FD: worst rel %.2e (< 1e-5)", worst_j);
  return worst_r < 1e-6 && worst_j < 1e-5;
}

bool exactness_suite() {
  bool ok = true;
  double worst_u = 0.0;
  for (MeshKind k : {MeshKind::diagonal, MeshKind::alternating, MeshKind::crisscross})
    for (int n : {4, 16}) {
      const auto s = space_on({0.0, 1.0, 0.0, 1.0}, n, k);
      SolverConfig cfg;
      const auto u = solve_plaplace(s, {&affine, &affine_grad}, cfg).solution;
      worst_u = std::max(worst_u, oracle::max_abs_diff(u.coeffs, interpolate(&affine, s).coeffs));
    }
  detail("p = 2 affine solve vs interpolant: %.2e (< 1e-12)", worst_u);
  ok = ok && worst_u < 1e-12;

  double worst_r = 0.0;
  for (MeshKind k : {MeshKind::diagonal, MeshKind::alternating, MeshKind::crisscross})
    for (ExperimentCase c : {ExperimentCase::aronsson_singular, ExperimentCase::aronsson_smooth}) {
      const auto s = space_on(case_domain(c), 8, k);
      const auto u = interpolate(&affine, s);
      for (double p : {2.0, 2.5, 3.0, 5.0, 10.0})
        worst_r = std::max(worst_r, norm2(residual(u, p)));
    }
  detail("affine interpolant residual, p in {2,2.5,3,5,10}: %.2e (< 1e-13)", worst_r);
  return ok && worst_r < 1e-13;
}

bool minimality_oracle() {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> expo(-8.0, 0.0);
  double worst = -INFINITY;
  for (MeshKind k : {MeshKind::alternating, MeshKind::crisscross})
    for (double p : {2.0, 5.0, 20.0}) {
      const auto s = space_on(case_domain(ExperimentCase::aronsson_smooth), 2, k);
      SolverConfig cfg;
      cfg.p_target = p;
      const auto u = solve_plaplace(s, aronsson_data(), cfg).solution;
      const double ju = energy(u, p);
      for (int t = 0; t < 1000; ++t) {
        auto w = u;
        w.add_to_free(oracle::random_vector(s->num_free(), rng), std::pow(10.0, expo(rng)));
        worst = std::max(worst, ju - energy(w, p));
      }
    }
  detail("max J[U] - J[W] over 6000 probes: %.2e (<= 1e-10)", worst);
  return worst <= 1e-10;
}

bool invariant_suite() {
  const double slack = 1e-12;
  int solves = 0, bad = 0;
  for (ExperimentCase c : {ExperimentCase::aronsson_singular, ExperimentCase::aronsson_smooth})
    for (int n : {4, 8, 16}) {
      const auto s = space_on(case_domain(c), n);
      const auto ig = interpolate(aronsson_data(), s);
      const double area = s->domain_area();
      std::optional<DiscreteFunction> u;
      double prev = 0.0;
      for (double p : default_p_grid()) {
        SolverConfig cfg;
        cfg.p_target = p;
        SolveResult res =
            u ? continue_plaplace(*u, prev, cfg) : solve_plaplace(s, aronsson_data(), cfg);
        u = res.solution;
        prev = p;
        ++solves;
        bool ok = energy(*u, p) <= energy(ig, p) * (1 + slack);
        for (double k : {2.0, p / 2})
          ok = ok && grad_lp_norm(*u, k) <=
                         std::pow(area, 1 / k - 1 / p) * grad_lp_norm(*u, p) * (1 + slack);
        if (!ok) {
          ++bad;
          detail("violated: %s n=%d p=%g", std::string(to_string(c)).c_str(), n, p);
        }
      }
    }
  detail("%d converged solves checked, %d violations", solves, bad);
  return bad == 0;
}

bool aronsson_suite(int finest_n) {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> d(-1.0001, 1.5);
  double worst = 0.0;
  int tested = 0;
  while (tested < 100) {
    const Point pt{d(rng), d(rng)};
    if (std::abs(pt.x) < 0.05 || std::abs(pt.y) < 0.05) continue;
    worst = std::max(worst, verify_infinity_harmonic(pt, 1e-4));
    ++tested;
  }
  detail("max |inf-Laplacian| at 100 off-axis points: %.2e (< 1e-5)", worst);

  double gmax = 0.0;
  for (ExperimentCase c : {ExperimentCase::aronsson_singular, ExperimentCase::aronsson_smooth}) {
    const Mesh m = build_structured_mesh(case_domain(c), finest_n, MeshKind::alternating);
    auto probe = [&](Point x) { gmax = std::max(gmax, norm(aronsson_grad(x.x, x.y))); };
    for (const auto& v : m.vertices()) probe(v);
    for (std::size_t k = 0; k < m.num_cells(); ++k) {
      const auto t = m.cell_points(k);
      for (int a = 0; a < 3; ++a) probe(0.5 * (t[a] + t[(a + 1) % 3]));
      probe((1.0 / 3.0) * (t[0] + t[1] + t[2]));
    }
  }
  detail("max |grad u| over sample points of both domains: %.4f (<= 1)", gmax);
  return worst < 1e-5 && gmax <= 1.0;
}

}  // namespace

int main() {
  int levels = 5;
  if (const char* env = std::getenv("PLAP_ACCEPTANCE_LEVELS")) levels = std::atoi(env);
  levels = std::clamp(levels, 1, 8);
  const auto grid = default_p_grid();
  std::printf("acceptance: %d levels, p grid of %zu values\n", levels, grid.size());

  const StudyRun singular = run_study(ExperimentCase::aronsson_singular, levels);
  detail("singular table took %.1f s", singular.seconds);
  const bool rows1 = compare_rows(singular.study, table1) && singular.complete;
  const bool fast = levels > 5 || singular.seconds < 600.0;
  verdict("1", "singular table: best_error within 25%, p* within one grid step, < 10 min",
          rows1 && fast);

  const StudyRun smooth = run_study(ExperimentCase::aronsson_smooth, levels);
  detail("smooth table took %.1f s", smooth.seconds);
  bool rows2 = compare_rows(smooth.study, table2) && smooth.complete;
  for (std::size_t i = 1; i < std::min<std::size_t>(3, smooth.study.rows.size()); ++i) {
    const double e = smooth.study.rows[i].eoc;
    const bool ok = e >= 1.6 && e <= 2.0;
    detail("row %zu EOC %.2f in [1.6, 2.0] %s", i + 1, e, ok ? "ok" : "MISS");
    rows2 = rows2 && ok;
  }
  verdict("2", 
          "smooth table: best_error within 25%, EOC rows 2-3 in [1.6, 2.0], p* within one step",
          rows2);

  {
    const double h = 0.7071;
    const double a = eoc(0.0162, 0.00836, h, h / 2);
    const double b = eoc(0.00301, 0.000883, h, h / 2);
    detail("eoc = %.4f and %.4f", a, b);
    verdict("3", "EOC oracle reproduces 0.95 and 1.77",
            std::round(100 * a) == 95 && std::round(100 * b) == 177);
  }

  {
    bool ok = true;
    for (const auto* st : {&singular.study, &smooth.study}) {
      for (std::size_t i = 0; i < st->rows.size(); ++i) {
        const auto& curve = st->curves[i];
        const double best = curve.error[curve.argmin()];
        if (i >= 2 && !(best < curve.error.front() && best < curve.error.back())) {
          detail("level %zu has no strict interior minimum", i);
          ok = false;
        }
        if (i > 0 && st->rows[i].p_star < st->rows[i - 1].p_star) {
          detail("p* decreases at level %zu", i);
          ok = false;
        }
      }
    }
    verdict("4", "sweep curves have interior minima and p* is nondecreasing", ok);
  }

  {
    const auto t0 = std::chrono::steady_clock::now();
    const bool ok = consistency_suite();
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    detail("%.2f s", s);
    verdict("5", "variational consistency for p in {2,3,5,10}", ok && s < 60.0);
  }
  verdict("6", "exactness on affine data", exactness_suite());
  verdict("7", "minimality against 1000 random feasible probes, p in {2,5,20}",
          minimality_oracle());
  verdict("8", "energy bound and Hoelder chain on every converged solve", invariant_suite());
  verdict("9", "Aronsson solution is infinity-harmonic with |grad u| <= 1",
          aronsson_suite(4 << (levels - 1)));

  {
    const auto& r = singular.study.rows;
    bool ok = r.size() >= 5;
    for (std::size_t i = 4; i < r.size(); ++i) {
      detail("singular row %zu EOC %.2f (< 0.8)", i + 1, r[i].eoc);
      ok = ok && r[i].eoc < 0.8;
    }
    verdict("P1", "singular-case EOC decays below 0.8 on fine levels", ok);
  }
  {
    const auto& r = smooth.study.rows;
    bool ok = r.size() >= 5;
    for (std::size_t i = 4; i < r.size(); ++i) {
      detail("smooth row %zu EOC %.2f (in [0.9, 1.2])", i + 1, r[i].eoc);
      ok = ok && r[i].eoc >= 0.9 && r[i].eoc <= 1.2;
    }
    verdict("P2", "smooth-case EOC in [0.9, 1.2] on the finest levels", ok);
  }

  std::printf("acceptance: %d failing line(s)\n", failures);
  return failures == 0 ? 0 : 1;
}
