#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "plap/assembly.hpp"
#include "plap/csv.hpp"
#include "plap/experiments.hpp"
#include "plap/mesh.hpp"
#include "plap/solver.hpp"
#include "plap/space.hpp"

namespace plap::cli {

namespace {

struct Problem {
  Rect domain;
  BoundaryData data;
};

double affine(double x, double y) { return 0.3 + 0.7 * x - 0.4 * y; }
Vec2 affine_grad(double, double) { return {0.7, -0.4}; }

Problem make_problem(const std::string& name) {
  if (name == "affine") return {{0.0, 1.0, 0.0, 1.0}, {&affine, &affine_grad}};
  return {case_domain(parse_experiment_case(name)), aronsson_data()};
}

struct SolverFlags {
  std::optional<double> tol;
  std::optional<double> eps;
  std::optional<int> max_iter;

  void attach(CLI::App* app) {
    app->add_option("--tol", tol, "Newton tolerance")->check(CLI::PositiveNumber);
    app->add_option("--eps", eps, "gradient regularisation inside Newton")
        ->check(CLI::PositiveNumber);
    app->add_option("--max-iter", max_iter, "Newton iterations per stage")
        ->check(CLI::PositiveNumber);
  }

  SolverConfig config() const {
    SolverConfig cfg;
    if (tol) cfg.newton_tol = *tol;
    if (eps) cfg.eps = *eps;
    if (max_iter) cfg.newton_max_iter = *max_iter;
    return cfg;
  }
};

std::vector<double> parse_grid(const std::string& text) {
  if (text.empty()) return default_p_grid();
  std::vector<double> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad p grid entry '" + item + "'");
    grid.push_back(v);
  }
  return grid;
}

// Writes to `path`, or to `fallback` when path is empty.
template <typename Writer>
void emit(const std::string& path, std::ostream& fallback, Writer&& write) {
  if (path.empty()) {
    write(fallback);
    return;
  }
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  write(os);
  if (!os) throw std::runtime_error("failed writing '" + path + "'");
}

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"p-harmonic approximation of infinity-harmonic functions", "plap"};
  app.require_subcommand(1);
  app.fallthrough();
  unsigned seed = 0;
  app.add_option("--seed", seed, "seed for randomised probes (never affects solves)");

  std::string case_name = "aronsson";
  std::string kind_name = "alternating";
  std::string out_path;
  std::string mesh_out;
  std::string grid_text;
  int n_solve = 16;
  int n_sweep = 16;
  int levels = 4;
  double p = 2.0;
  SolverFlags solver_flags;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--case", case_name, "aronsson | aronsson_singular | aronsson_smooth | affine")
        ->check(CLI::IsMember({"aronsson", "aronsson_singular", "aronsson_smooth", "affine"}));
    sub->add_option("--kind", kind_name, "mesh kind")
        ->check(CLI::IsMember({"diagonal", "alternating", "crisscross"}));
    sub->add_option("--out", out_path, "output file (stdout when omitted)");
    solver_flags.attach(sub);
  };

  auto* solve = app.add_subcommand("solve", "solve one p-Laplace problem");
  add_common(solve);
  solve->add_option("--n", n_solve, "cells per side")->check(CLI::PositiveNumber);
  solve->add_option("--p", p, "target exponent (>= 2)")->check(CLI::Range(2.0, 1e6));
  solve->add_option("--mesh-out", mesh_out, "write the mesh dump here");

  auto* sweep =
      app.add_subcommand("sweep", "L-infinity error against the exact solution over a p grid");
  add_common(sweep);
  sweep->add_option("--n", n_sweep, "cells per side")->check(CLI::PositiveNumber);
  sweep->add_option("--grid", grid_text, "comma-separated increasing p values");

  auto* table = app.add_subcommand("table", "convergence table over refinement levels");
  add_common(table);
  table->add_option("--levels", levels, "refinement levels (n = 4, 8, ...)")
      ->check(CLI::PositiveNumber);
  table->add_option("--grid", grid_text, "comma-separated increasing p values");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return exit_bad_arguments;
  }

  try {
    const MeshKind kind = parse_mesh_kind(kind_name);
    const SolverConfig base = solver_flags.config();

    if (solve->parsed()) {
      const Problem prob = make_problem(case_name);
      auto mesh = std::make_shared<const Mesh>(build_structured_mesh(prob.domain, n_solve, kind));
      auto space = make_space(mesh);
      SolverConfig cfg = base;
      cfg.p_target = p;
      const SolveResult res = solve_plaplace(space, prob.data, cfg);
      emit(out_path, out, [&](std::ostream& os) { write_coefficients(os, res.solution); });
      if (!mesh_out.empty())
        emit(mesh_out, out, [&](std::ostream& os) { write_mesh(os, *mesh); });
      const Assembler assembler(space);
      const double energy = assembler.energy(res.solution, p, RegularisedNorm{0.0});
      const double rnorm = norm2(assembler.residual(res.solution, p, RegularisedNorm{0.0}));
      std::ostream& info = out_path.empty() ? err : out;
      info << "dim " << space->num_dofs() << '\n'
           << "stages " << res.report.stages.size() << '\n'
           << "energy " << fmt("%.17g", energy) << '\n'
           << "residual_norm " << fmt("%.6e", rnorm) << '\n';
      return exit_ok;
    }

    if (sweep->parsed()) {
      const Problem prob = make_problem(case_name);
      auto mesh = std::make_shared<const Mesh>(build_structured_mesh(prob.domain, n_sweep, kind));
      const SweepCurve curve =
          p_sweep(make_space(mesh), prob.data, prob.data.g, parse_grid(grid_text), base);
      emit(out_path, out, [&](std::ostream& os) { write_sweep_csv(os, curve); });
      return exit_ok;
    }

    if (table->parsed()) {
      if (case_name == "affine") throw std::invalid_argument("table needs an aronsson case");
      StudyOptions opts;
      opts.kind = kind;
      opts.p_grid = parse_grid(grid_text);
      opts.solver = base;
      opts.log = [&err](const std::string& line) { err << line << std::endl; };
      const ConvergenceStudy study =
          convergence_study(parse_experiment_case(case_name), levels, opts);
      emit(out_path, out, [&](std::ostream& os) { write_table_csv(os, study.rows); });
      return exit_ok;
    }
  } catch (const SolveError& e) {
    err << "solver failure: " << e.what() << '\n';
    return exit_solver_failure;
  } catch (const SweepError& e) {
    err << "solver failure: " << e.what() << " (" << e.partial().p.size()
        << " grid points completed)\n";
    return exit_solver_failure;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return exit_bad_arguments;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_solver_failure;
  }
  return exit_bad_arguments;
}

}  // namespace plap::cli
