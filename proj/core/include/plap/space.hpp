#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "plap/geometry.hpp"
#include "plap/mesh.hpp"

namespace plap {

/// Continuous piecewise-linear Lagrange space on a mesh, one dof per vertex.
/// Interior vertices are free, boundary vertices are constrained.
class Space {
 public:
  explicit Space(std::shared_ptr<const Mesh> mesh);

  const Mesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const Mesh>& mesh_ptr() const { return mesh_; }

  std::size_t num_dofs() const { return mesh_->num_vertices(); }
  std::size_t num_free() const { return free_.size(); }
  const std::vector<std::size_t>& free_dofs() const { return free_; }
  const std::vector<std::size_t>& constrained_dofs() const { return mesh_->boundary_vertices(); }

  /// Position of vertex v among the free dofs, if it is free.
  std::optional<std::size_t> free_index(std::size_t v) const;

  /// Constant gradients of the three hat functions on cell c, in cell vertex order.
  const std::array<Vec2, 3>& basis_gradients(std::size_t c) const { return grads_[c]; }
  double cell_area(std::size_t c) const { return areas_[c]; }
  double domain_area() const { return mesh_->domain().area(); }

 private:
  std::shared_ptr<const Mesh> mesh_;
  std::vector<std::size_t> free_;
  std::vector<std::size_t> free_of_vertex_;
  std::vector<std::array<Vec2, 3>> grads_;
  std::vector<double> areas_;
};

std::shared_ptr<const Space> make_space(std::shared_ptr<const Mesh> mesh);

/// Element of a Space: one coefficient per vertex.
struct DiscreteFunction {
  std::shared_ptr<const Space> space;
  std::vector<double> coeffs;

  DiscreteFunction(std::shared_ptr<const Space> s, std::vector<double> c);
  explicit DiscreteFunction(std::shared_ptr<const Space> s);

  const Space& V() const { return *space; }
  std::vector<double> free_values() const;
  void add_to_free(const std::vector<double>& delta, double scale = 1.0);
};

/// Dirichlet data g with its gradient (the gradient is only used for norms).
struct BoundaryData {
  ScalarField g;
  VectorField grad_g;
};

/// Nodal interpolant. Throws std::invalid_argument on a non-finite nodal value.
DiscreteFunction interpolate(const ScalarField& g, std::shared_ptr<const Space> space);
inline DiscreteFunction interpolate(const BoundaryData& g, std::shared_ptr<const Space> space) {
  return interpolate(g.g, std::move(space));
}

/// Value at pt; throws std::out_of_range outside the domain.
double evaluate(const DiscreteFunction& u, Point pt);
/// Value at pt via the affine restriction to a given cell (pt may lie outside it).
double evaluate_in_cell(const DiscreteFunction& u, std::size_t cell, Point pt);

Vec2 cell_gradient(const DiscreteFunction& u, std::size_t cell);

inline constexpr double infinity_norm = std::numeric_limits<double>::infinity();

/// ||grad u||_{L^p}; exact for P1. p = infinity_norm gives the max over cells.
/// Throws std::invalid_argument for p < 1.
double grad_lp_norm(const DiscreteFunction& u, double p);

/// max |u - exact| over vertices, edge midpoints and cell barycentres.
double linf_error(const DiscreteFunction& u, const ScalarField& exact);

/// max |u - exact| over the barycentric lattice {(i/k, j/k)} of every cell.
double linf_error_lattice(const DiscreteFunction& u, const ScalarField& exact, int k);

/// Coefficient dump: one value per line in vertex order, round-trip precision.
void write_coefficients(std::ostream& os, const DiscreteFunction& u);
std::vector<double> read_coefficients(std::istream& is);

}  // namespace plap
