#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "plap/geometry.hpp"

namespace plap {

/// Axis-aligned rectangle [x0,x1] x [y0,y1].
struct Rect {
  double x0{0.0};
  double x1{1.0};
  double y0{0.0};
  double y1{1.0};

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
  bool valid() const;
  bool contains(Point pt, double tol = 0.0) const;
  bool on_boundary(Point pt, double tol) const;
};

enum class MeshKind { diagonal, alternating, crisscross };

std::string_view to_string(MeshKind kind);
/// Throws std::invalid_argument for unknown names.
MeshKind parse_mesh_kind(std::string_view name);

/// Immutable conforming triangulation of a rectangle built on an n x n lattice.
///
/// Lattice vertices come first in row-major order (index j*(n+1)+i); for the
/// crisscross kind the square centres follow, again row-major. Cells of one
/// lattice square are stored contiguously (2 or 4 per square, squares in
/// row-major order) and are always counter-clockwise.
class Mesh {
 public:
  using Cell = std::array<std::size_t, 3>;

  Mesh(Rect domain, int n, MeshKind kind, std::vector<Point> vertices,
       std::vector<Cell> cells);

  const Rect& domain() const { return domain_; }
  int n() const { return n_; }
  MeshKind kind() const { return kind_; }

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_cells() const { return cells_.size(); }
  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<Cell>& cells() const { return cells_; }
  const Point& vertex(std::size_t i) const { return vertices_[i]; }
  const Cell& cell(std::size_t c) const { return cells_[c]; }

  /// Sorted indices of the vertices on the rectangle boundary.
  const std::vector<std::size_t>& boundary_vertices() const { return boundary_; }
  bool is_boundary(std::size_t v) const { return on_boundary_[v] != 0; }

  std::array<Point, 3> cell_points(std::size_t c) const;
  double cell_area(std::size_t c) const;
  double cell_signed_area(std::size_t c) const;
  double cell_diameter(std::size_t c) const;
  double cell_inradius(std::size_t c) const;

  /// Index of a cell whose closure contains pt, or nullopt outside the domain.
  std::optional<std::size_t> locate(Point pt) const;

  std::size_t cells_per_square() const { return kind_ == MeshKind::crisscross ? 4 : 2; }

 private:
  Rect domain_;
  int n_;
  MeshKind kind_;
  std::vector<Point> vertices_;
  std::vector<Cell> cells_;
  std::vector<std::size_t> boundary_;
  std::vector<char> on_boundary_;
};

/// Throws std::invalid_argument for n < 1 or a degenerate rectangle.
Mesh build_structured_mesh(const Rect& domain, int n, MeshKind kind);

/// Largest cell diameter.
double mesh_size(const Mesh& mesh);
double min_cell_diameter(const Mesh& mesh);
/// Smallest inradius-to-diameter ratio over all cells.
double shape_regularity(const Mesh& mesh);

/// Barycentric coordinates of pt with respect to triangle (a, b, c).
std::array<double, 3> barycentric(const std::array<Point, 3>& tri, Point pt);

/// Plain-text dump: "nv nc", one "x y" per vertex, one "i j k" per cell,
/// then the boundary vertex indices on a single line.
void write_mesh(std::ostream& os, const Mesh& mesh);

}  // namespace plap
