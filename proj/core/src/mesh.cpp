#include "plap/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace plap {

bool Rect::valid() const {
  return std::isfinite(x0) && std::isfinite(x1) && std::isfinite(y0) &&
         std::isfinite(y1) && x0 < x1 && y0 < y1;
}

bool Rect::contains(Point pt, double tol) const {
  return pt.x >= x0 - tol && pt.x <= x1 + tol && pt.y >= y0 - tol && pt.y <= y1 + tol;
}

bool Rect::on_boundary(Point pt, double tol) const {
  return contains(pt, tol) && (std::abs(pt.x - x0) <= tol || std::abs(pt.x - x1) <= tol ||
                               std::abs(pt.y - y0) <= tol || std::abs(pt.y - y1) <= tol);
}

std::string_view to_string(MeshKind kind) {
  switch (kind) {
    case MeshKind::diagonal:
      return "diagonal";
    case MeshKind::alternating:
      return "alternating";
    case MeshKind::crisscross:
      return "crisscross";
  }
  return "unknown";
}

MeshKind parse_mesh_kind(std::string_view name) {
  if (name == "diagonal") return MeshKind::diagonal;
  if (name == "alternating") return MeshKind::alternating;
  if (name == "crisscross") return MeshKind::crisscross;
  throw std::invalid_argument("unknown mesh kind '" + std::string(name) + "'");
}

Mesh::Mesh(Rect domain, int n, MeshKind kind, std::vector<Point> vertices,
           std::vector<Cell> cells)
    : domain_(domain), n_(n), kind_(kind), vertices_(std::move(vertices)),
      cells_(std::move(cells)) {
  if (!domain_.valid()) throw std::invalid_argument("degenerate domain rectangle");
  if (n_ < 1) throw std::invalid_argument("mesh needs n >= 1");
  if (cells_.size() != cells_per_square() * static_cast<std::size_t>(n_) * n_)
    throw std::invalid_argument("cell count does not match the lattice");

  for (std::size_t c = 0; c < cells_.size(); ++c) {
    for (auto v : cells_[c])
      if (v >= vertices_.size()) throw std::invalid_argument("cell references missing vertex");
    if (!(cell_signed_area(c) > 0.0))
      throw std::invalid_argument("cell " + std::to_string(c) + " is not counter-clockwise");
  }

  // Boundary membership is decided on lattice indices, not coordinates.
  const auto side = static_cast<std::size_t>(n_) + 1;
  on_boundary_.assign(vertices_.size(), 0);
  for (std::size_t j = 0; j < side; ++j)
    for (std::size_t i = 0; i < side; ++i)
      if (i == 0 || j == 0 || i + 1 == side || j + 1 == side) on_boundary_[j * side + i] = 1;
  for (std::size_t v = 0; v < vertices_.size(); ++v)
    if (on_boundary_[v]) boundary_.push_back(v);
}

std::array<Point, 3> Mesh::cell_points(std::size_t c) const {
  const auto& k = cells_[c];
  return {vertices_[k[0]], vertices_[k[1]], vertices_[k[2]]};
}

double Mesh::cell_signed_area(std::size_t c) const {
  const auto t = cell_points(c);
  return 0.5 * cross(t[1] - t[0], t[2] - t[0]);
}

double Mesh::cell_area(std::size_t c) const { return std::abs(cell_signed_area(c)); }

double Mesh::cell_diameter(std::size_t c) const {
  const auto t = cell_points(c);
  return std::max({norm(t[1] - t[0]), norm(t[2] - t[1]), norm(t[0] - t[2])});
}

double Mesh::cell_inradius(std::size_t c) const {
  const auto t = cell_points(c);
  const double perimeter = norm(t[1] - t[0]) + norm(t[2] - t[1]) + norm(t[0] - t[2]);
  return 2.0 * cell_area(c) / perimeter;
}

std::array<double, 3> barycentric(const std::array<Point, 3>& tri, Point pt) {
  const double det = cross(tri[1] - tri[0], tri[2] - tri[0]);
  const double l1 = cross(pt - tri[0], tri[2] - tri[0]) / det;
  const double l2 = cross(tri[1] - tri[0], pt - tri[0]) / det;
  return {1.0 - l1 - l2, l1, l2};
}

std::optional<std::size_t> Mesh::locate(Point pt) const {
  const double scale = std::max(domain_.width(), domain_.height());
  if (!domain_.contains(pt, 1e-12 * scale)) return std::nullopt;

  const double hx = domain_.width() / n_;
  const double hy = domain_.height() / n_;
  const auto clamp_index = [this](double t) {
    return std::clamp(static_cast<int>(std::floor(t)), 0, n_ - 1);
  };
  const int i = clamp_index((pt.x - domain_.x0) / hx);
  const int j = clamp_index((pt.y - domain_.y0) / hy);

  const std::size_t per = cells_per_square();
  const std::size_t first = (static_cast<std::size_t>(j) * n_ + i) * per;
  std::size_t best = first;
  double best_min = -std::numeric_limits<double>::infinity();
  for (std::size_t c = first; c < first + per; ++c) {
    const auto lam = barycentric(cell_points(c), pt);
    const double m = std::min({lam[0], lam[1], lam[2]});
    if (m >= 0.0) return c;
    if (m > best_min) {
      best_min = m;
      best = c;
    }
  }
  // Rounding on a shared edge: the least-violating cell of the square holds pt.
  return best;
}

Mesh build_structured_mesh(const Rect& domain, int n, MeshKind kind) {
  if (n < 1) throw std::invalid_argument("mesh needs n >= 1");
  if (!domain.valid()) throw std::invalid_argument("degenerate domain rectangle");

  const auto side = static_cast<std::size_t>(n) + 1;
  const auto nn = static_cast<std::size_t>(n);
  std::vector<Point> vertices;
  vertices.reserve(side * side + (kind == MeshKind::crisscross ? nn * nn : 0));

  // Coordinates x0 + i*(x1-x0)/n keep the far edge exactly at x1.
  const auto xcoord = [&](std::size_t i) {
    return i == nn ? domain.x1 : domain.x0 + domain.width() * static_cast<double>(i) / n;
  };
  const auto ycoord = [&](std::size_t j) {
    return j == nn ? domain.y1 : domain.y0 + domain.height() * static_cast<double>(j) / n;
  };
  for (std::size_t j = 0; j < side; ++j)
    for (std::size_t i = 0; i < side; ++i) vertices.push_back({xcoord(i), ycoord(j)});
  if (kind == MeshKind::crisscross) {
    for (std::size_t j = 0; j < nn; ++j)
      for (std::size_t i = 0; i < nn; ++i)
        vertices.push_back({0.5 * (xcoord(i) + xcoord(i + 1)), 0.5 * (ycoord(j) + ycoord(j + 1))});
  }

  std::vector<Mesh::Cell> cells;
  cells.reserve(nn * nn * (kind == MeshKind::crisscross ? 4 : 2));
  for (std::size_t j = 0; j < nn; ++j) {
    for (std::size_t i = 0; i < nn; ++i) {
      const std::size_t sw = j * side + i;
      const std::size_t se = sw + 1;
      const std::size_t nw = sw + side;
      const std::size_t ne = nw + 1;
      switch (kind) {
        case MeshKind::diagonal:
          cells.push_back({sw, se, ne});
          cells.push_back({sw, ne, nw});
          break;
        case MeshKind::alternating:
          if ((i + j) % 2 == 0) {
            cells.push_back({sw, se, ne});
            cells.push_back({sw, ne, nw});
          } else {
            cells.push_back({sw, se, nw});
            cells.push_back({se, ne, nw});
          }
          break;
        case MeshKind::crisscross: {
          const std::size_t centre = side * side + j * nn + i;
          cells.push_back({sw, se, centre});
          cells.push_back({se, ne, centre});
          cells.push_back({ne, nw, centre});
          cells.push_back({nw, sw, centre});
          break;
        }
      }
    }
  }
  return Mesh(domain, n, kind, std::move(vertices), std::move(cells));
}

double mesh_size(const Mesh& mesh) {
  double h = 0.0;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) h = std::max(h, mesh.cell_diameter(c));
  return h;
}

double min_cell_diameter(const Mesh& mesh) {
  double h = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) h = std::min(h, mesh.cell_diameter(c));
  return h;
}

double shape_regularity(const Mesh& mesh) {
  double mu = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < mesh.num_cells(); ++c)
    mu = std::min(mu, mesh.cell_inradius(c) / mesh.cell_diameter(c));
  return mu;
}

void write_mesh(std::ostream& os, const Mesh& mesh) {
  os << mesh.num_vertices() << ' ' << mesh.num_cells() << '\n';
  os << std::setprecision(17);
  for (const auto& v : mesh.vertices()) os << v.x << ' ' << v.y << '\n';
  for (const auto& k : mesh.cells()) os << k[0] << ' ' << k[1] << ' ' << k[2] << '\n';
  const auto& b = mesh.boundary_vertices();
  for (std::size_t i = 0; i < b.size(); ++i) os << (i ? " " : "") << b[i];
  os << '\n';
}

}  // namespace plap
