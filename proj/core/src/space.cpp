#include "plap/space.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace plap {

Space::Space(std::shared_ptr<const Mesh> mesh) : mesh_(std::move(mesh)) {
  if (!mesh_) throw std::invalid_argument("space needs a mesh");
  const auto nv = mesh_->num_vertices();
  free_of_vertex_.assign(nv, std::numeric_limits<std::size_t>::max());
  for (std::size_t v = 0; v < nv; ++v) {
    if (!mesh_->is_boundary(v)) {
      free_of_vertex_[v] = free_.size();
      free_.push_back(v);
    }
  }

  grads_.resize(mesh_->num_cells());
  areas_.resize(mesh_->num_cells());
  for (std::size_t c = 0; c < mesh_->num_cells(); ++c) {
    const auto t = mesh_->cell_points(c);
    const double det = cross(t[1] - t[0], t[2] - t[0]);
    // grad(lambda_k) = rot90(opposite edge) / det
    for (int k = 0; k < 3; ++k) {
      const Vec2 e = t[(k + 2) % 3] - t[(k + 1) % 3];
      grads_[c][k] = {-e.y / det, e.x / det};
    }
    areas_[c] = 0.5 * std::abs(det);
  }
}

std::optional<std::size_t> Space::free_index(std::size_t v) const {
  if (v >= free_of_vertex_.size() || mesh_->is_boundary(v)) return std::nullopt;
  return free_of_vertex_[v];
}

std::shared_ptr<const Space> make_space(std::shared_ptr<const Mesh> mesh) {
  return std::make_shared<const Space>(std::move(mesh));
}

DiscreteFunction::DiscreteFunction(std::shared_ptr<const Space> s, std::vector<double> c)
    : space(std::move(s)), coeffs(std::move(c)) {
  if (!space) throw std::invalid_argument("discrete function needs a space");
  if (coeffs.size() != space->num_dofs())
    throw std::invalid_argument("coefficient count does not match the space");
}

DiscreteFunction::DiscreteFunction(std::shared_ptr<const Space> s)
    : DiscreteFunction(s, std::vector<double>(s ? s->num_dofs() : 0, 0.0)) {}

std::vector<double> DiscreteFunction::free_values() const {
  std::vector<double> out;
  out.reserve(space->num_free());
  for (auto v : space->free_dofs()) out.push_back(coeffs[v]);
  return out;
}

void DiscreteFunction::add_to_free(const std::vector<double>& delta, double scale) {
  const auto& free = space->free_dofs();
  if (delta.size() != free.size()) throw std::invalid_argument("update size mismatch");
  for (std::size_t i = 0; i < free.size(); ++i) coeffs[free[i]] += scale * delta[i];
}

DiscreteFunction interpolate(const ScalarField& g, std::shared_ptr<const Space> space) {
  DiscreteFunction u(space);
  const auto& verts = space->mesh().vertices();
  for (std::size_t v = 0; v < verts.size(); ++v) {
    const double value = g(verts[v].x, verts[v].y);
    if (!std::isfinite(value))
      throw std::invalid_argument("non-finite data at vertex " + std::to_string(v));
    u.coeffs[v] = value;
  }
  return u;
}

double evaluate_in_cell(const DiscreteFunction& u, std::size_t cell, Point pt) {
  const auto& mesh = u.V().mesh();
  const auto lam = barycentric(mesh.cell_points(cell), pt);
  const auto& k = mesh.cell(cell);
  return lam[0] * u.coeffs[k[0]] + lam[1] * u.coeffs[k[1]] + lam[2] * u.coeffs[k[2]];
}

double evaluate(const DiscreteFunction& u, Point pt) {
  const auto cell = u.V().mesh().locate(pt);
  if (!cell) throw std::out_of_range("evaluation point outside the domain");
  return evaluate_in_cell(u, *cell, pt);
}

Vec2 cell_gradient(const DiscreteFunction& u, std::size_t cell) {
  const auto& g = u.V().basis_gradients(cell);
  const auto& k = u.V().mesh().cell(cell);
  Vec2 out;
  for (int a = 0; a < 3; ++a) out = out + u.coeffs[k[a]] * g[a];
  return out;
}

double grad_lp_norm(const DiscreteFunction& u, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("grad_lp_norm needs p >= 1");
  const auto& V = u.V();
  const std::size_t nc = V.mesh().num_cells();
  double gmax = 0.0;
  for (std::size_t c = 0; c < nc; ++c) gmax = std::max(gmax, norm(cell_gradient(u, c)));
  if (std::isinf(p) || gmax == 0.0) return gmax;
  // Factor out the max so that large p neither overflows nor underflows.
  double sum = 0.0;
  for (std::size_t c = 0; c < nc; ++c)
    sum += V.cell_area(c) * std::pow(norm(cell_gradient(u, c)) / gmax, p);
  return gmax * std::pow(sum, 1.0 / p);
}

double linf_error(const DiscreteFunction& u, const ScalarField& exact) {
  const auto& mesh = u.V().mesh();
  double err = 0.0;
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    const auto& x = mesh.vertex(v);
    err = std::max(err, std::abs(u.coeffs[v] - exact(x.x, x.y)));
  }
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto t = mesh.cell_points(c);
    const auto& k = mesh.cell(c);
    for (int a = 0; a < 3; ++a) {
      const int b = (a + 1) % 3;
      const Point mid = 0.5 * (t[a] + t[b]);
      const double uh = 0.5 * (u.coeffs[k[a]] + u.coeffs[k[b]]);
      err = std::max(err, std::abs(uh - exact(mid.x, mid.y)));
    }
    const Point bary = (1.0 / 3.0) * (t[0] + t[1] + t[2]);
    const double uh = (u.coeffs[k[0]] + u.coeffs[k[1]] + u.coeffs[k[2]]) / 3.0;
    err = std::max(err, std::abs(uh - exact(bary.x, bary.y)));
  }
  return err;
}

double linf_error_lattice(const DiscreteFunction& u, const ScalarField& exact, int k) {
  if (k < 1) throw std::invalid_argument("lattice level must be >= 1");
  const auto& mesh = u.V().mesh();
  double err = 0.0;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto t = mesh.cell_points(c);
    const auto& idx = mesh.cell(c);
    for (int i = 0; i <= k; ++i) {
      for (int j = 0; i + j <= k; ++j) {
        const double l1 = static_cast<double>(i) / k;
        const double l2 = static_cast<double>(j) / k;
        const double l0 = 1.0 - l1 - l2;
        const Point x = l0 * t[0] + l1 * t[1] + l2 * t[2];
        const double uh = l0 * u.coeffs[idx[0]] + l1 * u.coeffs[idx[1]] + l2 * u.coeffs[idx[2]];
        err = std::max(err, std::abs(uh - exact(x.x, x.y)));
      }
    }
  }
  return err;
}

void write_coefficients(std::ostream& os, const DiscreteFunction& u) {
  os << std::setprecision(17);
  for (double c : u.coeffs) os << c << '\n';
}

std::vector<double> read_coefficients(std::istream& is) {
  std::vector<double> out;
  double v = 0.0;
  while (is >> v) out.push_back(v);
  if (!is.eof()) throw std::runtime_error("malformed coefficient dump");
  return out;
}

}  // namespace plap
