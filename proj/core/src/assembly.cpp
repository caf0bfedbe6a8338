#include "plap/assembly.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace plap {

namespace {

constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

}  // namespace

Assembler::Assembler(std::shared_ptr<const Space> space) : space_(std::move(space)) {
  if (!space_) throw std::invalid_argument("assembler needs a space");
  free_pattern_ = make_pattern(true);
  full_pattern_ = make_pattern(false);
}

Assembler::Pattern Assembler::make_pattern(bool constrained) const {
  const auto& mesh = space_->mesh();
  const std::size_t n = constrained ? space_->num_free() : space_->num_dofs();
  const auto row_of = [&](std::size_t v) -> std::size_t {
    if (!constrained) return v;
    const auto f = space_->free_index(v);
    return f ? *f : npos;
  };

  TripletBuilder builder(n);
  builder.reserve(9 * mesh.num_cells());
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto& k = mesh.cell(c);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        const auto i = row_of(k[a]);
        const auto j = row_of(k[b]);
        if (i != npos && j != npos) builder.add(i, j, 0.0);
      }
  }
  Pattern pat{builder.build(), {}};

  const auto& off = pat.matrix.row_offsets();
  const auto& cols = pat.matrix.columns();
  pat.slots.resize(mesh.num_cells());
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto& k = mesh.cell(c);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        const auto i = row_of(k[a]);
        const auto j = row_of(k[b]);
        std::size_t slot = npos;
        if (i != npos && j != npos) {
          for (std::size_t q = off[i]; q < off[i + 1]; ++q)
            if (cols[q] == j) slot = q;
        }
        pat.slots[c][3 * a + b] = slot;
      }
  }
  return pat;
}

void Assembler::check(const DiscreteFunction& u, double p, RegularisedNorm reg,
                      double scale) const {
  if (u.space.get() != space_.get() && u.coeffs.size() != space_->num_dofs())
    throw std::invalid_argument("function does not belong to this space");
  if (!(p > 1.0)) throw std::invalid_argument("p-Dirichlet assembly needs p > 1");
  if (!(reg.eps >= 0.0)) throw std::invalid_argument("regularisation eps must be >= 0");
  if (!(scale > 0.0)) throw std::invalid_argument("gradient scale must be positive");
}

double Assembler::energy(const DiscreteFunction& u, double p, RegularisedNorm reg,
                         double scale) const {
  check(u, p, reg, scale);
  const double eps2 = (reg.eps / scale) * (reg.eps / scale);
  double sum = 0.0;
  for (std::size_t c = 0; c < space_->mesh().num_cells(); ++c) {
    const Vec2 g = (1.0 / scale) * cell_gradient(u, c);
    const double s = dot(g, g) + eps2;
    sum += space_->cell_area(c) * std::pow(s, 0.5 * p);
  }
  return sum;
}

std::vector<double> Assembler::residual(const DiscreteFunction& u, double p,
                                        RegularisedNorm reg, double scale) const {
  check(u, p, reg, scale);
  const auto& mesh = space_->mesh();
  const double eps2 = (reg.eps / scale) * (reg.eps / scale);
  std::vector<double> r(space_->num_free(), 0.0);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const Vec2 gu = cell_gradient(u, c);
    const Vec2 g = (1.0 / scale) * gu;
    const double s = dot(g, g) + eps2;
    // (s/scale^2)^{(p-2)/2} grad u . grad phi == unscaled entry / scale^{p-2}
    const double flux = space_->cell_area(c) * std::pow(s, 0.5 * (p - 2.0));
    const auto& phi = space_->basis_gradients(c);
    const auto& k = mesh.cell(c);
    for (int a = 0; a < 3; ++a) {
      if (const auto i = space_->free_index(k[a])) r[*i] += flux * dot(gu, phi[a]);
    }
  }
  return r;
}

SparseMatrix Assembler::assemble(const Pattern& pattern, const DiscreteFunction& u, double p,
                                 RegularisedNorm reg, double scale) const {
  check(u, p, reg, scale);
  const auto& mesh = space_->mesh();
  const double eps2 = (reg.eps / scale) * (reg.eps / scale);
  SparseMatrix a = pattern.matrix;
  auto& vals = a.values();
  std::fill(vals.begin(), vals.end(), 0.0);

  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const Vec2 g = (1.0 / scale) * cell_gradient(u, c);
    const double s = dot(g, g) + eps2;
    const double area = space_->cell_area(c);
    const double w_iso = area * std::pow(s, 0.5 * (p - 2.0));
    // At p == 2 the second term vanishes; skipping it avoids 0 * inf at s == 0.
    const double w_aniso = p == 2.0 ? 0.0 : area * (p - 2.0) * std::pow(s, 0.5 * (p - 4.0));
    const auto& phi = space_->basis_gradients(c);
    std::array<double, 3> gphi{};
    for (int a = 0; a < 3; ++a) gphi[a] = dot(g, phi[a]);
    const auto& slot = pattern.slots[c];
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        const auto q = slot[3 * a + b];
        if (q == npos) continue;
        // Both terms are symmetric in (a, b) by construction.
        vals[q] += w_iso * dot(phi[a], phi[b]) + w_aniso * (gphi[a] * gphi[b]);
      }
  }
  return a;
}

SparseMatrix Assembler::jacobian(const DiscreteFunction& u, double p, RegularisedNorm reg,
                                 double scale) const {
  return assemble(free_pattern_, u, p, reg, scale);
}

SparseMatrix Assembler::jacobian_full(const DiscreteFunction& u, double p, RegularisedNorm reg,
                                      double scale) const {
  return assemble(full_pattern_, u, p, reg, scale);
}

double energy(const DiscreteFunction& u, double p, RegularisedNorm reg) {
  return Assembler(u.space).energy(u, p, reg);
}

std::vector<double> residual(const DiscreteFunction& u, double p, RegularisedNorm reg) {
  return Assembler(u.space).residual(u, p, reg);
}

SparseMatrix jacobian(const DiscreteFunction& u, double p, RegularisedNorm reg) {
  return Assembler(u.space).jacobian(u, p, reg);
}

SparseMatrix jacobian_full(const DiscreteFunction& u, double p, RegularisedNorm reg) {
  return Assembler(u.space).jacobian_full(u, p, reg);
}

}  // namespace plap
