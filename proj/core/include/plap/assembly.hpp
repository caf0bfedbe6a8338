#pragma once

#include <array>
#include <memory>
#include <vector>

#include "plap/linalg.hpp"
#include "plap/space.hpp"

namespace plap {

/// |grad u|^2 is replaced by |grad u|^2 + eps^2 in every power of the gradient.
struct RegularisedNorm {
  double eps{0.0};
};

/// Element-wise assembly of the p-Dirichlet energy J(u) = sum_K |K| s_K^{p/2},
/// s_K = |grad u|_K^2 + eps^2, its first variation
///   r_i = sum_K |K| s_K^{(p-2)/2} grad u . grad phi_i        (= dJ/p)
/// and its second variation (the Newton Jacobian of r).
///
/// One-point quadrature is exact here because P1 gradients are cellwise
/// constant. Cells are visited in index order so results are reproducible bit
/// for bit.
///
/// Every operation accepts a gradient scale c > 0 and evaluates the same
/// quantities for grad u / c (with eps / c): the energy is divided by c^p and
/// the residual and Jacobian by c^(p-2). Newton directions are unaffected.
/// For large p this keeps values in floating-point range.
class Assembler {
 public:
  explicit Assembler(std::shared_ptr<const Space> space);

  const Space& space() const { return *space_; }

  double energy(const DiscreteFunction& u, double p, RegularisedNorm reg,
                double scale = 1.0) const;
  /// One entry per free dof, in Space::free_dofs() order.
  std::vector<double> residual(const DiscreteFunction& u, double p, RegularisedNorm reg,
                               double scale = 1.0) const;
  /// Free-dof block of the Jacobian.
  SparseMatrix jacobian(const DiscreteFunction& u, double p, RegularisedNorm reg,
                        double scale = 1.0) const;
  /// Jacobian over all vertices, with no boundary elimination.
  SparseMatrix jacobian_full(const DiscreteFunction& u, double p, RegularisedNorm reg,
                             double scale = 1.0) const;

 private:
  struct Pattern {
    SparseMatrix matrix;
    // Per cell, per local (a, b): index into matrix.values(), or npos.
    std::vector<std::array<std::size_t, 9>> slots;
  };
  Pattern make_pattern(bool constrained) const;
  SparseMatrix assemble(const Pattern& pattern, const DiscreteFunction& u, double p,
                        RegularisedNorm reg, double scale) const;
  void check(const DiscreteFunction& u, double p, RegularisedNorm reg, double scale) const;

  std::shared_ptr<const Space> space_;
  Pattern free_pattern_;
  Pattern full_pattern_;
};

double energy(const DiscreteFunction& u, double p, RegularisedNorm reg = {});
std::vector<double> residual(const DiscreteFunction& u, double p, RegularisedNorm reg = {});
SparseMatrix jacobian(const DiscreteFunction& u, double p, RegularisedNorm reg = {});
SparseMatrix jacobian_full(const DiscreteFunction& u, double p, RegularisedNorm reg = {});

}  // namespace plap
