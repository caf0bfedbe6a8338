#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace plap {

/// Square matrix in compressed-row layout with sorted column indices.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t n, std::vector<std::size_t> row_offsets,
               std::vector<std::size_t> columns, std::vector<double> values);

  static SparseMatrix identity(std::size_t n);

  std::size_t size() const { return n_; }
  std::size_t nonzeros() const { return values_.size(); }
  const std::vector<std::size_t>& row_offsets() const { return offsets_; }
  const std::vector<std::size_t>& columns() const { return columns_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  /// Entry (i, j); zero if structurally absent.
  double operator()(std::size_t i, std::size_t j) const;
  std::vector<double> diagonal() const;
  /// Maximum |A_ij - A_ji| including structural mismatches.
  double asymmetry() const;

 private:
  std::size_t n_{0};
  std::vector<std::size_t> offsets_{0};
  std::vector<std::size_t> columns_;
  std::vector<double> values_;
};

/// Accumulates (i, j, value) contributions in call order and compresses them,
/// summing duplicates. Summation order is the insertion order.
class TripletBuilder {
 public:
  explicit TripletBuilder(std::size_t n) : n_(n) {}
  void add(std::size_t i, std::size_t j, double value);
  void reserve(std::size_t count) { entries_.reserve(count); }
  SparseMatrix build() const;

 private:
  struct Entry {
    std::size_t row;
    std::size_t col;
    double value;
  };
  std::size_t n_;
  std::vector<Entry> entries_;
};

/// y = A x. Throws std::invalid_argument on size mismatch.
std::vector<double> spmv(const SparseMatrix& a, std::span<const double> x);
void spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> y);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

enum class Preconditioner { none, jacobi };

struct CgConfig {
  double rel_tol{1e-12};
  /// 0 selects 10 * n.
  std::size_t max_iter{0};
  Preconditioner preconditioner{Preconditioner::jacobi};
};

struct CgResult {
  std::vector<double> x;
  std::size_t iterations{0};
  double residual_norm{0.0};
  /// ||b - A x_k|| after each iteration (index 0 is the initial residual).
  std::vector<double> history;
};

/// Thrown when CG stops without meeting the tolerance; carries the last iterate.
class CgError : public std::runtime_error {
 public:
  CgError(const std::string& what, CgResult partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const CgResult& partial() const { return partial_; }

 private:
  CgResult partial_;
};

/// Preconditioned conjugate gradients for SPD A, starting from zero.
/// Converged when ||b - A x|| <= rel_tol * ||b||.
CgResult cg_solve(const SparseMatrix& a, std::span<const double> b, const CgConfig& cfg = {});

}  // namespace plap
