#include "plap/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace plap {

SparseMatrix::SparseMatrix(std::size_t n, std::vector<std::size_t> row_offsets,
                           std::vector<std::size_t> columns, std::vector<double> values)
    : n_(n), offsets_(std::move(row_offsets)), columns_(std::move(columns)),
      values_(std::move(values)) {
  if (offsets_.size() != n_ + 1 || offsets_.front() != 0 || offsets_.back() != columns_.size() ||
      columns_.size() != values_.size())
    throw std::invalid_argument("inconsistent compressed-row arrays");
  for (std::size_t i = 0; i < n_; ++i) {
    if (offsets_[i] > offsets_[i + 1]) throw std::invalid_argument("row offsets must not decrease");
    for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) {
      if (columns_[k] >= n_) throw std::invalid_argument("column index out of range");
      if (k > offsets_[i] && columns_[k] <= columns_[k - 1])
        throw std::invalid_argument("column indices must be strictly increasing per row");
    }
  }
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  std::vector<std::size_t> offsets(n + 1);
  std::iota(offsets.begin(), offsets.end(), std::size_t{0});
  std::vector<std::size_t> cols(n);
  std::iota(cols.begin(), cols.end(), std::size_t{0});
  return SparseMatrix(n, std::move(offsets), std::move(cols), std::vector<double>(n, 1.0));
}

double SparseMatrix::operator()(std::size_t i, std::size_t j) const {
  const auto first = columns_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]);
  const auto last = columns_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]);
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - columns_.begin())];
}

std::vector<double> SparseMatrix::diagonal() const {
  std::vector<double> d(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) d[i] = (*this)(i, i);
  return d;
}

double SparseMatrix::asymmetry() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k)
      worst = std::max(worst, std::abs(values_[k] - (*this)(columns_[k], i)));
  return worst;
}

void TripletBuilder::add(std::size_t i, std::size_t j, double value) {
  if (i >= n_ || j >= n_) throw std::out_of_range("triplet index out of range");
  entries_.push_back({i, j, value});
}

SparseMatrix TripletBuilder::build() const {
  // Counting sort by row, then a stable sort by column inside each row, keeps
  // duplicate summation in insertion order.
  std::vector<std::size_t> count(n_ + 1, 0);
  for (const auto& e : entries_) ++count[e.row + 1];
  std::partial_sum(count.begin(), count.end(), count.begin());
  std::vector<Entry> sorted(entries_.size());
  {
    auto cursor = count;
    for (const auto& e : entries_) sorted[cursor[e.row]++] = e;
  }

  std::vector<std::size_t> offsets(n_ + 1, 0);
  std::vector<std::size_t> cols;
  std::vector<double> vals;
  cols.reserve(entries_.size());
  vals.reserve(entries_.size());
  for (std::size_t i = 0; i < n_; ++i) {
    auto first = sorted.begin() + static_cast<std::ptrdiff_t>(count[i]);
    auto last = sorted.begin() + static_cast<std::ptrdiff_t>(count[i + 1]);
    std::stable_sort(first, last, [](const Entry& a, const Entry& b) { return a.col < b.col; });
    for (auto it = first; it != last; ++it) {
      if (!cols.empty() && cols.size() > offsets[i] && cols.back() == it->col)
        vals.back() += it->value;
      else {
        cols.push_back(it->col);
        vals.push_back(it->value);
      }
    }
    offsets[i + 1] = cols.size();
  }
  return SparseMatrix(n_, std::move(offsets), std::move(cols), std::move(vals));
}

void spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> y) {
  if (x.size() != a.size() || y.size() != a.size())
    throw std::invalid_argument("spmv dimension mismatch");
  const auto& off = a.row_offsets();
  const auto& col = a.columns();
  const auto& val = a.values();
  for (std::size_t i = 0; i < a.size(); ++i) {
    double s = 0.0;
    for (std::size_t k = off[i]; k < off[i + 1]; ++k) s += val[k] * x[col[k]];
    y[i] = s;
  }
}

std::vector<double> spmv(const SparseMatrix& a, std::span<const double> x) {
  std::vector<double> y(a.size());
  spmv(a, x, y);
  return y;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

CgResult cg_solve(const SparseMatrix& a, std::span<const double> b, const CgConfig& cfg) {
  const std::size_t n = a.size();
  if (b.size() != n) throw std::invalid_argument("cg right-hand side dimension mismatch");
  if (!(cfg.rel_tol > 0.0)) throw std::invalid_argument("cg tolerance must be positive");
  const std::size_t max_iter = cfg.max_iter ? cfg.max_iter : std::max<std::size_t>(10 * n, 1);

  std::vector<double> inv_diag(n, 1.0);
  if (cfg.preconditioner == Preconditioner::jacobi) {
    const auto d = a.diagonal();
    for (std::size_t i = 0; i < n; ++i)
      if (d[i] > 0.0) inv_diag[i] = 1.0 / d[i];
  }

  CgResult res;
  res.x.assign(n, 0.0);
  std::vector<double> r(b.begin(), b.end());
  std::vector<double> z(n), p(n), ap(n);
  const double bnorm = norm2(b);
  double rnorm = bnorm;
  res.history.push_back(rnorm);
  if (bnorm == 0.0) return res;
  const double target = cfg.rel_tol * bnorm;

  for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  p = z;
  double rz = dot(r, z);

  while (res.iterations < max_iter) {
    spmv(a, p, ap);
    const double pap = dot(p, ap);
    if (!(pap > 0.0)) {
      res.residual_norm = rnorm;
      throw CgError("cg breakdown: matrix not positive definite along search direction",
                    std::move(res));
    }
    const double alpha = rz / pap;
    for (std::size_t i = 0; i < n; ++i) {
      res.x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    ++res.iterations;
    rnorm = norm2(r);
    res.history.push_back(rnorm);
    if (rnorm <= target) {
      res.residual_norm = rnorm;
      return res;
    }
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  res.residual_norm = rnorm;
  throw CgError("cg did not converge in " + std::to_string(max_iter) +
                    " iterations (residual " + std::to_string(rnorm / bnorm) + " relative)",
                std::move(res));
}

}  // namespace plap
