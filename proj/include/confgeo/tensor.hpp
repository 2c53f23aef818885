#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "confgeo/scalar.hpp"

namespace confgeo {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Dense tensor components at one point. The variance string lists the
// slots in order, 'u' for contravariant and 'd' for covariant, so the
// Riemann tensor R^l_ijk is stored with variance "dddu" as R(i,j,k,l).
class Tensor {
 public:
  Tensor() = default;
  Tensor(int n, std::string variance);

  int dim() const { return n_; }
  int rank() const { return static_cast<int>(variance_.size()); }
  const std::string& variance() const { return variance_; }
  std::size_t size() const { return data_.size(); }
  std::vector<Scalar>& data() { return data_; }
  const std::vector<Scalar>& data() const { return data_; }

  template <class... I>
  Scalar& operator()(I... idx) {
    return data_[offset(idx...)];
  }
  template <class... I>
  const Scalar& operator()(I... idx) const {
    return data_[offset(idx...)];
  }
  Scalar& at(std::span<const int> idx) { return data_[offset_of(idx)]; }
  const Scalar& at(std::span<const int> idx) const { return data_[offset_of(idx)]; }

  // Frobenius norm of the coordinate components.
  double norm() const;
  double max_abs() const;

  Tensor& operator+=(const Tensor& o);
  Tensor& operator-=(const Tensor& o);
  Tensor& operator*=(Scalar s);
  friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
  friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
  friend Tensor operator*(Tensor a, Scalar s) { return a *= s; }
  friend Tensor operator*(Scalar s, Tensor a) { return a *= s; }

 private:
  template <class... I>
  std::size_t offset(I... idx) const {
    std::size_t off = 0;
    ((off = off * static_cast<std::size_t>(n_) + static_cast<std::size_t>(idx)), ...);
    return off;
  }
  std::size_t offset_of(std::span<const int> idx) const;

  int n_ = 0;
  std::string variance_;
  std::vector<Scalar> data_;
};

// ||lhs - rhs|| / (||lhs|| + ||rhs|| + 1e-12).
double relative_residual(const Tensor& lhs, const Tensor& rhs);
double relative_residual(double difference, double lhs_norm, double rhs_norm);

// T'[..i..] = sum_a m(a, i) T[..a..] along one slot; the variance is kept.
Tensor transform_slot(const Tensor& t, int slot, const Matrix& m);
Tensor lower_index(const Tensor& t, int slot, const Matrix& g);
Tensor raise_index(const Tensor& t, int slot, const Matrix& ginv);
// Components against the basis whose vectors are the columns of `basis`.
Tensor in_basis(const Tensor& t, const Matrix& basis);

// Iterate over every multi-index of a rank-r tensor in dimension n.
template <class F>
void for_each_index(int n, int rank, F&& f) {
  std::vector<int> idx(rank, 0);
  while (true) {
    f(std::span<const int>(idx));
    int s = rank - 1;
    while (s >= 0 && ++idx[s] == n) idx[s--] = 0;
    if (s < 0) return;
  }
}

}  // namespace confgeo
