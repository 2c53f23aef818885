#include "confgeo/tensor.hpp"

#include <cmath>

#include "confgeo/error.hpp"

namespace confgeo {

Tensor::Tensor(int n, std::string variance) : n_(n), variance_(std::move(variance)) {
  for (char c : variance_)
    if (c != 'u' && c != 'd') fail(ErrorCode::VarianceMismatch, "variance must be made of 'u' and 'd'");
  std::size_t count = 1;
  for (std::size_t i = 0; i < variance_.size(); ++i) count *= static_cast<std::size_t>(n);
  data_.assign(count, Scalar(0.0));
}

std::size_t Tensor::offset_of(std::span<const int> idx) const {
  std::size_t off = 0;
  for (int i : idx) off = off * static_cast<std::size_t>(n_) + static_cast<std::size_t>(i);
  return off;
}

double Tensor::norm() const {
  double s = 0.0;
  for (const auto& c : data_) s += std::norm(c);
  return std::sqrt(s);
}

double Tensor::max_abs() const {
  double m = 0.0;
  for (const auto& c : data_) m = std::max(m, std::abs(c));
  return m;
}

namespace {

void check_same_shape(const Tensor& a, const Tensor& b) {
  if (a.dim() != b.dim() || a.variance() != b.variance())
    fail(ErrorCode::VarianceMismatch,
         "tensor shapes differ: " + a.variance() + " vs " + b.variance());
}

}  // namespace

Tensor& Tensor::operator+=(const Tensor& o) {
  check_same_shape(*this, o);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

Tensor& Tensor::operator-=(const Tensor& o) {
  check_same_shape(*this, o);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

Tensor& Tensor::operator*=(Scalar s) {
  for (auto& c : data_) c *= s;
  return *this;
}

double relative_residual(double difference, double lhs_norm, double rhs_norm) {
  return difference / (lhs_norm + rhs_norm + 1e-12);
}

double relative_residual(const Tensor& lhs, const Tensor& rhs) {
  return relative_residual((lhs - rhs).norm(), lhs.norm(), rhs.norm());
}

Tensor transform_slot(const Tensor& t, int slot, const Matrix& m) {
  const int n = t.dim();
  if (slot < 0 || slot >= t.rank()) fail(ErrorCode::VarianceMismatch, "slot out of range");
  if (m.rows() != n || m.cols() != n) fail(ErrorCode::VarianceMismatch, "matrix size does not match tensor dimension");
  Tensor out(n, t.variance());
  std::size_t stride = 1;
  for (int s = t.rank() - 1; s > slot; --s) stride *= static_cast<std::size_t>(n);
  const std::size_t block = stride * static_cast<std::size_t>(n);
  const auto& in = t.data();
  auto& res = out.data();
  for (std::size_t base = 0; base < in.size(); base += block) {
    for (std::size_t r = 0; r < stride; ++r) {
      for (int i = 0; i < n; ++i) {
        Scalar acc = 0.0;
        for (int a = 0; a < n; ++a) acc += m(a, i) * in[base + a * stride + r];
        res[base + i * stride + r] = acc;
      }
    }
  }
  return out;
}

Tensor lower_index(const Tensor& t, int slot, const Matrix& g) {
  if (t.variance()[slot] != 'u') fail(ErrorCode::VarianceMismatch, "lowering a covariant slot");
  Tensor out = transform_slot(t, slot, g);
  std::string v = t.variance();
  v[slot] = 'd';
  Tensor relabeled(t.dim(), v);
  relabeled.data() = std::move(out.data());
  return relabeled;
}

Tensor raise_index(const Tensor& t, int slot, const Matrix& ginv) {
  if (t.variance()[slot] != 'd') fail(ErrorCode::VarianceMismatch, "raising a contravariant slot");
  Tensor out = transform_slot(t, slot, ginv);
  std::string v = t.variance();
  v[slot] = 'u';
  Tensor relabeled(t.dim(), v);
  relabeled.data() = std::move(out.data());
  return relabeled;
}

Tensor in_basis(const Tensor& t, const Matrix& basis) {
  Tensor out = t;
  Matrix inv_t;
  bool have_inverse = false;
  for (int s = 0; s < t.rank(); ++s) {
    if (t.variance()[s] == 'd') {
      out = transform_slot(out, s, basis);
    } else {
      if (!have_inverse) {
        inv_t = basis.inverse().transpose();
        have_inverse = true;
      }
      out = transform_slot(out, s, inv_t);
    }
  }
  return out;
}

}  // namespace confgeo
