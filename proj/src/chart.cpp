#include "confgeo/chart.hpp"

#include <cmath>

#include "confgeo/error.hpp"

namespace confgeo {

void MetricChart::set_metric(int i, int j, Expr e) {
  components[i * dim() + j] = e;
  components[j * dim() + i] = std::move(e);
}

bool MetricChart::in_domain(std::span<const Scalar> x, double margin) const {
  if (domain.empty()) return true;
  for (std::size_t i = 0; i < domain.size() && i < x.size(); ++i) {
    const double v = x[i].real();
    if (!(v >= domain[i].lo + margin && v <= domain[i].hi - margin)) return false;
  }
  return true;
}

MetricChart make_chart(std::string name, std::vector<std::string> coordinates, Mode mode) {
  MetricChart c;
  c.name = std::move(name);
  c.coordinates = std::move(coordinates);
  c.mode = mode;
  c.components.assign(c.coordinates.size() * c.coordinates.size(), Expr());
  return c;
}

MetricField::MetricField(const MetricChart& chart)
    : chart_(std::make_shared<const MetricChart>(chart)), n_(chart.dim()), mode_(chart.mode) {
  if (n_ < 2 || n_ > kMaxJetVars)
    fail(ErrorCode::InvalidArgument, "chart dimension must be between 2 and " + std::to_string(kMaxJetVars));
  if (static_cast<int>(chart.components.size()) != n_ * n_)
    fail(ErrorCode::InvalidArgument, "metric must have n*n components");
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j)
      upper_.emplace_back(chart.metric(i, j), chart.coordinates, chart.parameters, chart.mode);
}

Matrix MetricField::value(std::span<const Scalar> x) const {
  Matrix g(n_, n_);
  int k = 0;
  for (int i = 0; i < n_; ++i) {
    for (int j = i; j < n_; ++j) {
      g(i, j) = upper_[k++].value(x);
      g(j, i) = g(i, j);
    }
  }
  return g;
}

std::vector<Jet> MetricField::jets(std::span<const Scalar> x, int order) const {
  std::vector<Jet> vars;
  vars.reserve(n_);
  for (int i = 0; i < n_; ++i) vars.push_back(Jet::variable(n_, order, i, x[i]));
  return jets(std::span<const Jet>(vars));
}

std::vector<Jet> MetricField::jets(std::span<const Jet> x) const {
  std::vector<Jet> g(n_ * n_);
  int k = 0;
  for (int i = 0; i < n_; ++i) {
    for (int j = i; j < n_; ++j) {
      g[i * n_ + j] = upper_[k++].jet(x);
      g[j * n_ + i] = g[i * n_ + j];
    }
  }
  return g;
}

void check_nondegenerate(const Matrix& g) {
  double rows = 1.0;
  for (int i = 0; i < g.rows(); ++i) rows *= g.row(i).norm();
  const double det = std::abs(g.determinant());
  if (!(det > 1e-12 * rows)) fail(ErrorCode::DegenerateMetric, "metric is degenerate at the point");
}

void check_signature(const Matrix& g, std::pair<int, int> signature) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.real());
  int p = 0, q = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) (es.eigenvalues()[i] > 0 ? p : q) += 1;
  if (p != signature.first || q != signature.second)
    fail(ErrorCode::SignatureMismatch, "metric signature (" + std::to_string(p) + "," +
                                           std::to_string(q) + ") differs from declared (" +
                                           std::to_string(signature.first) + "," +
                                           std::to_string(signature.second) + ")");
}

Matrix MetricField::checked_value(std::span<const Scalar> x) const {
  Matrix g = value(x);
  check_nondegenerate(g);
  if (mode_ == Mode::Real && chart_->signature) check_signature(g, *chart_->signature);
  return g;
}

MetricChart rescale(const MetricChart& chart, const Expr& phi, std::string name) {
  MetricChart out = chart;
  if (!name.empty()) out.name = std::move(name);
  const Expr factor = Expr::call(Func::Exp, Expr::number(2.0) * phi);
  const int n = chart.dim();
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      if (!chart.metric(i, j).is_zero_literal()) out.set_metric(i, j, factor * chart.metric(i, j));
  return out;
}

}  // namespace confgeo
