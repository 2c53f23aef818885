#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "confgeo/evaluate.hpp"
#include "confgeo/tensor.hpp"

namespace confgeo {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// A coordinate chart carrying a metric given by expressions. Only the upper
// triangle is meaningful; metric(i, j) and metric(j, i) return the same Expr.
struct MetricChart {
  std::string name;
  std::vector<std::string> coordinates;
  Mode mode = Mode::Real;
  std::optional<std::pair<int, int>> signature;  // (p, q), real mode only
  std::vector<Expr> components;                  // row-major n*n, kept symmetric
  Parameters parameters;
  std::vector<Interval> domain;  // empty when unbounded
  int orientation = 1;
  std::vector<Point> sample_points;

  int dim() const { return static_cast<int>(coordinates.size()); }
  const Expr& metric(int i, int j) const { return components[i * dim() + j]; }
  void set_metric(int i, int j, Expr e);

  bool in_domain(std::span<const Scalar> x, double margin = 0.0) const;
};

// Builds a chart with a zero metric of the right size.
MetricChart make_chart(std::string name, std::vector<std::string> coordinates, Mode mode);

// Compiled metric components for repeated evaluation.
class MetricField {
 public:
  explicit MetricField(const MetricChart& chart);

  int dim() const { return n_; }
  Mode mode() const { return mode_; }
  const MetricChart& chart() const { return *chart_; }

  Matrix value(std::span<const Scalar> x) const;
  // n*n jets (row-major) with the coordinates as jet variables.
  std::vector<Jet> jets(std::span<const Scalar> x, int order) const;
  // n*n jets with the coordinates bound to the given jets.
  std::vector<Jet> jets(std::span<const Jet> x) const;

  // Nondegeneracy (1e-12 relative to the row-norm product) and, in real
  // mode, the declared signature. Returns the metric value.
  Matrix checked_value(std::span<const Scalar> x) const;

 private:
  std::shared_ptr<const MetricChart> chart_;
  int n_;
  Mode mode_;
  std::vector<CompiledExpr> upper_;  // i <= j, row-major over the triangle
};

// Throws DegenerateMetric when det g is negligible against the row norms.
void check_nondegenerate(const Matrix& g);
// Throws SignatureMismatch if the eigenvalue signs of a real metric differ from (p, q).
void check_signature(const Matrix& g, std::pair<int, int> signature);

// g' = exp(2 phi) g as a new chart over the same coordinates.
MetricChart rescale(const MetricChart& chart, const Expr& phi, std::string name = {});

}  // namespace confgeo
