#pragma once

#include <utility>
#include <vector>

#include "confgeo/curvature.hpp"
#include "confgeo/frame.hpp"

namespace confgeo {

// Ordered pairs (a, b), a < b, indexing the 2-form basis dx^a ^ dx^b.
const std::vector<std::pair<int, int>>& pair_basis(int n);

// Volume form coefficient eps_{01..n-1}: orientation * sqrt|det g| in real
// mode, orientation * (principal sqrt of det g) in complex mode.
Scalar volume_coefficient(const Matrix& g, int orientation, Mode mode);

// Hodge star of a covariant k-form:
// (*a)_{b..} = (1/k!) a^{c..} eps_{c.. b..}.
Tensor hodge_star(const Tensor& form, const Matrix& g, int orientation, Mode mode);

// Star and the projectors P+- = (1 +- *)/2 on 2-form components in dimension 4.
struct Lambda2 {
  Matrix g, ginv;
  int orientation = 1;
  Matrix star, plus, minus;  // 6x6 acting on (alpha_ab)_{a<b}
};

// Throws LorentzianUnsupported unless ** = +1 on 2-forms.
Lambda2 lambda2(const Matrix& g, int orientation, Mode mode);

// A curvature-type tensor T_abcd as the endomorphism of 2-forms
// (T alpha)_ab = (1/2) T_ab^{cd}-style action, normalized so that the round
// sphere's Riemann tensor maps to the identity.
Matrix curvature_operator(const Tensor& t, const Matrix& ginv);
// Inverse of curvature_operator.
Tensor curvature_tensor(const Matrix& op, const Matrix& g);

struct WeylSplit {
  Tensor plus, minus;            // "dddd"
  Matrix plus_op, minus_op;      // 6x6
  Scalar trace_plus = 0.0;       // tr(R restricted to Lambda+)
  double projector_check = 0.0;  // ||P+ W P+ - W+|| + ||P- W P- - W-||, relative
};

// W+- as the trace-free parts of R on Lambda+-.
WeylSplit weyl_pm(const CurvaturePack& pack, const Lambda2& l2);

// Applies a 6x6 projector to the 2-form formed by slots (slot, slot+1).
Tensor project_pair(const Tensor& t, int slot, const Matrix& projector);

struct CottonSplit {
  Tensor plus, minus;
};
CottonSplit cy_pm(const Tensor& cotton, const Lambda2& l2);

struct DivWeylSplit {
  Tensor plus, minus;  // delta W+-
  Tensor nabla_plus, nabla_minus;
};
DivWeylSplit div_weyl_pm(const CurvaturePack& pack, const Lambda2& l2);

// Frame formula for <W+-(X,Y)Z,X> from R over every orientation-compatible
// relabeling (X,Y,Z,nu) of an orthonormal frame, compared against the
// projector route. Returns the largest deviation and the curvature scale.
struct ArwCheck {
  double max_plus = 0.0;
  double max_minus = 0.0;
  double scale = 0.0;  // max |R| frame component
};
ArwCheck check_arw(const CurvaturePack& pack, const WeylSplit& split, const PointFrame& frame,
                   int orientation);

struct StarRicci {
  Matrix lhs;  // * R *, acting on 1-forms
  Matrix rhs;  // -h + (tr h) I
  double residual = 0.0;
};
StarRicci star_ricci_3d(const CurvaturePack& pack, int orientation, Mode mode);

enum class PlaneKind { Alpha, Beta, NotIsotropic };
const char* to_string(PlaneKind k);

struct PlaneClass {
  PlaneKind kind = PlaneKind::NotIsotropic;
  int star_eigenvalue = 0;  // +1 for Lambda+, -1 for Lambda-, 0 otherwise
  double gram = 0.0;        // largest |g(u, v)| among the spanning vectors
};

// alpha-planes are the totally isotropic planes whose bivector is self-dual.
// Throws NotAPlane for dependent vectors.
PlaneClass classify_isotropic_plane(const Vector& x, const Vector& y, const Lambda2& l2);

// Lowered 2-form of the bivector x ^ y as pair-basis components.
Vector bivector_form(const Vector& x, const Vector& y, const Matrix& g);

}  // namespace confgeo
