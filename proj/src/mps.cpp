#include "tricert/mps.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace tricert {

namespace {

using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::VectorXd;

std::array<Vector2d, 3> vertices_of(const Triangle<double>& tri) {
  return {Vector2d(0.0, 0.0), Vector2d(1.0, 0.0), Vector2d(tri.cx().mid(), tri.cy().mid())};
}

// True when q is certainly outside the closed triangle: some edge has q
// strictly on its outer side (vertices are counterclockwise).
bool certainly_outside(const Triangle<double>& tri, const Vector2d& q) {
  const Vec2<double> p = vec2(IntervalD(q.x()), IntervalD(q.y()));
  for (int i = 0; i < 3; ++i) {
    const Vec2<double> a = tri.vertex(i), b = tri.vertex((i + 1) % 3);
    if (cross<double>(b - a, p - a).certainly_negative()) return true;
  }
  return false;
}

} // namespace

MPSBasis build_basis(const Triangle<double>& tri, const BasisSpec& spec) {
  if (spec.n_c < 0 || spec.d < 0) fail(ErrorCode::precondition, "basis sizes must be nonnegative");
  const auto V = vertices_of(tri);
  MPSBasis basis;
  basis.d = spec.d;
  basis.center = (V[0] + V[1] + V[2]) / 3.0;
  for (int v = 0; v < 3; ++v) {
    const Vector2d a = (V[(v + 1) % 3] - V[v]).normalized(), c = (V[(v + 2) % 3] - V[v]).normalized();
    const Vector2d outward = -(a + c).normalized();
    for (int j = 0; j < spec.n_c; ++j) {
      const Vector2d q = V[v] + outward * (spec.ell0 * std::exp(-spec.sigma * j / std::sqrt(double(spec.n_c))));
      if (!certainly_outside(tri, q)) fail(ErrorCode::charge_inside_domain, "a charge is not outside the closed triangle");
      basis.charges.push_back(q);
    }
  }
  return basis;
}

CollocationPoints collocation_points(const Triangle<double>& tri, const BasisSpec& spec) {
  const auto V = vertices_of(tri);
  CollocationPoints pts;
  const int nb = spec.boundary_points;
  for (int s = 0; s < 3; ++s)
    for (int i = 0; i < nb; ++i) {
      const double x = std::cos(std::numbers::pi * (i + 0.5) / nb);
      pts.boundary.push_back(V[s] + (V[(s + 1) % 3] - V[s]) * ((1 - x) / 2));
    }
  std::mt19937_64 gen(spec.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  while (static_cast<int>(pts.interior.size()) < spec.interior_points) {
    const double a = u(gen), b = u(gen);
    if (a + b >= 1.0 || a == 0.0 || b == 0.0) continue;
    pts.interior.push_back(V[0] + a * (V[1] - V[0]) + b * (V[2] - V[0]));
  }
  return pts;
}

void basis_row(const MPSBasis& basis, double k, const Vector2d& p, double* out) {
  int c = 0;
  for (const auto& q : basis.charges) {
    const Vector2d r = p - q;
    const double R = r.norm();
    out[c++] = std::cyl_neumann(0.0, k * R);
    const double y1 = std::cyl_neumann(1.0, k * R);
    out[c++] = y1 * r.x() / R;
    out[c++] = y1 * r.y() / R;
  }
  const Vector2d r = p - basis.center;
  const double R = r.norm(), th = std::atan2(r.y(), r.x());
  out[c++] = std::cyl_bessel_j(0.0, k * R);
  for (int j = 1; j <= basis.d; ++j) {
    const double J = std::cyl_bessel_j(double(j), k * R);
    out[c++] = J * std::cos(j * th);
    out[c++] = J * std::sin(j * th);
  }
}

MatrixXd build_collocation(const Triangle<double>& tri, const BasisSpec& spec, double lambda) {
  if (!(lambda > 0)) fail(ErrorCode::nonpositive_input, "collocation needs lambda > 0");
  const MPSBasis basis = build_basis(tri, spec);
  const CollocationPoints pts = collocation_points(tri, spec);
  const int n = basis.columns();
  const double k = std::sqrt(lambda);
  MatrixXd a(pts.boundary.size() + pts.interior.size(), n);
  std::vector<double> row(n);
  Eigen::Index i = 0;
  for (const auto* set : {&pts.boundary, &pts.interior})
    for (const auto& p : *set) {
      basis_row(basis, k, p, row.data());
      a.row(i++) = Eigen::Map<const Eigen::RowVectorXd>(row.data(), n);
    }
  return a;
}

std::pair<double, VectorXd> collocation_smin(const MatrixXd& a, int boundary_rows) {
  const Eigen::Index n = a.cols();
  if (a.rows() < n || boundary_rows > a.rows()) fail(ErrorCode::precondition, "collocation matrix has too few rows");
  const Eigen::HouseholderQR<MatrixXd> qr(a);
  const MatrixXd Q = qr.householderQ() * MatrixXd::Identity(a.rows(), n);
  const Eigen::JacobiSVD<MatrixXd> svd(Q.topRows(boundary_rows), Eigen::ComputeThinV);
  const VectorXd y = svd.matrixV().col(n - 1);
  VectorXd c = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>().solve(y);
  c.normalize();
  if (!c.allFinite()) fail(ErrorCode::numeric_backend, "collocation solve produced non-finite coefficients");
  return {svd.singularValues()(n - 1), c};
}

std::pair<double, double> bracket_around(double estimate, double fraction) {
  if (!(estimate > 0)) fail(ErrorCode::nonpositive_input, "eigenvalue estimate must be positive");
  return {estimate * (1 - fraction), estimate * (1 + fraction)};
}

MPSCandidate golden_search(const Triangle<double>& tri, std::pair<double, double> bracket, const BasisSpec& spec,
                           const SearchOptions& opts) {
  auto [lo, hi] = bracket;
  if (!(lo > 0) || !(hi > lo)) fail(ErrorCode::precondition, "bracket must be a nonempty positive interval");
  const int nb = 3 * spec.boundary_points;
  auto smin = [&](double lam) { return collocation_smin(build_collocation(tri, spec, lam), nb).first; };

  // coarse scan: keep the neighbourhood of the smallest sample
  const int m = std::max(opts.scan_points, 2);
  int best = 0;
  double best_val = INFINITY;
  for (int i = 0; i <= m; ++i) {
    const double v = smin(lo + (hi - lo) * i / m);
    if (v < best_val) best_val = v, best = i;
  }
  const double step = (hi - lo) / m;
  double a = lo + step * std::max(best - 1, 0), b = lo + step * std::min(best + 1, m);

  const double g = (std::sqrt(5.0) - 1) / 2;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = smin(x1), f2 = smin(x2);
  while (b - a > opts.rel_tol * b) {
    if (f1 < f2) {
      b = x2, x2 = x1, f2 = f1;
      x1 = b - g * (b - a);
      f1 = smin(x1);
    } else {
      a = x1, x1 = x2, f1 = f2;
      x2 = a + g * (b - a);
      f2 = smin(x2);
    }
  }
  MPSCandidate cand;
  cand.cx = tri.cx().mid();
  cand.cy = tri.cy().mid();
  cand.lambda = (a + b) / 2;
  cand.spec = spec;
  cand.basis = build_basis(tri, spec);
  std::tie(cand.smin, cand.coeffs) = collocation_smin(build_collocation(tri, spec, cand.lambda), nb);
  if (!(cand.smin <= opts.smin_ceiling))
    fail(ErrorCode::no_dip, "smallest singular value " + std::to_string(cand.smin) + " above the ceiling: no eigenvalue in bracket");
  return cand;
}

double eval_u(const MPSCandidate& cand, const Vector2d& p) {
  std::vector<double> row(cand.basis.columns());
  basis_row(cand.basis, std::sqrt(cand.lambda), p, row.data());
  return Eigen::Map<const VectorXd>(row.data(), row.size()).dot(cand.coeffs);
}

template <typename T>
Jet<T> eval_u_jet(const MPSCandidate& cand, const Segment<T>& seg, const Interval<T>& base, int order) {
  using I = Interval<T>;
  using J = Jet<T>;
  const int n = order;
  if (cand.coeffs.size() != cand.basis.columns()) fail(ErrorCode::precondition, "coefficient count does not match the basis");
  const I k = sqrt(I(cand.lambda));
  const Vec2<T> M = seg.mid(), H = seg.half();
  const I px = M.x() + base * H.x(), py = M.y() + base * H.y();
  J u(n);
  int col = 0;
  auto coef = [&](int i) { return I(cand.coeffs(i)); };

  for (const auto& q : cand.basis.charges) {
    const I dx0 = px - I(q.x()), dy0 = py - I(q.y());
    J r2(n);
    r2[0] = sqr(dx0) + sqr(dy0);
    if (!r2[0].certainly_positive()) fail(ErrorCode::segment_through_charge, "segment passes through a charge");
    if (n >= 1) r2[1] = I(2.0) * (dx0 * H.x() + dy0 * H.y());
    if (n >= 2) r2[2] = sqr(H.x()) + sqr(H.y());
    const J r = sqrt(r2);
    const J inv_r = reciprocal(r);
    // z = k r; z' and z'/z = r'/r as jets
    J zp(n), rp(n);
    for (int i = 0; i < n; ++i) {
      rp[i] = I(i + 1) * r[i + 1];
      zp[i] = k * rp[i];
    }
    const J g = rp * inv_r;
    // (Y0, Y1)' = (-Y1, Y0 - Y1/z) z'
    const auto y = bessel_table(BesselKind::second, 1, k * r[0]);
    J A(n), B(n);
    A[0] = y[0];
    B[0] = y[1];
    for (int i = 0; i < n; ++i) {
      I sa = B[0] * zp[i], sb = A[0] * zp[i] - B[0] * g[i];
      for (int j = 1; j <= i; ++j) {
        sa = sa + B[j] * zp[i - j];
        sb = sb + A[j] * zp[i - j] - B[j] * g[i - j];
      }
      A[i + 1] = -sa / I(i + 1);
      B[i + 1] = sb / I(i + 1);
    }
    const J cos_t = J::linear(n, dx0, H.x()) * inv_r, sin_t = J::linear(n, dy0, H.y()) * inv_r;
    u.add_scaled(coef(col++), A);
    u.add_scaled(coef(col++), B * cos_t);
    u.add_scaled(coef(col++), B * sin_t);
  }

  // Centre functions: J_j(k r) e^{i j theta} = (k/2)^j F_j(k^2 r^2 / 4) (x + i y)^j.
  const int d = cand.basis.d;
  const I dx0 = px - I(cand.basis.center.x()), dy0 = py - I(cand.basis.center.y());
  const I k2q = sqr(k) / I(4.0);
  const I w0 = k2q * (sqr(dx0) + sqr(dy0));
  const I w1 = k2q * I(2.0) * (dx0 * H.x() + dy0 * H.y());
  const I w2 = k2q * (sqr(H.x()) + sqr(H.y()));
  const int top = d + n;
  const auto F = bessel_entire_table(top, w0);
  // G_nu(s) = F_nu(w(s)),  G_nu' = -G_{nu+1} w'
  std::vector<J> G(static_cast<std::size_t>(d) + 1, J(n));
  {
    std::vector<std::vector<I>> tab(static_cast<std::size_t>(top) + 1);
    for (int nu = 0; nu <= top; ++nu) tab[nu].push_back(F[nu]);
    for (int i = 0; i < n; ++i)
      for (int nu = 0; nu + i + 1 <= top; ++nu) {
        I s = w1 * tab[nu + 1][i];
        if (i >= 1) s = s + I(2.0) * w2 * tab[nu + 1][i - 1];
        tab[nu].push_back(-s / I(i + 1));
      }
    for (int nu = 0; nu <= d; ++nu)
      for (int i = 0; i <= n; ++i) G[nu][i] = tab[nu][i];
  }
  u.add_scaled(coef(col++), G[0]);
  const J ex = J::linear(n, dx0, H.x()), ey = J::linear(n, dy0, H.y());
  J re = J::constant(n, I(1.0)), im(n);
  I scale(1.0);
  const I khalf = k / I(2.0);
  for (int j = 1; j <= d; ++j) {
    const J re2 = re * ex - im * ey;
    im = re * ey + im * ex;
    re = re2;
    scale = scale * khalf;
    const J gj = G[j] * scale;
    u.add_scaled(coef(col++), gj * re);
    u.add_scaled(coef(col++), gj * im);
  }
  return u;
}

template <typename T>
TaylorModel<T> eval_u_model(const MPSCandidate& cand, const Segment<T>& seg, int m) {
  if (m < 0 || m > kMaxTaylorDegree) fail(ErrorCode::order_overflow, "Taylor degree out of range");
  const Interval<T> whole(T(-1.0), T(1.0));
  return TaylorModel<T>::from_jets(eval_u_jet(cand, seg, Interval<T>(0.0), m), eval_u_jet(cand, seg, whole, m + 1), m);
}

template <typename T>
TaylorModel<T> eval_u_taylor(const MPSCandidate& cand, const Segment<T>& seg, int m) {
  // Squaring the whole-segment jet would multiply its wide low-order
  // coefficients into the remainder; the model product keeps them tight.
  const TaylorModel<T> u = eval_u_model(cand, seg, m);
  return multiply(u, u);
}

#define TRICERT_MPS_INSTANTIATE(T)                                                                    \
  template Jet<T> eval_u_jet<T>(const MPSCandidate&, const Segment<T>&, const Interval<T>&, int);     \
  template TaylorModel<T> eval_u_model<T>(const MPSCandidate&, const Segment<T>&, int);               \
  template TaylorModel<T> eval_u_taylor<T>(const MPSCandidate&, const Segment<T>&, int);

TRICERT_MPS_INSTANTIATE(double)
TRICERT_MPS_INSTANTIATE(BigFloat)

} // namespace tricert
