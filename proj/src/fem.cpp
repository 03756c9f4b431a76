#include "tricert/fem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>

namespace tricert {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using RD = Rounding<double>;

constexpr double kUnit = std::numeric_limits<double>::epsilon() / 2;
constexpr double kEta = std::numeric_limits<double>::denorm_min();

// A priori bound factor for a floating-point dot product of length p,
// generous enough to also absorb the rounding of the bound itself.
double gamma(int p) { return 2.0 * (p + 2) * kUnit; }

double up_sum(double a, double b) { return RD::add_up(a, b); }
double up_mul(double a, double b) { return RD::mul_up(a, b); }

// Euclidean norms of the columns, rounded up.
VectorXd column_norms_up(const MatrixXd& A) {
  VectorXd out(A.cols());
  for (Eigen::Index j = 0; j < A.cols(); ++j) {
    double s = 0;
    for (Eigen::Index i = 0; i < A.rows(); ++i) s = up_sum(s, up_mul(A(i, j), A(i, j)));
    out(j) = RD::sqrt_up(s);
  }
  return out;
}

int max_row_nnz(const Eigen::SparseMatrix<double>& m) {
  Eigen::SparseMatrix<double, Eigen::RowMajor> r = m;
  int best = 0;
  for (Eigen::Index i = 0; i < r.outerSize(); ++i) best = std::max<int>(best, r.outerIndexPtr()[i + 1] - r.outerIndexPtr()[i]);
  return best;
}

// Y ~ M Q together with an entrywise bound on |M Q - Y| for every M in the
// enclosure.
void rigorous_apply(const DiscreteOperator& m, const MatrixXd& Q, MatrixXd& Y, MatrixXd& err) {
  const int p = max_row_nnz(m.mid);
  Y = m.mid * Q;
  const Eigen::SparseMatrix<double> abs_mid = m.mid.cwiseAbs();
  const MatrixXd absQ = Q.cwiseAbs();
  err = (gamma(p) * (abs_mid * absQ) + (1.0 + gamma(p)) * (m.rad * absQ)).array() + p * kEta;
  err *= 1.0 + gamma(p);
}

} // namespace

CRMesh CRMesh::build(const Triangle<double>& tri, int N) {
  if (N < 2) fail(ErrorCode::precondition, "FEM needs N >= 2");
  CRMesh mesh;
  mesh.N = N;
  std::map<std::array<int, 3>, int> ids;
  auto edge = [&](int c, int i, int j) {
    const bool boundary = (c == 2 && j == 0) || (c == 1 && i == 0) || (c == 0 && i + j + 1 == N);
    if (boundary) return -1;
    const std::array<int, 3> key{c, i, j};
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    const int id = static_cast<int>(mesh.edge_keys.size());
    ids.emplace(key, id);
    mesh.edge_keys.push_back(key);
    return id;
  };
  for (int i = 0; i < N; ++i)
    for (int j = 0; i + j < N; ++j) {
      // up: (i,j), (i+1,j), (i,j+1)
      mesh.elements.push_back({{edge(0, i, j), edge(1, i, j), edge(2, i, j)}});
      // down: (i+1,j), (i,j+1), (i+1,j+1)
      if (i + j <= N - 2) mesh.elements.push_back({{edge(0, i, j), edge(1, i + 1, j), edge(2, i, j + 1)}});
    }
  mesh.dim = static_cast<int>(mesh.edge_keys.size());
  mesh.h = tri.diameter() / IntervalD(N);
  return mesh;
}

DiscreteOperator assemble(const Triangle<double>& tri, int N) {
  const CRMesh mesh = CRMesh::build(tri, N);
  const Vec2<double> P[3] = {tri.vertex(0), tri.vertex(1), tri.vertex(2)};
  const Vec2<double> E[3] = {P[2] - P[1], P[0] - P[2], P[1] - P[0]};
  const IntervalD area = tri.area();
  // Local stiffness of a subtriangle: E_a . E_b / |Omega|, independent of N.
  const IntervalD scale = IntervalD(3.0 * N * N) / (IntervalD(2.0) * area * area);
  IntervalD local[3][3];
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) local[a][b] = scale * E[a].dot(E[b]);

  std::vector<Eigen::Triplet<double>> mid, rad;
  auto push = [&](int r, int c, const IntervalD& v) {
    mid.emplace_back(r, c, v.mid_d());
    rad.emplace_back(r, c, v.rad_d());
  };
  // Each interior edge lies in exactly two subtriangles with the same class,
  // and two distinct edges share at most one subtriangle.
  for (const auto& el : mesh.elements)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        if (a != b && el.edges[a] >= 0 && el.edges[b] >= 0) push(el.edges[a], el.edges[b], local[a][b]);
  for (int e = 0; e < mesh.dim; ++e) {
    const int c = mesh.edge_keys[e][0];
    push(e, e, IntervalD(2.0) * local[c][c]);
  }
  DiscreteOperator op;
  op.dim = mesh.dim;
  op.mid.resize(op.dim, op.dim);
  op.rad.resize(op.dim, op.dim);
  op.mid.setFromTriplets(mid.begin(), mid.end());
  op.rad.setFromTriplets(rad.begin(), rad.end());
  op.h = mesh.h;
  return op;
}

DiscreteOperator operator_from_dense(const MatrixXd& mid, const MatrixXd& rad) {
  DiscreteOperator op;
  op.dim = static_cast<int>(mid.rows());
  op.mid = mid.sparseView(0.0, 0.0);
  op.rad = rad.sparseView(0.0, 0.0);
  op.h = IntervalD(0.0);
  return op;
}

void write_triplets(std::ostream& os, const DiscreteOperator& m) {
  os.precision(17);
  for (int k = 0; k < m.mid.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(m.mid, k); it; ++it)
      os << it.row() << ' ' << it.col() << ' ' << it.value() << ' ' << m.rad.coeff(it.row(), it.col()) << '\n';
}

EigenBasis approx_eigenbasis(const DiscreteOperator& m) {
  const MatrixXd dense = MatrixXd(m.mid);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(dense);
  if (es.info() != Eigen::Success) fail(ErrorCode::numeric_backend, "symmetric eigensolver failed");
  EigenBasis out{es.eigenvectors(), es.eigenvalues()};
  // Q <- Q - Q (Q^T Q - I) / 2
  MatrixXd G = out.Q.transpose() * out.Q;
  G.diagonal().array() -= 1.0;
  out.Q -= 0.5 * (out.Q * G);
  return out;
}

std::vector<double> fem_eigenvalue_estimates(const Triangle<double>& tri, int N, int count) {
  const DiscreteOperator op = assemble(tri, N);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(MatrixXd(op.mid), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) fail(ErrorCode::numeric_backend, "symmetric eigensolver failed");
  std::vector<double> out;
  for (int i = 0; i < std::min<int>(count, op.dim); ++i) out.push_back(es.eigenvalues()(i));
  return out;
}

double gram_defect(const MatrixXd& Q) {
  const Eigen::Index n = Q.rows();
  // Q = Q1 + Q2 with Q1 on the 2^-24 grid: every product in Q1^T Q1 is a
  // multiple of 2^-48, so the sums are exact while they stay below 2^5.
  MatrixXd Q1 = Q.unaryExpr([](double v) { return std::ldexp(std::nearbyint(std::ldexp(v, 24)), -24); });
  MatrixXd Q2 = Q - Q1;  // exact
  const VectorXd n1 = column_norms_up(Q1), n2 = column_norms_up(Q2);
  if (n1.cwiseAbs().maxCoeff() >= 4.0 || !Q.allFinite())
    fail(ErrorCode::numeric_backend, "columns too large for the exact Gram split");
  MatrixXd G = Q1.transpose() * Q1;
  G.diagonal().array() -= 1.0;  // exact
  const MatrixXd cross = Q1.transpose() * Q2 + Q2.transpose() * Q1 + Q2.transpose() * Q2;
  const double g = gamma(static_cast<int>(n)) + 4 * kUnit;
  double s = 0;
  for (Eigen::Index i = 0; i < Q.cols(); ++i)
    for (Eigen::Index j = 0; j < Q.cols(); ++j) {
      const double bound = up_mul(g, up_sum(up_sum(up_mul(n1(i), n2(j)), up_mul(n2(i), n1(j))), up_mul(n2(i), n2(j))));
      const double v = up_sum(up_mul(std::fabs(G(i, j) + cross(i, j)), 1.0 + 4 * kUnit), bound + kEta);
      s = std::max(s, v);
    }
  return s;
}

double gram_schmidt_radius(double s, int m) {
  if (!(s >= 0) || !(up_mul(8.0 * m, s) < 1.0)) fail(ErrorCode::lemma_precondition, "Gram-Schmidt lemma needs 8 m s < 1");
  return RD::sqrt_up(up_mul(3.0, s));
}

SpectralSeparation certify_separation(const DiscreteOperator& m, const MatrixXd& Q, int k, double s_floor) {
  const int n = m.dim;
  if (Q.rows() != n || Q.cols() != n) fail(ErrorCode::precondition, "basis must be square of the operator's size");
  if (k < 1 || k >= n) fail(ErrorCode::precondition, "k out of range");
  const double s = std::max(gram_defect(Q), s_floor);
  const double root = gram_schmidt_radius(s, n);

  MatrixXd Y, dY;
  rigorous_apply(m, Q, Y, dY);
  const MatrixXd D = Q.transpose() * Y;
  const double gn = gamma(n);
  const MatrixXd W = gn * Y.cwiseAbs() + (1.0 + gn) * dY;
  MatrixXd dD = Q.cwiseAbs().transpose() * W;
  dD = (dD * (1.0 + gn)).array() + n * kEta;

  // ||M v_i|| <= ||Y_i|| + ||dY_i||,  ||M||_2 <= ||M||_F
  const VectorXd mv = column_norms_up(Y) + column_norms_up(dY) * (1.0 + gn);
  double frob = 0;
  for (int c = 0; c < m.mid.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(m.mid, c); it; ++it) {
      const double a = up_sum(std::fabs(it.value()), m.rad.coeff(it.row(), it.col()));
      frob = up_sum(frob, up_mul(a, a));
    }
  frob = RD::sqrt_up(frob);
  const double tail = up_mul(up_mul(4.0, s), frob);

  SpectralSeparation sep;
  sep.s = s;
  std::vector<std::pair<IntervalD, int>> disks;
  disks.reserve(n);
  for (int i = 0; i < n; ++i) {
    double r = 0;
    for (int j = 0; j < n; ++j) {
      const double infl = up_sum(up_mul(root, up_sum(mv(i), mv(j))), tail);
      const double e = up_sum(dD(j, i), infl);
      r = up_sum(r, i == j ? e : up_sum(std::fabs(D(j, i)), e));
    }
    disks.emplace_back(IntervalD(RD::sub_down(D(i, i), r), RD::add_up(D(i, i), r)), i);
  }
  std::sort(disks.begin(), disks.end(), [](const auto& a, const auto& b) { return a.first.lo() < b.first.lo(); });
  for (const auto& [range, idx] : disks) {
    (void)idx;
    if (!sep.components.empty() && sep.components.back().range.hi() >= range.lo()) {
      auto& last = sep.components.back();
      last.range = hull(last.range, range);
      ++last.count;
    } else {
      sep.components.push_back({range, 1});
    }
  }
  int total = 0;
  std::size_t c = 0;
  while (c < sep.components.size() && total + sep.components[c].count <= k) {
    total += sep.components[c].count;
    sep.cluster_enclosures.push_back(sep.components[c].range);
    ++c;
  }
  if (total != k || c == sep.components.size())
    fail(ErrorCode::separation_failure, "Gershgorin components do not isolate the first " + std::to_string(k) + " eigenvalues");
  sep.rest_lower = IntervalD(sep.components[c].range.lo());
  sep.index_certified = k;
  return sep;
}

IntervalD parlett_refine(const DiscreteOperator& m, double lambda, const VectorXd& u, const SpectralSeparation& sep, int idx) {
  const int n = m.dim;
  if (u.size() != n) fail(ErrorCode::precondition, "vector size mismatch");
  if (idx < 1) fail(ErrorCode::precondition, "eigenvalue index is 1-based");
  MatrixXd Y, dY;
  rigorous_apply(m, u, Y, dY);
  const int p = max_row_nnz(m.mid) + 1;
  const VectorXd r = Y.col(0) - lambda * u;
  const VectorXd dr = (dY.col(0) + gamma(p) * (Y.col(0).cwiseAbs() + std::fabs(lambda) * u.cwiseAbs())) * (1.0 + gamma(p));
  const double rnorm = up_sum(column_norms_up(r)(0), column_norms_up(dr)(0));
  double usq = 0;
  for (int i = 0; i < n; ++i) usq = RD::add_down(usq, RD::mul_down(u(i), u(i)));
  const double unorm = RD::sqrt_down(usq);
  if (!(unorm > 0)) fail(ErrorCode::precondition, "zero approximate eigenvector");
  const double rho = RD::div_up(rnorm, unorm);
  const IntervalD enclosure(RD::sub_down(lambda, rho), RD::add_up(lambda, rho));

  // The enclosure must meet exactly one component, holding exactly the
  // idx-th eigenvalue.
  int before = 0, hits = 0;
  const GershgorinComponent* hit = nullptr;
  int hit_before = 0;
  for (const auto& c : sep.components) {
    if (c.range.overlaps(enclosure)) {
      ++hits;
      hit = &c;
      hit_before = before;
    }
    before += c.count;
  }
  if (hits != 1 || hit->count != 1 || hit_before != idx - 1)
    fail(ErrorCode::proximity_uncertified, "residual ball does not single out eigenvalue " + std::to_string(idx));
  return *intersect(enclosure, hit->range);
}

IntervalD liu_lower_bound(const IntervalD& lambda_h, const IntervalD& h) {
  if (!lambda_h.certainly_positive()) fail(ErrorCode::nonpositive_input, "Liu bound needs a positive eigenvalue enclosure");
  if (h.lo() < 0) fail(ErrorCode::nonpositive_input, "mesh size must be nonnegative");
  const IntervalD ch = IntervalD::from_decimal("0.1893") * IntervalD(h.hi());
  const IntervalD lo(lambda_h.lo());
  // decreasing in C_h, increasing in lambda
  const IntervalD v = lo / (IntervalD(1.0) + sqr(IntervalD(ch.hi())) * lo);
  return IntervalD(v.lo());
}

FirstPassResult first_pass(const Triangle<double>& tri, int N, int k) {
  const DiscreteOperator op = assemble(tri, N);
  const EigenBasis basis = approx_eigenbasis(op);
  FirstPassResult res;
  res.N = N;
  res.separation = certify_separation(op, basis.Q, k + 1);
  res.discrete_enclosure = parlett_refine(op, basis.eigvals(k), basis.Q.col(k), res.separation, k + 1);
  res.lower_bound = liu_lower_bound(res.discrete_enclosure, op.h);
  for (int i = 0; i <= k; ++i) res.estimates.push_back(basis.eigvals(i));
  return res;
}

} // namespace tricert
