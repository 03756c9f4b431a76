#include "doctest.h"
#include "tricert/fem.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <random>

using namespace tricert;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

const double pi2 = std::numbers::pi * std::numbers::pi;

MatrixXd dense_eigs_oracle(const MatrixXd& a, VectorXd& vals) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(a);
  vals = es.eigenvalues();
  return es.eigenvectors();
}

// Per-element oracle: CR basis gradients from the affine interpolation
// conditions on each subtriangle, integrated exactly (they are constant).
MatrixXd quadrature_oracle(double cx, double cy, int N, const CRMesh& mesh) {
  auto lattice = [&](int i, int j) {
    return Eigen::Vector2d((i + j * cx) / N, (j * cy) / N);
  };
  // doubled lattice coordinates of an edge midpoint -> unknown index
  std::map<std::pair<int, int>, int> index;
  for (int e = 0; e < mesh.dim; ++e) {
    const auto [c, i, j] = mesh.edge_keys[e];
    int a0 = i, b0 = j, a1 = i, b1 = j;
    if (c == 2) a1 = i + 1;
    else if (c == 1) b1 = j + 1;
    else { a0 = i + 1; b1 = j + 1; }
    index[{a0 + a1, b0 + b1}] = e;
  }
  MatrixXd A = MatrixXd::Zero(mesh.dim, mesh.dim);
  auto element = [&](std::array<std::pair<int, int>, 3> v) {
    const Eigen::Vector2d a = lattice(v[0].first, v[0].second), b = lattice(v[1].first, v[1].second),
                          c = lattice(v[2].first, v[2].second);
    const double tarea = 0.5 * std::fabs((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
    int ids[3];
    Eigen::Matrix3d M;  // rows: midpoints in (1, x, y)
    for (int r = 0; r < 3; ++r) {
      const auto p = v[(r + 1) % 3], q = v[(r + 2) % 3];
      const auto it = index.find({p.first + q.first, p.second + q.second});
      ids[r] = it == index.end() ? -1 : it->second;
      const Eigen::Vector2d m = 0.5 * (lattice(p.first, p.second) + lattice(q.first, q.second));
      M.row(r) << 1.0, m.x(), m.y();
    }
    const Eigen::Matrix3d coef = M.inverse();  // column r: basis that is 1 at midpoint r
    for (int r = 0; r < 3; ++r)
      for (int s = 0; s < 3; ++s)
        if (ids[r] >= 0 && ids[s] >= 0)
          A(ids[r], ids[s]) += tarea * (coef(1, r) * coef(1, s) + coef(2, r) * coef(2, s));
  };
  for (int i = 0; i < N; ++i)
    for (int j = 0; i + j < N; ++j) {
      element({{{i, j}, {i + 1, j}, {i, j + 1}}});
      if (i + j <= N - 2) element({{{i + 1, j}, {i, j + 1}, {i + 1, j + 1}}});
    }
  return A * (3.0 * N * N / (2.0 * 0.5 * cy));
}

} // namespace

TEST_CASE("interior edge count") {
  const auto tri = Triangle<double>::apex(0.0, 1.0);
  // 4 subtriangles: 9 edges, 6 on the boundary
  CHECK(assemble(tri, 2).dim == 3);
  CHECK(assemble(tri, 8).dim == 3 * 8 * 7 / 2);
  CHECK(CRMesh::build(tri, 8).elements.size() == 64);
  CHECK_THROWS_AS(assemble(tri, 1), CertError);
}

TEST_CASE("assembled operator against per-element quadrature") {
  for (auto [cx, cy] : {std::pair{0.635, 0.275}, std::pair{0.3, 0.9}, std::pair{-0.2, 0.5}}) {
    const auto tri = Triangle<double>::apex(cx, cy);
    const int N = 8;
    const DiscreteOperator op = assemble(tri, N);
    const MatrixXd mid = MatrixXd(op.mid), rad = MatrixXd(op.rad);
    CHECK((mid - mid.transpose()).cwiseAbs().maxCoeff() == 0.0);
    const MatrixXd ref = quadrature_oracle(cx, cy, N, CRMesh::build(tri, N));
    const double scale = ref.cwiseAbs().maxCoeff();
    CHECK((mid - ref).cwiseAbs().maxCoeff() < 1e-11 * scale);
    const VectorXd rows = mid.rowwise().sum(), ref_rows = ref.rowwise().sum();
    CHECK((rows - ref_rows).cwiseAbs().maxCoeff() < 1e-10 * scale);
    CHECK(rad.maxCoeff() < 1e-12 * scale);
  }
}

TEST_CASE("equilateral ground state") {
  const auto tri = Triangle<double>::apex(0.5, std::sqrt(3.0) / 2);
  const auto est = fem_eigenvalue_estimates(tri, 16, 1);
  CHECK(std::fabs(est[0] / (16 * pi2 / 3) - 1) < 0.02);
}

TEST_CASE("approximate eigenbasis") {
  MatrixXd d(2, 2);
  d << 1, 0, 0, 2;
  const EigenBasis b = approx_eigenbasis(operator_from_dense(d, MatrixXd::Zero(2, 2)));
  CHECK((b.Q.cwiseAbs() - MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(b.eigvals(0) == doctest::Approx(1.0));
  CHECK(b.eigvals(1) == doctest::Approx(2.0));

  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  MatrixXd r(50, 50);
  for (int i = 0; i < 50; ++i)
    for (int j = 0; j <= i; ++j) r(i, j) = r(j, i) = g(rng);
  const EigenBasis rb = approx_eigenbasis(operator_from_dense(r, MatrixXd::Zero(50, 50)));
  CHECK((r * rb.Q - rb.Q * rb.eigvals.asDiagonal()).norm() < 1e-10);
}

TEST_CASE("triangle A, N = 8: leading eigenvalues") {
  const auto est = fem_eigenvalue_estimates(Triangle<double>::apex(0.635, 0.275), 8, 5);
  REQUIRE(est.size() == 5);
  for (int i = 0; i + 1 < 5; ++i) CHECK(est[i] < est[i + 1]);
}

TEST_CASE("Gram defect") {
  CHECK(gram_defect(MatrixXd::Identity(7, 7)) < 1e-300);
  MatrixXd q(2, 2);
  q << 1, 0.075, 0, 1;
  const double s = gram_defect(q);
  CHECK(s >= 0.075);
  CHECK(s < 0.0751);
  // 8 * 2 * 0.075 = 1.2
  CHECK_THROWS_AS(gram_schmidt_radius(s, 2), CertError);
  CHECK_THROWS_AS(certify_separation(operator_from_dense(MatrixXd::Identity(2, 2), MatrixXd::Zero(2, 2)), q, 1), CertError);
  try {
    certify_separation(operator_from_dense(MatrixXd::Identity(2, 2), MatrixXd::Zero(2, 2)), q, 1);
  } catch (const CertError& e) {
    CHECK(e.code() == ErrorCode::lemma_precondition);
  }
  CHECK(gram_schmidt_radius(1e-6, 100) == doctest::Approx(std::sqrt(3e-6)));
}

TEST_CASE("separation of a diagonal matrix with an exact basis") {
  VectorXd d(6);
  d << 1, 2, 3, 10, 11, 12;
  const DiscreteOperator op = operator_from_dense(d.asDiagonal().toDenseMatrix(), MatrixXd::Zero(6, 6));
  for (int k : {1, 2, 3}) {
    const SpectralSeparation sep = certify_separation(op, MatrixXd::Identity(6, 6), k);
    REQUIRE(sep.cluster_enclosures.size() == static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      CHECK(sep.cluster_enclosures[i].contains(d(i)));
      CHECK(sep.cluster_enclosures[i].width_d() < 1e-13);
    }
    CHECK(sep.rest_lower.lo() > d(k - 1));
    CHECK(sep.rest_lower.lo() <= d(k));
    CHECK(sep.index_certified == k);
  }
  // 10, 11, 12 are three separate points, so k = 4 still isolates
  CHECK_NOTHROW(certify_separation(op, MatrixXd::Identity(6, 6), 4));
}

TEST_CASE("separation fails when disks merge across the gap") {
  MatrixXd a(3, 3);
  a << 1, 0.6, 0, 0.6, 2, 0, 0, 0, 5;
  const DiscreteOperator op = operator_from_dense(a, MatrixXd::Zero(3, 3));
  try {
    certify_separation(op, MatrixXd::Identity(3, 3), 1);
    FAIL("expected failure");
  } catch (const CertError& e) {
    CHECK(e.code() == ErrorCode::separation_failure);
  }
  CHECK_NOTHROW(certify_separation(op, MatrixXd::Identity(3, 3), 2));
}

TEST_CASE("separation with a perturbed basis contains the true eigenvalues") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g;
  const int n = 30;
  MatrixXd r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = g(rng);
  const MatrixXd orth = Eigen::HouseholderQR<MatrixXd>(r).householderQ();
  VectorXd spec(n);
  for (int i = 0; i < n; ++i) spec(i) = 1.0 + 3.0 * i;
  MatrixXd a = orth * spec.asDiagonal() * orth.transpose();
  a = 0.5 * (a + a.transpose()).eval();
  VectorXd vals;
  MatrixXd Q = dense_eigs_oracle(a, vals);
  for (int t = 0; t < 40; ++t) {
    const int i = rng() % n, j = rng() % n;
    if (i == j) continue;
    const double c = std::cos(1e-8), s = std::sin(1e-8);
    const VectorXd qi = Q.col(i), qj = Q.col(j);
    Q.col(i) = c * qi - s * qj;
    Q.col(j) = s * qi + c * qj;
  }
  const DiscreteOperator op = operator_from_dense(a, MatrixXd::Zero(n, n));
  for (int k : {1, 5, 12}) {
    const SpectralSeparation sep = certify_separation(op, Q, k);
    for (int i = 0; i < k; ++i) CHECK(sep.cluster_enclosures[i].contains(vals(i)));
    CHECK(sep.rest_lower.lo() <= vals(k));
  }
}

TEST_CASE("raising s never shrinks a disk") {
  const DiscreteOperator op = assemble(Triangle<double>::apex(0.3, 0.8), 6);
  const EigenBasis b = approx_eigenbasis(op);
  const SpectralSeparation base = certify_separation(op, b.Q, 1);
  double prev_lo = base.cluster_enclosures[0].lo(), prev_hi = base.cluster_enclosures[0].hi();
  for (double s : {1e-14, 1e-12, 1e-10}) {
    const SpectralSeparation sep = certify_separation(op, b.Q, 1, s);
    CHECK(sep.cluster_enclosures[0].lo() <= prev_lo);
    CHECK(sep.cluster_enclosures[0].hi() >= prev_hi);
    prev_lo = sep.cluster_enclosures[0].lo();
    prev_hi = sep.cluster_enclosures[0].hi();
  }
}

TEST_CASE("certified clusters contain dense eigenvalues on small random triangles") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> ux(-0.3, 1.3), uy(0.3, 1.2);
  int certified = 0;
  for (int t = 0; t < 6; ++t) {
    const auto tri = Triangle<double>::apex(ux(rng), uy(rng));
    for (int N : {4, 8}) {
      const DiscreteOperator op = assemble(tri, N);
      VectorXd vals;
      dense_eigs_oracle(MatrixXd(op.mid), vals);
      const EigenBasis b = approx_eigenbasis(op);
      for (int k = 1; k <= 3; ++k) {
        try {
          const SpectralSeparation sep = certify_separation(op, b.Q, k);
          int idx = 0;
          for (const auto& c : sep.components) {
            if (idx >= k) break;
            for (int j = 0; j < c.count; ++j) CHECK(c.range.contains(vals(idx + j)));
            idx += c.count;
          }
          ++certified;
        } catch (const CertError& e) {
          CHECK(e.code() == ErrorCode::separation_failure);
        }
      }
    }
  }
  CHECK(certified >= 20);
}

TEST_CASE("Parlett refinement") {
  VectorXd d(5);
  d << 1, 2, 3, 10, 11;
  const DiscreteOperator op = operator_from_dense(d.asDiagonal().toDenseMatrix(), MatrixXd::Zero(5, 5));
  const SpectralSeparation sep = certify_separation(op, MatrixXd::Identity(5, 5), 3);
  const IntervalD e2 = parlett_refine(op, 2.0, VectorXd::Unit(5, 1), sep, 2);
  CHECK(e2.contains(2.0));
  CHECK(e2.width_d() < 1e-14);

  // noisy eigenpair of a general symmetric matrix
  std::mt19937_64 rng(29);
  std::normal_distribution<double> g;
  MatrixXd a(20, 20);
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = g(rng) + (i == j ? 4.0 * i : 0.0);
  VectorXd vals;
  const MatrixXd Q = dense_eigs_oracle(a, vals);
  const DiscreteOperator opa = operator_from_dense(a, MatrixXd::Zero(20, 20));
  const SpectralSeparation sa = certify_separation(opa, Q, 4);
  VectorXd u = Q.col(3);
  for (int i = 0; i < 20; ++i) u(i) += 1e-9 * g(rng);
  const IntervalD e4 = parlett_refine(opa, vals(3) + 1e-9, u, sa, 4);
  CHECK(e4.contains(vals(3)));
  CHECK(e4.width_d() < 1e-6);

  // halfway between two well separated eigenvectors
  const VectorXd mix = (VectorXd::Unit(5, 0) + VectorXd::Unit(5, 3)) / std::sqrt(2.0);
  try {
    parlett_refine(op, 5.5, mix, sep, 1);
    FAIL("expected failure");
  } catch (const CertError& e) {
    CHECK(e.code() == ErrorCode::proximity_uncertified);
  }
  // right index required
  CHECK_THROWS_AS(parlett_refine(op, 2.0, VectorXd::Unit(5, 1), sep, 3), CertError);
}

TEST_CASE("Liu lower bound") {
  const IntervalD exact = liu_lower_bound(IntervalD(100.0), IntervalD(0.0));
  CHECK(exact.contains(100.0));
  const IntervalD b = liu_lower_bound(IntervalD(100.0, 100.5), IntervalD(0.1));
  // 100 / (1 + 0.01893^2 * 100) = 96.54034...
  const double ref = 100.0 / (1.0 + 0.01893 * 0.01893 * 100.0);
  CHECK(b.hi() <= ref * (1 + 1e-14));
  CHECK(b.lo() >= ref * (1 - 1e-14));
  CHECK_THROWS_AS(liu_lower_bound(IntervalD(-1.0, 2.0), IntervalD(0.1)), CertError);
}

TEST_CASE("right isosceles, N = 32: lower bound for the fifth eigenvalue") {
  const FirstPassResult r = first_pass(Triangle<double>::apex(0.0, 1.0), 32, 4);
  const double lambda5 = 20 * pi2;
  CHECK(r.lower_bound.hi() < lambda5);
  CHECK(r.lower_bound.lo() > 0.9 * lambda5);
  CHECK(r.separation.index_certified == 5);
  MESSAGE("lambda_5 lower bound " << r.lower_bound.lo() << ", s = " << r.separation.s);
}

TEST_CASE("equilateral, N = 24: lower bound for the fourth eigenvalue") {
  const FirstPassResult r = first_pass(Triangle<double>::apex(0.5, std::sqrt(3.0) / 2), 24, 3);
  const double lambda4 = 16 * pi2 / 9 * 12;
  CHECK(r.lower_bound.hi() < lambda4);
  CHECK(r.lower_bound.lo() > 0.9 * lambda4);
}
