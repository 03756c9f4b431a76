#include "doctest.h"
#include "tricert/certifier.hpp"

#include <cmath>
#include <numbers>
#include <optional>

using namespace tricert;

namespace {

template <typename F>
std::optional<ErrorCode> code_of(F&& f) {
  try {
    f();
  } catch (const CertError& e) {
    return e.code();
  }
  return std::nullopt;
}

MPSCandidate zero_candidate(const Triangle<double>& tri, double lambda) {
  MPSCandidate c;
  c.cx = tri.cx().mid_d();
  c.cy = tri.cy().mid_d();
  c.lambda = lambda;
  c.basis = build_basis(tri, c.spec);
  c.coeffs = Eigen::VectorXd::Zero(c.basis.columns());
  return c;
}

// Plain centroid rule on an M x M subdivision of the triangle (0,0), (1,0), apex.
double interior_quadrature(const MPSCandidate& c, int m) {
  const Eigen::Vector2d a(0, 0), b(1, 0), p(c.cx, c.cy);
  const double cell = 0.5 * std::abs(c.cy) / (m * m);
  double sum = 0;
  auto at = [&](double i, double j) { return a + (b - a) * (i / m) + (p - a) * (j / m); };
  for (int i = 0; i < m; ++i)
    for (int j = 0; i + j < m; ++j) {
      const Eigen::Vector2d up = (at(i, j) + at(i + 1, j) + at(i, j + 1)) / 3.0;
      sum += std::pow(eval_u(c, up), 2);
      if (i + j + 1 < m) {
        const Eigen::Vector2d down = (at(i + 1, j) + at(i, j + 1) + at(i + 1, j + 1)) / 3.0;
        sum += std::pow(eval_u(c, down), 2);
      }
    }
  return sum * cell;
}

// Composite Gauss-Legendre (3 points) along the three sides.
double boundary_quadrature(const MPSCandidate& c, int pieces) {
  const Eigen::Vector2d v[3] = {{0, 0}, {1, 0}, {c.cx, c.cy}};
  const double nodes[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)}, weights[3] = {5.0 / 9, 8.0 / 9, 5.0 / 9};
  double sum = 0;
  for (int s = 0; s < 3; ++s) {
    const Eigen::Vector2d p = v[s], q = v[(s + 1) % 3];
    const double len = (q - p).norm();
    for (int k = 0; k < pieces; ++k)
      for (int g = 0; g < 3; ++g) {
        const double t = (k + 0.5 + 0.5 * nodes[g]) / pieces;
        sum += weights[g] * 0.5 * len / pieces * std::pow(eval_u(c, p + (q - p) * t), 2);
      }
  }
  return sum;
}

} // namespace

TEST_CASE("interior grid partitions the shrunken triangle") {
  const auto tri = Triangle<double>::apex(0.3, 0.8);
  const auto cells = interior_grid(tri, 6, 0.8);
  REQUIRE(cells.size() == 36);
  IntervalD total(0.0);
  const auto [center, rho] = incenter_inradius(tri);
  for (const auto& c : cells) {
    const IntervalD area = ((c[1].x() - c[0].x()) * (c[2].y() - c[0].y()) - (c[2].x() - c[0].x()) * (c[1].y() - c[0].y())) * IntervalD(0.5);
    CHECK(area.certainly_positive());
    total = total + area;
    for (const auto& v : c) {
      // inside the original triangle: y > 0 and left of both slanted sides
      CHECK(v.y().certainly_positive());
      CHECK((v.x() * IntervalD(0.8) - v.y() * IntervalD(0.3)).certainly_positive());
      CHECK(((IntervalD(1.0) - v.x()) * IntervalD(0.8) - v.y() * IntervalD(0.7)).certainly_positive());
    }
  }
  CHECK(std::abs(total.mid_d() - 0.64 * 0.4) < 1e-12);
  CHECK(code_of([&] { interior_grid(tri, 0, 0.8); }) == ErrorCode::precondition);
  CHECK(code_of([&] { interior_grid(tri, 4, 1.0); }) == ErrorCode::precondition);
}

TEST_CASE("zero function: empty boundary norm, no certified interior sign") {
  const auto tri = Triangle<double>::apex(0.0, 1.0);
  const MPSCandidate c = zero_candidate(tri, 40.0);
  const auto b = boundary_norm_upper(c, tri);
  CHECK(b.integral.hi_d() == 0.0);
  CHECK(code_of([&] { interior_norm_lower(c, tri); }) == ErrorCode::sign_test_failure);
}

TEST_CASE("grid cells larger than the nodal domain bound are refused") {
  const auto tri = Triangle<double>::apex(0.0, 1.0);
  // one cell of area 0.32 against pi j0^2 / 200 = 0.0908
  InteriorOptions opts;
  opts.grid_n = 1;
  CHECK(code_of([&] { interior_norm_lower(zero_candidate(tri, 200.0), tri, opts); }) == ErrorCode::faber_krahn_precondition);
}

TEST_CASE("charges inside the triangle are refused") {
  const auto small = Triangle<double>::apex(0.0, 1.0);
  // contains the charges of the apex (0, 1), which sit along (-1, 2)
  const auto big = Triangle<double>::apex(-1.0, 3.0);
  CHECK(code_of([&] { certify_candidate(zero_candidate(small, 40.0), big); }) == ErrorCode::charge_inside_domain);
}

TEST_CASE("distance to the spectrum from the tension bound") {
  using I = IntervalD;
  const I rho(1.0), lambda(4.0), upper(5.0);
  auto tb = [](double t2) { return TensionBound<double>{I(0.0, t2), I(1.0), I(0.0, t2)}; };

  // rho / t^2 - 28 (1 + rho)(1 + lambda^-1/2) = 10000 - 84
  const I d = distance_to_spectrum(tb(1e-4), rho, lambda, upper);
  const double expected = std::sqrt(10.0 / 9916.0);
  CHECK(d.lo_d() == 0.0);
  CHECK(d.hi_d() >= expected);
  CHECK(d.hi_d() <= expected * (1 + 1e-14));

  CHECK(distance_to_spectrum(tb(0.0), rho, lambda, upper).hi_d() == 0.0);
  double last = 0;
  for (double t2 : {1e-12, 1e-9, 1e-6, 1e-3, 1e-2}) {
    const double r = distance_to_spectrum(tb(t2), rho, lambda, upper).hi_d();
    CHECK(r > last);
    last = r;
  }
  // 1/84 puts the denominator at zero
  CHECK(code_of([&] { distance_to_spectrum(tb(1.0 / 84), rho, lambda, upper); }) == ErrorCode::denominator_nonpositive);
  CHECK(code_of([&] { distance_to_spectrum(tb(0.05), rho, lambda, upper); }) == ErrorCode::denominator_nonpositive);
  CHECK(code_of([&] { distance_to_spectrum(tb(1e-4), rho, I(0.5), upper); }) == ErrorCode::precondition);
  CHECK(code_of([&] { distance_to_spectrum(tb(1e-4), I(0.0), lambda, upper); }) == ErrorCode::nonpositive_input);
}

TEST_CASE("right isosceles ground state is enclosed to 1e-6") {
  PrecisionGuard guard(256);
  using I = IntervalMP;
  const Triangle<BigFloat> tri{I(0.0), I(1.0)};
  const auto cert = enclose_eigenvalue(tri, 49.3);
  const I exact = pi<BigFloat>() * pi<BigFloat>() * I(5.0);
  const I& e = cert.enclosure.value;
  CHECK(e.lo() <= exact.lo());
  CHECK(exact.hi() <= e.hi());
  CHECK(e.width_d() < 1e-6);
  CHECK(cert.candidate.smin < 1e-10);

  // the rigorous norms bracket plain quadratures of the same function
  const double interior = interior_quadrature(cert.candidate, 120);
  CHECK(cert.interior.integral.hi_d() < interior);
  CHECK(cert.interior.integral.lo_d() > 0.05 * interior);
  CHECK(cert.boundary.integral.hi_d() >= 0.999 * boundary_quadrature(cert.candidate, 400));
}
