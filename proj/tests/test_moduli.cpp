#include "doctest.h"
#include "tricert/moduli.hpp"

#include <cmath>
#include <functional>
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

const Side all_sides[] = {Side::plus_v21, Side::minus_v21, Side::plus_v41, Side::minus_v41};

// Verdicts for the unit square with xi21 - xi21_bar = f(x, y) and
// xi41 - xi41_bar = g(x, y), each enclosed by the range of its linear map
// over the sub-segment.
std::vector<VerdictRecord> synthetic_verdicts(const std::string& name, int n,
                                              const std::function<IntervalMP(IntervalMP, IntervalMP)>& f,
                                              const std::function<IntervalMP(IntervalMP, IntervalMP)>& g) {
  using I = IntervalMP;
  const ParallelogramSpec spec = parallelogram_a();
  std::vector<VerdictRecord> out;
  for (Side side : all_sides)
    for (int i = 1; i <= n; ++i) {
      const I s(-1.0 + 2.0 * (i - 1) / n, -1.0 + 2.0 * i / n);
      const I fixed(side_orientation(side));
      const bool xi21 = side_target(side) == Target::xi21;
      const I x = xi21 ? fixed : s, y = xi21 ? s : fixed;
      const std::string bar = xi21 ? spec.xi21_bar : spec.xi41_bar;
      const I value = (xi21 ? f(x, y) : g(x, y)) + I::from_decimal(bar);
      const int sign = (value - I::from_decimal(bar)).certified_sign();
      out.push_back({name, side, n, i, side_orientation(side), value, bar, sign == side_orientation(side)});
    }
  return out;
}

std::vector<Coverage> square(const std::string& name, int n) {
  Coverage c{name, {}};
  for (Side s : all_sides) c.n_sub[s] = n;
  return {c};
}

IntervalMP lin(IntervalMP a, IntervalMP b, double w) { return a + b * IntervalMP(w); }

} // namespace

TEST_CASE("side labels") {
  for (Side s : all_sides) {
    CHECK(parse_side_label(side_label(s)) == s);
    CHECK(opposite(opposite(s)) == s);
    CHECK(side_orientation(opposite(s)) == -side_orientation(s));
    CHECK(side_target(opposite(s)) == side_target(s));
  }
  CHECK(code_of([] { parse_side_label("v21"); }) == ErrorCode::usage);
}

TEST_CASE("sub-segments tile the side") {
  PrecisionGuard guard(128);
  const ParallelogramSpec spec = parallelogram_a();
  const int n = 40;
  for (Side side : all_sides) {
    const bool xi21 = side_target(side) == Target::xi21;
    for (int i = 1; i <= n; ++i) {
      const auto p = subsegment<BigFloat>({spec, side, n, i, 1});
      CHECK(p.ell.lo_d() == 1.0);
      for (int end : {-1, 1}) {
        // apex + end * v must be the sub-segment endpoint s = -1 + 2 (i - 1 + (end + 1) / 2) / n
        const IntervalMP s = IntervalMP(-1.0) + IntervalMP(2 * (i - 1 + (end + 1) / 2)) / IntervalMP(n);
        const IntervalMP o(side_orientation(side));
        const auto target = xi21 ? spec.point<BigFloat>(o, s) : spec.point<BigFloat>(s, o);
        const auto x = p.base.cx() + IntervalMP(end) * p.v.x(), y = p.base.cy() + IntervalMP(end) * p.v.y();
        CHECK(std::abs((x - target.x()).mid_d()) < 1e-30);
        CHECK(std::abs((y - target.y()).mid_d()) < 1e-30);
      }
    }
  }
  CHECK(code_of([&] { subsegment<double>({spec, Side::plus_v21, 40, 0, 1}); }) == ErrorCode::usage);
  CHECK(code_of([&] { subsegment<double>({spec, Side::plus_v21, 40, 41, 1}); }) == ErrorCode::usage);
  CHECK(code_of([&] { SideTask{spec, Side::plus_v21, 40, 3, 0}.validate(); }) == ErrorCode::usage);
}

TEST_CASE("parallelogram A has the expected corners") {
  // the centre plus and minus the two edge vectors
  const auto a = parallelogram_a();
  const auto p = a.point<double>(IntervalD(1.0), IntervalD(1.0));
  CHECK(p.x().mid_d() == doctest::Approx(0.635 + 0.004610608896618232 - 0.0041659682109460045).epsilon(1e-15));
  CHECK(p.y().mid_d() == doctest::Approx(0.275 + 0.0012403688839389946 - 0.000511581170421992).epsilon(1e-15));
  CHECK(a.xi_bar<double>(Target::xi41).mid_d() == doctest::Approx(2.99372));
}

TEST_CASE("judging a quotient enclosure") {
  using I = IntervalD;
  SegmentVerdict<double> v;
  v.xi_enclosure = I(1.6, 1.7);
  CHECK(code_of([&] { judge_segment(v, I(1.67675), 1); }) == ErrorCode::sign_undecided);
  v.xi_enclosure = I(1.68, 1.69);
  judge_segment(v, I(1.67675), 1);
  CHECK(v.sign == 1);
  CHECK(v.sign_ok);
  judge_segment(v, I(1.67675), -1);
  CHECK_FALSE(v.sign_ok);
}

TEST_CASE("index certification") {
  using I = IntervalD;
  CHECK(certify_positions<double>({{I(1, 2), I(3, 4)}, {I(3.5, 3.6), I(1.1, 1.2)}}, I(5.0), 2));
  CHECK(code_of([] { certify_positions<double>({{I(1, 3), I(2, 4)}}, I(5.0), 2); }) == ErrorCode::overlap);
  CHECK(code_of([] { certify_positions<double>({{I(1, 2), I(3, 6)}}, I(5.0), 2); }) == ErrorCode::gap_insufficient);
  CHECK(code_of([] { certify_positions<double>({{I(1, 2)}}, I(5.0), 2); }) == ErrorCode::precondition);
}

TEST_CASE("first-pass lower bounds on the right isosceles triangle") {
  // Dirichlet spectrum pi^2 (m^2 + n^2), m > n >= 1: 5, 10, 13, 17, 20, ...
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const IntervalD zero(0.0);
  const SegmentPerturbation<double> still{Triangle<double>::apex(0.0, 1.0), vec2(zero, zero), zero};
  const double l3 = propagated_lower_bound(still, 2, 32).hi_d();
  CHECK(l3 <= 13 * pi2);
  CHECK(l3 > 10 * pi2);
  const double l5 = propagated_lower_bound(still, 4, 32).hi_d();
  CHECK(l5 <= 20 * pi2);
  CHECK(l5 >= 0.9 * 20 * pi2);

  const SegmentPerturbation<double> moving{Triangle<double>::apex(0.0, 1.0), vec2(IntervalD(0.01), zero), IntervalD(1.0)};
  CHECK(propagated_lower_bound(moving, 4, 32).hi_d() < l5);
}

TEST_CASE("intermediate eigenvalues only on xi41 sides") {
  CHECK(code_of([] { intermediate_eigs<double>(parallelogram_a(), Side::plus_v21, {}); }) == ErrorCode::precondition);
}

TEST_CASE("Miranda conclusion on synthetic sign data") {
  PrecisionGuard guard(128);
  auto f = [](IntervalMP x, IntervalMP y) { return lin(x, y, 0.3); };
  auto g = [](IntervalMP x, IntervalMP y) { return lin(y, x, 0.3); };
  const auto good = synthetic_verdicts("A", 8, f, g);
  const Certificate cert = miranda_conclude(good, square("A", 8));
  CHECK(cert.verdicts == 32);
  REQUIRE(cert.parallelograms.size() == 1);
  CHECK(cert.statement.find("A contains") != std::string::npos);

  SUBCASE("a missing sub-segment") {
    auto v = good;
    v.erase(v.begin() + 13);
    CHECK(code_of([&] { miranda_conclude(v, square("A", 8)); }) == ErrorCode::incomplete_coverage);
  }
  SUBCASE("a parallelogram without verdicts") {
    auto cov = square("A", 8);
    cov.push_back(square("B", 8)[0]);
    CHECK(code_of([&] { miranda_conclude(good, cov); }) == ErrorCode::incomplete_coverage);
  }
  SUBCASE("a duplicate") {
    auto v = good;
    v.push_back(v[3]);
    CHECK(code_of([&] { miranda_conclude(v, square("A", 8)); }) == ErrorCode::integrity);
  }
  SUBCASE("a flag that contradicts the enclosure") {
    auto v = good;
    v[5].xi_enclosure = v[5].xi_enclosure - IntervalMP(5.0);
    CHECK(code_of([&] { miranda_conclude(v, square("A", 8)); }) == ErrorCode::sign_undecided);
  }
  SUBCASE("a map whose zero set crosses a side") {
    // x + 2 y changes sign along x = +-1
    auto bad = synthetic_verdicts("A", 8, [](IntervalMP x, IntervalMP y) { return lin(x, y, 2.0); }, g);
    CHECK(code_of([&] { miranda_conclude(bad, square("A", 8)); }) == ErrorCode::sign_undecided);
  }
  SUBCASE("verdicts from another subdivision") {
    CHECK(code_of([&] { miranda_conclude(good, square("A", 10)); }) == ErrorCode::incomplete_coverage);
  }
}
