#include "tricert/certifier.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <numbers>
#include <thread>

namespace tricert {

void parallel_for(int n, int jobs, const std::function<void(int)>& f) {
  if (jobs <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  const mpfr_prec_t bits = BigFloat::default_precision();
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < std::min(jobs, n); ++w)
    pool.emplace_back([&] {
      PrecisionGuard guard(bits);
      for (int i; (i = next++) < n;) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

template <typename T>
TensionBound<T> TensionBound<T>::from_norms(const Interval<T>& boundary_sq, const Interval<T>& interior_sq) {
  using I = Interval<T>;
  if (!interior_sq.certainly_positive()) fail(ErrorCode::sign_test_failure, "interior norm lower bound is not positive");
  const T zero(0.0);
  const I b(zero, boundary_sq.hi() < zero ? zero : boundary_sq.hi());
  const I in(interior_sq.lo(), interior_sq.lo());
  const I t = I(b.hi(), b.hi()) / in;
  return {b, in, I(zero, t.hi())};
}

namespace {

template <typename T>
Vec2<T> lerp(const Vec2<T>& a, const Vec2<T>& b, const Interval<T>& x) {
  return a + (b - a) * x;
}

template <typename T>
bool charge_outside(const Triangle<T>& tri, const Eigen::Vector2d& q) {
  using I = Interval<T>;
  const Vec2<T> p = vec2(I(q.x()), I(q.y()));
  for (int i = 0; i < 3; ++i) {
    const Vec2<T> a = tri.vertex(i), b = tri.vertex((i + 1) % 3);
    if (cross<T>(b - a, p - a).certainly_negative()) return true;
  }
  return false;
}

template <typename T>
struct BoundaryPiece {
  Segment<T> seg;
  int depth = 0;
  Interval<T> integral;
  bool evaluated = false;
};

} // namespace

template <typename T>
BoundaryReport<T> boundary_norm_upper(const MPSCandidate& cand, const Triangle<T>& tri, const BoundaryOptions& opts) {
  using I = Interval<T>;
  if (opts.per_side < 1) fail(ErrorCode::precondition, "need at least one segment per side");
  std::vector<BoundaryPiece<T>> pieces;
  for (int s = 0; s < 3; ++s) {
    const Vec2<T> a = tri.vertex(s), b = tri.vertex((s + 1) % 3);
    Vec2<T> prev = a;
    for (int i = 1; i <= opts.per_side; ++i) {
      const Vec2<T> next =
          i == opts.per_side ? b : lerp(a, b, I((1.0 - std::cos(std::numbers::pi * i / opts.per_side)) / 2.0));
      pieces.push_back({{prev, next}, 0, I(0.0), false});
      prev = next;
    }
  }
  const I perimeter = tri.perimeter();
  for (;;) {
    std::vector<int> todo;
    for (int i = 0; i < static_cast<int>(pieces.size()); ++i)
      if (!pieces[i].evaluated) todo.push_back(i);
    parallel_for(static_cast<int>(todo.size()), opts.jobs, [&](int j) {
      auto& p = pieces[todo[j]];
      try {
        p.integral = integrate_even_part(eval_u_taylor(cand, p.seg, opts.degree), p.seg.length());
      } catch (const CertError& e) {
        if (e.code() != ErrorCode::segment_through_charge) throw;
        p.integral = I::entire();
      }
      p.evaluated = true;
    });

    I total(0.0);
    for (const auto& p : pieces) total = total + p.integral;
    const double estimate = std::max(total.mid_d(), 0.0);
    std::vector<BoundaryPiece<T>> next;
    bool split = false;
    for (auto& p : pieces) {
      const double share = p.seg.length().hi_d() / perimeter.lo_d();
      const bool finite = p.integral.is_finite();
      if (finite && p.integral.width_d() <= opts.rel_threshold * estimate * share) {
        next.push_back(std::move(p));
        continue;
      }
      if (p.depth >= opts.max_depth)
        fail(ErrorCode::nonconvergent_subdivision, "boundary segment still too wide at depth " + std::to_string(p.depth));
      const Vec2<T> m = p.seg.mid();
      next.push_back({{p.seg.a, m}, p.depth + 1, I(0.0), false});
      next.push_back({{m, p.seg.b}, p.depth + 1, I(0.0), false});
      split = true;
    }
    pieces = std::move(next);
    if (!split) {
      BoundaryReport<T> report;
      const T zero(0.0);
      report.integral = I(zero, total.hi() < zero ? zero : total.hi());
      report.segments = static_cast<int>(pieces.size());
      for (const auto& p : pieces) report.max_depth = std::max(report.max_depth, p.depth);
      return report;
    }
  }
}

template <typename T>
std::vector<std::array<Vec2<T>, 3>> interior_grid(const Triangle<T>& tri, int grid_n, double shrink) {
  using I = Interval<T>;
  if (grid_n < 1) fail(ErrorCode::precondition, "grid_n must be positive");
  if (!(shrink > 0.0 && shrink < 1.0)) fail(ErrorCode::precondition, "shrink must lie in (0, 1)");
  const Vec2<T> c = incenter_inradius(tri).center;
  std::array<Vec2<T>, 3> v;
  for (int i = 0; i < 3; ++i) v[i] = c + (tri.vertex(i) - c) * I(shrink);
  auto node = [&](int i, int j) {
    return v[0] + (v[1] - v[0]) * (I(i) / I(grid_n)) + (v[2] - v[0]) * (I(j) / I(grid_n));
  };
  std::vector<std::array<Vec2<T>, 3>> cells;
  for (int j = 0; j < grid_n; ++j)
    for (int i = 0; i + j < grid_n; ++i) {
      cells.push_back({node(i, j), node(i + 1, j), node(i, j + 1)});
      if (i + j + 2 <= grid_n) cells.push_back({node(i + 1, j), node(i + 1, j + 1), node(i, j + 1)});
    }
  return cells;
}

namespace {

template <typename T>
struct EdgeBound {
  int sign = 0;
  Interval<T> bound;
};

// Lower bound of |u| on a segment together with its sign, bisecting until
// the enclosure of u is relatively tight.
template <typename T>
EdgeBound<T> edge_bound(const MPSCandidate& cand, const Segment<T>& seg, int depth, const InteriorOptions& opts) {
  using I = Interval<T>;
  try {
    const TaylorModel<T> model = eval_u_model(cand, seg, opts.degree);
    const I range = model.range();
    const int sign = range.certified_sign();
    if (sign != 0) {
      // The range is compared against the smallest sampled |u|, not its
      // own width: the variation of u along the segment is not an error.
      const T low = mig(range);
      T sampled = mag(model.eval(I(0.0)));
      for (double t : {-1.0, 1.0}) sampled = std::min(sampled, mag(model.eval(I(t))));
      if (depth >= opts.max_depth || I(low, low).lo_d() >= (1.0 - opts.rel_precision) * I(sampled, sampled).hi_d())
        return {sign, I(low, low)};
    } else {
      // A certified sign change along the segment ends the search.
      const int sa = model.eval(I(-1.0)).certified_sign(), sb = model.eval(I(1.0)).certified_sign();
      if (sa * sb < 0) return {0, I(0.0)};
    }
  } catch (const CertError& e) {
    if (e.code() != ErrorCode::segment_through_charge) throw;
  }
  if (depth >= opts.max_depth) return {0, I(0.0)};
  const Vec2<T> m = seg.mid();
  const EdgeBound<T> left = edge_bound(cand, Segment<T>{seg.a, m}, depth + 1, opts);
  if (left.sign == 0) return left;
  const EdgeBound<T> right = edge_bound(cand, Segment<T>{m, seg.b}, depth + 1, opts);
  if (right.sign != left.sign) return {0, I(0.0)};
  return {left.sign, min(left.bound, right.bound)};
}

} // namespace

template <typename T>
InteriorReport<T> interior_norm_lower(const MPSCandidate& cand, const Triangle<T>& tri, const InteriorOptions& opts) {
  using I = Interval<T>;
  const auto cells = interior_grid(tri, opts.grid_n, opts.shrink);
  const I cell_area = sqr(I(opts.shrink)) * tri.area() / I(opts.grid_n * opts.grid_n);
  // A nodal domain inside a cell would have lambda as its first eigenvalue,
  // so its area is at least pi j0^2 / lambda.
  const I j0 = I::from(bessel_j0_first_zero());
  const I fk_area = pi<T>() * sqr(j0) / I(cand.lambda);
  if (!cell_area.certainly_less(fk_area))
    fail(ErrorCode::faber_krahn_precondition, "grid cells are too large for the nodal domain area bound");

  // Unique edges of the grid, keyed by node coordinates.
  const int n = opts.grid_n;
  std::map<std::pair<int, int>, int> edge_index;  // (node a, node b) with a < b
  std::vector<std::pair<int, int>> edges;
  std::vector<std::array<int, 3>> cell_edges;
  auto node_id = [n](int i, int j) { return j * (n + 1) + i; };
  auto edge = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    auto [it, inserted] = edge_index.emplace(key, static_cast<int>(edges.size()));
    if (inserted) edges.push_back(key);
    return it->second;
  };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i + j < n; ++i) {
      const int a = node_id(i, j), b = node_id(i + 1, j), c = node_id(i, j + 1);
      cell_edges.push_back({edge(a, b), edge(b, c), edge(c, a)});
      if (i + j + 2 <= n) {
        const int d = node_id(i + 1, j + 1);
        cell_edges.push_back({edge(b, d), edge(d, c), edge(c, b)});
      }
    }
  const Vec2<T> c = incenter_inradius(tri).center;
  std::array<Vec2<T>, 3> v;
  for (int i = 0; i < 3; ++i) v[i] = c + (tri.vertex(i) - c) * I(opts.shrink);
  auto node = [&](int id) {
    const int i = id % (n + 1), j = id / (n + 1);
    return Vec2<T>(v[0] + (v[1] - v[0]) * (I(i) / I(n)) + (v[2] - v[0]) * (I(j) / I(n)));
  };

  std::vector<EdgeBound<T>> bounds(edges.size());
  parallel_for(static_cast<int>(edges.size()), opts.jobs, [&](int e) {
    bounds[e] = edge_bound(cand, Segment<T>{node(edges[e].first), node(edges[e].second)}, 0, opts);
  });

  InteriorReport<T> report;
  I total(0.0);
  const T area_lo = cell_area.lo();
  for (std::size_t k = 0; k < cells.size(); ++k) {
    GridCell<T> cell{cells[k], 0, I(0.0)};
    const auto& ce = cell_edges[k];
    const int s = bounds[ce[0]].sign;
    if (s != 0 && bounds[ce[1]].sign == s && bounds[ce[2]].sign == s) {
      cell.sign = s;
      cell.bound = min(min(bounds[ce[0]].bound, bounds[ce[1]].bound), bounds[ce[2]].bound);
      total = total + sqr(cell.bound) * I(area_lo, area_lo);
    }
    report.cells.push_back(std::move(cell));
  }
  if (!total.certainly_positive()) fail(ErrorCode::sign_test_failure, "no grid cell has a certified sign on its boundary");
  report.integral = I(total.lo(), total.lo());
  return report;
}

template <typename T>
Interval<T> distance_to_spectrum(const TensionBound<T>& tb, const Interval<T>& rho, const Interval<T>& lambda,
                                 const Interval<T>& lambda_upper) {
  using I = Interval<T>;
  if (!(lambda.lo() > T(1.0))) fail(ErrorCode::precondition, "lambda must exceed 1");
  if (!rho.certainly_positive()) fail(ErrorCode::nonpositive_input, "inradius must be positive");
  const T zero(0.0);
  if (tb.t_sq_upper.hi() == zero) return I(0.0);
  // d grows with t, so the smallest admissible t^-2 is used.
  const I t_inv_sq = I(1.0) / I(tb.t_sq_upper.hi(), tb.t_sq_upper.hi());
  const I denom = rho * I(t_inv_sq.lo(), t_inv_sq.lo()) - I(28.0) * (I(1.0) + rho) * (I(1.0) + I(1.0) / sqrt(lambda));
  if (!denom.certainly_positive())
    fail(ErrorCode::denominator_nonpositive, "tension too large: rho t^-2 does not exceed 28 (1 + rho)(1 + lambda^-1/2)");
  const I d = sqrt(I(2.0) * I(lambda_upper.hi(), lambda_upper.hi()) / I(denom.lo(), denom.lo()));
  return I(zero, d.hi());
}

template <typename T>
EigenEnclosure<T> certify_enclosure(const MPSCandidate& cand, const TensionBound<T>& tb, const Interval<T>& rho,
                                    const Interval<T>& lambda_upper, const Triangle<T>& tri) {
  using I = Interval<T>;
  const I lambda(cand.lambda);
  const I d = distance_to_spectrum(tb, rho, lambda, lambda_upper);
  return {lambda + symmetric(d.hi()), 0, tri};
}

template <typename T>
Certification<T> certify_candidate(const MPSCandidate& cand, const Triangle<T>& tri, const CertifyOptions& opts) {
  using I = Interval<T>;
  for (const auto& q : cand.basis.charges)
    if (!charge_outside(tri, q)) fail(ErrorCode::charge_inside_domain, "a charge is not certainly outside the triangle");
  auto boundary = boundary_norm_upper(cand, tri, opts.boundary);
  auto interior = interior_norm_lower(cand, tri, opts.interior);
  const auto tension = TensionBound<T>::from_norms(boundary.integral, interior.integral);
  const I rho = incenter_inradius(tri).rho;
  const I lambda(cand.lambda);
  // The near-term bound assumes the eigenvalue in play lies within sqrt(lambda).
  I upper = lambda + sqrt(lambda);
  I d = distance_to_spectrum(tension, rho, lambda, upper);
  for (int round = 1; round < std::max(1, opts.bootstrap_rounds); ++round) {
    upper = lambda + d;
    d = distance_to_spectrum(tension, rho, lambda, upper);
  }
  EigenEnclosure<T> enclosure{lambda + symmetric(d.hi()), 0, tri};
  return {cand, std::move(boundary), std::move(interior), tension, rho, d, std::move(enclosure)};
}

template <typename T>
Certification<T> enclose_eigenvalue(const Triangle<T>& tri, double estimate, const BasisSpec& spec,
                                    const CertifyOptions& opts, const SearchOptions& search) {
  const auto dtri = Triangle<double>::apex(tri.cx().mid_d(), tri.cy().mid_d());
  const MPSCandidate cand = golden_search(dtri, bracket_around(estimate), spec, search);
  return certify_candidate(cand, tri, opts);
}

#define TRICERT_CERTIFIER_INSTANTIATE(T)                                                                         \
  template struct TensionBound<T>;                                                                               \
  template BoundaryReport<T> boundary_norm_upper<T>(const MPSCandidate&, const Triangle<T>&, const BoundaryOptions&); \
  template std::vector<std::array<Vec2<T>, 3>> interior_grid<T>(const Triangle<T>&, int, double);                  \
  template InteriorReport<T> interior_norm_lower<T>(const MPSCandidate&, const Triangle<T>&, const InteriorOptions&); \
  template Interval<T> distance_to_spectrum<T>(const TensionBound<T>&, const Interval<T>&, const Interval<T>&,     \
                                               const Interval<T>&);                                              \
  template EigenEnclosure<T> certify_enclosure<T>(const MPSCandidate&, const TensionBound<T>&, const Interval<T>&, \
                                                  const Interval<T>&, const Triangle<T>&);                       \
  template Certification<T> certify_candidate<T>(const MPSCandidate&, const Triangle<T>&, const CertifyOptions&);  \
  template Certification<T> enclose_eigenvalue<T>(const Triangle<T>&, double, const BasisSpec&,                   \
                                                  const CertifyOptions&, const SearchOptions&);

TRICERT_CERTIFIER_INSTANTIATE(double)
TRICERT_CERTIFIER_INSTANTIATE(BigFloat)

} // namespace tricert
