#pragma once

#include "tricert/mps.hpp"

#include <array>
#include <functional>
#include <optional>
#include <vector>

namespace tricert {

/// Upper bound of the squared tension t[u]^2 = |u|^2_{bdry} / |u|^2_{int}.
template <typename T>
struct TensionBound {
  Interval<T> boundary_sq;  // upper bound of the boundary L2 norm squared, as [0, hi]
  Interval<T> interior_sq;  // lower bound of the interior L2 norm squared, as [lo, lo]
  Interval<T> t_sq_upper;

  static TensionBound from_norms(const Interval<T>& boundary_sq, const Interval<T>& interior_sq);
};

template <typename T>
struct EigenEnclosure {
  Interval<T> value;
  int index = 0;  // 0 while the position in the spectrum is unknown
  Triangle<T> triangle;
};

struct BoundaryOptions {
  int per_side = 12;           // initial Chebyshev breakpoints per side
  double rel_threshold = 1e-3; // accepted width relative to the running total, per unit length share
  int max_depth = 12;
  int degree = kDefaultTaylorDegree;
  int jobs = 1;
};

struct InteriorOptions {
  int grid_n = 8;
  double shrink = 0.8;
  double rel_precision = 1e-2;  // accepted relative width of |u| on a grid edge
  int max_depth = 8;
  int degree = kDefaultTaylorDegree;
  int jobs = 1;
};

/// Sub-segments of the boundary that were integrated, with their enclosures.
template <typename T>
struct BoundaryReport {
  Interval<T> integral;
  int segments = 0;
  int max_depth = 0;
};

/// Upper bound of the integral of u^2 over the boundary, by adaptive
/// bisection of Chebyshev-distributed side segments.
template <typename T>
BoundaryReport<T> boundary_norm_upper(const MPSCandidate& cand, const Triangle<T>& tri, const BoundaryOptions& opts = {});

/// One triangle of the interior grid and what it contributed.
template <typename T>
struct GridCell {
  std::array<Vec2<T>, 3> vertices;
  int sign = 0;  // common sign of u on the cell boundary, 0 if none was certified
  Interval<T> bound;  // lower bound of |u| on the cell boundary
};

template <typename T>
struct InteriorReport {
  Interval<T> integral;  // [lo, lo]
  std::vector<GridCell<T>> cells;
};

/// Cells of the grid of grid_n^2 triangles partitioning the copy of the
/// triangle scaled by `shrink` about its incenter.
template <typename T>
std::vector<std::array<Vec2<T>, 3>> interior_grid(const Triangle<T>& tri, int grid_n, double shrink);

/// Lower bound of the integral of u^2 over the triangle: every grid cell on
/// whose boundary |u| >= b > 0 with one sign contributes b^2 |cell|.
template <typename T>
InteriorReport<T> interior_norm_lower(const MPSCandidate& cand, const Triangle<T>& tri, const InteriorOptions& opts = {});

/// Radius d with [lambda - d, lambda + d] meeting the spectrum, from
/// d^2 <= 2 lambda_upper / (rho t^-2 - 28 (1 + rho)(1 + lambda^-1/2)).
template <typename T>
Interval<T> distance_to_spectrum(const TensionBound<T>& tb, const Interval<T>& rho, const Interval<T>& lambda,
                                 const Interval<T>& lambda_upper);

template <typename T>
EigenEnclosure<T> certify_enclosure(const MPSCandidate& cand, const TensionBound<T>& tb, const Interval<T>& rho,
                                    const Interval<T>& lambda_upper, const Triangle<T>& tri);

struct CertifyOptions {
  BoundaryOptions boundary;
  InteriorOptions interior;
  int bootstrap_rounds = 2;
};

template <typename T>
struct Certification {
  MPSCandidate candidate;
  BoundaryReport<T> boundary;
  InteriorReport<T> interior;
  TensionBound<T> tension;
  Interval<T> rho;
  Interval<T> distance;
  EigenEnclosure<T> enclosure;
};

/// Tension bounds and the bootstrapped enclosure for a candidate. The first
/// round uses lambda + sqrt(lambda) as the upper bound of the eigenvalue
/// nearest to lambda, later rounds the previous enclosure.
template <typename T>
Certification<T> certify_candidate(const MPSCandidate& cand, const Triangle<T>& tri, const CertifyOptions& opts = {});

/// Search near `estimate` followed by certification.
template <typename T>
Certification<T> enclose_eigenvalue(const Triangle<T>& tri, double estimate, const BasisSpec& spec = {},
                                    const CertifyOptions& opts = {}, const SearchOptions& search = {});

/// Runs f(i) for i in [0, n) on `jobs` threads, each at the caller's
/// MPFR precision. The first exception is rethrown.
void parallel_for(int n, int jobs, const std::function<void(int)>& f);

} // namespace tricert
