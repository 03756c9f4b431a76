#pragma once

#include "tricert/bessel.hpp"
#include "tricert/geometry.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <utility>
#include <vector>

namespace tricert {

/// Parameters of the particular-solution basis and of the collocation.
struct BasisSpec {
  int n_c = 7;           // charges per vertex
  double sigma = 2.5;    // charge clustering rate
  double ell0 = 1.0;     // distance of the outermost charge
  int d = 10;            // Fourier-Bessel order at the centre
  int boundary_points = 300;  // per side, Chebyshev distributed
  int interior_points = 40;
  std::uint64_t seed = 0;

  int columns() const { return 9 * n_c + 2 * d + 1; }
};

/// Charge positions and centre in double precision. These exact doubles
/// define the basis; rigorous evaluation treats them as exact points.
struct MPSBasis {
  std::vector<Eigen::Vector2d> charges;  // vertex by vertex, nearest last
  Eigen::Vector2d center;
  int d = 0;

  int columns() const { return 3 * static_cast<int>(charges.size()) + 2 * d + 1; }
};

/// Column order: for every charge Y0, Y1 cos, Y1 sin; then J0 and
/// J_j cos(j theta), J_j sin(j theta) for j = 1..d. Charge j of a vertex sits
/// on the exterior bisector at distance ell0 exp(-sigma j / sqrt(n_c)).
MPSBasis build_basis(const Triangle<double>& tri, const BasisSpec& spec);

struct CollocationPoints {
  std::vector<Eigen::Vector2d> boundary;
  std::vector<Eigen::Vector2d> interior;
};
CollocationPoints collocation_points(const Triangle<double>& tri, const BasisSpec& spec);

/// Basis values at one point (double precision, non-rigorous).
void basis_row(const MPSBasis& basis, double k, const Eigen::Vector2d& p, double* out);

/// Boundary rows stacked over interior rows.
Eigen::MatrixXd build_collocation(const Triangle<double>& tri, const BasisSpec& spec, double lambda);

/// Smallest singular value of the boundary block of the orthonormalized
/// collocation matrix, and the corresponding coefficients (unit 2-norm).
std::pair<double, Eigen::VectorXd> collocation_smin(const Eigen::MatrixXd& a, int boundary_rows);

struct MPSCandidate {
  double cx = 0, cy = 0;  // apex of the triangle searched
  double lambda = 0;
  Eigen::VectorXd coeffs;
  BasisSpec spec;
  MPSBasis basis;
  double smin = 0;
};

struct SearchOptions {
  double rel_tol = 1e-13;
  double smin_ceiling = 1e-2;
  int scan_points = 24;
};

/// Scans the bracket for the deepest dip of smin, then golden-section
/// search around it.
MPSCandidate golden_search(const Triangle<double>& tri, std::pair<double, double> bracket, const BasisSpec& spec,
                           const SearchOptions& opts = {});

/// Bracket lambda (1 -+ 5%) around an estimate.
std::pair<double, double> bracket_around(double estimate, double fraction = 0.05);

/// u(p) in double precision.
double eval_u(const MPSCandidate& cand, const Eigen::Vector2d& p);

template <typename T>
struct Segment {
  Vec2<T> a, b;
  Vec2<T> mid() const { return (a + b) / Interval<T>(2.0); }
  Vec2<T> half() const { return (b - a) / Interval<T>(2.0); }
  Interval<T> length() const { return norm<T>(b - a); }
};

/// Jet in s of u(mid + (tau + s) half) for every tau in `base`.
template <typename T>
Jet<T> eval_u_jet(const MPSCandidate& cand, const Segment<T>& seg, const Interval<T>& base, int order);

/// Taylor model of u on the segment's parametrization t in [-1, 1].
template <typename T>
TaylorModel<T> eval_u_model(const MPSCandidate& cand, const Segment<T>& seg, int m = kDefaultTaylorDegree);

/// Taylor model of u^2 on the segment.
template <typename T>
TaylorModel<T> eval_u_taylor(const MPSCandidate& cand, const Segment<T>& seg, int m = kDefaultTaylorDegree);

} // namespace tricert
