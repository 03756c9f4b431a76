#pragma once

#include "tricert/geometry.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <iosfwd>
#include <optional>
#include <vector>

namespace tricert {

/// Crouzeix-Raviart mesh of N^2 subtriangles similar to the domain. Lattice
/// node (i, j) is P0 + (i/N)(P1 - P0) + (j/N)(P2 - P0). Interior edges are
/// the unknowns; edge class c is parallel to the side opposite vertex c.
struct CRMesh {
  struct Element {
    std::array<int, 3> edges;  // by class; -1 marks a boundary edge
  };
  int N = 0;
  int dim = 0;
  std::vector<Element> elements;
  std::vector<std::array<int, 3>> edge_keys;  // (class, i, j) of every unknown
  IntervalD h;                                // diameter / N

  static CRMesh build(const Triangle<double>& tri, int N);
};

/// M = 3 N^2 A / (2 |Omega|) as an entrywise enclosure mid +- rad.
struct DiscreteOperator {
  Eigen::SparseMatrix<double> mid;
  Eigen::SparseMatrix<double> rad;
  int dim = 0;
  IntervalD h;
};

DiscreteOperator assemble(const Triangle<double>& tri, int N);

/// Operator from a dense symmetric midpoint matrix and entrywise radii
/// (used for synthetic interval matrices).
DiscreteOperator operator_from_dense(const Eigen::MatrixXd& mid, const Eigen::MatrixXd& rad);

/// Sparse-triplet text export: "row col mid rad" per line, 0-based.
void write_triplets(std::ostream& os, const DiscreteOperator& m);

struct EigenBasis {
  Eigen::MatrixXd Q;         // columns by ascending eigenvalue
  Eigen::VectorXd eigvals;
};

/// Non-rigorous eigendecomposition of the midpoint matrix, followed by one
/// Newton-Schulz step that pushes the columns closer to orthonormal.
EigenBasis approx_eigenbasis(const DiscreteOperator& m);

/// Eigenvalue estimates of the CR discretization (non-rigorous).
std::vector<double> fem_eigenvalue_estimates(const Triangle<double>& tri, int N, int count);

/// Rigorous upper bound of max_ij |<v_i, v_j> - delta_ij| over the columns.
double gram_defect(const Eigen::MatrixXd& Q);

/// sqrt(3 s): distance from each v_i to an orthonormal family, valid when
/// 8 m s < 1.
double gram_schmidt_radius(double s, int m);

struct GershgorinComponent {
  IntervalD range;
  int count = 0;
};

struct SpectralSeparation {
  std::vector<GershgorinComponent> components;  // all components, ascending
  std::vector<IntervalD> cluster_enclosures;    // components holding the first k eigenvalues
  IntervalD rest_lower;                         // lower bound of eigenvalue k+1 (a point)
  int index_certified = 0;
  double s = 0;
};

/// s_floor raises the Gram defect used in the inflation (never lowers it).
SpectralSeparation certify_separation(const DiscreteOperator& m, const Eigen::MatrixXd& Q, int k, double s_floor = 0);

/// Enclosure of the idx-th (1-based) eigenvalue from an approximate eigenpair.
IntervalD parlett_refine(const DiscreteOperator& m, double lambda, const Eigen::VectorXd& u,
                         const SpectralSeparation& sep, int idx);

/// Guaranteed lower bound lambda / (1 + C_h^2 lambda), C_h = 0.1893 h, at the
/// enclosure's lower endpoint.
IntervalD liu_lower_bound(const IntervalD& lambda_h, const IntervalD& h);

/// Full first pass: separates the first k+1 discrete eigenvalues, refines
/// the (k+1)-st and returns a lower bound for the continuous lambda_{k+1}.
struct FirstPassResult {
  SpectralSeparation separation;
  IntervalD discrete_enclosure;  // lambda_{h,k+1}
  IntervalD lower_bound;         // for lambda_{k+1}
  std::vector<double> estimates; // approximate discrete eigenvalues 1..k+1
  int N = 0;
};
FirstPassResult first_pass(const Triangle<double>& tri, int N, int k);

} // namespace tricert
