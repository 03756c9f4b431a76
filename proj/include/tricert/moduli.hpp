#pragma once

#include "tricert/certifier.hpp"
#include "tricert/fem.hpp"

#include <map>
#include <string>
#include <vector>

namespace tricert {

enum class Target { xi21, xi41 };

/// Apexes center + x v21 + y v41 for (x, y) in [-1, 1]^2. Coordinates are
/// decimal strings so that every precision sees the same exact values.
struct ParallelogramSpec {
  std::string name;
  std::array<std::string, 2> center;
  std::array<std::string, 2> v21;
  std::array<std::string, 2> v41;
  std::string xi21_bar = "1.67675";
  std::string xi41_bar = "2.99372";

  template <typename T>
  Vec2<T> point(const Interval<T>& x, const Interval<T>& y) const;
  template <typename T>
  Interval<T> xi_bar(Target target) const;
};

/// The two parallelograms around A = (0.635, 0.275) and B = (0.84906, 0.31995).
ParallelogramSpec parallelogram_a();
ParallelogramSpec parallelogram_b();

/// Side x = +-1 ("+v21", "-v21", target xi21) or y = +-1 ("+v41", "-v41",
/// target xi41) of a parallelogram.
enum class Side { plus_v21, minus_v21, plus_v41, minus_v41 };

Target side_target(Side side);
int side_orientation(Side side);  // +1 or -1
Side opposite(Side side);
std::string side_label(Side side);
Side parse_side_label(const std::string& label);  // "+v21" etc.

struct SideTask {
  ParallelogramSpec spec;
  Side side = Side::plus_v21;
  int n_sub = 40;
  int sub_index = 1;  // 1..n_sub
  int expected_sign = 1;

  Target target() const { return side_target(side); }
  void validate() const;
};

/// Sub-segment geometry: midpoint triangle and the perturbation covering the
/// sub-segment (apex midpoint + t v, t in [-1, 1]).
template <typename T>
SegmentPerturbation<T> subsegment(const SideTask& task);

/// Whole side as one perturbation about its center.
template <typename T>
SegmentPerturbation<T> whole_side(const ParallelogramSpec& spec, Side side);

struct ValidateOptions {
  BasisSpec basis;
  CertifyOptions certify;
  SearchOptions search;
  int estimate_N = 24;  // FEM mesh for the search brackets
};

template <typename T>
struct SegmentVerdict {
  Interval<T> xi_midpoint;   // quotient at the sub-segment midpoint
  Interval<T> radius;        // stability radius over the sub-segment
  Interval<T> xi_enclosure;  // valid on the whole sub-segment
  std::vector<EigenEnclosure<T>> eig_enclosures;  // lambda_1 and lambda_k at the midpoint
  std::vector<double> tensions;  // upper bounds of t^2
  int sign = 0;  // certified sign of xi - xi_bar on the sub-segment
  bool sign_ok = false;
};

/// Certified eigenvalues near the FEM estimates of the given (1-based)
/// indices of `tri`, in the order requested.
template <typename T>
std::vector<Certification<T>> certify_indices(const Triangle<T>& tri, const std::vector<int>& indices,
                                              const ValidateOptions& opts);

/// Quotient at the midpoint, its stability radius and the inflated enclosure;
/// the sign is left unset.
template <typename T>
SegmentVerdict<T> segment_quotient(const SideTask& task, const ValidateOptions& opts);

/// Compares the inflated enclosure with xi_bar; sign_undecided when it
/// straddles xi_bar.
template <typename T>
void judge_segment(SegmentVerdict<T>& verdict, const Interval<T>& xi_bar, int expected_sign);

template <typename T>
SegmentVerdict<T> validate_segment(const SideTask& task, const ValidateOptions& opts);

/// Enclosures of the eigenvalues of the given indices at the perturbation's
/// base triangle, widened to hold for every apex on the perturbation.
template <typename T>
std::vector<EigenEnclosure<T>> perturbed_enclosures(const SegmentPerturbation<T>& pert, const std::vector<int>& indices,
                                                    const ValidateOptions& opts);

/// lambda_2 and lambda_3 over a whole xi41 side.
template <typename T>
std::vector<EigenEnclosure<T>> intermediate_eigs(const ParallelogramSpec& spec, Side side, const ValidateOptions& opts);

/// First pass at the perturbation's base, giving a lower bound for
/// lambda_{k+1} there, scaled to hold along the whole perturbation.
template <typename T>
Interval<T> propagated_lower_bound(const SegmentPerturbation<T>& pert, int k, int fem_N);

/// True when, for every entry, the k enclosures are pairwise disjoint and
/// below `lower`; they then hold lambda_1..lambda_k in order. Raises overlap
/// or gap_insufficient otherwise.
template <typename T>
bool certify_positions(const std::vector<std::vector<Interval<T>>>& per_segment, const Interval<T>& lower, int k);

/// Portable summary of one validated sub-segment.
struct VerdictRecord {
  std::string parallelogram;
  Side side = Side::plus_v21;
  int n_sub = 0;
  int sub_index = 0;
  int expected_sign = 0;
  IntervalMP xi_enclosure;
  std::string xi_bar;
  bool sign_ok = false;
};

struct Coverage {
  std::string parallelogram;
  std::map<Side, int> n_sub;  // all four sides
};

struct Certificate {
  std::vector<std::string> parallelograms;
  int verdicts = 0;
  std::string statement;
};

/// Checks condition (C) on every side of every covered parallelogram: each
/// sub-segment present exactly once, its enclosure strictly on its expected
/// side of xi_bar, opposite sides with opposite expected signs. Raises
/// incomplete_coverage or sign_undecided.
Certificate miranda_conclude(const std::vector<VerdictRecord>& verdicts, const std::vector<Coverage>& coverage);

} // namespace tricert
