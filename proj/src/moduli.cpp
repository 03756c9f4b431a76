#include "tricert/moduli.hpp"

#include <algorithm>
#include <set>

namespace tricert {

template <typename T>
Vec2<T> ParallelogramSpec::point(const Interval<T>& x, const Interval<T>& y) const {
  using I = Interval<T>;
  auto dec = [](const std::string& s) { return I::from_decimal(s); };
  return vec2(dec(center[0]) + x * dec(v21[0]) + y * dec(v41[0]), dec(center[1]) + x * dec(v21[1]) + y * dec(v41[1]));
}

template <typename T>
Interval<T> ParallelogramSpec::xi_bar(Target target) const {
  return Interval<T>::from_decimal(target == Target::xi21 ? xi21_bar : xi41_bar);
}

ParallelogramSpec parallelogram_a() {
  return {"A", {"0.63500", "0.27500"}, {"0.004610608896618232", "0.0012403688839389946"},
          {"-0.0041659682109460045", "-0.000511581170421992"}};
}

ParallelogramSpec parallelogram_b() {
  return {"B", {"0.84906", "0.31995"}, {"0.0028159587453638808", "0.0020776257941965285"},
          {"0.007180726583099708", "0.00213029677112299"}};
}

Target side_target(Side side) {
  return side == Side::plus_v21 || side == Side::minus_v21 ? Target::xi21 : Target::xi41;
}

int side_orientation(Side side) { return side == Side::plus_v21 || side == Side::plus_v41 ? 1 : -1; }

Side opposite(Side side) {
  switch (side) {
  case Side::plus_v21: return Side::minus_v21;
  case Side::minus_v21: return Side::plus_v21;
  case Side::plus_v41: return Side::minus_v41;
  default: return Side::plus_v41;
  }
}

std::string side_label(Side side) {
  switch (side) {
  case Side::plus_v21: return "+v21";
  case Side::minus_v21: return "-v21";
  case Side::plus_v41: return "+v41";
  default: return "-v41";
  }
}

Side parse_side_label(const std::string& label) {
  for (Side s : {Side::plus_v21, Side::minus_v21, Side::plus_v41, Side::minus_v41})
    if (side_label(s) == label) return s;
  fail(ErrorCode::usage, "unknown side '" + label + "' (expected +v21, -v21, +v41 or -v41)");
}

void SideTask::validate() const {
  if (n_sub < 1) fail(ErrorCode::usage, "n_sub must be positive");
  if (sub_index < 1 || sub_index > n_sub)
    fail(ErrorCode::usage, "sub-segment index " + std::to_string(sub_index) + " outside 1.." + std::to_string(n_sub));
  if (expected_sign != 1 && expected_sign != -1) fail(ErrorCode::usage, "expected sign must be +1 or -1");
}

namespace {

// Side coordinate s in [-1, 1] along the side's free direction.
template <typename T>
Vec2<T> side_point(const ParallelogramSpec& spec, Side side, const Interval<T>& s) {
  const Interval<T> fixed(side_orientation(side));
  return side_target(side) == Target::xi21 ? spec.point<T>(fixed, s) : spec.point<T>(s, fixed);
}

template <typename T>
Vec2<T> free_direction(const ParallelogramSpec& spec, Side side) {
  using I = Interval<T>;
  const auto& v = side_target(side) == Target::xi21 ? spec.v41 : spec.v21;
  return vec2(I::from_decimal(v[0]), I::from_decimal(v[1]));
}

} // namespace

template <typename T>
SegmentPerturbation<T> subsegment(const SideTask& task) {
  using I = Interval<T>;
  task.validate();
  const I n(task.n_sub);
  const I s_mid = I(-1.0) + I(2 * task.sub_index - 1) / n;
  const Vec2<T> c = side_point<T>(task.spec, task.side, s_mid);
  return {Triangle<T>(c.x(), c.y()), free_direction<T>(task.spec, task.side) / n, I(1.0)};
}

template <typename T>
SegmentPerturbation<T> whole_side(const ParallelogramSpec& spec, Side side) {
  using I = Interval<T>;
  const Vec2<T> c = side_point<T>(spec, side, I(0.0));
  return {Triangle<T>(c.x(), c.y()), free_direction<T>(spec, side), I(1.0)};
}

template <typename T>
std::vector<Certification<T>> certify_indices(const Triangle<T>& tri, const std::vector<int>& indices,
                                              const ValidateOptions& opts) {
  if (indices.empty()) return {};
  const int top = *std::max_element(indices.begin(), indices.end());
  if (*std::min_element(indices.begin(), indices.end()) < 1) fail(ErrorCode::precondition, "eigenvalue indices start at 1");
  const auto dtri = Triangle<double>::apex(tri.cx().mid_d(), tri.cy().mid_d());
  const std::vector<double> est = fem_eigenvalue_estimates(dtri, opts.estimate_N, top + 1);
  std::vector<Certification<T>> out;
  for (int idx : indices) {
    const double e = est[idx - 1];
    // The default window, narrowed so that neighbouring estimates stay out.
    auto [lo, hi] = bracket_around(e);
    if (idx >= 2) lo = std::max(lo, 0.5 * (est[idx - 2] + e));
    hi = std::min(hi, 0.5 * (e + est[idx]));
    const MPSCandidate cand = golden_search(dtri, {lo, hi}, opts.basis, opts.search);
    out.push_back(certify_candidate(cand, tri, opts.certify));
  }
  return out;
}

template <typename T>
SegmentVerdict<T> segment_quotient(const SideTask& task, const ValidateOptions& opts) {
  const int k = task.target() == Target::xi21 ? 2 : 4;
  const SegmentPerturbation<T> pert = subsegment<T>(task);
  const StabilityMode mode = select_mode(pert);
  auto certs = certify_indices(pert.base, {1, k}, opts);
  SegmentVerdict<T> v;
  for (auto& c : certs) {
    v.tensions.push_back(c.tension.t_sq_upper.hi_d());
    v.eig_enclosures.push_back(std::move(c.enclosure));
  }
  v.xi_midpoint = v.eig_enclosures[1].value / v.eig_enclosures[0].value;
  v.radius = quotient_stability_radius(pert, v.xi_midpoint, mode);
  v.xi_enclosure = v.xi_midpoint + symmetric(v.radius.hi());
  return v;
}

template <typename T>
void judge_segment(SegmentVerdict<T>& verdict, const Interval<T>& xi_bar, int expected_sign) {
  verdict.sign = (verdict.xi_enclosure - xi_bar).certified_sign();
  if (verdict.sign == 0)
    fail(ErrorCode::sign_undecided, "quotient enclosure " + verdict.xi_enclosure.to_string(12) + " straddles " +
                                        xi_bar.to_string(12));
  verdict.sign_ok = verdict.sign == expected_sign;
}

template <typename T>
SegmentVerdict<T> validate_segment(const SideTask& task, const ValidateOptions& opts) {
  task.validate();
  SegmentVerdict<T> v = segment_quotient<T>(task, opts);
  judge_segment(v, task.spec.xi_bar<T>(task.target()), task.expected_sign);
  return v;
}

template <typename T>
std::vector<EigenEnclosure<T>> perturbed_enclosures(const SegmentPerturbation<T>& pert, const std::vector<int>& indices,
                                                    const ValidateOptions& opts) {
  using I = Interval<T>;
  const StabilityMode mode = select_mode(pert);
  const I ratio = eigenvalue_ratio_bounds(pert, mode);
  auto certs = certify_indices(pert.base, indices, opts);
  std::vector<EigenEnclosure<T>> out;
  for (std::size_t i = 0; i < certs.size(); ++i) {
    const I& v = certs[i].enclosure.value;
    const I lo = I(v.lo(), v.lo()) * I(ratio.lo(), ratio.lo()), hi = I(v.hi(), v.hi()) * I(ratio.hi(), ratio.hi());
    out.push_back({I(lo.lo(), hi.hi()), indices[i], pert.base});
  }
  return out;
}

template <typename T>
std::vector<EigenEnclosure<T>> intermediate_eigs(const ParallelogramSpec& spec, Side side, const ValidateOptions& opts) {
  if (side_target(side) != Target::xi41)
    fail(ErrorCode::precondition, "intermediate eigenvalues are only needed on xi41 sides");
  return perturbed_enclosures(whole_side<T>(spec, side), {2, 3}, opts);
}

template <typename T>
Interval<T> propagated_lower_bound(const SegmentPerturbation<T>& pert, int k, int fem_N) {
  using I = Interval<T>;
  const Triangle<double> base(IntervalD::from(pert.base.cx()), IntervalD::from(pert.base.cy()));
  const FirstPassResult fp = first_pass(base, fem_N, k);
  const I ratio = eigenvalue_ratio_bounds(pert, select_mode(pert));
  const I low = I::from(fp.lower_bound) * I(ratio.lo(), ratio.lo());
  return I(low.lo(), low.lo());
}

template <typename T>
bool certify_positions(const std::vector<std::vector<Interval<T>>>& per_segment, const Interval<T>& lower, int k) {
  for (std::size_t s = 0; s < per_segment.size(); ++s) {
    std::vector<Interval<T>> e = per_segment[s];
    if (static_cast<int>(e.size()) != k)
      fail(ErrorCode::precondition, "expected " + std::to_string(k) + " enclosures, got " + std::to_string(e.size()));
    std::sort(e.begin(), e.end(), [](const auto& a, const auto& b) { return a.lo() < b.lo(); });
    for (int i = 0; i + 1 < k; ++i)
      if (!e[i].certainly_less(e[i + 1]))
        fail(ErrorCode::overlap, "entry " + std::to_string(s) + ": enclosures " + e[i].to_string(12) + " and " +
                                     e[i + 1].to_string(12) + " are not disjoint");
    if (!e[k - 1].certainly_less(lower))
      fail(ErrorCode::gap_insufficient, "entry " + std::to_string(s) + ": enclosure " + e[k - 1].to_string(12) +
                                            " reaches the lower bound " + lower.to_string(12));
  }
  return true;
}

Certificate miranda_conclude(const std::vector<VerdictRecord>& verdicts, const std::vector<Coverage>& coverage) {
  if (coverage.empty()) fail(ErrorCode::incomplete_coverage, "no parallelogram to conclude on");
  Certificate cert;
  std::vector<std::string> missing;
  for (const Coverage& cov : coverage) {
    std::map<Side, int> sign_of_side;
    for (Side side : {Side::plus_v21, Side::minus_v21, Side::plus_v41, Side::minus_v41}) {
      const auto it = cov.n_sub.find(side);
      if (it == cov.n_sub.end() || it->second < 1) {
        missing.push_back(cov.parallelogram + ":" + side_label(side) + " (no subdivision given)");
        continue;
      }
      const int n = it->second;
      std::set<int> seen;
      for (const VerdictRecord& v : verdicts) {
        if (v.parallelogram != cov.parallelogram || v.side != side) continue;
        if (v.n_sub != n) fail(ErrorCode::incomplete_coverage, "verdict with subdivision " + std::to_string(v.n_sub) +
                                                                   " on a side divided into " + std::to_string(n));
        if (!seen.insert(v.sub_index).second)
          fail(ErrorCode::integrity, "duplicate verdict for " + cov.parallelogram + ":" + side_label(side) + " #" +
                                         std::to_string(v.sub_index));
        // The flag is not trusted: the sign is recomputed from the enclosure.
        const int sign = (v.xi_enclosure - IntervalMP::from_decimal(v.xi_bar)).certified_sign();
        if (sign == 0 || sign != v.expected_sign || !v.sign_ok)
          fail(ErrorCode::sign_undecided, cov.parallelogram + ":" + side_label(side) + " #" +
                                              std::to_string(v.sub_index) + " does not have its expected sign");
        auto [pos, fresh] = sign_of_side.emplace(side, sign);
        if (!fresh && pos->second != sign)
          fail(ErrorCode::sign_undecided, cov.parallelogram + ":" + side_label(side) + " changes sign along the side");
        ++cert.verdicts;
      }
      for (int i = 1; i <= n; ++i)
        if (!seen.count(i)) missing.push_back(cov.parallelogram + ":" + side_label(side) + " #" + std::to_string(i));
    }
    if (missing.empty())
      for (Side side : {Side::plus_v21, Side::plus_v41})
        if (sign_of_side.at(side) != -sign_of_side.at(opposite(side)))
          fail(ErrorCode::sign_undecided, cov.parallelogram + ": opposite sides " + side_label(side) + " and " +
                                              side_label(opposite(side)) + " have the same sign");
    cert.parallelograms.push_back(cov.parallelogram);
  }
  if (!missing.empty()) {
    std::string list;
    for (std::size_t i = 0; i < missing.size() && i < 20; ++i) list += (i ? ", " : "") + missing[i];
    if (missing.size() > 20) list += ", ... (" + std::to_string(missing.size()) + " in total)";
    fail(ErrorCode::incomplete_coverage, "unvalidated sub-segments: " + list);
  }
  cert.statement = "Condition (C) holds on every side; by the Poincare-Miranda theorem each of ";
  for (std::size_t i = 0; i < cert.parallelograms.size(); ++i)
    cert.statement += (i ? ", " : "") + cert.parallelograms[i];
  cert.statement += " contains an apex with xi21 = xi21_bar and xi41 = xi41_bar";
  return cert;
}

#define TRICERT_MODULI_INSTANTIATE(T)                                                                                \
  template Vec2<T> ParallelogramSpec::point<T>(const Interval<T>&, const Interval<T>&) const;                        \
  template Interval<T> ParallelogramSpec::xi_bar<T>(Target) const;                                                   \
  template SegmentPerturbation<T> subsegment<T>(const SideTask&);                                                    \
  template SegmentPerturbation<T> whole_side<T>(const ParallelogramSpec&, Side);                                     \
  template std::vector<Certification<T>> certify_indices<T>(const Triangle<T>&, const std::vector<int>&,             \
                                                            const ValidateOptions&);                                 \
  template SegmentVerdict<T> segment_quotient<T>(const SideTask&, const ValidateOptions&);                           \
  template void judge_segment<T>(SegmentVerdict<T>&, const Interval<T>&, int);                                       \
  template SegmentVerdict<T> validate_segment<T>(const SideTask&, const ValidateOptions&);                           \
  template std::vector<EigenEnclosure<T>> perturbed_enclosures<T>(const SegmentPerturbation<T>&,                     \
                                                                  const std::vector<int>&, const ValidateOptions&);  \
  template std::vector<EigenEnclosure<T>> intermediate_eigs<T>(const ParallelogramSpec&, Side, const ValidateOptions&); \
  template Interval<T> propagated_lower_bound<T>(const SegmentPerturbation<T>&, int, int);                           \
  template bool certify_positions<T>(const std::vector<std::vector<Interval<T>>>&, const Interval<T>&, int);

TRICERT_MODULI_INSTANTIATE(double)
TRICERT_MODULI_INSTANTIATE(BigFloat)

} // namespace tricert
