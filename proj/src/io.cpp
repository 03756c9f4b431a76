#include "tricert/io.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iomanip>
#include <sstream>

namespace tricert::io {

template <typename T>
json interval_json(const Interval<T>& x, int digits) {
  PrecisionGuard guard(std::max<mpfr_prec_t>(BigFloat::default_precision(), 64));
  const IntervalMP b = IntervalMP::from(x);
  return {{"lo", b.lo().to_string(digits, MPFR_RNDD)}, {"hi", b.hi().to_string(digits, MPFR_RNDU)}};
}

IntervalMP interval_from_json(const json& j) {
  if (!j.is_object() || !j.contains("lo") || !j.contains("hi")) fail(ErrorCode::io, "interval record needs lo and hi");
  return IntervalMP::from_decimal(j.at("lo").get<std::string>(), j.at("hi").get<std::string>());
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    fail(ErrorCode::numeric_backend, "sha256 failed");
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return out.str();
}

json with_hash(json payload) {
  payload.erase("hash");
  const std::string h = sha256_hex(payload.dump());
  payload["hash"] = h;
  return payload;
}

void check_hash(const json& record) {
  if (!record.contains("hash")) fail(ErrorCode::integrity, "record has no hash");
  json payload = record;
  payload.erase("hash");
  if (sha256_hex(payload.dump()) != record.at("hash").get<std::string>())
    fail(ErrorCode::integrity, "record hash does not match its contents");
}

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorCode::io, path + ": " + e.what());
  }
}

void write_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io, "cannot write " + path);
  out << j.dump(2) << '\n';
}

const ParallelogramSpec& RunConfig::parallelogram(const std::string& name) const {
  for (const auto& p : parallelograms)
    if (p.name == name) return p;
  fail(ErrorCode::usage, "no parallelogram named '" + name + "' in the configuration");
}

int RunConfig::expected_sign(const std::string& name, Side side) const {
  const auto it = expected_signs.find(name);
  if (it == expected_signs.end() || !it->second.count(side))
    fail(ErrorCode::usage, "no expected sign for " + name + ":" + side_label(side));
  return it->second.at(side);
}

RunConfig default_config() {
  RunConfig c;
  c.parallelograms = {parallelogram_a(), parallelogram_b()};
  for (const auto& p : c.parallelograms)
    c.expected_signs[p.name] = {{Side::plus_v21, 1}, {Side::minus_v21, -1}, {Side::plus_v41, 1}, {Side::minus_v41, -1}};
  return c;
}

namespace {

json spec_json(const ParallelogramSpec& p) {
  return {{"name", p.name}, {"center", p.center}, {"v21", p.v21}, {"v41", p.v41},
          {"xi21_bar", p.xi21_bar}, {"xi41_bar", p.xi41_bar}};
}

ParallelogramSpec spec_from(const json& j) {
  ParallelogramSpec p;
  p.name = j.at("name").get<std::string>();
  p.center = j.at("center").get<std::array<std::string, 2>>();
  p.v21 = j.at("v21").get<std::array<std::string, 2>>();
  p.v41 = j.at("v41").get<std::array<std::string, 2>>();
  if (j.contains("xi21_bar")) p.xi21_bar = j.at("xi21_bar").get<std::string>();
  if (j.contains("xi41_bar")) p.xi41_bar = j.at("xi41_bar").get<std::string>();
  return p;
}

json basis_json(const BasisSpec& b) {
  return {{"n_c", b.n_c}, {"sigma", b.sigma}, {"ell0", b.ell0}, {"d", b.d},
          {"boundary_points", b.boundary_points}, {"interior_points", b.interior_points}, {"seed", b.seed}};
}

BasisSpec basis_from(const json& j) {
  BasisSpec b;
  b.n_c = j.value("n_c", b.n_c);
  b.sigma = j.value("sigma", b.sigma);
  b.ell0 = j.value("ell0", b.ell0);
  b.d = j.value("d", b.d);
  b.boundary_points = j.value("boundary_points", b.boundary_points);
  b.interior_points = j.value("interior_points", b.interior_points);
  b.seed = j.value("seed", b.seed);
  return b;
}

} // namespace

RunConfig config_from_json(const json& j) {
  try {
    RunConfig c;
    for (const auto& p : j.at("parallelograms")) c.parallelograms.push_back(spec_from(p));
    for (const auto& p : c.parallelograms) {
      const json& signs = j.at("expected_signs").at(p.name);
      for (Side s : {Side::plus_v21, Side::minus_v21, Side::plus_v41, Side::minus_v41})
        c.expected_signs[p.name][s] = signs.at(side_label(s)).get<int>();
    }
    c.n_sub = j.value("n_sub", c.n_sub);
    c.fem_N = j.value("fem_N", c.fem_N);
    c.precision_bits = j.value("precision_bits", c.precision_bits);
    if (j.contains("basis")) c.validate.basis = basis_from(j.at("basis"));
    if (j.contains("certify")) {
      const json& cj = j.at("certify");
      auto& b = c.validate.certify.boundary;
      auto& in = c.validate.certify.interior;
      b.per_side = cj.value("boundary_per_side", b.per_side);
      b.rel_threshold = cj.value("boundary_rel_threshold", b.rel_threshold);
      b.max_depth = cj.value("boundary_max_depth", b.max_depth);
      in.grid_n = cj.value("grid_n", in.grid_n);
      in.shrink = cj.value("shrink", in.shrink);
      in.rel_precision = cj.value("interior_rel_precision", in.rel_precision);
      in.max_depth = cj.value("interior_max_depth", in.max_depth);
      b.degree = in.degree = cj.value("taylor_degree", b.degree);
    }
    if (j.contains("search")) {
      c.validate.search.rel_tol = j.at("search").value("rel_tol", c.validate.search.rel_tol);
      c.validate.search.smin_ceiling = j.at("search").value("smin_ceiling", c.validate.search.smin_ceiling);
    }
    c.validate.estimate_N = j.value("estimate_N", c.validate.estimate_N);
    return c;
  } catch (const json::exception& e) {
    fail(ErrorCode::io, std::string("malformed configuration: ") + e.what());
  }
}

json config_to_json(const RunConfig& c) {
  json j;
  j["parallelograms"] = json::array();
  for (const auto& p : c.parallelograms) {
    j["parallelograms"].push_back(spec_json(p));
    for (const auto& [side, sign] : c.expected_signs.at(p.name)) j["expected_signs"][p.name][side_label(side)] = sign;
  }
  j["n_sub"] = c.n_sub;
  j["fem_N"] = c.fem_N;
  j["precision_bits"] = c.precision_bits;
  j["estimate_N"] = c.validate.estimate_N;
  j["basis"] = basis_json(c.validate.basis);
  const auto& b = c.validate.certify.boundary;
  const auto& in = c.validate.certify.interior;
  j["certify"] = {{"boundary_per_side", b.per_side},  {"boundary_rel_threshold", b.rel_threshold},
                  {"boundary_max_depth", b.max_depth}, {"grid_n", in.grid_n},
                  {"shrink", in.shrink},              {"interior_rel_precision", in.rel_precision},
                  {"interior_max_depth", in.max_depth}, {"taylor_degree", b.degree}};
  j["search"] = {{"rel_tol", c.validate.search.rel_tol}, {"smin_ceiling", c.validate.search.smin_ceiling}};
  return j;
}

std::string manifest_hash(const std::string& command, const json& config, const json& arguments) {
  return sha256_hex(json{{"command", command}, {"config", config}, {"arguments", arguments}}.dump());
}

json candidate_json(const MPSCandidate& c) {
  json j{{"apex", {c.cx, c.cy}}, {"lambda", c.lambda}, {"smin", c.smin}, {"basis", basis_json(c.spec)}};
  j["coeffs"] = std::vector<double>(c.coeffs.data(), c.coeffs.data() + c.coeffs.size());
  return j;
}

MPSCandidate candidate_from_json(const json& j) {
  try {
    MPSCandidate c;
    c.cx = j.at("apex").at(0).get<double>();
    c.cy = j.at("apex").at(1).get<double>();
    c.lambda = j.at("lambda").get<double>();
    c.smin = j.value("smin", 0.0);
    c.spec = basis_from(j.at("basis"));
    c.basis = build_basis(Triangle<double>::apex(c.cx, c.cy), c.spec);
    const auto coeffs = j.at("coeffs").get<std::vector<double>>();
    if (static_cast<int>(coeffs.size()) != c.basis.columns()) fail(ErrorCode::io, "coefficient count does not match the basis");
    c.coeffs = Eigen::Map<const Eigen::VectorXd>(coeffs.data(), static_cast<Eigen::Index>(coeffs.size()));
    return c;
  } catch (const json::exception& e) {
    fail(ErrorCode::io, std::string("malformed candidate: ") + e.what());
  }
}

template <typename T>
json certification_json(const Certification<T>& c) {
  return {{"triangle", {{"cx", interval_json(c.enclosure.triangle.cx())}, {"cy", interval_json(c.enclosure.triangle.cy())}}},
          {"lambda", c.candidate.lambda},
          {"smin", c.candidate.smin},
          {"boundary_sq", interval_json(c.tension.boundary_sq)},
          {"interior_sq", interval_json(c.tension.interior_sq)},
          {"t_sq_upper", interval_json(c.tension.t_sq_upper)},
          {"boundary_segments", c.boundary.segments},
          {"rho", interval_json(c.rho)},
          {"d", interval_json(c.distance)},
          {"enclosure", interval_json(c.enclosure.value)},
          {"index", c.enclosure.index}};
}

template <typename T>
json verdict_json(const SideTask& task, const SegmentVerdict<T>& v, const std::string& manifest) {
  json eigs = json::array();
  for (const auto& e : v.eig_enclosures) eigs.push_back(interval_json(e.value));
  json j{{"parallelogram", task.spec.name},
         {"side", side_label(task.side)},
         {"target", task.target() == Target::xi21 ? "xi21" : "xi41"},
         {"n_sub", task.n_sub},
         {"index", task.sub_index},
         {"expected_sign", task.expected_sign},
         {"xi_bar", task.target() == Target::xi21 ? task.spec.xi21_bar : task.spec.xi41_bar},
         {"xi_midpoint", interval_json(v.xi_midpoint)},
         {"radius", interval_json(v.radius)},
         {"xi_enclosure", interval_json(v.xi_enclosure)},
         {"eig_enclosures", eigs},
         {"t_sq_upper", v.tensions},
         {"sign", v.sign},
         {"sign_ok", v.sign_ok},
         {"manifest", manifest}};
  return with_hash(std::move(j));
}

VerdictRecord verdict_from_json(const json& j) {
  check_hash(j);
  try {
    VerdictRecord r;
    r.parallelogram = j.at("parallelogram").get<std::string>();
    r.side = parse_side_label(j.at("side").get<std::string>());
    r.n_sub = j.at("n_sub").get<int>();
    r.sub_index = j.at("index").get<int>();
    r.expected_sign = j.at("expected_sign").get<int>();
    r.xi_enclosure = interval_from_json(j.at("xi_enclosure"));
    r.xi_bar = j.at("xi_bar").get<std::string>();
    r.sign_ok = j.at("sign_ok").get<bool>();
    return r;
  } catch (const json::exception& e) {
    fail(ErrorCode::io, std::string("malformed verdict: ") + e.what());
  }
}

json certificate_json(const Certificate& c) {
  return with_hash({{"parallelograms", c.parallelograms}, {"verdicts", c.verdicts}, {"statement", c.statement}});
}

#define TRICERT_IO_INSTANTIATE(T)                                                                   \
  template json interval_json<T>(const Interval<T>&, int);                                          \
  template json certification_json<T>(const Certification<T>&);                                    \
  template json verdict_json<T>(const SideTask&, const SegmentVerdict<T>&, const std::string&);

TRICERT_IO_INSTANTIATE(double)
TRICERT_IO_INSTANTIATE(BigFloat)

} // namespace tricert::io
