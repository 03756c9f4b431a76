// Command-line front end: valxi, interm, position, prove, plot-data, config.
//
// Exit codes: 0 success, 1 a certification step failed or a sign was not
// the expected one, 2 usage or input errors.

#include "tricert/io.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>

using namespace tricert;
namespace fs = std::filesystem;
using io::json;

namespace {

struct Common {
  std::string config_path;
  int precision_bits = 256;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::string out;
};

struct SideArg {
  std::string parallelogram;
  Side side;
};

SideArg parse_side_arg(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) fail(ErrorCode::usage, "side must look like A:+v21");
  return {text.substr(0, colon), parse_side_label(text.substr(colon + 1))};
}

io::RunConfig load_config(const Common& c) {
  io::RunConfig cfg = c.config_path.empty() ? io::default_config() : io::config_from_json(io::read_file(c.config_path));
  cfg.precision_bits = c.precision_bits;
  if (c.seed) cfg.validate.basis.seed = *c.seed;
  cfg.jobs = c.jobs;
  cfg.validate.certify.boundary.jobs = cfg.validate.certify.interior.jobs = c.jobs;
  return cfg;
}

// Output goes to `out` when it names a file, into it when it is a directory,
// to stdout when empty.
void emit(const std::string& out, const std::string& default_name, const std::string& text) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  fs::path p(out);
  if (fs::is_directory(p) || out.back() == '/') {
    fs::create_directories(p);
    p /= default_name;
  }
  std::ofstream f(p);
  if (!f) fail(ErrorCode::io, "cannot write " + p.string());
  f << text;
  std::cerr << "wrote " << p.string() << '\n';
}

// Timing lives in a side file so that the numeric payloads stay
// byte-identical between runs.
void write_manifest(const Common& c, const std::string& command, const std::string& hash, const json& args, double secs) {
  const json m{{"command", command}, {"config", c.config_path}, {"seed", c.seed ? json(*c.seed) : json(nullptr)},
               {"precision_bits", c.precision_bits}, {"out", c.out}, {"arguments", args}, {"manifest", hash},
               {"elapsed_seconds", secs}};
  if (!c.out.empty() && fs::is_directory(c.out)) io::write_file((fs::path(c.out) / ("manifest-" + hash.substr(0, 12) + ".json")).string(), m);
  std::cerr << command << ": manifest " << hash.substr(0, 12) << ", " << secs << " s\n";
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <typename T>
int run_valxi(const Common& c, const std::string& side_text, int n, int index, const std::string& xi_bar) {
  const auto t0 = std::chrono::steady_clock::now();
  io::RunConfig cfg = load_config(c);
  const SideArg sa = parse_side_arg(side_text);
  SideTask task{cfg.parallelogram(sa.parallelogram), sa.side, n > 0 ? n : cfg.n_sub, index,
                cfg.expected_sign(sa.parallelogram, sa.side)};
  if (!xi_bar.empty()) (task.target() == Target::xi21 ? task.spec.xi21_bar : task.spec.xi41_bar) = xi_bar;
  task.validate();
  const json args{{"side", side_text}, {"n", task.n_sub}, {"index", index}, {"xi_bar", xi_bar}};
  const std::string hash = io::manifest_hash("valxi", io::config_to_json(cfg), args);
  SegmentVerdict<T> v = segment_quotient<T>(task, cfg.validate);
  try {
    judge_segment(v, task.spec.xi_bar<T>(task.target()), task.expected_sign);
  } catch (const CertError& e) {
    std::cerr << "valxi: " << e.what() << '\n';
    return 1;
  }
  const json verdict = io::verdict_json(task, v, hash);
  emit(c.out, "verdict_" + sa.parallelogram + side_label(sa.side) + "_" + std::to_string(index) + ".json", verdict.dump(2) + "\n");
  write_manifest(c, "valxi", hash, args, seconds_since(t0));
  std::cerr << "xi enclosure " << v.xi_enclosure.to_string(12) << ", sign " << v.sign
            << (v.sign_ok ? " (expected)" : " (NOT the expected sign)") << '\n';
  return v.sign_ok ? 0 : 1;
}

template <typename T>
int run_interm(const Common& c, const std::string& side_text) {
  const auto t0 = std::chrono::steady_clock::now();
  io::RunConfig cfg = load_config(c);
  const SideArg sa = parse_side_arg(side_text);
  const auto encl = intermediate_eigs<T>(cfg.parallelogram(sa.parallelogram), sa.side, cfg.validate);
  const json args{{"side", side_text}};
  const std::string hash = io::manifest_hash("interm", io::config_to_json(cfg), args);
  json j{{"parallelogram", sa.parallelogram}, {"side", side_label(sa.side)}, {"manifest", hash}, {"enclosures", json::array()}};
  for (const auto& e : encl) j["enclosures"].push_back({{"index", e.index}, {"value", io::interval_json(e.value)}});
  emit(c.out, "interm_" + sa.parallelogram + side_label(sa.side) + ".json", io::with_hash(j).dump(2) + "\n");
  write_manifest(c, "interm", hash, args, seconds_since(t0));
  return 0;
}

// Positions on a parallelogram side (from verdict and interm files) or on a
// single triangle (certifying lambda_1..lambda_k directly).
template <typename T>
int run_position(const Common& c, const std::string& side_text, const std::vector<double>& apex, int k,
                 const std::string& verdict_dir, const std::string& interm_file) {
  using I = Interval<T>;
  if (k != 2 && k != 4) fail(ErrorCode::usage, "k must be 2 or 4");
  const auto t0 = std::chrono::steady_clock::now();
  io::RunConfig cfg = load_config(c);
  std::vector<std::vector<I>> groups;
  I lower(0.0);
  json args{{"k", k}};
  if (!apex.empty()) {
    if (apex.size() != 2) fail(ErrorCode::usage, "--apex takes cx,cy");
    args["apex"] = apex;
    const Triangle<T> tri{I(apex[0]), I(apex[1])};
    const SegmentPerturbation<T> pert{tri, vec2(I(0.0), I(0.0)), I(0.0)};
    lower = propagated_lower_bound(pert, k, cfg.fem_N);
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i + 1;
    std::vector<I> g;
    for (const auto& cert : certify_indices(tri, idx, cfg.validate)) g.push_back(cert.enclosure.value);
    groups.push_back(g);
  } else {
    const SideArg sa = parse_side_arg(side_text);
    args["side"] = side_text;
    if ((k == 4) != (side_target(sa.side) == Target::xi41)) fail(ErrorCode::usage, "k = 2 goes with xi21 sides, k = 4 with xi41 sides");
    lower = propagated_lower_bound(whole_side<T>(cfg.parallelogram(sa.parallelogram), sa.side), k, cfg.fem_N);
    std::vector<I> middle;
    if (k == 4) {
      if (interm_file.empty()) fail(ErrorCode::usage, "k = 4 needs --interm");
      const json ij = io::read_file(interm_file);
      io::check_hash(ij);
      for (const auto& e : ij.at("enclosures")) middle.push_back(I::from(io::interval_from_json(e.at("value"))));
    }
    if (verdict_dir.empty()) fail(ErrorCode::usage, "side positions need --verdicts");
    for (const auto& entry : fs::directory_iterator(verdict_dir)) {
      if (entry.path().extension() != ".json" || entry.path().filename().string().rfind("verdict_", 0) != 0) continue;
      const json vj = io::read_file(entry.path().string());
      io::check_hash(vj);
      if (vj.at("parallelogram") != sa.parallelogram || vj.at("side") != side_label(sa.side)) continue;
      std::vector<I> g = middle;
      for (const auto& e : vj.at("eig_enclosures")) g.push_back(I::from(io::interval_from_json(e)));
      groups.push_back(g);
    }
    if (groups.empty()) fail(ErrorCode::incomplete_coverage, "no verdicts for " + side_text + " in " + verdict_dir);
  }
  const std::string hash = io::manifest_hash("position", io::config_to_json(cfg), args);
  json report{{"k", k}, {"lower_bound", io::interval_json(lower)}, {"groups", groups.size()}, {"manifest", hash}};
  try {
    report["certified"] = certify_positions(groups, lower, k);
  } catch (const CertError& e) {
    report["certified"] = false;
    report["error"] = e.what();
    emit(c.out, "position.json", io::with_hash(report).dump(2) + "\n");
    std::cerr << "position: " << e.what() << '\n';
    return 1;
  }
  emit(c.out, "position.json", io::with_hash(report).dump(2) + "\n");
  write_manifest(c, "position", hash, args, seconds_since(t0));
  return 0;
}

int run_prove(const Common& c, const std::string& fixtures, const std::vector<std::string>& which) {
  io::RunConfig cfg = load_config(c);
  std::vector<VerdictRecord> records;
  for (const auto& entry : fs::directory_iterator(fixtures))
    if (entry.path().extension() == ".json" && entry.path().filename().string().rfind("verdict_", 0) == 0)
      records.push_back(io::verdict_from_json(io::read_file(entry.path().string())));
  std::vector<Coverage> coverage;
  for (const auto& p : cfg.parallelograms) {
    if (!which.empty() && std::find(which.begin(), which.end(), p.name) == which.end()) continue;
    Coverage cov{p.name, {}};
    for (Side s : {Side::plus_v21, Side::minus_v21, Side::plus_v41, Side::minus_v41}) cov.n_sub[s] = cfg.n_sub;
    coverage.push_back(cov);
  }
  const Certificate cert = miranda_conclude(records, coverage);
  emit(c.out, "certificate.json", io::certificate_json(cert).dump(2) + "\n");
  std::cerr << cert.statement << '\n';
  return 0;
}

int run_plot(const Common& c, const std::string& what, const std::vector<double>& apex, int lattice, int index) {
  io::RunConfig cfg = load_config(c);
  std::ostringstream csv;
  csv.precision(17);
  if (what == "levelsets") {
    // Non-rigorous FEM quotients on a lattice around each parallelogram.
    csv << "parallelogram,cx,cy,xi21,xi41\n";
    for (const auto& p : cfg.parallelograms)
      for (int i = 0; i <= lattice; ++i)
        for (int j = 0; j <= lattice; ++j) {
          const double x = -2.0 + 4.0 * i / lattice, y = -2.0 + 4.0 * j / lattice;
          const Vec2<double> a = p.point<double>(IntervalD(x), IntervalD(y));
          const auto ev = fem_eigenvalue_estimates(Triangle<double>::apex(a.x().mid_d(), a.y().mid_d()), cfg.validate.estimate_N, 4);
          csv << p.name << ',' << a.x().mid_d() << ',' << a.y().mid_d() << ',' << ev[1] / ev[0] << ',' << ev[3] / ev[0] << '\n';
        }
  } else if (what == "grid") {
    const auto tri = apex.size() == 2 ? Triangle<double>::apex(apex[0], apex[1]) : Triangle<double>::apex(0.635, 0.275);
    csv << "cell,x0,y0,x1,y1,x2,y2\n";
    const auto cells = interior_grid(tri, cfg.validate.certify.interior.grid_n, cfg.validate.certify.interior.shrink);
    for (std::size_t k = 0; k < cells.size(); ++k) {
      csv << k;
      for (const auto& v : cells[k]) csv << ',' << v.x().mid_d() << ',' << v.y().mid_d();
      csv << '\n';
    }
  } else if (what == "eigfun") {
    const auto tri = apex.size() == 2 ? Triangle<double>::apex(apex[0], apex[1]) : Triangle<double>::apex(0.635, 0.275);
    const auto est = fem_eigenvalue_estimates(tri, cfg.validate.estimate_N, index + 1);
    auto [lo, hi] = bracket_around(est[index - 1]);
    if (index >= 2) lo = std::max(lo, 0.5 * (est[index - 2] + est[index - 1]));
    hi = std::min(hi, 0.5 * (est[index - 1] + est[index]));
    const MPSCandidate cand = golden_search(tri, {lo, hi}, cfg.validate.basis, cfg.validate.search);
    csv << "# lambda " << cand.lambda << "\nx,y,u\n";
    const double cx = tri.cx().mid_d(), cy = tri.cy().mid_d();
    for (int i = 0; i <= lattice; ++i)
      for (int j = 0; i + j <= lattice; ++j) {
        const double a = double(i) / lattice, b = double(j) / lattice;
        const Eigen::Vector2d pt(a + b * cx, b * cy);
        csv << pt.x() << ',' << pt.y() << ',' << eval_u(cand, pt) << '\n';
      }
  } else {
    fail(ErrorCode::usage, "plot-data --what must be levelsets, grid or eigfun");
  }
  emit(c.out, "plot_" + what + ".csv", csv.str());
  return 0;
}

template <template <typename> class F, typename... Args>
int dispatch(int bits, Args&&... args) {
  if (bits < 2) fail(ErrorCode::usage, "precision must be at least 2 bits");
  if (bits <= 53) return F<double>::run(std::forward<Args>(args)...);
  PrecisionGuard guard(bits);
  return F<BigFloat>::run(std::forward<Args>(args)...);
}

template <typename T>
struct Valxi {
  template <typename... A>
  static int run(A&&... a) { return run_valxi<T>(std::forward<A>(a)...); }
};
template <typename T>
struct Interm {
  template <typename... A>
  static int run(A&&... a) { return run_interm<T>(std::forward<A>(a)...); }
};
template <typename T>
struct Position {
  template <typename... A>
  static int run(A&&... a) { return run_position<T>(std::forward<A>(a)...); }
};

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified Dirichlet eigenvalues of triangles and the isospectral-quotient proof driver"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_path, "JSON configuration (defaults to the built-in one)")->envname("TRICERT_CONFIG");
    sub->add_option("--precision-bits", common.precision_bits, "working precision; <= 53 selects double endpoints")
        ->envname("TRICERT_PRECISION_BITS");
    sub->add_option("--seed", common.seed, "seed of the interior collocation points")->envname("TRICERT_SEED");
    sub->add_option("--jobs", common.jobs, "worker threads for segment work")->envname("TRICERT_JOBS");
    sub->add_option("--out", common.out, "output file or directory (stdout if omitted)")->envname("TRICERT_OUT");
  };

  std::string side;
  int n = 0, index = 0, k = 0, lattice = 20, eig_index = 1;
  std::string xi_bar, fixtures, verdicts, interm, what;
  std::vector<double> apex;
  std::vector<std::string> which;

  auto* valxi = app.add_subcommand("valxi", "validate the quotient sign on one sub-segment of a side");
  add_common(valxi);
  valxi->add_option("--side", side, "side, e.g. A:+v21")->required()->envname("TRICERT_SIDE");
  valxi->add_option("--n", n, "number of sub-segments (default from the configuration)")->envname("TRICERT_N");
  valxi->add_option("--index", index, "sub-segment index, 1..n")->required()->envname("TRICERT_INDEX");
  valxi->add_option("--xi-bar", xi_bar, "override the threshold (decimal)");

  auto* im = app.add_subcommand("interm", "enclose lambda_2 and lambda_3 over a whole xi41 side");
  add_common(im);
  im->add_option("--side", side, "side, e.g. A:+v41")->required()->envname("TRICERT_SIDE");

  auto* pos = app.add_subcommand("position", "first pass and index certification");
  add_common(pos);
  pos->add_option("--side", side, "side, e.g. A:+v21")->envname("TRICERT_SIDE");
  pos->add_option("--apex", apex, "single triangle apex cx,cy instead of a side")->delimiter(',');
  pos->add_option("--k", k, "number of eigenvalues to place: 2 or 4")->required()->envname("TRICERT_K");
  pos->add_option("--verdicts", verdicts, "directory of verdict files for the side");
  pos->add_option("--interm", interm, "interm output for the side (k = 4)");

  auto* prove = app.add_subcommand("prove", "Poincare-Miranda conclusion over a directory of verdicts");
  add_common(prove);
  prove->add_option("--fixtures", fixtures, "directory of verdict files")->required();
  prove->add_option("--parallelogram", which, "restrict to these parallelograms");

  auto* plot = app.add_subcommand("plot-data", "CSV data for the figures (not rigorous)");
  add_common(plot);
  plot->add_option("--what", what, "levelsets, grid or eigfun")->required();
  plot->add_option("--apex", apex, "triangle apex cx,cy")->delimiter(',');
  plot->add_option("--lattice", lattice, "lattice resolution");
  plot->add_option("--eig", eig_index, "eigenvalue index for eigfun");

  auto* cfg = app.add_subcommand("config", "print the built-in configuration");
  add_common(cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*valxi) return dispatch<Valxi>(common.precision_bits, common, side, n, index, xi_bar);
    if (*im) return dispatch<Interm>(common.precision_bits, common, side);
    if (*pos) {
      if (apex.empty() == side.empty()) fail(ErrorCode::usage, "position needs exactly one of --side and --apex");
      return dispatch<Position>(common.precision_bits, common, side, apex, k, verdicts, interm);
    }
    if (*prove) {
      PrecisionGuard guard(std::max(common.precision_bits, 64));
      return run_prove(common, fixtures, which);
    }
    if (*plot) return run_plot(common, what, apex, lattice, eig_index);
    if (*cfg) {
      emit(common.out, "config.json", io::config_to_json(load_config(common)).dump(2) + "\n");
      return 0;
    }
  } catch (const CertError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::usage || e.code() == ErrorCode::io ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
