#include "eikonal/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "eikonal/error.hpp"
#include "eikonal/fixtures.hpp"
#include "eikonal/parallel.hpp"
#include "eikonal/profile.hpp"
#include "eikonal/solution.hpp"
#include "eikonal/transforms.hpp"
#include "eikonal/verify.hpp"

namespace eik::cli {
namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t at = s.find(sep, start);
    parts.push_back(trim(s.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start)));
    if (at == std::string_view::npos) return parts;
    start = at + 1;
  }
}

double parse_double(std::string_view s, const char* what) {
  double v = 0.0;
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || end != s.data() + s.size() || !std::isfinite(v)) {
    fail(ErrorCode::InvalidArgument, std::string("malformed ") + what + " '" + std::string(s) + "'");
  }
  return v;
}

int parse_int(std::string_view s, const char* what) {
  int v = 0;
  s = trim(s);
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || end != s.data() + s.size()) {
    fail(ErrorCode::InvalidArgument, std::string("malformed ") + what + " '" + std::string(s) + "'");
  }
  return v;
}

/// Which roots a command reports at each point.
struct BranchChoice {
  bool all = false;
  Branch branch = Branch::nearest_zero();

  static BranchChoice parse(const std::string& text) {
    if (text == "all") return {true, Branch::nearest_zero()};
    if (text == "default") return {false, Branch::nearest_zero()};
    const int i = parse_int(text, "branch");
    if (i < 0) fail(ErrorCode::InvalidArgument, "branch index must be non-negative");
    return {false, Branch::index(static_cast<std::size_t>(i))};
  }

  /// (ascending index, root) pairs selected from a scan. Throws NoRoot.
  std::vector<std::pair<std::size_t, double>> select(const std::vector<double>& roots) const {
    if (roots.empty()) fail(ErrorCode::NoRoot, "no root at this point");
    std::vector<std::pair<std::size_t, double>> out;
    if (all) {
      for (std::size_t i = 0; i < roots.size(); ++i) out.emplace_back(i, roots[i]);
      return out;
    }
    const double z = branch.pick(roots);
    const auto i = static_cast<std::size_t>(std::find(roots.begin(), roots.end(), z) - roots.begin());
    out.emplace_back(i, z);
    return out;
  }
};

GeneratorPair generators(const RunConfig& c) {
  if (c.seed) return fixtures::random_polynomial_pair(*c.seed);
  return GeneratorPair::parse(c.g_expr, c.k_expr, c.z_ref, c.quad_tol);
}

/// Write to --output when given, else to `out`.
void emit(const RunConfig& c, std::ostream& out, const std::function<void(std::ostream&)>& body) {
  if (c.output_path.empty()) {
    body(out);
    return;
  }
  std::ofstream file(c.output_path, std::ios::binary);
  if (!file) fail(ErrorCode::InvalidArgument, "cannot open output file '" + c.output_path + "'");
  body(file);
}

std::string reason_of(const Error& e) { return std::string(to_string(e.code())); }

json point_json(const Vec3& p) { return json::array({p[0], p[1], p[2]}); }

// ---------------------------------------------------------------------------
// evaluate
// ---------------------------------------------------------------------------

struct Skip {
  Vec3 x;
  std::optional<std::size_t> branch;
  std::string reason;
};

struct PointOutcome {
  std::vector<BranchedSample> rows;
  std::vector<Skip> skips;
};

PointOutcome evaluate_point(const GeneratorPair& gen, const Vec3& x, const BranchChoice& choice,
                            const RootOptions& opts) {
  PointOutcome out;
  RootScan scan;
  std::vector<std::pair<std::size_t, double>> picked;
  try {
    scan = solve_z(gen, x, opts);
    picked = choice.select(scan.roots);
  } catch (const Error& e) {
    out.skips.push_back({x, std::nullopt, reason_of(e)});
    return out;
  }
  for (const auto& [index, z] : picked) {
    try {
      BranchedSample s = eval_uv_at_angle(gen, x, scan.angles[index]);
      s.branch = index;
      out.rows.push_back(s);
    } catch (const Error& e) {
      out.skips.push_back({x, index, reason_of(e)});
    }
  }
  return out;
}

void write_skip_log(const std::vector<Skip>& skips, std::ostream& log) {
  log << "x0,x1,x2,branch,reason\n";
  for (const Skip& s : skips) {
    log << format_real(s.x[0]) << ',' << format_real(s.x[1]) << ',' << format_real(s.x[2]) << ','
        << (s.branch ? std::to_string(*s.branch) : std::string("*")) << ',' << s.reason << '\n';
  }
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

/// Expand grid points into (point, root) samples for the chosen branches. A
/// point without usable roots stays as one sample that fails with its reason.
struct SampleSet {
  std::vector<Vec3> points;
  std::vector<std::optional<double>> roots;
  std::vector<ErrorCode> errors;
};

SampleSet expand_samples(const std::vector<Vec3>& grid, const BranchChoice& choice,
                         const std::function<RootScan(const Vec3&)>& solve) {
  std::vector<std::vector<std::pair<std::size_t, double>>> picked(grid.size());
  std::vector<std::optional<ErrorCode>> failed(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    try {
      picked[i] = choice.select(solve(grid[i]).roots);
    } catch (const Error& e) {
      failed[i] = e.code();
    }
  });
  SampleSet set;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (failed[i]) {
      set.points.push_back(grid[i]);
      set.roots.push_back(std::nullopt);
      set.errors.push_back(*failed[i]);
      continue;
    }
    for (const auto& [index, z] : picked[i]) {
      set.points.push_back(grid[i]);
      set.roots.push_back(z);
      set.errors.push_back(ErrorCode::NoRoot);
    }
  }
  return set;
}

GradientMode parse_mode(const std::string& mode) {
  if (mode == "analytic") return GradientMode::Analytic;
  if (mode == "fd") return GradientMode::FiniteDifference;
  fail(ErrorCode::InvalidArgument, "mode must be 'analytic' or 'fd'");
}

}  // namespace

// ---------------------------------------------------------------------------
// configuration
// ---------------------------------------------------------------------------

Grid parse_grid(std::string_view text) {
  const auto axes = split(text, ',');
  if (axes.size() != 3) fail(ErrorCode::InvalidArgument, "grid needs three comma-separated axes");
  Grid grid;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto parts = split(axes[i], ':');
    if (parts.size() != 3) fail(ErrorCode::InvalidArgument, "grid axis must read min:max:count");
    grid[i].min = parse_double(parts[0], "grid bound");
    grid[i].max = parse_double(parts[1], "grid bound");
    grid[i].count = parse_int(parts[2], "grid count");
    if (grid[i].count < 1) fail(ErrorCode::InvalidArgument, "grid count must be at least 1");
  }
  return grid;
}

std::vector<Vec3> grid_points(const Grid& grid) {
  auto coord = [](const GridAxis& a, int i) {
    if (a.count == 1) return a.min;
    if (i == a.count - 1) return a.max;
    return a.min + (a.max - a.min) * static_cast<double>(i) / (a.count - 1);
  };
  std::vector<Vec3> pts;
  pts.reserve(static_cast<std::size_t>(grid[0].count) * grid[1].count * grid[2].count);
  for (int i = 0; i < grid[0].count; ++i) {
    for (int j = 0; j < grid[1].count; ++j) {
      for (int k = 0; k < grid[2].count; ++k) {
        pts.push_back({coord(grid[0], i), coord(grid[1], j), coord(grid[2], k)});
      }
    }
  }
  return pts;
}

Vec3 parse_point(std::string_view text) {
  const auto parts = split(text, ',');
  if (parts.size() != 3) fail(ErrorCode::InvalidArgument, "point needs three comma-separated coordinates");
  return {parse_double(parts[0], "coordinate"), parse_double(parts[1], "coordinate"),
          parse_double(parts[2], "coordinate")};
}

void RunConfig::apply_json(const json& j) {
  if (!j.is_object()) fail(ErrorCode::InvalidArgument, "config must be a JSON object");
  try {
    if (j.contains("g")) g_expr = j.at("g").get<std::string>();
    if (j.contains("k")) k_expr = j.at("k").get<std::string>();
    if (j.contains("grid")) grid = parse_grid(j.at("grid").get<std::string>());
    if (j.contains("branch")) {
      const json& b = j.at("branch");
      branch = b.is_number_integer() ? std::to_string(b.get<long>()) : b.get<std::string>();
    }
    if (j.contains("z_ref")) z_ref = j.at("z_ref").get<double>();
    if (j.contains("quad_tol")) quad_tol = j.at("quad_tol").get<double>();
    if (j.contains("z_margin")) roots.z_margin = j.at("z_margin").get<double>();
    if (j.contains("scan_cells")) roots.scan_cells = j.at("scan_cells").get<int>();
    if (j.contains("root_tol")) roots.root_tol = j.at("root_tol").get<double>();
    if (j.contains("max_roots")) roots.max_roots = j.at("max_roots").get<int>();
    if (j.contains("fd_step")) fd_step = j.at("fd_step").get<double>();
    if (j.contains("output")) output_path = j.at("output").get<std::string>();
    if (j.contains("format")) format = j.at("format").get<std::string>();
    if (j.contains("skip_log")) skip_log = j.at("skip_log").get<std::string>();
    if (j.contains("case")) case_name = j.at("case").get<std::string>();
    if (j.contains("a")) a = j.at("a").get<double>();
    if (j.contains("sign")) sign = j.at("sign").get<int>();
    if (j.contains("point")) {
      const json& p = j.at("point");
      point = p.is_string() ? parse_point(p.get<std::string>()) : Vec3{p.at(0).get<double>(), p.at(1).get<double>(),
                                                                       p.at(2).get<double>()};
    }
    if (j.contains("mode")) mode = j.at("mode").get<std::string>();
    if (j.contains("system")) system = j.at("system").get<std::string>();
    if (j.contains("tol")) tol = j.at("tol").get<double>();
    if (j.contains("seed")) seed = j.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidArgument, std::string("bad config value: ") + e.what());
  }
}

void RunConfig::validate() const {
  roots.validate();
  for (const GridAxis& axis : grid) {
    if (axis.count < 1) fail(ErrorCode::InvalidArgument, "grid resolution must be at least 1");
    if (!std::isfinite(axis.min) || !std::isfinite(axis.max)) fail(ErrorCode::InvalidArgument, "grid must be finite");
  }
  if (format != "csv" && format != "json") fail(ErrorCode::InvalidArgument, "format must be csv or json");
  if (!(fd_step > 0.0)) fail(ErrorCode::InvalidArgument, "fd_step must be positive");
  if (system != "eik2" && system != "eik4") fail(ErrorCode::InvalidArgument, "system must be eik2 or eik4");
  if (sign != 1 && sign != -1) fail(ErrorCode::InvalidArgument, "sign must be 1 or -1");
  parse_mode(mode);
  BranchChoice::parse(branch);
}

// ---------------------------------------------------------------------------
// commands
// ---------------------------------------------------------------------------

int cmd_evaluate(const RunConfig& c, std::ostream& out, std::ostream& log) {
  const GeneratorPair gen = generators(c);
  const BranchChoice choice = BranchChoice::parse(c.branch);
  const std::vector<Vec3> grid = grid_points(c.grid);

  std::vector<PointOutcome> results(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { results[i] = evaluate_point(gen, grid[i], choice, c.roots); });

  std::vector<Skip> skips;
  std::size_t n_rows = 0;
  for (const PointOutcome& r : results) {
    n_rows += r.rows.size();
    skips.insert(skips.end(), r.skips.begin(), r.skips.end());
  }

  emit(c, out, [&](std::ostream& os) {
    if (c.format == "csv") {
      os << "x0,x1,x2,branch,z,u,v,e1,e2,e3\n";
      for (const PointOutcome& r : results) {
        for (const BranchedSample& s : r.rows) {
          os << format_real(s.x[0]) << ',' << format_real(s.x[1]) << ',' << format_real(s.x[2]) << ',' << s.branch
             << ',' << format_real(s.z) << ',' << format_real(s.u) << ',' << format_real(s.v) << ','
             << format_real(s.residuals[0]) << ',' << format_real(s.residuals[1]) << ','
             << format_real(s.residuals[2]) << '\n';
        }
      }
      return;
    }
    json rows = json::array();
    for (const PointOutcome& r : results) {
      for (const BranchedSample& s : r.rows) {
        rows.push_back({{"x", point_json(s.x)},
                        {"branch", s.branch},
                        {"z", s.z},
                        {"u", s.u},
                        {"v", s.v},
                        {"residuals", point_json(s.residuals)}});
      }
    }
    json skipped = json::array();
    for (const Skip& s : skips) {
      skipped.push_back({{"x", point_json(s.x)},
                         {"branch", s.branch ? json(*s.branch) : json(nullptr)},
                         {"reason", s.reason}});
    }
    os << json{{"rows", rows}, {"skipped", skipped}}.dump(2) << '\n';
  });

  if (c.skip_log.empty()) {
    write_skip_log(skips, log);
  } else {
    std::ofstream file(c.skip_log, std::ios::binary);
    if (!file) fail(ErrorCode::InvalidArgument, "cannot open skip log '" + c.skip_log + "'");
    write_skip_log(skips, file);
  }
  return n_rows > 0 ? kExitOk : kExitEmpty;
}

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream&) {
  const GradientMode mode = parse_mode(c.mode);
  const double tol = c.tol.value_or(mode == GradientMode::Analytic ? 1e-7 : 1e-4);
  const std::vector<Vec3> grid = grid_points(c.grid);

  ResidualReport report;
  json extra;
  if (c.case_name == "linear-1d") {
    const FieldPair f = fixtures::linear_1d(c.a, c.sign);
    report = residual_eik2(f.first, f.second, grid, mode, c.fd_step);
    extra["case"] = "linear-1d";
    extra["a"] = c.a;
  } else if (c.case_name == "broken") {
    const FieldPair f = fixtures::broken();
    report = residual_eik2(f.first, f.second, grid, mode, c.fd_step);
    extra["case"] = "broken";
  } else if (c.case_name.empty()) {
    const GeneratorPair gen = generators(c);
    const BranchChoice choice = BranchChoice::parse(c.branch);
    const bool hj = c.system == "eik4";
    const SampleSet set = expand_samples(grid, choice, [&](const Vec3& p) {
      return hj ? solve_hj_z(gen, p, c.roots) : solve_z(gen, p, c.roots);
    });
    const FieldFactory fields = [&](std::size_t i, const Vec3&) {
      if (!set.roots[i]) fail(set.errors[i], "no usable root at this point");
      auto [a, b] = hj ? hj_fields(gen, *set.roots[i], c.roots) : solution_fields(gen, *set.roots[i], c.roots);
      return FieldPair{std::move(a), std::move(b)};
    };
    report = hj ? residual_eik4(fields, set.points, mode, c.fd_step)
                : residual_eik2(fields, set.points, mode, c.fd_step);
    extra["g"] = gen.g().source();
    extra["k"] = gen.k().source();
  } else {
    fail(ErrorCode::InvalidArgument, "unknown verify case '" + c.case_name + "'");
  }

  const bool evaluated = report.n_failed < report.n_points;
  const bool pass = evaluated && report.sup() <= tol;
  json j = to_json(report);
  j.update(extra);
  j["tolerance"] = tol;
  j["pass"] = pass;
  emit(c, out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  if (!evaluated) return kExitEmpty;
  return pass ? kExitOk : kExitToleranceBreach;
}

int cmd_roots(const RunConfig& c, std::ostream& out, std::ostream& log) {
  if (!c.point) fail(ErrorCode::InvalidArgument, "roots needs --point x0,x1,x2");
  const GeneratorPair gen = generators(c);
  const Vec3 x = *c.point;
  RootScan scan;
  try {
    scan = solve_z(gen, x, c.roots);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegenerateManifold) throw;
    log << e.what() << '\n';
    emit(c, out, [&](std::ostream& os) {
      os << json{{"point", point_json(x)}, {"error", reason_of(e)}}.dump(2) << '\n';
    });
    return kExitEmpty;
  }
  json roots = json::array();
  for (std::size_t i = 0; i < scan.roots.size(); ++i) {
    const PhaseTerms t = phase_terms_angle(gen, x, scan.angles[i]);
    roots.push_back({{"index", i},
                     {"z", t.z},
                     {"F", t.f},
                     {"dF_dz", t.f_z},
                     {"g_prime", t.jets.g.d1},
                     {"caustic", std::abs(t.f_z) < kCausticThreshold}});
  }
  json skipped = json::array();
  for (const SkippedCell& s : scan.skipped) {
    skipped.push_back({{"lo", s.lo}, {"hi", s.hi}, {"reason", std::string(to_string(s.reason))}});
  }
  emit(c, out, [&](std::ostream& os) {
    os << json{{"point", point_json(x)}, {"roots", roots}, {"skipped_cells", skipped}, {"truncated", scan.truncated}}
              .dump(2)
       << '\n';
  });
  return kExitOk;
}

int cmd_transform(const RunConfig& c, std::ostream& out, std::ostream& log) {
  constexpr double kChainTol = 1e-7;
  constexpr double kInvolutionTol = 1e-9;
  constexpr double kRoundTripTol = 1e-8;
  constexpr double kDerivativeTol = 1e-5;
  constexpr double kReductionTol = 1e-11;

  json report;
  json errors = json::array();
  bool pass = true;

  if (c.case_name == "flat") {
    try {
      const LegendreValue h = legendre_forward(fixtures::linear_w(), ParamPoint{0.0, 3.0, 0.0});
      report["legendre_forward"] = h.value;
    } catch (const Error& e) {
      errors.push_back({{"check", "legendre_forward"}, {"reason", reason_of(e)}});
      pass = false;
    }
    report["case"] = "flat";
    report["errors"] = errors;
    report["pass"] = pass;
    emit(c, out, [&](std::ostream& os) { os << report.dump(2) << '\n'; });
    return pass ? kExitOk : kExitToleranceBreach;
  }
  if (!c.case_name.empty()) fail(ErrorCode::InvalidArgument, "unknown transform case '" + c.case_name + "'");

  const GeneratorPair gen = generators(c);
  report["g"] = gen.g().source();
  report["k"] = gen.k().source();

  // Chain H -> w -> u on the grid.
  const BranchChoice choice = BranchChoice::parse(c.branch);
  const std::vector<Vec3> grid = grid_points(c.grid);
  const SampleSet set = expand_samples(grid, choice, [&](const Vec3& p) { return solve_z(gen, p, c.roots); });
  std::vector<std::optional<ChainDefects>> chain(set.points.size());
  parallel_for(set.points.size(), [&](std::size_t i) {
    if (!set.roots[i]) return;
    try {
      const auto roots = solve_z(gen, set.points[i], c.roots).roots;
      const auto at = std::find(roots.begin(), roots.end(), *set.roots[i]);
      chain[i] = pipeline_closure(gen, set.points[i], Branch::index(static_cast<std::size_t>(at - roots.begin())),
                                  c.roots);
    } catch (const Error&) {
    }
  });
  ChainDefects worst;
  std::size_t n_chain = 0;
  for (const auto& d : chain) {
    if (!d) continue;
    ++n_chain;
    worst.x0 = std::max(worst.x0, d->x0);
    worst.u = std::max(worst.u, d->u);
    worst.v = std::max(worst.v, d->v);
  }
  report["chain"] = {{"samples", n_chain},
                     {"failed", set.points.size() - n_chain},
                     {"max_x0", worst.x0},
                     {"max_u", worst.u},
                     {"max_v", worst.v},
                     {"tolerance", kChainTol}};
  if (n_chain == 0 || worst.max() > kChainTol) pass = false;

  // Reduction-condition identities on a uniform z1 sweep.
  double red_a = 0.0, red_b = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double z1 = -0.99 + 1.98 * i / 999.0;
    try {
      const auto [a, b] = check_reduction_conditions(gen, z1);
      red_a = std::max(red_a, a);
      red_b = std::max(red_b, b);
    } catch (const Error& e) {
      errors.push_back({{"check", "reduction_conditions"}, {"z1", z1}, {"reason", reason_of(e)}});
      pass = false;
      break;
    }
  }
  report["reduction_conditions"] = {{"max_z2_squared", red_a}, {"max_z0_power0", red_b}, {"tolerance", kReductionTol}};
  if (std::max(red_a, red_b) > kReductionTol) pass = false;

  // Legendre involution and hodograph round trip on fixed fixtures.
  const std::vector<Vec3> probes{{0.0, 0.3, 0.0}, {0.5, -0.4, 1.0}, {-1.0, 0.7, 0.5}, {1.0, 1.2, -1.0},
                                 {0.2, -1.5, 0.3}};
  double involution = 0.0, round_trip = 0.0, derivatives = 0.0;
  try {
    const ScalarField w = fixtures::convex_w();
    Box z_domain = w.domain_hint;
    z_domain.lo[1] = -8.0;
    z_domain.hi[1] = 8.0;
    const ScalarField h = legendre_field(w, z_domain);
    const ScalarField u = fixtures::monotone_u();
    Box y_domain = u.domain_hint;
    y_domain.lo[0] = -20.0;
    y_domain.hi[0] = 20.0;
    const ScalarField wy = hodograph_field(u, y_domain);
    for (const Vec3& p : probes) {
      involution = std::max(involution, std::abs(legendre_inverse(h, p).value - w(p)));
      round_trip = std::max(round_trip, std::abs(hodograph_inverse(wy, p) - u(p)));
      derivatives = std::max(derivatives, hodograph_derivative_check(u, wy, p, 1e-4).max());
    }
  } catch (const Error& e) {
    errors.push_back({{"check", "fixtures"}, {"reason", reason_of(e)}});
    pass = false;
  }
  report["legendre_involution"] = {{"max", involution}, {"tolerance", kInvolutionTol}};
  report["hodograph_roundtrip"] = {{"max", round_trip}, {"tolerance", kRoundTripTol}};
  report["hodograph_derivatives"] = {{"max", derivatives}, {"tolerance", kDerivativeTol}};
  if (involution > kInvolutionTol || round_trip > kRoundTripTol || derivatives > kDerivativeTol) pass = false;

  report["errors"] = errors;
  report["pass"] = pass;
  emit(c, out, [&](std::ostream& os) { os << report.dump(2) << '\n'; });
  if (n_chain == 0) {
    log << "no grid point produced a chain sample\n";
    return kExitEmpty;
  }
  return pass ? kExitOk : kExitToleranceBreach;
}

int cmd_demo(const RunConfig& c, std::ostream& out, std::ostream&) {
  const GeneratorPair gen = GeneratorPair::parse("z", "0");
  const Vec3 x{-2.0, 7.0, 1.0};
  const RootScan scan = solve_z(gen, x, c.roots);
  json branches = json::array();
  for (std::size_t i = 0; i < scan.roots.size(); ++i) {
    const BranchedSample s = eval_uv(gen, x, Branch::index(i), c.roots);
    const ChainDefects d = pipeline_closure(gen, x, Branch::index(i), c.roots);
    branches.push_back({{"branch", i},
                        {"z", s.z},
                        {"u", s.u},
                        {"v", s.v},
                        {"residuals", point_json(s.residuals)},
                        {"chain_defect", d.max()}});
  }
  emit(c, out, [&](std::ostream& os) {
    os << json{{"g", "z"}, {"k", "0"}, {"point", point_json(x)}, {"branches", branches}}.dump(2) << '\n';
  });
  return kExitOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& log) {
  CLI::App app{"Evaluate and verify the parametric solution of the coupled eikonal system"};
  app.require_subcommand(1);

  RunConfig flags;
  std::string grid_text, point_text, config_path;
  std::uint64_t seed = 0;
  std::vector<CLI::Option*> given;
  std::vector<std::function<void(RunConfig&)>> apply;

  auto add_common = [&](CLI::App* sub) {
    auto bind = [&](const char* name, auto& target, const char* help, auto setter) {
      CLI::Option* o = sub->add_option(name, target, help);
      given.push_back(o);
      apply.push_back([o, setter](RunConfig& rc) {
        if (o->count() > 0) setter(rc);
      });
    };
    bind("--g", flags.g_expr, "generator g(z)", [&](RunConfig& rc) { rc.g_expr = flags.g_expr; });
    bind("--k", flags.k_expr, "generator k(z)", [&](RunConfig& rc) { rc.k_expr = flags.k_expr; });
    bind("--grid", grid_text, "grid 'min:max:count, min:max:count, min:max:count'",
         [&](RunConfig& rc) { rc.grid = parse_grid(grid_text); });
    bind("--branch", flags.branch, "all | default | <index>", [&](RunConfig& rc) { rc.branch = flags.branch; });
    bind("--z-ref", flags.z_ref, "anchor where r vanishes", [&](RunConfig& rc) { rc.z_ref = flags.z_ref; });
    bind("--quad-tol", flags.quad_tol, "quadrature tolerance for r", [&](RunConfig& rc) { rc.quad_tol = flags.quad_tol; });
    bind("--z-margin", flags.roots.z_margin, "exclude |z| > 1 - margin",
         [&](RunConfig& rc) { rc.roots.z_margin = flags.roots.z_margin; });
    bind("--scan-cells", flags.roots.scan_cells, "root scan resolution",
         [&](RunConfig& rc) { rc.roots.scan_cells = flags.roots.scan_cells; });
    bind("--root-tol", flags.roots.root_tol, "phase residual tolerance",
         [&](RunConfig& rc) { rc.roots.root_tol = flags.roots.root_tol; });
    bind("--max-roots", flags.roots.max_roots, "roots kept per point",
         [&](RunConfig& rc) { rc.roots.max_roots = flags.roots.max_roots; });
    bind("--fd-step", flags.fd_step, "finite-difference step", [&](RunConfig& rc) { rc.fd_step = flags.fd_step; });
    bind("--output,-o", flags.output_path, "output file", [&](RunConfig& rc) { rc.output_path = flags.output_path; });
    bind("--format", flags.format, "csv | json", [&](RunConfig& rc) { rc.format = flags.format; });
    bind("--skip-log", flags.skip_log, "skip log file", [&](RunConfig& rc) { rc.skip_log = flags.skip_log; });
    bind("--case", flags.case_name, "built-in fixture", [&](RunConfig& rc) { rc.case_name = flags.case_name; });
    bind("--a", flags.a, "slope of the linear-1d case", [&](RunConfig& rc) { rc.a = flags.a; });
    bind("--sign", flags.sign, "sign choice (1 or -1) of the linear-1d case", [&](RunConfig& rc) { rc.sign = flags.sign; });
    bind("--point", point_text, "point 'x0,x1,x2'", [&](RunConfig& rc) { rc.point = parse_point(point_text); });
    bind("--mode", flags.mode, "analytic | fd", [&](RunConfig& rc) { rc.mode = flags.mode; });
    bind("--system", flags.system, "eik2 | eik4", [&](RunConfig& rc) { rc.system = flags.system; });
    bind("--tol", flags.tol, "residual tolerance", [&](RunConfig& rc) { rc.tol = flags.tol; });
    bind("--seed", seed, "random polynomial generators", [&](RunConfig& rc) { rc.seed = seed; });
    sub->add_option("--config", config_path, "JSON config file (flags win)");
  };

  struct Command {
    const char* name;
    const char* help;
    int (*fn)(const RunConfig&, std::ostream&, std::ostream&);
  };
  const Command commands[] = {
      {"evaluate", "sample u, v over a grid", &cmd_evaluate},
      {"verify", "residual report for the coupled system", &cmd_verify},
      {"roots", "list phase-equation roots at a point", &cmd_roots},
      {"transform", "check the hodograph/contact transform chain", &cmd_transform},
      {"demo", "evaluate the worked example", &cmd_demo},
  };
  std::vector<std::pair<CLI::App*, const Command*>> subs;
  for (const Command& cmd : commands) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    add_common(sub);
    subs.emplace_back(sub, &cmd);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, log);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    RunConfig config;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) fail(ErrorCode::InvalidArgument, "cannot read config '" + config_path + "'");
      json j;
      try {
        in >> j;
      } catch (const json::exception& e) {
        fail(ErrorCode::InvalidArgument, std::string("config is not valid JSON: ") + e.what());
      }
      config.apply_json(j);
    }
    for (auto& f : apply) f(config);
    config.validate();
    if (!config.seed) {
      // Surface expression errors before any work is done.
      AnalyticFunction::parse(config.g_expr);
      AnalyticFunction::parse(config.k_expr);
    }
    for (const auto& [sub, cmd] : subs) {
      if (sub->parsed()) return cmd->fn(config, out, log);
    }
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    switch (e.code()) {
      case ErrorCode::SyntaxError:
      case ErrorCode::UnknownSymbol:
      case ErrorCode::InvalidArgument:
        return kExitUsage;
      case ErrorCode::DegenerateManifold:
        return kExitEmpty;
      default:
        return kExitToleranceBreach;
    }
  }
  return kExitUsage;
}

}  // namespace eik::cli
