#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "eikonal/field.hpp"
#include "eikonal/implicit.hpp"

namespace eik::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitToleranceBreach = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitEmpty = 3;

/// One axis of "min:max:count"; count == 1 samples min only.
struct GridAxis {
  double min = -1.0;
  double max = 1.0;
  int count = 5;
};
using Grid = std::array<GridAxis, 3>;

/// Parses "min:max:count, min:max:count, min:max:count". Throws InvalidArgument.
Grid parse_grid(std::string_view text);

/// Points in row-major order (axis 0 slowest).
std::vector<Vec3> grid_points(const Grid& grid);

/// Parses "x0,x1,x2". Throws InvalidArgument.
Vec3 parse_point(std::string_view text);

struct RunConfig {
  std::string g_expr = "z";
  std::string k_expr = "0";
  Grid grid{};
  std::string branch = "all";  // "all", "default" (smallest |z|) or an index
  double z_ref = 0.0;
  double quad_tol = 1e-12;
  RootOptions roots{};
  double fd_step = 1e-5;
  std::string output_path;  // empty: standard output
  std::string format = "csv";
  std::string skip_log;  // empty: diagnostic stream
  std::string case_name;  // verify: linear-1d | broken; transform: flat
  double a = 2.0;
  int sign = 1;
  std::optional<Vec3> point;
  std::string mode = "analytic";  // analytic | fd
  std::string system = "eik2";    // eik2 | eik4
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;

  /// Overlay keys present in a JSON config object (same names as the flags,
  /// with '-' spelled '_'). Throws InvalidArgument on malformed values.
  void apply_json(const nlohmann::json& j);
  void validate() const;
};

int cmd_evaluate(const RunConfig& config, std::ostream& out, std::ostream& log);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& log);
int cmd_roots(const RunConfig& config, std::ostream& out, std::ostream& log);
int cmd_transform(const RunConfig& config, std::ostream& out, std::ostream& log);
int cmd_demo(const RunConfig& config, std::ostream& out, std::ostream& log);

/// Full command line: `eikonal <evaluate|verify|roots|transform|demo> [flags]`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& log);

}  // namespace eik::cli
