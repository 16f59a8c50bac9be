#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hyperlab {

/// Everything a batch run needs. Filled from flags or from a config file with
/// the same keys; `--save-config` writes it back.
struct RunConfig {
  std::vector<std::string> command;  // e.g. {"stats", "gaps"}
  std::string group = "psl2z";
  std::string group_file;
  std::string w = "0,2";  // x coordinates then the height
  std::string z;          // empty: base point
  double t = 8;
  std::optional<double> s;  // ball: inner radius (default 0); horoball: window (default inf)
  std::string mode = "ball";
  std::string observer = "interior";
  std::string grid = "0:3:31";  // a:b:n or a comma list
  std::optional<double> delta, theta;
  double l_cutoff = 10, y_max = 8, margin = 2, t_truncate = 8;
  int r_max = 5;
  std::optional<double> s_param;
  std::string nu_source = "lattice";
  int nodes = 4000;
  double shell_inner = 6, shell_outer = 7;
  double calibrate_xi = 0, calibrate_value = 0;
  std::optional<double> c0;
  double t_min = 4, t_max = 10, step = 0.5;
  std::size_t samples = 20000;
  std::vector<double> box_lo{0.0}, box_hi{0.5};
  double sigma = 1;
  std::vector<double> beta{1.0};
  double bound = 1e5;
  std::string format = "csv";
  std::vector<std::string> files;  // compare inputs
  std::vector<double> range;       // compare window, empty for all
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out_dir;
};

/// Parses argv (without the program name) and runs. Artifacts go to
/// `out_dir` when set, else to `out`; errors are one JSON line on `err`.
/// Returns 0 ok, 1 domain error, 2 usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Grid "a:b:n" (n points from a to b inclusive) or "x1,x2,...".
std::vector<double> parse_grid(const std::string& text);

/// Abscissa/value columns of a curve CSV, comment lines skipped.
struct CurveTable {
  std::vector<double> abscissae, values;
};
CurveTable read_curve_csv(std::istream& is);

/// Sup-norm of a - b over a's abscissae inside [lo, hi], with b interpolated
/// linearly; abscissae outside b's range are skipped.
struct Comparison {
  std::vector<double> abscissae, a, b, delta;
  double sup_norm = 0;
};
Comparison compare_curves(const CurveTable& a, const CurveTable& b, double lo = -INFINITY, double hi = INFINITY);

const char* git_revision();

}  // namespace hyperlab
