#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pqtll/sweep.hpp"
#include "pqtll/topology.hpp"

namespace pqtll {

/// Parameter presets of the four reference figures.
namespace presets {

ModelParams fig1_base();  // (J_x, J_d, V) = (0.5 pi, 4 pi, 0.1 pi); J_y swept
ModelParams fig2_base();  // (J_x, J_y, J_d^r, V) = (0.5 pi, 0.6 pi, 4 pi, 0.1 pi); J_y^i, J_d^i swept
ModelParams fig3a_base(); // (0.5 pi, 1.5 pi + i J_y^i, 4 pi, 0.1 pi)
ModelParams fig3b_base(); // (0.5 pi, 0.6 pi + 6i, 4 pi + i J_d^i, 0.1 pi)

SweepConfig fig1_grid(int count);
SweepConfig fig2_grid(int count);

struct ExpectedClosing {
  double value;
  char label;  // '0', 'p' (pi) or '?' (label not checked)
};

std::vector<ExpectedClosing> fig3a_closings();
std::vector<ExpectedClosing> fig3b_closings();

}  // namespace presets

struct FigureReport {
  std::string name;
  bool pass = false;
  std::vector<std::string> lines;
};

struct FigureOptions {
  int workers = 1;
  int grid = 201;            // fig1 / fig2 grid points per axis
  int mcd_samples = 71;      // fig4 scan samples
  bool converged_mcd = true; // fig4: include the M = 4000, n_k = 4096 point
};

inline constexpr double kClosingWindow = 0.05;
inline constexpr double kGappedThreshold = 1e-3;

FigureReport check_closings(std::string name, const std::vector<Closing>& found,
                            const std::vector<presets::ExpectedClosing>& expected);
FigureReport check_quantized_grid(std::string name, const SweepConfig& grid);
FigureReport check_mcd_scan(std::string name, const ModelParams& base, Axis axis, double lo, double hi,
                            double converged_at, const FigureOptions& opt);

/// fig1, fig2, fig3a, fig3b, fig4a, fig4b. Unknown names throw Config.
FigureReport verify_figure(std::string_view which, const FigureOptions& opt = {});

std::vector<std::string_view> figure_names();

}  // namespace pqtll
