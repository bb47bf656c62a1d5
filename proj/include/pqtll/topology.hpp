#pragma once

#include <optional>
#include <vector>

#include "pqtll/spectra.hpp"

namespace pqtll {

struct QMatrix {
  double k = 0.0;
  Mat4 q = Mat4::Zero();
};

/// Q = sum over bands of eta |R><L|. Frames 1 and 2 only.
QMatrix q_matrix(const ModelParams& p, double k, Frame frame);

/// Complex value of the winding integral, before the reality check.
cplx winding_integral(const ModelParams& p, Frame frame, int n_k);

/// Real winding w_alpha. Throws GaplessParameters if the gap closes on the
/// grid and NonRealWinding if |Im| >= 1e-6.
double winding_number(const ModelParams& p, Frame frame, int n_k = 2048);

struct WindingResult {
  double w1 = 0.0, w2 = 0.0;
  double w0 = 0.0, w_pi = 0.0;
  double residual = 0.0;  // max distance of w0, w_pi to the nearest even integer
  int n_k = 0;            // grid actually used
  std::optional<std::pair<int, int>> rounded;  // (w0, w_pi) when residual < 0.01
};

inline constexpr double kQuantizationTol = 0.01;
inline constexpr int kMaxWindingGrid = 1 << 15;

WindingResult make_winding_result(double w1, double w2, int n_k);

/// (w0, w_pi), doubling the grid up to 2^15 until both windings are real and
/// the pair is quantized.
WindingResult invariant_pair(const ModelParams& p, int n_k = 2048);

struct Closing {
  double value = 0.0;
  bool zero = false;
  bool pi = false;
  double gap = 0.0;
};

struct ScanOptions {
  int n_samples = 200;
  int gap_n_k = 256;
  double report_tol = 1e-3;
  double localize_tol = 1e-9;
};

/// Locates gap closings along one axis. Every sampled local minimum of Delta_0
/// and Delta_pi is refined by golden-section search; closings within 1e-3 of
/// each other are merged and carry both labels.
std::vector<Closing> phase_boundary_scan(const ModelParams& base, Axis axis, double lo, double hi,
                                         const ScanOptions& opt = {});

}  // namespace pqtll
