#pragma once

#include <string>
#include <vector>

#include "pqtll/spectra.hpp"
#include "pqtll/topology.hpp"

namespace pqtll {

struct OBCSpectrum {
  int n_cells = 0;
  Frame frame = Frame::First;
  int edge_cells = 0;            // window per side used for edge_weight
  std::vector<cplx> eps;         // 4N quasienergies
  VecX lambda;                   // eigenvalues of U
  MatX right, left;              // right columns, left rows
  std::vector<double> edge_weight;
};

/// Default edge window: max(4, N/4) cells per side.
int default_edge_cells(int n_cells);

/// Dense diagonalization of the open-chain Floquet operator. Requires N >= 10.
OBCSpectrum obc_spectrum(const ModelParams& p, int n_cells, Frame frame, int edge_cells = 0);

struct EdgeModeCount {
  int n0 = 0, n_pi = 0;
  int raw0 = 0, raw_pi = 0;
};

struct CountOptions {
  double gap_tol_0 = 1e-4;
  double gap_tol_pi = 1e-4;
  double edge_tol = 0.6;
};

/// A state counts as a 0 (pi) edge mode when its OBC gap value is below the
/// tolerance and its edge weight exceeds edge_tol. Throws NonQuartet when a
/// raw count is not a multiple of four.
EdgeModeCount count_edge_modes(const OBCSpectrum& s, const CountOptions& opt);
EdgeModeCount count_edge_modes(const OBCSpectrum& s, double gap_tol, double edge_tol);

/// Tolerances tied to the bulk: half the PBC gap at 0 and at pi.
CountOptions bulk_count_options(const GapPair& bulk, double edge_tol = 0.6);

/// Continuity-tracked band labels on a dense PBC grid: eta is fixed at a k far
/// from the branch seams and carried along each band by eigenvalue matching.
struct PBCLabels {
  std::vector<cplx> lambda;
  std::vector<double> eta;
  double eta_of(cplx lam) const;  // label of the nearest PBC eigenvalue
};

PBCLabels pbc_labels(const ModelParams& p, int n_k = 2048);

enum class OBCLabeling { BandContinuity, RealPartSign };

struct RealSpaceWinding {
  double w1_rs = 0.0, w2_rs = 0.0, w0_rs = 0.0, w_pi_rs = 0.0;
  double im1 = 0.0, im2 = 0.0;  // imaginary parts of the traces
  int n = 0, n_b = 0, n_e = 0;
};

/// (1/2 N_B) Tr_B(S Q [n, Q]) over the central N_B = N - 2 N_E cells.
cplx real_space_winding_trace(const OBCSpectrum& s, int n_e, const std::vector<double>& eta);
std::vector<double> obc_labels(const OBCSpectrum& s, const ModelParams& p, OBCLabeling labeling,
                               const PBCLabels* table = nullptr);

double real_space_winding(const ModelParams& p, int n_cells, int n_e, Frame frame,
                          OBCLabeling labeling = OBCLabeling::BandContinuity);
RealSpaceWinding real_space_winding_pair(const ModelParams& p, int n_cells, int n_e,
                                         OBCLabeling labeling = OBCLabeling::BandContinuity);

struct BulkEdgeReport {
  bool symmetry_ok = true;       // S U S = U^{-1} on the PBC operator
  double symmetry_residual = 0.0;
  WindingResult k_space;
  bool k_space_ok = false;
  RealSpaceWinding real_space;
  bool real_space_ok = false;    // |w_rs - w| < 0.05 in both frames
  EdgeModeCount counts;
  bool counts_ok = false;        // raw counts multiples of four
  GapPair bulk_gaps, obc_gaps;
  bool edge_relation = false;    // |w0| = 2 n0 and |w_pi| = 2 n_pi
  bool rs_relation = false;      // (|w0_rs|, |w_pi_rs|) rounds to (2 n0, 2 n_pi)
  bool pass = false;
  std::vector<std::string> notes;
};

BulkEdgeReport verify_bulk_edge(const ModelParams& p, int n_cells = 100, int n_e = 25);

}  // namespace pqtll
