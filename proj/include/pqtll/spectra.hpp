#pragma once

#include <array>
#include <vector>

#include "pqtll/model.hpp"

namespace pqtll {

/// m = right * diag(values) * left, with left = right^{-1}. Rows of `left` are
/// the left eigenvectors, so left.row(i) * right.col(j) = delta_ij.
struct EigenSystem {
  VecX values;
  MatX right;
  MatX left;
  double condition = 1.0;  // ||V||_1 ||V^{-1}||_1
};

inline constexpr double kMaxCondition = 1e10;

/// Dense biorthogonal eigendecomposition. Columns of V are unit-normalized.
/// Throws NonDiagonalizable when cond(V) > kMaxCondition.
EigenSystem eig_biorthogonal(const MatX& m);

/// epsilon = i Log(lambda): Re = -arg(lambda) in (-pi, pi], Im = ln|lambda|.
/// Throws SingularFloquet on lambda = 0.
cplx quasienergy(cplx lambda);
std::vector<cplx> quasienergies(const VecX& eigenvalues);
std::vector<cplx> quasienergies(const BlochMatrix& u);
std::vector<cplx> quasienergies(const LatticeOperator& u);

/// Band slot for (l in {1,2}, eta = +1/-1). Slot order: (1,+), (1,-), (2,+), (2,-).
constexpr int band_slot(int l, int eta) { return 2 * (l - 1) + (eta > 0 ? 0 : 1); }
constexpr int slot_eta(int slot) { return slot % 2 == 0 ? 1 : -1; }
constexpr int slot_partner(int slot) { return slot ^ 1; }

struct BandSet {
  double k = 0.0;
  std::array<cplx, 4> eps{};
  Mat4 right = Mat4::Identity();  // column per slot
  Mat4 left = Mat4::Identity();   // row per slot

  cplx lambda(int slot) const { return std::exp(-kI * eps[slot]); }
};

inline constexpr double kPairTol = 1e-6;
inline constexpr double kClosingTol = 1e-9;

/// Pairs the four quasienergies into chiral partners and labels them.
/// Throws DegeneratePoint when a quasienergy sits at 0 or pi or pairing fails.
BandSet band_set(const ModelParams& p, double k, Frame frame);
BandSet band_set(const Mat4& u, double k);

/// Symmetric-difference stencil around k. Eigenvectors at k +/- delta are
/// transported from the labels at k: each eigenvalue cluster at k is matched
/// to the nearest eigenvalues at k +/- delta and the shifted right vectors are
/// the k-vectors projected onto the matched eigenspace. Index 0 is k + delta,
/// index 1 is k - delta.
struct BandStencil {
  BandSet center;
  double delta = 0.0;
  std::array<Mat4, 2> right_shift;  // transported right vectors, column per slot
  std::array<Mat4, 2> q_shift;      // Q matrix with labels carried over from k
};

inline constexpr double kStencilDelta = 1e-5;

BandStencil band_stencil(const ModelParams& p, double k, Frame frame,
                         double delta = kStencilDelta);

struct GapPair {
  double delta_0 = 0.0;
  double delta_pi = 0.0;
};

double gap_to_zero(cplx eps);
double gap_to_pi(cplx eps);

/// Bulk point-gap functions over a uniform k-grid of n_k >= 64 points, with
/// repeated 10x local refinement around each argmin down to ~1e-10 in k.
GapPair gap_functions_bulk(const ModelParams& p, int n_k = 256);
GapPair gap_functions_obc(const std::vector<cplx>& spectrum);

/// Uniform grid -pi + 2 pi j / n_k.
double grid_k(int j, int n_k);

}  // namespace pqtll
