#pragma once

#include "pqtll/params.hpp"

namespace pqtll {

/// A 4x4 operator at quasimomentum k.
struct BlochMatrix {
  double k = 0.0;
  Mat4 m = Mat4::Zero();
};

/// A 4N x 4N real-space operator. Basis: cell (outer) x spin x sublattice.
struct LatticeOperator {
  int n_cells = 0;
  MatX m;
};

enum class Boundary { Open, Periodic };

// First-half Hamiltonian: J_x cos k s0.tz + V sin k sy.t0 (+ parallel_onsite).
BlochMatrix h_parallel(const ModelParams& p, double k);
// Second-half Hamiltonian: (J_y/2) s0.tx - J_d sin k sz.tx.
BlochMatrix h_perp(const ModelParams& p, double k);

// exp(-i scale h(k)) in closed form. Both Hamiltonians are sums of two
// commuting terms that each square to the identity, so each factor is
// cos(a) - i sin(a) X with complex a.
Mat4 expm_closed_h_parallel(const ModelParams& p, double k, double scale);
Mat4 expm_closed_h_perp(const ModelParams& p, double k, double scale);

/// exp(-i m) by Pade scaling-and-squaring. Throws NonFinite on NaN/inf input.
MatX expm_oracle(const MatX& m);

/// One-period Floquet operator in the requested frame.
BlochMatrix floquet_u(const ModelParams& p, double k, Frame frame);

/// Real-space half-period Hamiltonian, the exact inverse Fourier transform of
/// h_parallel / h_perp (|n><n+1| <-> e^{ik}). Requires n_cells >= 2.
LatticeOperator lattice_h(const ModelParams& p, int n_cells, Term which,
                          Boundary boundary = Boundary::Open);

LatticeOperator lattice_floquet_u(const ModelParams& p, int n_cells, Frame frame,
                                  Boundary boundary = Boundary::Open);

}  // namespace pqtll
