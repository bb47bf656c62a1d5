#pragma once

#include "pqtll/params.hpp"

// Spin (sigma) x sublattice (tau) Pauli algebra. The 4-dim basis is ordered
// spin-major: index = 2 * spin + sublattice.
namespace pqtll::pauli {

enum class P { I = 0, X = 1, Y = 2, Z = 3 };

const Mat2& single(P a);

/// sigma_a (x) tau_b.
const Mat4& st(P spin, P sub);

// Symmetry operators of the symmetric-frame Floquet operators.
const Mat4& time_reversal();  // i sigma_y (x) tau_0
const Mat4& particle_hole();  // sigma_x (x) tau_y
const Mat4& sublattice();     // sigma_z (x) tau_y
const Mat4& inversion();      // sigma_x (x) tau_0

}  // namespace pqtll::pauli
