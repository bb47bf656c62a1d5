#include "pqtll/pauli.hpp"

#include <array>

namespace pqtll::pauli {

namespace {

std::array<Mat2, 4> make_singles() {
  std::array<Mat2, 4> s;
  s[0] << 1, 0, 0, 1;
  s[1] << 0, 1, 1, 0;
  s[2] << 0, -kI, kI, 0;
  s[3] << 1, 0, 0, -1;
  return s;
}

Mat4 kron(const Mat2& a, const Mat2& b) {
  Mat4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

const std::array<Mat2, 4>& singles() {
  static const std::array<Mat2, 4> s = make_singles();
  return s;
}

const std::array<Mat4, 16>& table() {
  static const std::array<Mat4, 16> t = [] {
    std::array<Mat4, 16> out;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) out[4 * a + b] = kron(singles()[a], singles()[b]);
    return out;
  }();
  return t;
}

}  // namespace

const Mat2& single(P a) { return singles()[static_cast<int>(a)]; }

const Mat4& st(P spin, P sub) { return table()[4 * static_cast<int>(spin) + static_cast<int>(sub)]; }

const Mat4& time_reversal() {
  static const Mat4 t = kI * st(P::Y, P::I);
  return t;
}

const Mat4& particle_hole() { return st(P::X, P::Y); }
const Mat4& sublattice() { return st(P::Z, P::Y); }
const Mat4& inversion() { return st(P::X, P::I); }

}  // namespace pqtll::pauli
