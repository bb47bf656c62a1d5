#include "pqtll/model.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "pqtll/errors.hpp"
#include "pqtll/pauli.hpp"

namespace pqtll {

using pauli::P;
using pauli::st;

namespace {

// exp(-i a X) for X^2 = I.
Mat4 involution_exp(cplx a, const Mat4& x) {
  return std::cos(a) * Mat4::Identity() - kI * std::sin(a) * x;
}

Mat4 half_exp(const ModelParams& p, double k, Term term, double scale) {
  if (term == Term::Perp) return expm_closed_h_perp(p, k, scale);
  if (!p.has_parallel_onsite()) return expm_closed_h_parallel(p, k, scale);
  return expm_oracle(scale * h_parallel(p, k).m);
}

}  // namespace

BlochMatrix h_parallel(const ModelParams& p, double k) {
  Mat4 m = p.j_x * std::cos(k) * st(P::I, P::Z) + p.v * std::sin(k) * st(P::Y, P::I);
  m += p.parallel_onsite;
  return {k, m};
}

BlochMatrix h_perp(const ModelParams& p, double k) {
  Mat4 m = 0.5 * p.j_y * st(P::I, P::X) - p.j_d * std::sin(k) * st(P::Z, P::X);
  return {k, m};
}

Mat4 expm_closed_h_parallel(const ModelParams& p, double k, double scale) {
  const cplx a = scale * p.j_x * std::cos(k);
  const cplx b = scale * p.v * std::sin(k);
  return involution_exp(a, st(P::I, P::Z)) * involution_exp(b, st(P::Y, P::I));
}

Mat4 expm_closed_h_perp(const ModelParams& p, double k, double scale) {
  const cplx a = scale * 0.5 * p.j_y;
  const cplx b = -scale * p.j_d * std::sin(k);
  return involution_exp(a, st(P::I, P::X)) * involution_exp(b, st(P::Z, P::X));
}

MatX expm_oracle(const MatX& m) {
  if (!m.allFinite()) fail(ErrorKind::NonFinite, "expm_oracle: matrix has NaN or infinite entries");
  if (m.rows() != m.cols()) fail(ErrorKind::InvalidArgument, "expm_oracle: matrix must be square");
  const MatX arg = -kI * m;
  return arg.exp();
}

BlochMatrix floquet_u(const ModelParams& p, double k, Frame frame) {
  Mat4 u;
  switch (frame) {
    case Frame::Lab:
      u = half_exp(p, k, Term::Perp, 1.0) * half_exp(p, k, Term::Parallel, 1.0);
      break;
    case Frame::First: {
      const Mat4 half = half_exp(p, k, Term::Parallel, 0.5);
      u = half * half_exp(p, k, Term::Perp, 1.0) * half;
      break;
    }
    case Frame::Second: {
      const Mat4 half = half_exp(p, k, Term::Perp, 0.5);
      u = half * half_exp(p, k, Term::Parallel, 1.0) * half;
      break;
    }
  }
  return {k, u};
}

LatticeOperator lattice_h(const ModelParams& p, int n_cells, Term which, Boundary boundary) {
  if (n_cells < 2) fail(ErrorKind::InvalidArgument, "lattice_h: need at least 2 cells");
  Mat4 onsite, forward, backward;  // forward = coefficient of |n><n+1|
  if (which == Term::Parallel) {
    onsite = p.parallel_onsite;
    forward = 0.5 * p.j_x * st(P::I, P::Z) - 0.5 * kI * p.v * st(P::Y, P::I);
    backward = 0.5 * p.j_x * st(P::I, P::Z) + 0.5 * kI * p.v * st(P::Y, P::I);
  } else {
    onsite = 0.5 * p.j_y * st(P::I, P::X);
    forward = 0.5 * kI * p.j_d * st(P::Z, P::X);
    backward = -0.5 * kI * p.j_d * st(P::Z, P::X);
  }
  const int dim = 4 * n_cells;
  LatticeOperator op{n_cells, MatX::Zero(dim, dim)};
  for (int n = 0; n < n_cells; ++n) {
    op.m.block<4, 4>(4 * n, 4 * n) = onsite;
    if (n + 1 < n_cells) {
      op.m.block<4, 4>(4 * n, 4 * (n + 1)) = forward;
      op.m.block<4, 4>(4 * (n + 1), 4 * n) = backward;
    }
  }
  if (boundary == Boundary::Periodic) {
    const int last = n_cells - 1;
    op.m.block<4, 4>(4 * last, 0) += forward;
    op.m.block<4, 4>(0, 4 * last) += backward;
  }
  return op;
}

LatticeOperator lattice_floquet_u(const ModelParams& p, int n_cells, Frame frame,
                                  Boundary boundary) {
  const MatX hpar = lattice_h(p, n_cells, Term::Parallel, boundary).m;
  const MatX hperp = lattice_h(p, n_cells, Term::Perp, boundary).m;
  LatticeOperator op{n_cells, {}};
  switch (frame) {
    case Frame::Lab:
      op.m = expm_oracle(hperp) * expm_oracle(hpar);
      break;
    case Frame::First: {
      const MatX half = expm_oracle(0.5 * hpar);
      op.m = half * expm_oracle(hperp) * half;
      break;
    }
    case Frame::Second: {
      const MatX half = expm_oracle(0.5 * hperp);
      op.m = half * expm_oracle(hpar) * half;
      break;
    }
  }
  return op;
}

}  // namespace pqtll
