#include "pqtll/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <lapacke.h>

#include "pqtll/errors.hpp"

namespace pqtll {

namespace {

constexpr double kPi = std::numbers::pi;
// Eigenvalues of U closer than this are treated as one eigenspace when
// transporting labels (exact spin degeneracy at k = 0 and k = -pi).
constexpr double kClusterTol = 1e-6;
constexpr int kGapRefineRounds = 9;
constexpr double kDegenerateTol = 1e-6;
// Above this condition the degenerate clusters get rebuilt before giving up.
constexpr double kRepairCondition = 1e6;

// Near-degenerate eigenvalues of a non-normal matrix come back from the Schur
// back-substitution with nearly parallel eigenvectors even when the eigenspace
// is full-dimensional (round-off makes the block look like a Jordan block).
// Each such cluster is replaced by an orthonormal basis of the null space of
// (m - mean I) and diagonalized inside that subspace. A genuinely defective
// cluster has a smaller null space and is left for the condition check.
template <class M, class V>
void repair_clusters(const M& m, V& values, M& vecs) {
  const Eigen::Index n = m.rows();
  std::vector<int> cluster(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    cluster[i] = int(i);
    for (Eigen::Index j = 0; j < i; ++j)
      if (std::abs(values(i) - values(j)) < kDegenerateTol * std::max(1.0, std::abs(values(i)))) {
        cluster[i] = cluster[j];
        break;
      }
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  for (Eigen::Index c = 0; c < n; ++c) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < n; ++i)
      if (cluster[i] == c) idx.push_back(i);
    const Eigen::Index size = idx.size();
    if (size < 2) continue;
    cplx mean = 0.0;
    for (auto i : idx) mean += values(i);
    mean /= double(size);
    MatX shifted = m;
    shifted.diagonal().array() -= mean;
    Eigen::BDCSVD<MatX> svd(shifted, Eigen::ComputeFullV);
    if (svd.singularValues()(n - size) > kDegenerateTol * scale) continue;
    const MatX basis = svd.matrixV().rightCols(size);
    const MatX inner = basis.adjoint() * m * basis;
    // A numerically scalar block has no preferred eigenvectors and its own
    // eigensolve would only reproduce the round-off problem.
    if ((inner - mean * MatX::Identity(size, size)).norm() <= kDegenerateTol * scale) {
      for (Eigen::Index a = 0; a < size; ++a) {
        vecs.col(idx[a]) = basis.col(a);
        values(idx[a]) = inner(a, a);
      }
      continue;
    }
    Eigen::ComplexEigenSolver<MatX> small(inner);
    MatX vs = basis * small.eigenvectors();
    for (Eigen::Index a = 0; a < size; ++a) {
      vecs.col(idx[a]) = vs.col(a).normalized();
      values(idx[a]) = small.eigenvalues()(a);
    }
  }
}

template <class M>
double condition_1(const M& v, const M& inv) {
  auto norm1 = [](const M& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); };
  return norm1(v) * norm1(inv);
}

template <class M, class V>
EigenSystem finish(const M& m, V values, M v) {
  for (Eigen::Index j = 0; j < v.cols(); ++j) v.col(j).normalize();
  M inv = v.inverse();
  double cond = condition_1(v, inv);
  if (!(cond < kRepairCondition)) {
    repair_clusters(m, values, v);
    inv = v.inverse();
    cond = condition_1(v, inv);
  }
  if (!std::isfinite(cond) || cond > kMaxCondition)
    fail(ErrorKind::NonDiagonalizable,
         "eigenvector matrix condition " + std::to_string(cond) + " exceeds cap (exceptional point)");
  return {values, v, inv, cond};
}

EigenSystem eig_small(const Mat4& m) {
  if (!m.allFinite()) fail(ErrorKind::NonFinite, "eig_biorthogonal: non-finite matrix");
  Eigen::ComplexEigenSolver<Mat4> solver(m, true);
  if (solver.info() != Eigen::Success)
    fail(ErrorKind::NonDiagonalizable, "eig_biorthogonal: eigensolver did not converge");
  return finish<Mat4, Vec4>(m, solver.eigenvalues(), solver.eigenvectors());
}

EigenSystem eig_large(const MatX& m) {
  if (!m.allFinite()) fail(ErrorKind::NonFinite, "eig_biorthogonal: non-finite matrix");
  const int n = int(m.rows());
  MatX a = m, vr(n, n);
  VecX w(n);
  auto* ap = reinterpret_cast<lapack_complex_double*>(a.data());
  auto* wp = reinterpret_cast<lapack_complex_double*>(w.data());
  auto* vp = reinterpret_cast<lapack_complex_double*>(vr.data());
  const int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, ap, n, wp, nullptr, n, vp, n);
  if (info != 0) fail(ErrorKind::NonDiagonalizable, "zgeev failed, info = " + std::to_string(info));
  return finish<MatX, VecX>(m, w, vr);
}

struct Eig4 {
  Vec4 values;
  Mat4 right;
  Mat4 left;
};

Eig4 eig4(const Mat4& m) {
  EigenSystem es = eig_small(m);
  return {es.values, es.right, es.left};
}

double wrapped_abs(cplx s) {
  return std::abs(cplx(std::remainder(s.real(), 2.0 * kPi), s.imag()));
}

// Permutation perm with shifted[perm[s]] closest to ref[s] in total distance.
std::array<int, 4> match_eigenvalues(const std::array<cplx, 4>& ref, const Vec4& shifted) {
  std::array<int, 4> perm{0, 1, 2, 3}, best = perm;
  double best_cost = INFINITY;
  do {
    double c = 0.0;
    for (int s = 0; s < 4; ++s) c += std::abs(shifted(perm[s]) - ref[s]);
    if (c < best_cost) {
      best_cost = c;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

void check_k_eval(double k) {
  if (!std::isfinite(k)) fail(ErrorKind::NonFinite, "quasimomentum is not finite");
}

}  // namespace

EigenSystem eig_biorthogonal(const MatX& m) {
  if (m.rows() != m.cols() || m.rows() == 0)
    fail(ErrorKind::InvalidArgument, "eig_biorthogonal: matrix must be square and nonempty");
  if (m.rows() == 4) return eig_small(m);
  return eig_large(m);
}

cplx quasienergy(cplx lambda) {
  const double r = std::abs(lambda);
  if (r == 0.0 || !std::isfinite(r)) fail(ErrorKind::SingularFloquet, "Floquet operator has a zero eigenvalue");
  double re = -std::arg(lambda);
  if (re <= -kPi) re = kPi;
  return {re, std::log(r)};
}

std::vector<cplx> quasienergies(const VecX& eigenvalues) {
  std::vector<cplx> out(eigenvalues.size());
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) out[i] = quasienergy(eigenvalues(i));
  return out;
}

std::vector<cplx> quasienergies(const BlochMatrix& u) {
  Eigen::ComplexEigenSolver<Mat4> solver(u.m, false);
  return quasienergies(VecX(solver.eigenvalues()));
}

std::vector<cplx> quasienergies(const LatticeOperator& u) {
  Eigen::ComplexEigenSolver<MatX> solver(u.m, false);
  return quasienergies(VecX(solver.eigenvalues()));
}

BandSet band_set(const ModelParams& p, double k, Frame frame) {
  return band_set(floquet_u(p, k, frame).m, k);
}

BandSet band_set(const Mat4& u, double k) {
  check_k_eval(k);
  const Eig4 es = eig4(u);
  std::array<cplx, 4> eps;
  for (int i = 0; i < 4; ++i) {
    eps[i] = quasienergy(es.values(i));
    if (gap_to_zero(eps[i]) < kClosingTol || gap_to_pi(eps[i]) < kClosingTol)
      fail(ErrorKind::DegeneratePoint, "quasienergy at 0 or pi, k = " + std::to_string(k));
  }

  // Three perfect matchings of four items; keep the one with the smallest worst pair.
  constexpr int kMatchings[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
  int best = 0;
  double best_cost = INFINITY;
  for (int m = 0; m < 3; ++m) {
    const auto& mt = kMatchings[m];
    const double c = std::max(wrapped_abs(eps[mt[0]] + eps[mt[1]]), wrapped_abs(eps[mt[2]] + eps[mt[3]]));
    if (c < best_cost) {
      best_cost = c;
      best = m;
    }
  }
  if (best_cost > kPairTol)
    fail(ErrorKind::DegeneratePoint, "chiral pairing failed at k = " + std::to_string(k));

  struct Pair {
    int plus, minus;
  };
  std::array<Pair, 2> pairs;
  for (int q = 0; q < 2; ++q) {
    int a = kMatchings[best][2 * q], b = kMatchings[best][2 * q + 1];
    const double dre = eps[a].real() - eps[b].real();
    const bool a_plus = std::abs(dre) > 1e-12 ? dre > 0 : eps[a].imag() > eps[b].imag();
    pairs[q] = a_plus ? Pair{a, b} : Pair{b, a};
  }
  if (eps[pairs[1].plus].real() < eps[pairs[0].plus].real()) std::swap(pairs[0], pairs[1]);

  BandSet bs;
  bs.k = k;
  for (int q = 0; q < 2; ++q) {
    const int sp = band_slot(q + 1, 1), sm = band_slot(q + 1, -1);
    bs.eps[sp] = eps[pairs[q].plus];
    bs.eps[sm] = eps[pairs[q].minus];
    bs.right.col(sp) = es.right.col(pairs[q].plus);
    bs.right.col(sm) = es.right.col(pairs[q].minus);
    bs.left.row(sp) = es.left.row(pairs[q].plus);
    bs.left.row(sm) = es.left.row(pairs[q].minus);
  }
  return bs;
}

BandStencil band_stencil(const ModelParams& p, double k, Frame frame, double delta) {
  BandStencil st;
  st.center = band_set(p, k, frame);
  st.delta = delta;
  std::array<cplx, 4> lam;
  for (int s = 0; s < 4; ++s) lam[s] = st.center.lambda(s);

  // cluster id per slot
  std::array<int, 4> cluster{0, 1, 2, 3};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < a; ++b)
      if (std::abs(lam[a] - lam[b]) < kClusterTol) {
        cluster[a] = cluster[b];
        break;
      }

  for (int side = 0; side < 2; ++side) {
    const double ks = side == 0 ? k + delta : k - delta;
    const Eig4 es = eig4(floquet_u(p, ks, frame).m);
    const auto perm = match_eigenvalues(lam, es.values);
    std::array<Mat4, 4> proj;
    for (auto& m : proj) m.setZero();
    for (int s = 0; s < 4; ++s)
      proj[cluster[s]] += es.right.col(perm[s]) * es.left.row(perm[s]);
    st.q_shift[side].setZero();
    for (int s = 0; s < 4; ++s) {
      st.right_shift[side].col(s) = proj[cluster[s]] * st.center.right.col(s);
      st.q_shift[side] += slot_eta(s) * es.right.col(perm[s]) * es.left.row(perm[s]);
    }
  }
  return st;
}

double gap_to_zero(cplx eps) { return std::abs(eps); }

double gap_to_pi(cplx eps) { return std::hypot(std::abs(eps.real()) - kPi, eps.imag()); }

double grid_k(int j, int n_k) { return -kPi + 2.0 * kPi * j / n_k; }

GapPair gap_functions_bulk(const ModelParams& p, int n_k) {
  if (n_k < 64) fail(ErrorKind::InvalidArgument, "gap_functions_bulk: n_k must be >= 64");
  p.validate();
  Eigen::ComplexEigenSolver<Mat4> solver;
  auto eval = [&](double k) {
    solver.compute(floquet_u(p, k, Frame::Lab).m, false);
    GapPair g{INFINITY, INFINITY};
    for (int i = 0; i < 4; ++i) {
      const cplx e = quasienergy(solver.eigenvalues()(i));
      g.delta_0 = std::min(g.delta_0, gap_to_zero(e));
      g.delta_pi = std::min(g.delta_pi, gap_to_pi(e));
    }
    return g;
  };

  GapPair best{INFINITY, INFINITY};
  double k0 = 0.0, kpi = 0.0;
  for (int j = 0; j < n_k; ++j) {
    const double k = grid_k(j, n_k);
    const GapPair g = eval(k);
    if (g.delta_0 < best.delta_0) best.delta_0 = g.delta_0, k0 = k;
    if (g.delta_pi < best.delta_pi) best.delta_pi = g.delta_pi, kpi = k;
  }
  double h = 2.0 * kPi / n_k;
  // Closings can be square-root cusps in k, so refinement continues well past
  // the first three decades.
  for (int round = 0; round < kGapRefineRounds; ++round) {
    const double c0 = k0, cpi = kpi;
    for (int j = -10; j <= 10; ++j) {
      if (j == 0) continue;
      const double g0 = eval(c0 + j * h / 10).delta_0;
      if (g0 < best.delta_0) best.delta_0 = g0, k0 = c0 + j * h / 10;
      const double gp = eval(cpi + j * h / 10).delta_pi;
      if (gp < best.delta_pi) best.delta_pi = gp, kpi = cpi + j * h / 10;
    }
    h /= 10;
  }
  return best;
}

GapPair gap_functions_obc(const std::vector<cplx>& spectrum) {
  if (spectrum.empty()) fail(ErrorKind::InvalidArgument, "gap_functions_obc: empty spectrum");
  GapPair g{INFINITY, INFINITY};
  for (cplx e : spectrum) {
    g.delta_0 = std::min(g.delta_0, gap_to_zero(e));
    g.delta_pi = std::min(g.delta_pi, gap_to_pi(e));
  }
  return g;
}

}  // namespace pqtll
