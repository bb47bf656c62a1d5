#include "pqtll/obc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pqtll/errors.hpp"
#include "pqtll/pauli.hpp"

namespace pqtll {

namespace {

constexpr double kPi = std::numbers::pi;

EdgeModeCount tally(const OBCSpectrum& s, const CountOptions& opt) {
  EdgeModeCount c;
  for (std::size_t i = 0; i < s.eps.size(); ++i) {
    if (s.edge_weight[i] <= opt.edge_tol) continue;
    if (gap_to_zero(s.eps[i]) < opt.gap_tol_0) ++c.raw0;
    else if (gap_to_pi(s.eps[i]) < opt.gap_tol_pi) ++c.raw_pi;
  }
  c.n0 = c.raw0 / 4;
  c.n_pi = c.raw_pi / 4;
  return c;
}

std::array<int, 4> match4(const Vec4& ref, const Vec4& next) {
  std::array<int, 4> perm{0, 1, 2, 3}, best = perm;
  double best_cost = INFINITY;
  do {
    double c = 0.0;
    for (int s = 0; s < 4; ++s) c += std::abs(next(perm[s]) - ref(s));
    if (c < best_cost) best_cost = c, best = perm;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

void require_gapped(const ModelParams& p) {
  const GapPair g = gap_functions_bulk(p, 256);
  if (std::min(g.delta_0, g.delta_pi) < 1e-3)
    fail(ErrorKind::GaplessOBC, "bulk gap below 1e-3; OBC labels are ill-defined");
}

}  // namespace

int default_edge_cells(int n_cells) { return std::max(4, n_cells / 4); }

OBCSpectrum obc_spectrum(const ModelParams& p, int n_cells, Frame frame, int edge_cells) {
  if (n_cells < 10) fail(ErrorKind::InvalidArgument, "obc_spectrum: N must be >= 10");
  p.validate();
  if (edge_cells <= 0) edge_cells = default_edge_cells(n_cells);
  if (2 * edge_cells > n_cells) fail(ErrorKind::InvalidArgument, "edge window wider than half the chain");

  EigenSystem es = eig_biorthogonal(lattice_floquet_u(p, n_cells, frame).m);
  OBCSpectrum s;
  s.n_cells = n_cells;
  s.frame = frame;
  s.edge_cells = edge_cells;
  s.eps = quasienergies(es.values);
  s.lambda = std::move(es.values);
  s.right = std::move(es.right);
  s.left = std::move(es.left);
  const int w = 4 * edge_cells, dim = 4 * n_cells;
  s.edge_weight.resize(dim);
  for (int j = 0; j < dim; ++j) {
    const auto col = s.right.col(j);
    const double total = col.squaredNorm();
    const double edge = col.head(w).squaredNorm() + col.tail(w).squaredNorm();
    s.edge_weight[j] = total > 0 ? std::clamp(edge / total, 0.0, 1.0) : 0.0;
  }
  return s;
}

EdgeModeCount count_edge_modes(const OBCSpectrum& s, const CountOptions& opt) {
  if (!(opt.gap_tol_0 > 0) || !(opt.gap_tol_pi > 0))
    fail(ErrorKind::InvalidArgument, "count_edge_modes: gap tolerance must be positive");
  if (!(opt.edge_tol > 0 && opt.edge_tol < 1))
    fail(ErrorKind::InvalidArgument, "count_edge_modes: edge_tol must lie in (0, 1)");
  const EdgeModeCount c = tally(s, opt);
  if (c.raw0 % 4 != 0 || c.raw_pi % 4 != 0)
    fail(ErrorKind::NonQuartet, "edge-mode counts (" + std::to_string(c.raw0) + ", " +
                                    std::to_string(c.raw_pi) + ") are not multiples of four");
  return c;
}

EdgeModeCount count_edge_modes(const OBCSpectrum& s, double gap_tol, double edge_tol) {
  return count_edge_modes(s, CountOptions{gap_tol, gap_tol, edge_tol});
}

CountOptions bulk_count_options(const GapPair& bulk, double edge_tol) {
  return {0.5 * bulk.delta_0, 0.5 * bulk.delta_pi, edge_tol};
}

double PBCLabels::eta_of(cplx lam) const {
  std::size_t best = 0;
  double d = INFINITY;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    const double di = std::norm(lambda[i] - lam);
    if (di < d) d = di, best = i;
  }
  return eta[best];
}

PBCLabels pbc_labels(const ModelParams& p, int n_k) {
  if (n_k < 64) fail(ErrorKind::InvalidArgument, "pbc_labels: n_k must be >= 64");
  std::vector<Vec4> lam(n_k);
  Eigen::ComplexEigenSolver<Mat4> solver;
  int start = 0;
  double best_score = -1.0;
  for (int j = 0; j < n_k; ++j) {
    solver.compute(floquet_u(p, grid_k(j, n_k), Frame::First).m, false);
    lam[j] = solver.eigenvalues();
    double score = INFINITY;
    for (int s = 0; s < 4; ++s) {
      const double re = quasienergy(lam[j](s)).real();
      score = std::min({score, std::abs(re), kPi - std::abs(re)});
    }
    if (score > best_score) best_score = score, start = j;
  }

  PBCLabels t;
  t.lambda.reserve(4 * n_k);
  t.eta.reserve(4 * n_k);
  Vec4 eta;
  for (int s = 0; s < 4; ++s) eta(s) = quasienergy(lam[start](s)).real() > 0 ? 1.0 : -1.0;
  for (int j = 0; j < n_k; ++j) {
    const int i = (start + j) % n_k;
    if (j > 0) {
      const int prev = (start + j - 1) % n_k;
      const auto perm = match4(lam[prev], lam[i]);
      Vec4 next;
      for (int s = 0; s < 4; ++s) next(perm[s]) = eta(s);
      eta = next;
    }
    for (int s = 0; s < 4; ++s) {
      t.lambda.push_back(lam[i](s));
      t.eta.push_back(eta(s).real());
    }
  }
  return t;
}

std::vector<double> obc_labels(const OBCSpectrum& s, const ModelParams& p, OBCLabeling labeling,
                               const PBCLabels* table) {
  std::vector<double> eta(s.eps.size());
  if (labeling == OBCLabeling::RealPartSign) {
    for (std::size_t i = 0; i < eta.size(); ++i) {
      const double re = s.eps[i].real();
      if (std::abs(re) < 1e-8 || kPi - std::abs(re) < 1e-8)
        fail(ErrorKind::GaplessOBC, "OBC state with Re eps at 0 or pi");
      eta[i] = re > 0 ? 1.0 : -1.0;
    }
    return eta;
  }
  require_gapped(p);
  PBCLabels local;
  if (!table) {
    local = pbc_labels(p);
    table = &local;
  }
  for (std::size_t i = 0; i < eta.size(); ++i) eta[i] = table->eta_of(s.lambda(i));
  return eta;
}

cplx real_space_winding_trace(const OBCSpectrum& s, int n_e, const std::vector<double>& eta) {
  const int n = s.n_cells, n_b = n - 2 * n_e;
  if (n_e < 0 || n_b < 10) fail(ErrorKind::InvalidArgument, "real_space_winding: need N - 2 N_E >= 10");
  const int dim = 4 * n;
  if (int(eta.size()) != dim) fail(ErrorKind::InvalidArgument, "label count does not match spectrum");

  const VecX e = Eigen::Map<const Eigen::VectorXd>(eta.data(), dim).cast<cplx>();
  const MatX q = s.right * e.asDiagonal() * s.left;
  MatX comm(dim, dim);  // [n, Q]
  for (int b = 0; b < dim; ++b)
    for (int a = 0; a < dim; ++a) comm(a, b) = double(a / 4 - b / 4) * q(a, b);
  const MatX x = q.middleRows(4 * n_e, 4 * n_b) * comm;  // rows of Q [n, Q] in the bulk
  const Mat4 S = pauli::sublattice();
  cplx tr = 0.0;
  for (int c = 0; c < n_b; ++c)
    tr += (S * x.block<4, 4>(4 * c, 4 * (n_e + c))).trace();
  return tr / (2.0 * n_b);
}

double real_space_winding(const ModelParams& p, int n_cells, int n_e, Frame frame, OBCLabeling labeling) {
  if (frame == Frame::Lab) fail(ErrorKind::InvalidArgument, "real_space_winding needs frame 1 or 2");
  const OBCSpectrum s = obc_spectrum(p, n_cells, frame);
  return real_space_winding_trace(s, n_e, obc_labels(s, p, labeling)).real();
}

namespace {

RealSpaceWinding assemble(const OBCSpectrum& s1, const OBCSpectrum& s2, const ModelParams& p, int n_e,
                          OBCLabeling labeling) {
  PBCLabels table;
  const PBCLabels* tp = nullptr;
  if (labeling == OBCLabeling::BandContinuity) {
    require_gapped(p);
    table = pbc_labels(p);
    tp = &table;
  }
  const cplx t1 = real_space_winding_trace(s1, n_e, obc_labels(s1, p, labeling, tp));
  const cplx t2 = real_space_winding_trace(s2, n_e, obc_labels(s2, p, labeling, tp));
  RealSpaceWinding r;
  r.w1_rs = t1.real();
  r.w2_rs = t2.real();
  r.im1 = t1.imag();
  r.im2 = t2.imag();
  r.w0_rs = (r.w1_rs + r.w2_rs) / 2;
  r.w_pi_rs = (r.w1_rs - r.w2_rs) / 2;
  r.n = s1.n_cells;
  r.n_e = n_e;
  r.n_b = r.n - 2 * n_e;
  return r;
}

double symmetry_residual(const ModelParams& p) {
  const Mat4 S = pauli::sublattice();
  double worst = 0.0;
  for (Frame f : {Frame::First, Frame::Second})
    for (int j = 0; j < 16; ++j) {
      const Mat4 u = floquet_u(p, grid_k(j, 16) + 0.1, f).m;
      worst = std::max(worst, (S * u * S - u.inverse()).cwiseAbs().maxCoeff());
    }
  return worst;
}

}  // namespace

RealSpaceWinding real_space_winding_pair(const ModelParams& p, int n_cells, int n_e, OBCLabeling labeling) {
  const OBCSpectrum s1 = obc_spectrum(p, n_cells, Frame::First);
  const OBCSpectrum s2 = obc_spectrum(p, n_cells, Frame::Second);
  return assemble(s1, s2, p, n_e, labeling);
}

BulkEdgeReport verify_bulk_edge(const ModelParams& p, int n_cells, int n_e) {
  BulkEdgeReport r;
  r.symmetry_residual = symmetry_residual(p);
  r.symmetry_ok = r.symmetry_residual < 1e-8;
  if (!r.symmetry_ok) {
    // without S the windings are not defined; nothing else to check
    r.notes.push_back("sublattice symmetry broken (residual " + std::to_string(r.symmetry_residual) + ")");
    return r;
  }

  r.bulk_gaps = gap_functions_bulk(p, 256);
  if (std::min(r.bulk_gaps.delta_0, r.bulk_gaps.delta_pi) < 1e-3)
    fail(ErrorKind::GaplessParameters, "verify_bulk_edge: bulk gap closed");

  try {
    r.k_space = invariant_pair(p);
    r.k_space_ok = true;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::QuantizationFailure && e.kind() != ErrorKind::NonRealWinding) throw;
    r.notes.push_back(std::string("k-space winding: ") + e.what());
    r.k_space = make_winding_result(winding_integral(p, Frame::First, 2048).real(),
                                    winding_integral(p, Frame::Second, 2048).real(), 2048);
  }

  const OBCSpectrum s1 = obc_spectrum(p, n_cells, Frame::First);
  const OBCSpectrum s2 = obc_spectrum(p, n_cells, Frame::Second);
  r.obc_gaps = gap_functions_obc(s1.eps);
  r.counts = tally(s1, bulk_count_options(r.bulk_gaps));
  r.counts_ok = r.counts.raw0 % 4 == 0 && r.counts.raw_pi % 4 == 0;
  if (!r.counts_ok) r.notes.push_back("edge-mode counts not multiples of four");

  r.real_space = assemble(s1, s2, p, n_e, OBCLabeling::BandContinuity);
  r.real_space_ok = std::abs(r.real_space.w1_rs - r.k_space.w1) < 0.05 &&
                    std::abs(r.real_space.w2_rs - r.k_space.w2) < 0.05;

  if (r.k_space.rounded && r.counts_ok) {
    const auto [w0, wpi] = *r.k_space.rounded;
    r.edge_relation = std::abs(w0) == 2 * r.counts.n0 && std::abs(wpi) == 2 * r.counts.n_pi;
  }
  r.rs_relation = r.counts_ok && std::lround(std::abs(r.real_space.w0_rs)) == 2 * r.counts.n0 &&
                  std::lround(std::abs(r.real_space.w_pi_rs)) == 2 * r.counts.n_pi;
  r.pass = r.symmetry_ok && r.edge_relation && r.rs_relation;
  return r;
}

}  // namespace pqtll
