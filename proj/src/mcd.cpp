#include "pqtll/mcd.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pqtll/errors.hpp"
#include "pqtll/pauli.hpp"

namespace pqtll {

namespace {

void require_symmetric_frame(Frame frame) {
  if (frame == Frame::Lab) fail(ErrorKind::InvalidArgument, "MCD needs frame 1 or 2");
}

template <class F>
void for_each_k(const ModelParams& p, Frame frame, int n_k, F&& f) {
  for (int j = 0; j < n_k; ++j) {
    const double k = grid_k(j, n_k);
    BandConnection bc;
    try {
      bc = band_connection(p, k, frame);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::DegeneratePoint || e.kind() == ErrorKind::NonDiagonalizable)
        fail(ErrorKind::GaplessParameters, std::string("gap closes on the k-grid: ") + e.what());
      throw;
    }
    f(bc);
  }
}

}  // namespace

BandConnection band_connection(const ModelParams& p, double k, Frame frame) {
  const BandStencil st = band_stencil(p, k, frame);
  const Mat4 S = pauli::sublattice();
  BandConnection bc;
  bc.bands = st.center;
  const Mat4 dr = (st.right_shift[0] - st.right_shift[1]) / (2.0 * st.delta);
  for (int s = 0; s < 4; ++s) bc.a[s] = kI * (st.center.left.row(s) * S * dr.col(s))(0, 0);
  return bc;
}

int propagator_sign(cplx eps) { return eps.imag() < -1e-12 ? -1 : 1; }

cplx band_mcd_summand(const BandConnection& bc, int slot, int m) {
  const cplx e = bc.bands.eps[slot];
  const cplx phase = std::exp(2.0 * kI * double(propagator_sign(e)) * e * double(m));
  return bc.a[slot] - bc.a[slot_partner(slot)] * phase;
}

cplx band_mcd_summand(const ModelParams& p, double k, Frame frame, int l, int eta, int m) {
  require_symmetric_frame(frame);
  if (l != 1 && l != 2) fail(ErrorKind::InvalidArgument, "band index must be 1 or 2");
  return band_mcd_summand(band_connection(p, k, frame), band_slot(l, eta), m);
}

cplx cesaro_mean(cplx z, int M) {
  if (std::abs(1.0 - z) < 1e-6) {
    cplx sum = 0.0, zm = 1.0;
    for (int m = 1; m <= M; ++m) sum += (zm *= z);
    return sum / double(M);
  }
  return z * (1.0 - std::pow(z, M)) / (double(M) * (1.0 - z));
}

void MCDConfig::validate() const {
  if (M < 1) fail(ErrorKind::InvalidArgument, "MCD needs M >= 1");
  if (n_k < 128) fail(ErrorKind::InvalidArgument, "MCD needs n_k >= 128");
}

cplx mcd_frame(const ModelParams& p, Frame frame, const MCDConfig& cfg) {
  require_symmetric_frame(frame);
  cfg.validate();
  p.validate();
  cplx total = 0.0;
  for_each_k(p, frame, cfg.n_k, [&](const BandConnection& bc) {
    for (int s = 0; s < 4; ++s) {
      const cplx e = bc.bands.eps[s];
      const cplx z = std::exp(2.0 * kI * double(propagator_sign(e)) * e);
      total += bc.a[s] - bc.a[slot_partner(s)] * cesaro_mean(z, cfg.M);
    }
  });
  return total / double(cfg.n_k);
}

MCDResult mcd_pair(const ModelParams& p, const MCDConfig& cfg) {
  MCDResult r;
  r.c1 = mcd_frame(p, Frame::First, cfg);
  r.c2 = mcd_frame(p, Frame::Second, cfg);
  r.c0 = -(r.c1 + r.c2) / 2.0;
  r.c_pi = -(r.c1 - r.c2) / 2.0;
  r.im_residual = std::max(std::abs(r.c0.imag()), std::abs(r.c_pi.imag()));
  return r;
}

double winding_via_connection(const ModelParams& p, Frame frame, int n_k) {
  require_symmetric_frame(frame);
  if (n_k < 16) fail(ErrorKind::InvalidArgument, "winding grid too small");
  p.validate();
  cplx total = 0.0;
  for_each_k(p, frame, n_k, [&](const BandConnection& bc) {
    for (cplx a : bc.a) total += a;
  });
  const cplx w = -total / double(n_k);
  if (std::abs(w.imag()) >= 1e-6)
    fail(ErrorKind::NonRealWinding, "connection winding has imaginary part " + std::to_string(w.imag()));
  return w.real();
}

}  // namespace pqtll
