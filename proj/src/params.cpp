#include "pqtll/params.hpp"

#include <array>
#include <cmath>

#include "pqtll/errors.hpp"

namespace pqtll {

namespace {

constexpr std::array<std::pair<Axis, std::string_view>, 6> kAxisNames{{
    {Axis::JX, "j_x"},
    {Axis::JYR, "j_y_r"},
    {Axis::JYI, "j_y_i"},
    {Axis::JDR, "j_d_r"},
    {Axis::JDI, "j_d_i"},
    {Axis::V, "v"},
}};

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

bool ModelParams::is_finite() const {
  return std::isfinite(j_x) && std::isfinite(v) && finite(j_y) && finite(j_d) &&
         parallel_onsite.allFinite();
}

void ModelParams::validate() const {
  if (!is_finite()) fail(ErrorKind::NonFinite, "model parameters contain NaN or infinity");
}

ModelParams make_params(double j_x, cplx j_y, cplx j_d, double v) {
  ModelParams p;
  p.j_x = j_x;
  p.j_y = j_y;
  p.j_d = j_d;
  p.v = v;
  return p;
}

Frame frame_from_int(int f) {
  switch (f) {
    case 0: return Frame::Lab;
    case 1: return Frame::First;
    case 2: return Frame::Second;
    default: fail(ErrorKind::InvalidArgument, "frame must be 0, 1 or 2, got " + std::to_string(f));
  }
}

std::string_view axis_name(Axis a) {
  for (const auto& [axis, name] : kAxisNames)
    if (axis == a) return name;
  return "?";
}

std::optional<Axis> parse_axis(std::string_view name) {
  for (const auto& [axis, n] : kAxisNames)
    if (n == name) return axis;
  return std::nullopt;
}

double axis_value(const ModelParams& p, Axis a) {
  switch (a) {
    case Axis::JX: return p.j_x;
    case Axis::JYR: return p.j_y.real();
    case Axis::JYI: return p.j_y.imag();
    case Axis::JDR: return p.j_d.real();
    case Axis::JDI: return p.j_d.imag();
    case Axis::V: return p.v;
  }
  return 0.0;
}

ModelParams with_axis(ModelParams p, Axis a, double value) {
  switch (a) {
    case Axis::JX: p.j_x = value; break;
    case Axis::JYR: p.j_y.real(value); break;
    case Axis::JYI: p.j_y.imag(value); break;
    case Axis::JDR: p.j_d.real(value); break;
    case Axis::JDI: p.j_d.imag(value); break;
    case Axis::V: p.v = value; break;
  }
  return p;
}

}  // namespace pqtll
