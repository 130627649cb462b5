// SPDX-License-Identifier: Apache-2.0
#include "pmlbie/incidence.hpp"

#include <cmath>

namespace pmlbie {

namespace {

cplx cdot(const CVec3& a, const CVec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

cplx checked_ratio(cplx num, cplx den, const char* what) {
  if (std::abs(den) < 1e-14 * std::max(1.0, std::abs(num))) throw DegenerateIncidence(what);
  return num / den;
}

}  // namespace

double MediumSpec::k(int j) const { return omega * std::sqrt(mu[j] * eps[j]); }

void MediumSpec::validate(bool allow_single) const {
  if (!(omega > 0.0)) throw ValidationError("media.omega: must be positive");
  if (eps.size() != mu.size()) throw ValidationError("media.layers: eps and mu lengths differ");
  if (eps.size() < (allow_single ? 1u : 2u)) throw ValidationError("media.layers: at least two layers required");
  for (std::size_t j = 0; j < eps.size(); ++j)
    if (!(eps[j] > 0.0) || !(mu[j] > 0.0))
      throw ValidationError("media.layers[" + std::to_string(j) + "]: eps and mu must be positive");
}

Vec3 PlaneWaveSpec::wavevector(double k1) const {
  if (!(kz > 0.0)) throw ValidationError("incidence.plane_wave.kz: must be positive (downgoing wave)");
  const Vec3 d(0.0, ky, -kz);
  return d * (k1 / d.norm());
}

FieldPair plane_wave_field(const PlaneWaveSpec& pw, const MediumSpec& m, const CVec3& x) {
  const double k1 = m.k(0);
  const Vec3 k = pw.wavevector(k1);
  const cplx ph = std::exp(kI * (k[0] * x[0] + k[1] * x[1] + k[2] * x[2]));
  FieldPair f;
  const Vec3 e = pw.p.cross(k);
  f.E = e.cast<cplx>() * ph;
  f.H = k.cross(e).cast<cplx>() * (ph / (m.omega * m.mu[0]));
  return f;
}

std::vector<FieldPair> plane_wave_fields(const PlaneWaveSpec& pw, const MediumSpec& m,
                                         const std::vector<CVec3>& pts) {
  std::vector<FieldPair> out;
  out.reserve(pts.size());
  for (const auto& x : pts) out.push_back(plane_wave_field(pw, m, x));
  return out;
}

FieldPair dipole_field(const DipoleSpec& d, const MediumSpec& m, const CVec3& x) {
  const double k = m.k(0);
  const CVec3 R = x - d.z.cast<cplx>();
  const cplx rho = branch_sqrt(cdot(R, R));
  if (std::abs(rho) == 0.0) throw SingularEvaluation("dipole field evaluated at the source");
  const GreenRadial g = green_radial(k, rho, true);
  const CVec3 p = d.p.cast<cplx>();
  FieldPair f;
  f.E = (kI * m.omega * m.mu[0]) * ((k * k * g.phi + g.F1) * p + R * (g.F2 * cdot(R, p)));
  f.H = (k * k) * xcross(R * g.F1, p);
  return f;
}

std::vector<FieldPair> dipole_fields(const DipoleSpec& d, const MediumSpec& m, const std::vector<CVec3>& pts) {
  std::vector<FieldPair> out;
  out.reserve(pts.size());
  for (const auto& x : pts) out.push_back(dipole_field(d, m, x));
  return out;
}

FieldPair manufactured_field(const Vec3& z, const MediumSpec& m, const CVec3& x) {
  DipoleSpec d;
  d.z = z;
  d.p = Vec3(1.0, 0.0, 0.0);
  FieldPair f = dipole_field(d, m, x);
  const cplx s = 1.0 / (kI * m.omega * m.mu[0]);
  f.E *= s;
  f.H *= s;
  return f;
}

void LayeredStack::validate() const {
  medium.validate();
  if (static_cast<int>(heights.size()) != layers() - 1)
    throw ValidationError("interfaces: expected one interface per pair of adjacent layers");
  for (std::size_t j = 1; j < heights.size(); ++j)
    if (!(heights[j] < heights[j - 1])) throw ValidationError("interfaces: heights must decrease");
}

int LayeredStack::layer_of(double x3) const {
  int j = 0;
  while (j < static_cast<int>(heights.size()) && x3 < heights[j]) ++j;
  return j;
}

cplx vertical_wavenumber(const MediumSpec& m, int j, double ky) {
  const double k = m.k(j);
  cplx kz = std::sqrt(cplx(k * k - ky * ky, 0.0));
  if (kz.imag() < 0.0) kz = -kz;
  return kz;
}

Fresnel fresnel_coefficients(const LayeredStack& s, double ky, int from, int to) {
  const MediumSpec& m = s.medium;
  const cplx ka = vertical_wavenumber(m, from, ky), kb = vertical_wavenumber(m, to, ky);
  const cplx dte = m.mu[to] * ka + m.mu[from] * kb;
  const cplx dtm = m.eps[to] * ka + m.eps[from] * kb;
  Fresnel f;
  f.RTE = checked_ratio(m.mu[to] * ka - m.mu[from] * kb, dte, "fresnel: vanishing TE denominator");
  f.RTM = checked_ratio(m.eps[to] * ka - m.eps[from] * kb, dtm, "fresnel: vanishing TM denominator");
  f.TTE = checked_ratio(2.0 * m.mu[to] * ka, dte, "fresnel: vanishing TE denominator");
  f.TTM = checked_ratio(2.0 * m.eps[to] * ka, dtm, "fresnel: vanishing TM denominator");
  return f;
}

LayerCoefficients generalized_reflection(const LayeredStack& s, double ky) {
  const int N = s.layers();
  LayerCoefficients c;
  c.kz.resize(N);
  for (int j = 0; j < N; ++j) c.kz[j] = vertical_wavenumber(s.medium, j, ky);
  c.RgTE.assign(N, 0.0);
  c.RgTM.assign(N, 0.0);
  for (int i = N - 2; i >= 0; --i) {
    const Fresnel dn = fresnel_coefficients(s, ky, i, i + 1);
    const Fresnel up = fresnel_coefficients(s, ky, i + 1, i);
    cplx ph = 0.0;
    if (i + 1 < N - 1) ph = std::exp(2.0 * kI * c.kz[i + 1] * (s.depth(i + 1) - s.depth(i)));
    const cplx rte = c.RgTE[i + 1] * ph, rtm = c.RgTM[i + 1] * ph;
    c.RgTE[i] = dn.RTE + checked_ratio(up.TTE * rte * dn.TTE, 1.0 - up.RTE * rte, "reflection: degenerate TE");
    c.RgTM[i] = dn.RTM + checked_ratio(up.TTM * rtm * dn.TTM, 1.0 - up.RTM * rtm, "reflection: degenerate TM");
  }
  c.ATE.assign(N, 1.0);
  c.ATM.assign(N, 1.0);
  for (int j = 1; j < N; ++j) {
    const Fresnel dn = fresnel_coefficients(s, ky, j - 1, j);
    const Fresnel up = fresnel_coefficients(s, ky, j, j - 1);
    cplx ph = 0.0;
    if (j < N - 1) ph = std::exp(2.0 * kI * c.kz[j] * (s.depth(j) - s.depth(j - 1)));
    const cplx shift = std::exp(kI * (c.kz[j - 1] - c.kz[j]) * s.depth(j - 1));
    c.ATE[j] = checked_ratio(dn.TTE * c.ATE[j - 1] * shift, 1.0 - up.RTE * c.RgTE[j] * ph, "amplitude: degenerate TE");
    c.ATM[j] = checked_ratio(dn.TTM * c.ATM[j - 1] * shift, 1.0 - up.RTM * c.RgTM[j] * ph, "amplitude: degenerate TM");
  }
  return c;
}

std::vector<FieldPair> planar_layer_fields(const LayeredStack& s, const PlaneWaveSpec& pw, int layer,
                                           const std::vector<CVec3>& pts) {
  const MediumSpec& m = s.medium;
  const int N = s.layers();
  const double k1 = m.k(0);
  const Vec3 kv = pw.wavevector(k1);
  const double ky = kv[1];
  const LayerCoefficients c = generalized_reflection(s, ky);
  const cplx E0 = -pw.p[2] * kv[1] + pw.p[1] * kv[2];  // -p3 k_{1,x2} - p2 k_{1,x3}
  const cplx H0 = k1 * k1 * pw.p[0] / (m.omega * m.mu[0]);
  const int j = layer;
  const cplx kz = c.kz[j];
  cplx ad_e, au_e, ad_h, au_h;
  if (j == 0) {
    const cplx ph = std::exp(2.0 * kI * kz * s.depth(0));
    ad_e = ad_h = 1.0;
    au_e = c.RgTE[0] * ph;
    au_h = c.RgTM[0] * ph;
  } else {
    const cplx ph = j < N - 1 ? std::exp(2.0 * kI * kz * s.depth(j)) : cplx(0.0);
    ad_e = c.ATE[j];
    ad_h = c.ATM[j];
    au_e = c.ATE[j] * c.RgTE[j] * ph;
    au_h = c.ATM[j] * c.RgTM[j] * ph;
  }
  const double we = m.omega * m.eps[j], wm = m.omega * m.mu[j];
  std::vector<FieldPair> out;
  out.reserve(pts.size());
  for (const auto& x : pts) {
    const cplx py = std::exp(kI * ky * x[1]);
    const cplx dn = std::exp(-kI * kz * x[2]), upw = std::exp(kI * kz * x[2]);
    const cplx E1 = E0 * py * (ad_e * dn + au_e * upw);
    const cplx E1z = E0 * py * kI * kz * (-ad_e * dn + au_e * upw);
    const cplx E1y = kI * ky * E1;
    const cplx H1 = H0 * py * (ad_h * dn + au_h * upw);
    const cplx H1z = H0 * py * kI * kz * (-ad_h * dn + au_h * upw);
    const cplx H1y = kI * ky * H1;
    FieldPair f;
    f.E = CVec3(E1, kI / we * H1z, -kI / we * H1y);
    f.H = CVec3(H1, -kI / wm * E1z, kI / wm * E1y);
    out.push_back(f);
  }
  return out;
}

std::vector<FieldPair> planar_reference_fields(const LayeredStack& s, const PlaneWaveSpec& pw,
                                               const std::vector<Vec3>& base, const std::vector<CVec3>& pts) {
  std::vector<FieldPair> out(pts.size());
  for (int j = 0; j < s.layers(); ++j) {
    std::vector<CVec3> sel;
    std::vector<std::size_t> idx;
    for (std::size_t q = 0; q < pts.size(); ++q)
      if (s.layer_of(base[q][2]) == j) sel.push_back(pts[q]), idx.push_back(q);
    if (sel.empty()) continue;
    const auto f = planar_layer_fields(s, pw, j, sel);
    for (std::size_t q = 0; q < idx.size(); ++q) out[idx[q]] = f[q];
  }
  return out;
}

std::vector<FieldPair> source_fields(const LayeredStack& s, const IncidenceSpec& inc, int layer,
                                     const std::vector<CVec3>& pts) {
  if (inc.kind == IncidenceKind::PlaneWave) return planar_layer_fields(s, inc.plane, layer, pts);
  if (layer == 0) return dipole_fields(inc.dipole, s.medium, pts);
  FieldPair zero{CVec3::Zero(), CVec3::Zero()};
  return std::vector<FieldPair>(pts.size(), zero);
}

std::vector<CVec3> stretched_nodes(const Interface& gamma) {
  std::vector<CVec3> out(gamma.num_nodes());
  for (int q = 0; q < gamma.num_nodes(); ++q) out[q] = gamma.node(q).xt;
  return out;
}

CVecX tangential_trace(const Interface& gamma, const std::vector<CVec3>& F) {
  CVecX out(2 * gamma.num_nodes());
  for (int q = 0; q < gamma.num_nodes(); ++q) {
    const NodeData& nd = gamma.node(q);
    const CVec3 w = xcross(nd.nu.cast<cplx>(), nd.alpha.cwiseProduct(F[q]));
    contravariant(nd, w, out[2 * q], out[2 * q + 1]);
  }
  return out;
}

BoundaryData boundary_data(const LayeredStack& s, const IncidenceSpec& inc, int j, const Interface& gamma) {
  const auto pts = stretched_nodes(gamma);
  if (inc.kind == IncidenceKind::PlaneWave) {
    const Vec3 kv = inc.plane.wavevector(s.medium.k(0));
    for (const auto& x : pts)
      if (std::abs((kv.cast<cplx>().transpose() * x).value().imag()) > 50.0)
        throw ValidationError("incidence: plane-wave phase growth on the stretched interface exceeds e^50");
  }
  const auto up = source_fields(s, inc, j, pts);
  const auto dn = source_fields(s, inc, j + 1, pts);
  std::vector<CVec3> dE(pts.size()), dH(pts.size());
  for (std::size_t q = 0; q < pts.size(); ++q) {
    dE[q] = up[q].E - dn[q].E;
    dH[q] = up[q].H - dn[q].H;
  }
  return {tangential_trace(gamma, dE), tangential_trace(gamma, dH)};
}

}  // namespace pmlbie
