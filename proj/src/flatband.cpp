#include "qgf/flatband.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qgf/scattering.hpp"

namespace qgf {

namespace {

// a b^* for row vectors.
cplx overlap(const CRow& a, const CRow& b) {
  cplx sum{0.0, 0.0};
  for (Eigen::Index i = 0; i < a.size(); ++i) sum += a(i) * std::conj(b(i));
  return sum;
}

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

}  // namespace

CMatrix Partition::T() const {
  CMatrix T(2, controllers() + drains());
  T.block(0, 0, 1, controllers()) = v1;
  T.block(1, 0, 1, controllers()) = v2;
  T.block(0, controllers(), 1, drains()) = w1;
  T.block(1, controllers(), 1, drains()) = w2;
  return T;
}

FlatbandInput make_partition(const STCoupling& c, const LineConfig& lines, const Tolerances& tol) {
  require_valid(c, tol);
  require_valid(lines, c.n);
  if (c.r != 2) {
    throw Error(ErrorCode::UnsupportedLayout,
                "flat-band check requires r=2, got r=" + std::to_string(c.r));
  }
  const int in = lines.input_index();
  const int out = lines.output_index();
  if (!((in == 0 && out == 1) || (in == 1 && out == 0))) {
    throw Error(ErrorCode::UnsupportedLayout,
                "flat-band check requires input and output on the first two ST coordinates");
  }

  FlatbandInput res;
  CMatrix S = c.S;
  CMatrix T = c.T;
  if (in == 1) {
    S.row(0).swap(S.row(1));
    S.col(0).swap(S.col(1));
    T.row(0).swap(T.row(1));
  }

  std::vector<Eigen::Index> ctrl, drain;
  double V = 0.0;
  for (int j = 2; j < c.n; ++j) {
    const Line& l = lines.lines[static_cast<std::size_t>(j)];
    if (l.role == Role::Controller) {
      if (!ctrl.empty() && l.V != V) {
        std::ostringstream msg;
        msg << "controllers carry different potentials (" << V << " and " << l.V << ")";
        throw Error(ErrorCode::ConfigMismatch, msg.str());
      }
      V = l.V;
      ctrl.push_back(j - 2);
    } else {
      drain.push_back(j - 2);
    }
  }

  Partition& p = res.partition;
  p.V = V;
  const auto nc = static_cast<Eigen::Index>(ctrl.size());
  const auto nd = static_cast<Eigen::Index>(drain.size());
  p.v1.resize(nc);
  p.v2.resize(nc);
  p.w1.resize(nd);
  p.w2.resize(nd);
  for (Eigen::Index k = 0; k < nc; ++k) {
    p.v1(k) = T(0, ctrl[static_cast<std::size_t>(k)]);
    p.v2(k) = T(1, ctrl[static_cast<std::size_t>(k)]);
  }
  for (Eigen::Index k = 0; k < nd; ++k) {
    p.w1(k) = T(0, drain[static_cast<std::size_t>(k)]);
    p.w2(k) = T(1, drain[static_cast<std::size_t>(k)]);
  }
  res.S = S;
  return res;
}

Layout standard_layout(const Partition& p, const CMatrix& S) {
  Layout out;
  out.coupling = make_st(S, p.T());
  out.lines.lines = {Line::input(), Line::output()};
  for (int j = 0; j < p.controllers(); ++j) out.lines.lines.push_back(Line::controller(p.V));
  for (int j = 0; j < p.drains(); ++j) out.lines.lines.push_back(Line::drain());
  return out;
}

CoefficientSet coefficients(const Partition& p, const CMatrix& S) {
  const double x = p.w1.squaredNorm();
  const double y = p.w2.squaredNorm();
  const double z1 = p.v1.squaredNorm();
  const double z2 = p.v2.squaredNorm();
  const cplx vv = overlap(p.v2, p.v1);
  const cplx ww = overlap(p.w2, p.w1);
  const double s11 = S(0, 0).real();
  const double s22 = S(1, 1).real();
  const cplx s21 = S(1, 0);

  CoefficientSet k;
  k.a = 1.0 + x + y + x * y - std::norm(ww);
  k.b = z1 + z2 + x * z2 + z1 * y - 2.0 * (vv * std::conj(ww)).real();
  k.c = -z1 * z2 + std::norm(vv);
  k.d = -s11 * z2 - s22 * z1 + 2.0 * (s21 * std::conj(vv)).real();
  k.f = s11 + s22 + s11 * y + s22 * x - 2.0 * (s21 * std::conj(ww)).real();
  k.g = -(s11 * s22 - std::norm(s21));
  return k;
}

std::string_view to_string(FlatCase c) {
  switch (c) {
    case FlatCase::SZero: return "S_zero";
    case FlatCase::SameSign: return "same_sign";
    case FlatCase::OppositeSign: return "opposite_sign";
    case FlatCase::Fail: return "fail";
  }
  return "fail";
}

FlatbandReport check_flat(const Partition& p, const CMatrix& S, const Tolerances& tol) {
  if (S.rows() != 2 || S.cols() != 2) throw Error(ErrorCode::DimensionMismatch, "S must be 2x2");
  if (hermitian_residual(S) > tol.hermitian) throw Error(ErrorCode::NonHermitianS, "S is not Hermitian");
  if (p.v1.size() != p.v2.size() || p.w1.size() != p.w2.size()) {
    throw Error(ErrorCode::DimensionMismatch, "partition rows differ in length");
  }

  const double eps = tol.flat;
  const double inf = std::numeric_limits<double>::infinity();
  const double x = p.w1.squaredNorm();
  const double y = p.w2.squaredNorm();
  const double z1 = p.v1.squaredNorm();
  const double z2 = p.v2.squaredNorm();
  const cplx vv = overlap(p.v2, p.v1);
  const cplx ww = overlap(p.w2, p.w1);

  FlatbandReport rep;
  rep.coeffs = coefficients(p, S);
  const CoefficientSet& k = rep.coeffs;

  rep.residual_diagonality = std::abs(vv + ww);
  rep.residual_lin_dep = std::abs(z1 * z2 - std::norm(vv));
  rep.residual_simplified = std::abs((1.0 + x - z1) * (1.0 + y - z2) - 4.0 * z1 * z2);
  rep.residual_c = std::abs(k.c);
  rep.residual_d = std::abs(k.d);
  rep.residual_g = std::abs(k.g);
  rep.residual_ab = std::abs(std::abs(k.a) - std::abs(k.b));
  rep.v_overlap_nonzero = std::abs(vv) > eps;
  rep.residual_fb = (rep.v_overlap_nonzero && k.b != 0.0) ? std::abs(k.f / k.b - S(1, 0) / vv) : inf;
  rep.predicted_P = passband_value(p);

  const double s11 = S(0, 0).real();
  const double s22 = S(1, 1).real();
  const cplx s21 = S(1, 0);
  const double n1 = std::sqrt(z1);
  const double n2 = std::sqrt(z2);

  if (max_abs(S) < eps) {
    rep.flat_case = FlatCase::SZero;
  } else if (std::abs(s11) < eps || std::abs(s22) < eps || n1 == 0.0 || n2 == 0.0) {
    rep.flat_case = FlatCase::Fail;
  } else {
    const cplx unit = vv / (n1 * n2);
    if (s11 * s22 > 0.0) {
      const bool ratio = std::abs(std::sqrt(s11 / s22) - n1 / n2) < eps;
      const bool off = std::abs(s21 - sgn(s11) * std::sqrt(s11 * s22) * unit) < eps;
      rep.flat_case = (ratio && off) ? FlatCase::SameSign : FlatCase::Fail;
    } else {
      const bool vw = std::abs(x - (3.0 * z1 - 1.0)) < eps && std::abs(y - (3.0 * z2 - 1.0)) < eps;
      const double ratio = std::sqrt(std::abs(s11) / std::abs(s22));
      const double scale = std::sqrt(std::abs(s11 * s22));
      for (int sign : {+1, -1}) {
        if (rep.ratio_branch == 0 &&
            std::abs(ratio - (std::sqrt(2.0) + sign * sgn(s11)) * n1 / n2) < eps) {
          rep.ratio_branch = sign;
        }
        if (rep.s21_branch == 0 && std::abs(s21 - double(sign) * scale * unit) < eps) {
          rep.s21_branch = sign;
        }
      }
      rep.flat_case = (vw && rep.ratio_branch != 0 && rep.s21_branch != 0) ? FlatCase::OppositeSign
                                                                           : FlatCase::Fail;
    }
  }

  const double worst = std::max({rep.residual_diagonality, rep.residual_lin_dep,
                                 rep.residual_simplified, rep.residual_c, rep.residual_d,
                                 rep.residual_g, rep.residual_ab, rep.residual_fb});
  rep.verdict = rep.v_overlap_nonzero && worst < eps && rep.flat_case != FlatCase::Fail;
  return rep;
}

nlohmann::json to_json(const FlatbandReport& r) {
  // JSON has no infinity; an undefined residual is written as null.
  auto num = [](double v) -> nlohmann::json {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
  };
  nlohmann::json j;
  j["verdict"] = r.verdict;
  j["case"] = std::string(to_string(r.flat_case));
  j["predicted_P"] = num(r.predicted_P);
  j["residual_diagonality"] = num(r.residual_diagonality);
  j["residual_lin_dep"] = num(r.residual_lin_dep);
  j["residual_simplified"] = num(r.residual_simplified);
  j["residual_c"] = num(r.residual_c);
  j["residual_d"] = num(r.residual_d);
  j["residual_g"] = num(r.residual_g);
  j["residual_ab"] = num(r.residual_ab);
  j["residual_fb"] = num(r.residual_fb);
  j["v_overlap_nonzero"] = r.v_overlap_nonzero;
  j["ratio_branch"] = r.ratio_branch;
  j["s21_branch"] = r.s21_branch;
  j["coefficients"] = {{"a", r.coeffs.a}, {"b", r.coeffs.b}, {"c", r.coeffs.c},
                       {"d", r.coeffs.d}, {"f", r.coeffs.f}, {"g", r.coeffs.g}};
  return j;
}

double passband_value(const Partition& p) {
  const double x = p.w1.squaredNorm();
  const double y = p.w2.squaredNorm();
  const double vv = std::abs(overlap(p.v2, p.v1));
  const double ratio = 2.0 * vv / (1.0 + x + y + x * y - vv * vv);
  return ratio * ratio;
}

double analytic_P_above_V(const Partition& p, cplx s21, double V, double E) {
  const double x = p.w1.squaredNorm();
  const double y = p.w2.squaredNorm();
  const double vv = std::abs(overlap(p.v2, p.v1));
  const double ww2 = std::norm(overlap(p.w2, p.w1));
  const double prefactor = std::pow(2.0 * vv / ((1.0 + x) * (1.0 + y) - ww2), 2);
  const double kappa = std::norm(s21) / (p.v1.squaredNorm() * p.v2.squaredNorm());
  const double tau = std::sqrt(1.0 - V / E);
  return prefactor * (std::pow(1.0 - tau, 2) + kappa / E) / (std::pow(1.0 + tau, 2) + kappa / E);
}

std::vector<double> open_band_grid(double V, int points) {
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(std::max(points, 0)));
  for (int j = 1; j <= points; ++j) grid.push_back(V * j / (points + 1.0));
  return grid;
}

FlatnessStats numerical_flatness(const STCoupling& c, const LineConfig& lines,
                                 std::span<const double> grid, const Tolerances& tol) {
  FlatnessStats s;
  s.max_P = -std::numeric_limits<double>::infinity();
  s.min_P = std::numeric_limits<double>::infinity();
  for (double E : grid) {
    const double P = transmission(c, lines, E, tol).P;
    s.max_P = std::max(s.max_P, P);
    s.min_P = std::min(s.min_P, P);
  }
  s.deviation = s.max_P - s.min_P;
  return s;
}

EdgeSlopeReport edge_slope(const STCoupling& c, const LineConfig& lines, double V,
                           std::span<const double> eps_list, const Tolerances& tol) {
  EdgeSlopeReport rep;
  for (double eps : eps_list) {
    const double E = V * (1.0 + eps);
    const double h = 0.1 * eps * V;
    const double up = transmission(c, lines, E + h, tol).P;
    const double down = transmission(c, lines, E - h, tol).P;
    rep.eps.push_back(eps);
    rep.slopes.push_back((up - down) / (2.0 * h));
  }
  rep.all_negative = std::all_of(rep.slopes.begin(), rep.slopes.end(), [](double s) { return s < 0.0; });
  rep.divergence_law = rep.all_negative && rep.slopes.size() >= 2;
  for (std::size_t i = 0; i + 1 < rep.slopes.size(); ++i) {
    const double ratio = std::abs(rep.slopes[i + 1]) / std::abs(rep.slopes[i]);
    const double expected = std::sqrt(rep.eps[i] / rep.eps[i + 1]);
    const double rel = ratio / expected;
    if (!(rel >= 0.2 && rel <= 2.0)) rep.divergence_law = false;
  }
  return rep;
}

DiagonalityCheck r3_diagonality_check(const CMatrix& T1, const CMatrix& T2, double tol) {
  if (T1.rows() != 2 || T2.cols() != T1.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "T1 must be 2 x m and T2 must have m columns");
  }
  const auto m = T1.cols();
  const CMatrix G = CMatrix::Identity(m, m) + T2.adjoint() * T2;
  DiagonalityCheck out;
  out.limit = T1 * G.partialPivLu().solve(CMatrix(T1.adjoint()));
  out.off_diagonal = std::max(std::abs(out.limit(0, 1)), std::abs(out.limit(1, 0)));
  out.diagonal = out.off_diagonal < tol;
  return out;
}

}  // namespace qgf
