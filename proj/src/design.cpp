#include "qgf/design.hpp"

#include <cmath>
#include <sstream>

namespace qgf {

namespace {

const double kSqrt2 = std::sqrt(2.0);

CRow even_row(int dim, double norm) {
  return CRow::Constant(dim, cplx{norm / std::sqrt(static_cast<double>(dim)), 0.0});
}

// Unit row vector orthogonal to the unit row u, built from the standard basis
// vector with the largest component outside span(u).
CRow orthogonal_unit(const CRow& u) {
  CRow best;
  double best_norm = -1.0;
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    CRow e = CRow::Zero(u.size());
    e(k) = 1.0;
    const cplx proj = (e * u.adjoint())(0, 0);
    CRow rest = e - proj * u;
    const double nrm = rest.norm();
    if (nrm > best_norm) {
      best_norm = nrm;
      best = rest / nrm;
    }
  }
  return best;
}

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

CMatrix flat_S(const DesignSpec& spec, const Partition& p, SignPairing pairing) {
  CMatrix S = CMatrix::Zero(2, 2);
  if (spec.flat_case == FlatCase::SZero) return S;
  const double n1 = p.v1.norm();
  const double n2 = p.v2.norm();
  const cplx unit = (p.v2 * p.v1.adjoint())(0, 0) / (n1 * n2);
  const double s = spec.s;
  if (spec.flat_case == FlatCase::SameSign) {
    S(0, 0) = s * n1 / n2;
    S(1, 1) = s * n2 / n1;
    S(1, 0) = s * unit;
  } else {
    const double rho = (kSqrt2 + pairing.ratio * sgn(s)) * n1 / n2;
    S(0, 0) = s * rho;
    S(1, 1) = -s / rho;
    S(1, 0) = double(pairing.s21) * std::abs(s) * unit;
  }
  S(0, 1) = std::conj(S(1, 0));
  return S;
}

nlohmann::json row_to_json(const CRow& row) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < row.size(); ++i) out.push_back({row(i).real(), row(i).imag()});
  return out;
}

CRow row_from_json(const nlohmann::json& j) {
  CRow row(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& e = j[i];
    row(static_cast<Eigen::Index>(i)) =
        e.is_number() ? cplx{e.get<double>(), 0.0} : cplx{e.at(0).get<double>(), e.at(1).get<double>()};
  }
  return row;
}

}  // namespace

Layout design_maximal(cplx alpha, int dim_v, int dim_w, double s, MaximalVariant variant, double V) {
  if (std::abs(std::abs(alpha) - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg << "|alpha| must be 1, got " << std::abs(alpha);
    throw Error(ErrorCode::BadAlpha, msg.str());
  }
  if (dim_v < 1 || dim_w < 1) throw Error(ErrorCode::InvalidSpec, "need at least one controller and one drain");
  if (!(V > 0.0)) throw Error(ErrorCode::InvalidSpec, "controller potential must be positive");

  Partition p;
  p.V = V;
  p.v1 = even_row(dim_v, 1.0 / kSqrt2);
  p.w1 = even_row(dim_w, 1.0 / kSqrt2);
  p.v2 = alpha * p.v1;
  p.w2 = -alpha * p.w1;

  double d11 = 0.0, d22 = 0.0;
  switch (variant) {
    case MaximalVariant::Zero: s = 0.0; break;
    case MaximalVariant::Plus: d11 = d22 = 1.0; break;
    case MaximalVariant::PmUpper: d11 = 1.0 + kSqrt2; d22 = 1.0 - kSqrt2; break;
    case MaximalVariant::PmLower: d11 = 1.0 - kSqrt2; d22 = 1.0 + kSqrt2; break;
  }
  CMatrix S(2, 2);
  S << s * d11, s * std::conj(alpha), s * alpha, s * d22;
  if (variant == MaximalVariant::Zero) S.setZero();
  return standard_layout(p, S);
}

Partition design_partition(const DesignSpec& spec) {
  if (spec.controllers < 1 || spec.drains < 1) {
    throw Error(ErrorCode::InvalidSpec, "need at least one controller and one drain");
  }
  if (spec.v1.size() != spec.controllers || spec.w1.size() != spec.drains) {
    throw Error(ErrorCode::InvalidSpec, "v1/w1 lengths must match the controller/drain counts");
  }
  if (!(spec.V > 0.0)) throw Error(ErrorCode::InvalidSpec, "controller potential must be positive");
  const double z1 = spec.v1.squaredNorm();
  if (!(z1 > 0.0) || std::abs(spec.lambda) == 0.0 || !(spec.w1.norm() > 0.0)) {
    throw Error(ErrorCode::InvalidSpec, "v1, lambda and w1 must be nonzero");
  }

  Partition p;
  p.V = spec.V;
  p.v1 = spec.v1;
  p.v2 = spec.lambda * spec.v1;
  const double z2 = p.v2.squaredNorm();
  const CRow w1_dir = spec.w1 / spec.w1.norm();

  if (spec.flat_case == FlatCase::OppositeSign) {
    if (3.0 * z1 - 1.0 <= 0.0 || 3.0 * z2 - 1.0 <= 0.0) {
      std::ostringstream msg;
      msg << "opposite-sign case needs ||v_i||^2 > 1/3, got " << z1 << " and " << z2;
      throw Error(ErrorCode::InfeasibleNegCase, msg.str());
    }
    p.w1 = std::sqrt(3.0 * z1 - 1.0) * w1_dir;
  } else {
    p.w1 = spec.w1;
  }

  const double x = p.w1.squaredNorm();
  const double head = 1.0 + x - z1;
  if (std::abs(head) < 1e-14) throw Error(ErrorCode::Infeasible, "1 + ||w1||^2 - ||v1||^2 vanishes");
  const double y = 4.0 * z1 * z2 / head - 1.0 + z2;
  if (!(y > 0.0)) {
    std::ostringstream msg;
    msg << "norm condition forces ||w2||^2 = " << y << " <= 0";
    throw Error(ErrorCode::Infeasible, msg.str());
  }

  // w2 = alpha w1/|w1| + beta e_perp with w2 w1^* = -v2 v1^* = -lambda ||v1||^2.
  const cplx along = -spec.lambda * z1 / p.w1.norm();
  double beta2 = y - std::norm(along);
  if (beta2 < -1e-12 * std::max(1.0, y)) {
    std::ostringstream msg;
    msg << "|w2 w1^*| would exceed ||w1|| ||w2|| (deficit " << -beta2 << ")";
    throw Error(ErrorCode::Infeasible, msg.str());
  }
  beta2 = std::max(beta2, 0.0);
  p.w2 = along * w1_dir;
  if (beta2 > 1e-12 * std::max(1.0, y)) {
    if (spec.drains < 2) {
      throw Error(ErrorCode::Infeasible, "w2 needs a component orthogonal to w1 but there is one drain");
    }
    p.w2 += std::sqrt(beta2) * std::polar(1.0, spec.w2_phase) * orthogonal_unit(w1_dir);
  }
  return p;
}

Layout design_flat(const DesignSpec& spec, const Tolerances& tol) {
  if (spec.flat_case == FlatCase::Fail) throw Error(ErrorCode::InvalidSpec, "no case requested");
  if (spec.flat_case != FlatCase::SZero && spec.s == 0.0) {
    throw Error(ErrorCode::InvalidSpec, "same_sign/opposite_sign designs need a nonzero scale s");
  }
  const Partition p = design_partition(spec);
  const std::vector<SignPairing> pairings =
      spec.flat_case == FlatCase::OppositeSign
          ? std::vector<SignPairing>{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}
          : std::vector<SignPairing>{{1, 1}};
  for (const auto& pairing : pairings) {
    const CMatrix S = flat_S(spec, p, pairing);
    if (check_flat(p, S, tol).verdict) return standard_layout(p, S);
  }
  throw Error(ErrorCode::Infeasible, "no construction passes the flat-band check");
}

std::vector<SignPairing> admissible_pairings(const DesignSpec& spec, const Tolerances& tol) {
  std::vector<SignPairing> out;
  const Partition p = design_partition(spec);
  for (SignPairing pairing : {SignPairing{1, 1}, SignPairing{1, -1}, SignPairing{-1, 1}, SignPairing{-1, -1}}) {
    if (check_flat(p, flat_S(spec, p, pairing), tol).verdict) out.push_back(pairing);
  }
  return out;
}

nlohmann::json to_json(const DesignSpec& spec) {
  nlohmann::json j;
  j["controllers"] = spec.controllers;
  j["drains"] = spec.drains;
  j["case"] = std::string(to_string(spec.flat_case));
  j["v1"] = row_to_json(spec.v1);
  j["lambda"] = {spec.lambda.real(), spec.lambda.imag()};
  j["w1"] = row_to_json(spec.w1);
  j["w2_phase"] = spec.w2_phase;
  j["s"] = spec.s;
  j["V"] = spec.V;
  return j;
}

DesignSpec design_spec_from_json(const nlohmann::json& j) {
  try {
    DesignSpec spec;
    spec.controllers = j.at("controllers").get<int>();
    spec.drains = j.at("drains").get<int>();
    const auto name = j.at("case").get<std::string>();
    if (name == "S_zero") spec.flat_case = FlatCase::SZero;
    else if (name == "same_sign") spec.flat_case = FlatCase::SameSign;
    else if (name == "opposite_sign") spec.flat_case = FlatCase::OppositeSign;
    else throw Error(ErrorCode::ParseError, "unknown design case \"" + name + "\"");
    spec.v1 = row_from_json(j.at("v1"));
    spec.lambda = {j.at("lambda").at(0).get<double>(), j.at("lambda").at(1).get<double>()};
    spec.w1 = row_from_json(j.at("w1"));
    spec.w2_phase = j.value("w2_phase", 0.0);
    spec.s = j.value("s", 0.0);
    spec.V = j.value("V", 1.0);
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("design block: ") + e.what());
  }
}

}  // namespace qgf
