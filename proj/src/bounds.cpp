#include "rcbound/bounds.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

#include "rcbound/errors.hpp"
#include "rcbound/fisher.hpp"
#include "rcbound/transforms.hpp"

namespace rcb {

namespace {

std::string num(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

BoundResult from_information(const Extended& info, std::string statement) {
  BoundResult r;
  r.information = info;
  r.statement_norm = std::move(statement);
  if (info.is_infinite()) {
    r.reason = "information is infinite";
  } else if (!(info.value() > 0.0)) {
    r.reason = "information is zero";
  } else {
    r.has_bound = true;
    r.bound = 1.0 / info.value();
  }
  return r;
}

}  // namespace

double rosenthal_bound(double p) {
  if (!(p >= 2.0)) throw DomainError("rosenthal_bound requires p >= 2, got " + num(p));
  if (p == 2.0) return 1.0;
  if (std::isinf(p)) throw DomainError("rosenthal_bound requires finite p");
  return 1.77638 * p / (std::numbers::e * std::log(p));
}

double kb_constant(double B) {
  if (!(B > 2.0) || std::isinf(B)) throw DomainError("kb_constant requires 2 < B < inf, got " + num(B));
  return 1.7768 * B / (std::numbers::e * std::log(B));
}

BoundResult lower_bound_lp(const Family& family, double theta0, double q) {
  if (!(q > 1.0) || !(q <= 2.0)) throw DomainError("lower_bound_lp requires q in (1, 2], got " + num(q));
  const double p = q / (q - 1.0);
  const double R = rosenthal_bound(p);
  const auto info = fisher_p(family, theta0, p);
  BoundResult r = from_information(info.value, "L_" + num(q));
  r.constant_name = "R(p)";
  r.constant = R;
  if (r.has_bound) r.bound = 1.0 / (R * info.value.value());
  return r;
}

BoundResult lower_bound_gls(FamilyPtr family, double theta0, const PsiFunction& psi, std::vector<double> p_grid) {
  const auto info = fisher_gls(family, theta0, psi, std::move(p_grid));
  BoundResult r = from_information(info.value, "G'(psi_R)");
  r.constant_name = "1";
  const double B = psi.support_B();
  if (r.has_bound && std::isfinite(B) && B > 2.0) {
    const double K = kb_constant(B);
    r.finite_b_bound = 1.0 / (K * info.value.value());
    r.finite_b_statement_norm = "G'(psi)";
    r.constant_name = "K(B)";
    r.constant = K;
  }
  return r;
}

BoundResult lower_bound_bphi(FamilyPtr family, double theta0, const PhiFunction& phi, std::vector<double> lambda_grid) {
  const auto info = fisher_bphi(family, theta0, phi, lambda_grid);
  BoundResult r = from_information(info.value, "B'(bar phi)");
  r.constant_name = "1";
  const PhiBar bar(phi);
  bool diverged = false;
  for (double l : info.norm.resolved_grid()) diverged = diverged || bar.evaluate(l).diverged;
  r.phi_bar_diverged = diverged;
  return r;
}

BoundResult general_lower_bound(const Extended& clt_norm_of_score) {
  BoundResult r = from_information(clt_norm_of_score, "Y'");
  r.constant_name = "1";
  return r;
}

}  // namespace rcb
