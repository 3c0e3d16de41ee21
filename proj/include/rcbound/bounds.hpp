#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rcbound/extended.hpp"
#include "rcbound/families.hpp"
#include "rcbound/functions.hpp"

namespace rcb {

/// R(p): 1 at p = 2, else 1.77638 p / (e ln p). Requires p >= 2.
double rosenthal_bound(double p);
/// K(B) = 1.7768 B / (e ln B) for 2 < B < inf.
double kb_constant(double B);

/// Right-hand side of a lower bound: sqrt(n) ||theta_hat - theta_0|| >= bound
/// in `statement_norm`, for every regular unbiased estimator.
struct BoundResult {
  bool has_bound = false;
  double bound = 0.0;
  std::string statement_norm;
  Extended information = Extended::finite(0.0);
  std::string constant_name;  // "R(p)", "K(B)" or "1"
  double constant = 1.0;
  // GLS with B < inf: 1 / (K(B) i) stated in G'(psi).
  std::optional<double> finite_b_bound;
  std::optional<std::string> finite_b_statement_norm;
  // Bphi: whether bar(phi) diverged somewhere on the lambda grid.
  std::optional<bool> phi_bar_diverged;
  std::string reason;  // why there is no bound
};

/// 1 / (R(p) i_p(theta_0)) with p = q / (q - 1), q in (1, 2].
BoundResult lower_bound_lp(const Family& family, double theta0, double q);
/// 1 / i_(psi)(theta_0) in G'(psi_R); adds the K(B) form when B < inf.
BoundResult lower_bound_gls(FamilyPtr family, double theta0, const PsiFunction& psi, std::vector<double> p_grid = {});
/// 1 / i_(phi)(theta_0) in B'(bar phi).
BoundResult lower_bound_bphi(FamilyPtr family, double theta0, const PhiFunction& phi,
                             std::vector<double> lambda_grid = {});
/// 1 / ||l||_CLT(Y), the master bound.
BoundResult general_lower_bound(const Extended& clt_norm_of_score);

}  // namespace rcb
