#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rcbound/extended.hpp"
#include "rcbound/families.hpp"
#include "rcbound/norms.hpp"
#include "rcbound/random.hpp"

namespace rcb {

enum class FisherMethod { Quadrature, MonteCarlo };

std::string_view to_string(FisherMethod m);

/// Information of one observation in a chosen norm: the norm of the score
/// l(eta, theta) under g(., theta).
struct FisherReport {
  std::string family;
  double theta = 0.0;
  NormSpec norm;
  Extended value = Extended::finite(0.0);
  FisherMethod method = FisherMethod::Quadrature;
  std::size_t reps = 0;
  double error_estimate = 0.0;
  // GLS: p attaining the sup; Bphi: binding lambda.
  double argopt = 0.0;
};

/// i_p(theta) = [int |l|^p g dx]^{1/p} by quadrature; infinite on divergence.
FisherReport fisher_p(const Family& family, double theta, double p);
/// Monte Carlo version: plug-in L_p norm of `reps` score draws, with a
/// delta-method standard error.
FisherReport fisher_p_mc(const Family& family, double theta, double p, std::size_t reps, const Stream& stream,
                         int workers = 1);
/// ||l(eta, theta)||_{G(psi)} from the quadrature moment curve.
FisherReport fisher_gls(FamilyPtr family, double theta, const PsiFunction& psi, std::vector<double> p_grid = {});
/// ||l(eta, theta)||_{B(phi)}; throws DomainError naming lambda when the
/// score mgf diverges (Cramer condition).
FisherReport fisher_bphi(FamilyPtr family, double theta, const PhiFunction& phi, std::vector<double> lambda_grid = {});

struct AggregatedInformation {
  double aggregated = 0.0;  // K * sqrt(sum i_k^2)
  double naive = 0.0;       // sum i_k
};

AggregatedInformation sample_fisher_agg(std::span<const double> informations, double K);

}  // namespace rcb
