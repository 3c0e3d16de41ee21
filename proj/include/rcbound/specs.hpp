#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "rcbound/functions.hpp"
#include "rcbound/norms.hpp"

namespace rcb {

/// `name(arg, arg, ...)` split at top-level commas; a bare `name` has no args.
struct Call {
  std::string name;
  std::vector<std::string> args;
};

Call parse_call(std::string_view text);
/// Decimal number; "inf" and "+inf" accepted.
double parse_number(std::string_view text);

/// Grid expressions: "1,2,4", "geom(lo,hi,count)", "lin(lo,hi,count)",
/// "pow2(lo,hi)" (powers of two in [lo, hi]).
std::vector<double> parse_grid(std::string_view text);
std::vector<std::size_t> parse_n_grid(std::string_view text);

/// A generating function given either as an expression or as a table.
struct FunctionRef {
  std::string expr;
  std::vector<double> x;
  std::vector<double> values;

  bool is_table() const { return expr.empty(); }
  bool empty() const { return expr.empty() && x.empty(); }
  std::string describe() const;
};

/// psi_m(m) | const(c,B) | power(Q) | natural(family) | psi_R(<psi>) | psi_phi(<phi>).
/// `natural` uses theta_grid (empty: theta-free shift evaluation).
PsiFunction parse_psi(std::string_view expr, const std::vector<double>& theta_grid = {});
/// phi_2 | power(Q) | quadratic(c) | log_cosh | natural(family) | bar(<phi>).
PhiFunction parse_phi(std::string_view expr, const std::vector<double>& theta_grid = {});
PsiFunction resolve_psi(const FunctionRef& ref, const std::vector<double>& theta_grid = {});
PhiFunction resolve_phi(const FunctionRef& ref, const std::vector<double>& theta_grid = {});

/// lp(p) | lorentz(p,q) | gls(<psi>) | bphi(<phi>); the grid applies to gls/bphi.
NormSpec parse_norm(std::string_view expr, const std::vector<double>& grid = {},
                    const std::vector<double>& theta_grid = {});

}  // namespace rcb
