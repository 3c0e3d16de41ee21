#include "rcbound/specs.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "rcbound/errors.hpp"
#include "rcbound/families.hpp"
#include "rcbound/transforms.hpp"

namespace rcb {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

void expect_args(const Call& c, std::size_t n) {
  if (c.args.size() != n)
    throw UsageError("'" + c.name + "' takes " + std::to_string(n) + " argument(s), got " + std::to_string(c.args.size()));
}

}  // namespace

Call parse_call(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw UsageError("empty expression");
  Call c;
  const auto open = text.find('(');
  if (open == std::string_view::npos) {
    c.name = std::string(text);
    return c;
  }
  if (text.back() != ')') throw UsageError("unbalanced parentheses in '" + std::string(text) + "'");
  c.name = std::string(trim(text.substr(0, open)));
  const std::string_view inner = text.substr(open + 1, text.size() - open - 2);
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= inner.size(); ++i) {
    const char ch = i < inner.size() ? inner[i] : ',';
    if (ch == '(') ++depth;
    if (ch == ')' && --depth < 0) throw UsageError("unbalanced parentheses in '" + std::string(text) + "'");
    if (ch == ',' && depth == 0) {
      const auto arg = trim(inner.substr(start, i - start));
      if (arg.empty()) {
        if (!(i == inner.size() && c.args.empty() && trim(inner).empty()))
          throw UsageError("empty argument in '" + std::string(text) + "'");
      } else {
        c.args.emplace_back(arg);
      }
      start = i + 1;
    }
  }
  if (depth != 0) throw UsageError("unbalanced parentheses in '" + std::string(text) + "'");
  return c;
}

double parse_number(std::string_view text) {
  text = trim(text);
  if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw UsageError("not a number: '" + std::string(text) + "'");
  return v;
}

std::vector<double> parse_grid(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw UsageError("empty grid");
  if (std::isalpha(static_cast<unsigned char>(text.front()))) {
    const Call c = parse_call(text);
    if (c.name == "geom" || c.name == "lin") {
      expect_args(c, 3);
      const double lo = parse_number(c.args[0]), hi = parse_number(c.args[1]);
      const double count = parse_number(c.args[2]);
      if (!(count >= 1.0) || count != std::floor(count)) throw UsageError("grid count must be a positive integer");
      return c.name == "geom" ? geometric_grid(lo, hi, static_cast<std::size_t>(count))
                              : linear_grid(lo, hi, static_cast<std::size_t>(count));
    }
    if (c.name == "pow2") {
      expect_args(c, 2);
      const double lo = parse_number(c.args[0]), hi = parse_number(c.args[1]);
      if (!(lo >= 1.0) || !(hi >= lo)) throw DomainError("pow2 grid needs 1 <= lo <= hi");
      std::vector<double> out;
      for (double v = 1.0; v <= hi; v *= 2.0)
        if (v >= lo) out.push_back(v);
      return out;
    }
    throw UsageError("unknown grid form '" + c.name + "'");
  }
  std::vector<double> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ',') {
      out.push_back(parse_number(text.substr(start, i - start)));
      start = i + 1;
    }
  }
  if (!std::is_sorted(out.begin(), out.end())) throw UsageError("grid must be sorted ascending");
  return out;
}

std::vector<std::size_t> parse_n_grid(std::string_view text) {
  std::vector<std::size_t> out;
  for (double v : parse_grid(text)) {
    const double r = std::round(v);
    if (!(r >= 1.0) || std::abs(r - v) > 1e-9 * std::max(1.0, v))
      throw UsageError("sample sizes must be positive integers");
    out.push_back(static_cast<std::size_t>(r));
  }
  return out;
}

std::string FunctionRef::describe() const {
  if (!is_table()) return expr;
  return "table[" + std::to_string(x.size()) + "]";
}

PsiFunction parse_psi(std::string_view expr, const std::vector<double>& theta_grid) {
  const Call c = parse_call(expr);
  if (c.name == "psi_m") {
    expect_args(c, 1);
    return PsiFunction::psi_m(parse_number(c.args[0]));
  }
  if (c.name == "const" || c.name == "constant") {
    if (c.args.size() == 1) return PsiFunction::constant(parse_number(c.args[0]), std::numeric_limits<double>::infinity());
    expect_args(c, 2);
    return PsiFunction::constant(parse_number(c.args[0]), parse_number(c.args[1]));
  }
  if (c.name == "power") {
    expect_args(c, 1);
    return PsiFunction::power(parse_number(c.args[0]));
  }
  if (c.name == "natural") {
    expect_args(c, 1);
    return natural_psi(resolve_family(c.args[0]), theta_grid);
  }
  if (c.name == "psi_R") {
    expect_args(c, 1);
    return psi_R(parse_psi(c.args[0], theta_grid));
  }
  if (c.name == "psi_phi") {
    expect_args(c, 1);
    return psi_from_phi(parse_phi(c.args[0], theta_grid));
  }
  throw UsageError("unknown psi function '" + c.name + "'");
}

PhiFunction parse_phi(std::string_view expr, const std::vector<double>& theta_grid) {
  const Call c = parse_call(expr);
  if (c.name == "phi_2") {
    expect_args(c, 0);
    return PhiFunction::phi_2();
  }
  if (c.name == "power") {
    expect_args(c, 1);
    return PhiFunction::power(parse_number(c.args[0]));
  }
  if (c.name == "quadratic") {
    expect_args(c, 1);
    return PhiFunction::quadratic(parse_number(c.args[0]));
  }
  if (c.name == "log_cosh") {
    expect_args(c, 0);
    return PhiFunction::log_cosh();
  }
  if (c.name == "natural") {
    expect_args(c, 1);
    return natural_phi(resolve_family(c.args[0]), theta_grid);
  }
  if (c.name == "bar") {
    expect_args(c, 1);
    return phi_bar(parse_phi(c.args[0], theta_grid)).as_phi();
  }
  throw UsageError("unknown phi function '" + c.name + "'");
}

PsiFunction resolve_psi(const FunctionRef& ref, const std::vector<double>& theta_grid) {
  if (ref.empty()) throw UsageError("psi function is required");
  if (ref.is_table()) return PsiFunction::grid(ref.x, ref.values);
  return parse_psi(ref.expr, theta_grid);
}

PhiFunction resolve_phi(const FunctionRef& ref, const std::vector<double>& theta_grid) {
  if (ref.empty()) throw UsageError("phi function is required");
  if (ref.is_table()) return PhiFunction::grid(ref.x, ref.values);
  return parse_phi(ref.expr, theta_grid);
}

NormSpec parse_norm(std::string_view expr, const std::vector<double>& grid, const std::vector<double>& theta_grid) {
  const Call c = parse_call(expr);
  if (c.name == "lp") {
    expect_args(c, 1);
    return NormSpec::lp(parse_number(c.args[0]));
  }
  if (c.name == "lorentz") {
    expect_args(c, 2);
    return NormSpec::lorentz(parse_number(c.args[0]), parse_number(c.args[1]));
  }
  if (c.name == "gls") {
    expect_args(c, 1);
    return NormSpec::gls(parse_psi(c.args[0], theta_grid), grid);
  }
  if (c.name == "bphi") {
    expect_args(c, 1);
    return NormSpec::bphi(parse_phi(c.args[0], theta_grid), grid);
  }
  throw UsageError("unknown norm '" + c.name + "'");
}

}  // namespace rcb
