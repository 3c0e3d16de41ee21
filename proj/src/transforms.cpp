#include "rcbound/transforms.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "rcbound/bounds.hpp"
#include "rcbound/distribution.hpp"
#include "rcbound/errors.hpp"
#include "rcbound/quadrature.hpp"

namespace rcb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

double log_abs(double x) { return x == 0.0 ? -kInf : std::log(std::abs(x)); }

void check_thetas(const Family& family, const std::vector<double>& thetas) {
  for (double t : thetas)
    if (!family.param_domain().contains(t))
      throw DomainError(family.id() + ": theta=" + num(t) + " outside the parameter domain");
}

}  // namespace

// ---------------------------------------------------------------------------

ConjugateFunction::ConjugateFunction(std::function<double(double)> f, double lo, double hi)
    : f_(std::move(f)), lo_(lo), hi_(hi) {
  if (!(hi > lo)) throw DomainError("conjugate: empty search interval");
}

ConjugatePoint ConjugateFunction::evaluate(double u) const {
  auto objective = [&](double l) {
    const double v = f_(l);
    return std::isinf(v) ? -kInf : l * u - v;
  };
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo_, b = hi_;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = objective(c), fd = objective(d);
  const double floor = 1e-15 * std::max(1.0, std::max(std::abs(lo_), std::abs(hi_)));
  for (int i = 0; i < 300 && (b - a) > floor; ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = objective(d);
    }
  }
  ConjugatePoint pt;
  pt.argmax = fc >= fd ? c : d;
  pt.value = std::max(fc, fd);
  // Edges are never evaluated by the golden section; include them.
  for (double edge : {lo_, hi_}) {
    const double v = objective(edge);
    if (v > pt.value) {
      pt.value = v;
      pt.argmax = edge;
    }
  }
  const double width = hi_ - lo_;
  pt.boundary = (pt.argmax - lo_) < 1e-9 * width || (hi_ - pt.argmax) < 1e-9 * width;
  return pt;
}

ConjugateTable ConjugateFunction::table(std::span<const double> u_grid) const {
  ConjugateTable t;
  for (double u : u_grid) {
    const auto pt = evaluate(u);
    t.u.push_back(u);
    t.value.push_back(pt.value);
    t.argmax.push_back(pt.argmax);
    t.boundary.push_back(pt.boundary);
  }
  t.convex = is_convex_sequence(t.u, t.value);
  return t;
}

ConjugateFunction young_fenchel(const PhiFunction& phi, const YoungFenchelOptions& options) {
  double reach = options.lambda_max;
  if (std::isfinite(phi.lambda0())) reach = std::min(reach, phi.lambda0() * (1.0 - 1e-12));
  std::vector<double> probe{0.0};
  for (double l : geometric_grid(reach * 1e-4, reach, 64)) probe.push_back(l);
  if (!phi.is_convex_on(probe, 1e-9)) throw DomainError("young_fenchel: phi " + phi.name() + " is not convex");
  return ConjugateFunction([phi](double l) { return phi(l); }, -reach, reach);
}

ConjugateFunction young_fenchel(std::function<double(double)> f, double lo, double hi) {
  return ConjugateFunction(std::move(f), lo, hi);
}

bool is_convex_sequence(std::span<const double> x, std::span<const double> y, double tol) {
  if (x.size() != y.size()) throw DomainError("is_convex_sequence: size mismatch");
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    const double chord = y[i - 1] + (y[i + 1] - y[i - 1]) * (x[i] - x[i - 1]) / (x[i + 1] - x[i - 1]);
    if (y[i] > chord + tol * std::max(1.0, std::abs(chord))) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

PhiBar::PhiBar(PhiFunction phi, PhiBarOptions options) : phi_(std::move(phi)), options_(options) {
  if (options_.n_max < 1) throw DomainError("phi_bar: n_max must be >= 1");
}

PhiBarValue PhiBar::evaluate(double lambda) const {
  PhiBarValue out;
  out.value = phi_(lambda);
  out.n_argmax = 1;
  auto consider = [&](std::size_t n) {
    const double dn = static_cast<double>(n);
    const double term = dn * phi_(lambda / std::sqrt(dn));
    const double margin = options_.tolerance * std::max(std::abs(out.value), std::numeric_limits<double>::min());
    if (term > out.value + margin) {
      out.value = term;
      out.n_argmax = n;
      return true;
    }
    return false;
  };
  const std::size_t dense = std::min(options_.dense_n, options_.n_max);
  for (std::size_t n = 2; n <= dense; ++n) consider(n);
  std::size_t stable = 0;
  double prev_step = 0.0, last_step = 0.0;
  for (std::size_t n = 2 * dense; n <= options_.n_max; n *= 2) {
    const double before = out.value;
    stable = consider(n) ? 0 : stable + 1;
    prev_step = last_step;
    last_step = out.value - before;
    if (stable >= options_.stable_doublings) break;
  }
  if (stable >= options_.stable_doublings || dense >= options_.n_max) return out;
  // Still rising at n_max: geometric decay of the per-doubling gains means a
  // finite limit, which is added as the tail of the series.
  const double ratio = prev_step > 0.0 ? last_step / prev_step : 1.0;
  if (ratio < 0.9) {
    out.value += last_step * ratio / (1.0 - ratio);
  } else {
    out.diverged = true;
  }
  return out;
}

PhiFunction PhiBar::as_phi() const {
  auto self = std::make_shared<PhiBar>(*this);
  return PhiFunction("bar(" + phi_.name() + ")", phi_.form(), phi_.lambda0(), phi_.second_derivative_at_zero(),
                     [self](double l) {
                       const auto v = self->evaluate(l);
                       return v.diverged ? kInf : v.value;
                     });
}

PhiBar phi_bar(const PhiFunction& phi, PhiBarOptions options) { return PhiBar(phi, options); }

// ---------------------------------------------------------------------------

PsiFunction psi_R(const PsiFunction& psi) {
  const double lo = std::max(2.0, psi.support_lo());
  if (!(psi.support_B() > lo)) throw DomainError("psi_R: supp(psi) does not reach beyond p = 2");
  return PsiFunction("R*" + psi.name(), psi.form(), lo, psi.support_B(),
                     [psi](double p) { return rosenthal_bound(p) * psi(p); });
}

PsiFunction psi_from_phi(const PhiFunction& phi) {
  if (std::isfinite(phi.lambda0()))
    throw UnsupportedError("psi_from_phi: phi " + phi.name() + " has finite lambda0; the inverse is not global");
  auto inverse = [phi](double y) {
    double lo = 0.0, hi = 1.0;
    while (phi(hi) < y) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e300) throw DomainError("psi_from_phi: phi does not reach " + num(y));
    }
    for (int i = 0; i < 400; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      if (phi(mid) < y) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };
  return PsiFunction("psi_phi(" + phi.name() + ")", phi.form(), 1.0, kInf, [inverse](double p) { return p / inverse(p); });
}

// ---------------------------------------------------------------------------

Extended natural_integral_direct(const Family& family, double theta, double p) {
  if (!(p >= 1.0)) throw DomainError("natural integral requires p >= 1");
  if (!family.has_score()) throw UnsupportedError(family.id() + ": score is undefined");
  if (const auto limit = family.score_moment_limit(); limit && p >= *limit) return Extended::infinity();
  const auto m = log_integrate_log_weighted(family, theta, [&](double x) {
    const double lg = family.log_density(x, theta);
    return p * (log_abs(family.density_dtheta(x, theta)) - lg);
  });
  if (!m.ok) return Extended::infinity();
  return Extended::finite(std::exp(m.log_value / p));
}

Extended scale_reduced_integral(const Family& family, double p) {
  if (family.kind() != FamilyKind::Scale) throw DomainError(family.id() + " is not a scale family");
  if (!(p >= 1.0)) throw DomainError("scale_reduced_integral requires p >= 1");
  auto log_integrand = [&](double y) {
    const double h = family.base_density(y);
    if (!(h > 0.0)) return -kInf;
    const double k = h + y * family.base_density_derivative(y);
    if (k == 0.0) return -kInf;
    return p * std::log(std::abs(k)) + (1.0 - p) * std::log(h);
  };
  std::vector<double> breaks;
  for (double b : family.breakpoints(1.0))
    if (b > 0.0) breaks.push_back(b);
  const auto res = quad::integrate_exp(log_integrand, quad::Domain::half_line(0.0), breaks);
  if (!res.ok) return Extended::infinity();
  return Extended::finite(std::exp(res.log_value / p));
}

namespace {

std::vector<double> natural_thetas(const Family& family, std::vector<double> theta_grid) {
  if (theta_grid.empty()) {
    if (family.kind() == FamilyKind::Shift && family.param_domain().contains(0.0)) return {0.0};
    throw DomainError("natural function of " + family.id() + " needs a theta grid");
  }
  check_thetas(family, theta_grid);
  std::sort(theta_grid.begin(), theta_grid.end());
  return theta_grid;
}

}  // namespace

PsiFunction natural_psi(FamilyPtr family, std::vector<double> theta_grid, const NaturalPsiOptions& options) {
  if (!family->has_score()) throw UnsupportedError(family->id() + ": score is undefined");
  const auto thetas = natural_thetas(*family, std::move(theta_grid));
  std::function<Extended(double)> eval;
  switch (family->kind()) {
    case FamilyKind::Shift: {
      const double t = thetas.front();
      eval = [family, t](double p) {
        if (const auto limit = family->score_moment_limit(); limit && p >= *limit) return Extended::infinity();
        const auto m =
            log_integrate_log_weighted(*family, t, [&](double x) { return p * log_abs(family->score(x, t)); });
        return m.ok ? Extended::finite(std::exp(m.log_value / p)) : Extended::infinity();
      };
      break;
    }
    case FamilyKind::Scale: {
      const double t = thetas.front();
      eval = [family, t](double p) {
        const auto r = scale_reduced_integral(*family, p);
        return r.is_infinite() ? r : Extended::finite(r.value() / t);
      };
      break;
    }
    case FamilyKind::General:
      eval = [family, thetas](double p) {
        double best = 0.0;
        for (double t : thetas) {
          const auto v = natural_integral_direct(*family, t, p);
          if (v.is_infinite()) return v;
          best = std::max(best, v.value());
        }
        return Extended::finite(best);
      };
      break;
  }
  const auto grid = options.p_grid.empty() ? default_p_grid() : options.p_grid;
  double B = kInf;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (eval(grid[i]).is_infinite()) {
      if (i == 0) throw DomainError("natural psi of " + family->id() + " is undefined: integral diverges at p=" + num(grid[0]));
      B = grid[i - 1];
      break;
    }
  }
  if (!(B > 2.0)) throw DomainError("natural psi of " + family->id() + ": no finite integral for p > 2 on the grid");
  const std::string name = "natural(" + family->id() + ")";
  return PsiFunction(name, FunctionForm::Natural, 1.0, B, [eval, name](double p) {
    const auto v = eval(p);
    if (v.is_infinite()) throw DomainError(name + ": integral diverges at p=" + num(p));
    return v.value();
  });
}

PhiFunction natural_phi(FamilyPtr family, std::vector<double> theta_grid, const NaturalPhiOptions& options) {
  if (!family->has_score()) throw UnsupportedError(family->id() + ": score is undefined");
  auto thetas = natural_thetas(*family, std::move(theta_grid));
  if (family->kind() == FamilyKind::Shift) thetas.resize(1);
  std::vector<double> mags = options.lambda_grid;
  if (mags.empty()) {
    for (double l : default_lambda_grid())
      if (l > 0.0) mags.push_back(l);
  }
  std::sort(mags.begin(), mags.end());
  mags.erase(std::unique(mags.begin(), mags.end()), mags.end());
  std::vector<Distribution> scores;
  for (double t : thetas) scores.push_back(score_distribution(family, t));
  std::vector<double> knots{0.0}, values{0.0};
  double lambda0 = kInf;
  for (double m : mags) {
    if (!(m > 0.0)) throw DomainError("natural phi: lambda magnitudes must be positive");
    double best = -kInf;
    bool diverged = false;
    for (const auto& s : scores) {
      for (double sign : {1.0, -1.0}) {
        const auto v = log_mgf(s, sign * m);
        if (v.is_infinite()) {
          diverged = true;
          break;
        }
        best = std::max(best, v.value());
      }
      if (diverged) break;
    }
    if (diverged) {
      lambda0 = m;
      break;
    }
    knots.push_back(m);
    values.push_back(std::max(best, 0.0));
  }
  if (knots.size() < 2) throw DomainError("natural phi of " + family->id() + ": mgf diverges on the whole grid");
  const double d2 = 2.0 * values[1] / (knots[1] * knots[1]);
  return PhiFunction("natural(" + family->id() + ")", FunctionForm::Natural, lambda0, d2,
                     [knots = std::move(knots), values = std::move(values)](double l) {
                       return phi_table_value(knots, values, l);
                     });
}

}  // namespace rcb
