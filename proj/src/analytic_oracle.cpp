#include "mitk/analytic_oracle.hpp"

#include "mitk/errors.hpp"
#include "mitk/kernels.hpp"
#include "mitk/snc_ideals.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>

namespace mitk::oracle {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

/// int_a^b e^{g x} dx for a < b (a may be -inf when g > 0).
double exp_integral(double g, double a, double b) {
  if (!(a < b)) return 0.0;
  if (std::isinf(a)) return std::exp(g * b) / g;
  const double w = b - a;
  if (std::abs(g * w) < 1e-12) return std::exp(g * a) * w * (1.0 + 0.5 * g * w);
  return std::exp(g * a) * std::expm1(g * w) / g;
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

struct Term {
  double weight = 0.0;        // |c|^2 times passive factors
  std::vector<double> gamma;  // exponent of e^{x_k}, per coordinate
  std::vector<std::int64_t> beta;
};

struct Integral {
  double value = 0.0;
  double error = 0.0;
};

// Radial integrand of a monomial weight: region
//   t < shift + sum_{k in active} alpha_k x_k < t+1,  lower_k <= x_k <= upper_k,
// integrand sum_terms weight * exp(sum_k gamma_k x_k). The last active
// coordinate is integrated in closed form.
class MonomialRadial {
 public:
  MonomialRadial(std::vector<std::size_t> active, std::vector<double> alpha,
                 std::vector<double> lower, std::vector<double> upper, double shift, double t,
                 std::vector<Term> terms, double relTol)
      : active_(std::move(active)),
        alpha_(std::move(alpha)),
        lower_(std::move(lower)),
        upper_(std::move(upper)),
        shift_(shift),
        t_(t),
        terms_(std::move(terms)),
        relTol_(relTol) {}

  Integral adaptive() const {
    std::vector<double> exponents(terms_.size(), 0.0);
    double error = 0.0;
    const double v = level(0, shift_, exponents, &error);
    return {v, error};
  }

  /// Samples the outer coordinates uniformly in their bounding box.
  Integral monte_carlo(std::uint64_t samples, std::uint64_t seed, bool parallel) const {
    const std::size_t outer = active_.size() - 1;
    if (outer == 0) {
      std::vector<double> exponents(terms_.size(), 0.0);
      return {innermost(shift_, exponents), 0.0};
    }
    std::vector<double> lo(outer), hi(outer);
    double volume = 1.0;
    for (std::size_t j = 0; j < outer; ++j) {
      const auto [a, b] = bounds(j, shift_);
      lo[j] = a;
      hi[j] = std::max(a, b);
      volume *= hi[j] - lo[j];
    }
    if (volume <= 0.0) return {0.0, 0.0};
    auto f = [&](std::span<const double> u) {
      double s = shift_;
      std::vector<double> exponents(terms_.size(), 0.0);
      for (std::size_t j = 0; j < outer; ++j) {
        const std::size_t k = active_[j];
        const double x = lo[j] + (hi[j] - lo[j]) * u[j];
        s += alpha_[k] * x;
        for (std::size_t q = 0; q < terms_.size(); ++q) exponents[q] += terms_[q].gamma[k] * x;
      }
      // Points outside the feasible polytope contribute zero through the
      // empty inner interval.
      return volume * innermost(s, exponents);
    };
    const auto est = parallel ? kernels::mc_integrate_parallel(f, outer, samples, seed)
                              : kernels::mc_integrate_serial(f, outer, samples, seed);
    return {est.mean, est.stdError};
  }

 private:
  // Feasible range of the j-th active coordinate given the partial sum s of
  // the coordinates before it.
  std::pair<double, double> bounds(std::size_t j, double s) const {
    double maxRest = 0.0;
    double minRest = 0.0;
    for (std::size_t i = j + 1; i < active_.size(); ++i) {
      const std::size_t k = active_[i];
      maxRest += alpha_[k] * upper_[k];
      minRest += alpha_[k] * lower_[k];  // may become -inf
    }
    const std::size_t k = active_[j];
    const double lo = std::max(lower_[k], (t_ - s - maxRest) / alpha_[k]);
    const double hi = std::min(upper_[k], (t_ + 1.0 - s - minRest) / alpha_[k]);
    return {lo, hi};
  }

  double innermost(double s, const std::vector<double>& exponents) const {
    const auto [lo, hi] = bounds(active_.size() - 1, s);
    if (!(lo < hi)) return 0.0;
    const std::size_t k = active_.back();
    double total = 0.0;
    for (std::size_t q = 0; q < terms_.size(); ++q) {
      total += terms_[q].weight * std::exp(exponents[q]) * exp_integral(terms_[q].gamma[k], lo, hi);
    }
    return total;
  }

  double level(std::size_t j, double s, const std::vector<double>& exponents,
               double* error) const {
    if (j + 1 == active_.size()) return innermost(s, exponents);
    const auto [lo, hi] = bounds(j, s);
    if (!(lo < hi)) return 0.0;
    const std::size_t k = active_[j];

    std::vector<double> cuts{lo, hi};
    if (j + 2 == active_.size()) {
      // Kinks of the closed-form inner interval as a function of x_k.
      const std::size_t l = active_.back();
      for (const double edge : {lower_[l], upper_[l]}) {
        if (std::isinf(edge)) continue;
        for (const double offset : {0.0, 1.0}) {
          const double x = (t_ + offset - s - alpha_[l] * edge) / alpha_[k];
          if (x > lo && x < hi) cuts.push_back(x);
        }
      }
    }
    std::sort(cuts.begin(), cuts.end());

    auto f = [&](double x) {
      std::vector<double> next(exponents);
      for (std::size_t q = 0; q < terms_.size(); ++q) next[q] += terms_[q].gamma[k] * x;
      return level(j + 1, s + alpha_[k] * x, next, nullptr);
    };
    double total = 0.0;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      if (!(cuts[c] < cuts[c + 1])) continue;
      double err = 0.0;
      total += GK::integrate(f, cuts[c], cuts[c + 1], error ? 15 : 10, relTol_, &err);
      if (error) *error += err;
    }
    return total;
  }

  std::vector<std::size_t> active_;
  std::vector<double> alpha_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  double shift_;
  double t_;
  std::vector<Term> terms_;
  double relTol_;
};

Polynomial numerator_or_one(const TubeSpec& spec) {
  if (!spec.numerator.empty()) return canonicalize(spec.numerator);
  return {PolyTerm{{1.0, 0.0}, std::vector<std::int64_t>(spec.dimension, 0)}};
}

double window_lower(const TubeSpec& spec, std::size_t k) {
  if (spec.innerRadius.empty() || spec.innerRadius[k] <= 0.0) return -kInf;
  return std::log(spec.innerRadius[k] * spec.innerRadius[k]);
}

MeasureEstimate finish_estimate(double value, double error, double t, double relTol) {
  MeasureEstimate est;
  est.value = value;
  est.stdError = std::abs(error);
  est.t = t;
  est.converged = est.stdError <= relTol * std::abs(value) || (value == 0.0 && error == 0.0);
  return est;
}

MeasureEstimate monomial_tube(const TubeSpec& spec, std::vector<double> alpha, double shift,
                              double t, const QuadratureConfig& cfg) {
  const std::size_t n = spec.dimension;
  const double upperEdge = std::log(spec.domainRadius * spec.domainRadius);
  const double m = to_double(spec.weight);

  std::vector<std::size_t> active;
  for (std::size_t k = 0; k < n; ++k) {
    if (alpha[k] > 0.0) active.push_back(k);
  }
  std::vector<double> lower(n), upper(n, upperEdge);
  for (std::size_t k = 0; k < n; ++k) lower[k] = window_lower(spec, k);

  std::vector<Term> terms;
  for (const auto& pt : numerator_or_one(spec)) {
    Term term;
    term.beta = pt.beta;
    term.weight = std::norm(pt.coeff);
    term.gamma.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      term.gamma[k] = static_cast<double>(pt.beta[k]) + 1.0 - m * alpha[k];
      if (alpha[k] == 0.0) term.weight *= exp_integral(term.gamma[k], lower[k], upper[k]);
    }
    terms.push_back(std::move(term));
  }

  const MonomialRadial radial(active, alpha, lower, upper, shift, t, terms, cfg.relTol);
  const Integral raw = cfg.scheme == QuadratureScheme::monteCarlo
                           ? radial.monte_carlo(cfg.maxEvals, cfg.seed, cfg.parallel)
                           : radial.adaptive();
  // 2^n dV factor, pi^n angles, e^{-m shift} from the constant part of psi
  const double scale = std::pow(2.0 * kPi, static_cast<double>(n)) * std::exp(-m * shift);
  return finish_estimate(scale * raw.value, scale * raw.error, t, cfg.relTol);
}

// psi = r log(s^2 sum_{j<r} u_j). Radial reduction to sigma = sum u_j over the
// shell; the simplex integral of u^beta is the Dirichlet closed form when the
// shell lies inside the polydisc and no window cuts the active coordinates.
MeasureEstimate divisorial_tube(const TubeSpec& spec, double t, const QuadratureConfig& cfg) {
  const std::size_t n = spec.dimension;
  const auto r = static_cast<std::size_t>(spec.codim);
  const double R2 = spec.domainRadius * spec.domainRadius;
  const double s2 = spec.sigmaScale * spec.sigmaScale;
  const double m = to_double(spec.weight);
  const double rd = static_cast<double>(r);
  const double xIn = t / rd - std::log(s2);  // log sigma bounds
  const double xOut = (t + 1.0) / rd - std::log(s2);

  bool windowed = false;
  for (std::size_t k = 0; k < r; ++k) windowed = windowed || !std::isinf(window_lower(spec, k));
  const bool inside = xOut <= std::log(R2);
  const bool dirichlet = inside && !windowed && cfg.scheme != QuadratureScheme::monteCarlo;

  double value = 0.0;
  double error = 0.0;
  for (const auto& pt : numerator_or_one(spec)) {
    double weight = std::norm(pt.coeff);
    for (std::size_t k = r; k < n; ++k) {
      weight *= exp_integral(static_cast<double>(pt.beta[k]) + 1.0, window_lower(spec, k),
                             std::log(R2));
    }
    std::int64_t degree = 0;
    double betaFactorials = 1.0;
    for (std::size_t k = 0; k < r; ++k) {
      degree += pt.beta[k];
      betaFactorials *= factorial(static_cast<int>(pt.beta[k]));
    }
    // exponent of e^x in sigma^{|beta|+r-1} (s^2 sigma)^{-m r} d sigma, d sigma = e^x dx
    const double g = static_cast<double>(degree) + rd - m * rd;
    const double prefactor = std::pow(s2, -m * rd);

    if (dirichlet) {
      const double simplex = betaFactorials / factorial(static_cast<int>(degree) + static_cast<int>(r) - 1);
      double radial = 0.0;
      double err = 0.0;
      if (cfg.scheme == QuadratureScheme::radialClosedForm) {
        radial = exp_integral(g, xIn, xOut);
      } else {
        radial = GK::integrate([g](double x) { return std::exp(g * x); }, xIn, xOut, 15,
                               cfg.relTol, &err);
      }
      value += weight * prefactor * simplex * radial;
      error += weight * prefactor * simplex * err;
      continue;
    }

    // Monte Carlo: x = log sigma uniform on the shell, direction uniform on the
    // simplex, points outside the polydisc or the window rejected.
    std::vector<double> lowerU(r);
    for (std::size_t k = 0; k < r; ++k) {
      const double lo = window_lower(spec, k);
      lowerU[k] = std::isinf(lo) ? 0.0 : std::exp(lo);
    }
    const double width = xOut - xIn;
    const double simplexDensity = factorial(static_cast<int>(r) - 1);
    auto f = [&](std::span<const double> u) {
      const double x = xIn + width * u[0];
      const double sigma = std::exp(x);
      double total = 0.0;
      for (std::size_t k = 0; k < r; ++k) total += -std::log(u[k + 1]);
      double monomial = 1.0;
      for (std::size_t k = 0; k < r; ++k) {
        const double uk = sigma * (-std::log(u[k + 1])) / total;
        if (uk > R2 || uk < lowerU[k]) return 0.0;
        monomial *= std::pow(uk, static_cast<double>(pt.beta[k]));
      }
      return width * std::pow(sigma, rd - m * rd) * monomial / simplexDensity;
    };
    const auto est = cfg.parallel ? kernels::mc_integrate_parallel(f, r + 1, cfg.maxEvals, cfg.seed)
                                  : kernels::mc_integrate_serial(f, r + 1, cfg.maxEvals, cfg.seed);
    value += weight * prefactor * est.mean;
    error += weight * prefactor * est.stdError;
  }
  const double scale = std::pow(2.0 * kPi, static_cast<double>(n));
  return finish_estimate(scale * value, scale * error, t, cfg.relTol);
}

}  // namespace

void QuadratureConfig::validate() const {
  if (!(relTol > 0.0 && relTol < 1.0)) {
    throw InputError("relTol: must lie in (0, 1)");
  }
  if (maxEvals < 1000) {
    throw InputError("maxEvals: must be >= 1000");
  }
}

Polynomial canonicalize(const Polynomial& f) {
  std::map<std::vector<std::int64_t>, std::complex<double>> merged;
  for (const auto& term : f) merged[term.beta] += term.coeff;
  Polynomial out;
  for (const auto& [beta, coeff] : merged) {
    if (coeff != std::complex<double>(0.0, 0.0)) out.push_back({coeff, beta});
  }
  return out;
}

Polynomial subtract(const Polynomial& f, const Polynomial& g) {
  Polynomial all(f);
  for (const auto& term : g) all.push_back({-term.coeff, term.beta});
  return canonicalize(all);
}

TubeSpec TubeSpec::monomial(std::vector<Rational> alpha, Rational m,
                            std::vector<std::int64_t> beta, double radius) {
  TubeSpec spec;
  spec.kind = PsiKind::monomial;
  spec.dimension = alpha.size();
  if (beta.empty()) beta.assign(alpha.size(), 0);
  spec.alpha = std::move(alpha);
  spec.weight = std::move(m);
  spec.numerator = {PolyTerm{{1.0, 0.0}, std::move(beta)}};
  spec.domainRadius = radius;
  return spec;
}

TubeSpec TubeSpec::divisorial(std::size_t n, int r, Rational m, double radius, double scale) {
  TubeSpec spec;
  spec.kind = PsiKind::divisorialLinear;
  spec.dimension = n;
  spec.codim = r;
  spec.weight = std::move(m);
  spec.domainRadius = radius;
  spec.sigmaScale = scale;
  return spec;
}

void TubeSpec::validate() const {
  if (dimension == 0) throw InputError("tube: dimension must be >= 1");
  if (!(domainRadius > 0.0 && domainRadius <= 1.0)) {
    throw InputError("tube: domainRadius must lie in (0, 1]");
  }
  if (weight < 0) throw InputError("tube: weight m must be >= 0");
  if (kind == PsiKind::monomial) {
    if (alpha.size() != dimension) throw InputError("tube: alpha length must equal dimension");
    MonomialModel{alpha}.validate();
  } else {
    if (codim < 1 || static_cast<std::size_t>(codim) > dimension) {
      throw InputError("tube: codimension r must lie in [1, n]");
    }
    if (!(sigmaScale > 0.0)) throw InputError("tube: sigma scale must be positive");
  }
  for (const auto& term : numerator) {
    if (term.beta.size() != dimension) throw InputError("tube: numerator exponent length mismatch");
    for (auto b : term.beta) {
      if (b < 0) throw InputError("tube: numerator exponents must be >= 0");
    }
  }
  if (!innerRadius.empty()) {
    if (innerRadius.size() != dimension) throw InputError("tube: innerRadius length mismatch");
    for (double lo : innerRadius) {
      if (lo < 0.0 || lo >= domainRadius) throw InputError("tube: innerRadius must lie in [0, R)");
    }
  }
}

bool monomial_integrability(const std::vector<Rational>& alpha,
                            const std::vector<std::int64_t>& beta, const Rational& m,
                            const std::vector<std::int64_t>& jacobian) {
  if (beta.size() != alpha.size() || (!jacobian.empty() && jacobian.size() != alpha.size())) {
    throw PreconditionError("monomial_integrability: exponent lists must have equal length");
  }
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    const std::int64_t b = jacobian.empty() ? 0 : jacobian[k];
    // int_0^rho t^{2(beta+b)+1-2 m alpha} dt converges iff the exponent exceeds -1.
    if (!(Rational(beta[k] + b + 1) > m * alpha[k])) return false;
  }
  return true;
}

MeasureEstimate tube_mass(const TubeSpec& spec, double t, const QuadratureConfig& cfg) {
  spec.validate();
  cfg.validate();
  if (!(t < 0.0)) throw PreconditionError("tube_mass: t must be negative");
  if (spec.kind == PsiKind::monomial) {
    std::vector<double> alpha(spec.dimension);
    for (std::size_t k = 0; k < spec.dimension; ++k) alpha[k] = to_double(spec.alpha[k]);
    return monomial_tube(spec, alpha, 0.0, t, cfg);
  }
  if (spec.codim == 1) {
    // r log|s z_1|^2 is the monomial weight log u_1 shifted by log s^2.
    std::vector<double> alpha(spec.dimension, 0.0);
    alpha[0] = 1.0;
    return monomial_tube(spec, alpha, std::log(spec.sigmaScale * spec.sigmaScale), t, cfg);
  }
  return divisorial_tube(spec, t, cfg);
}

std::vector<double> default_t_sequence() { return {-10.0, -15.0, -20.0, -25.0, -30.0, -35.0}; }

MeasureEstimate residual_measure_limit(const TubeSpec& spec, const std::vector<double>& tSequence,
                                       const QuadratureConfig& cfg,
                                       std::vector<MeasureEstimate>* trace) {
  if (tSequence.empty()) throw PreconditionError("residual_measure_limit: empty t-sequence");
  for (std::size_t i = 0; i < tSequence.size(); ++i) {
    if (!(tSequence[i] < -1.0)) {
      throw PreconditionError("residual_measure_limit: every t must be < -1");
    }
    if (i > 0 && !(tSequence[i] < tSequence[i - 1])) {
      throw PreconditionError("residual_measure_limit: t-sequence must be strictly decreasing");
    }
  }
  std::vector<MeasureEstimate> values;
  double scale = 0.0;
  for (double t : tSequence) {
    values.push_back(tube_mass(spec, t, cfg));
    scale = std::max(scale, std::abs(values.back().value));
  }
  if (trace) *trace = values;

  int streak = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double a = values[i - 1].value;
    const double b = values[i].value;
    const double big = std::max(std::abs(a), std::abs(b));
    const bool agree = values[i].converged && values[i - 1].converged &&
                       (std::abs(a - b) <= cfg.relTol * big || big <= cfg.relTol * scale);
    streak = agree ? streak + 1 : 0;
  }
  MeasureEstimate out = values.back();
  out.converged = streak >= 3;
  return out;
}

double closed_form_density(int r, double gramDetJacobian) {
  if (r < 1) throw PreconditionError("closed_form_density: r must be >= 1");
  if (!(gramDetJacobian > 0.0)) {
    throw PreconditionError("closed_form_density: Gram determinant must be positive");
  }
  return std::pow(2.0, r + 1) * std::pow(kPi, r) / factorial(r - 1) / gramDetJacobian;
}

double divisorial_gram_det(int r, double scale) { return std::pow(2.0 * scale * scale, r); }

double divisor_window_volume(const TubeSpec& spec) {
  const std::size_t first = spec.kind == PsiKind::divisorialLinear
                                ? static_cast<std::size_t>(spec.codim)
                                : 1;
  const double R2 = spec.domainRadius * spec.domainRadius;
  double volume = 1.0;
  for (std::size_t k = first; k < spec.dimension; ++k) {
    const double lo = spec.innerRadius.empty() ? 0.0 : spec.innerRadius[k];
    volume *= 2.0 * kPi * (R2 - lo * lo);  // dV_Y = 2^{n-r} Lebesgue
  }
  return volume;
}

ExtensionComparison jet_density_extension_independence(const std::vector<Rational>& alpha,
                                                       std::size_t p, const Polynomial& f1,
                                                       const Polynomial& f2,
                                                       const QuadratureConfig& cfg,
                                                       double radius) {
  const MonomialModel model{alpha};
  const MonomialSnc snc = to_snc_model(model);
  if (p == 0) throw PreconditionError("jet density: p must be >= 1");

  Rational cap = 0;
  for (const auto& d : snc.model.components) {
    const Rational bound = Rational(static_cast<std::int64_t>(p)) / (snc.model.c * d.a);
    if (cap == 0 || bound < cap) cap = bound;
  }
  const JumpingSpectrum spectrum = jumping_spectrum(snc.model, cap);
  if (spectrum.values.size() < p) throw InternalError("jet density: spectrum shorter than p");

  ExtensionComparison out;
  out.jump = spectrum.values[p - 1];
  for (const auto& term : subtract(f1, f2)) {
    if (!monomial_membership(model, term.beta, out.jump)) {
      throw PreconditionError("jet density: extensions differ by a monomial outside I(m_p psi)");
    }
  }

  // Localize on the regular part of the first divisor achieving the jump.
  bool found = false;
  for (std::size_t k = 0; k < alpha.size() && !found; ++k) {
    const Rational v = out.jump * alpha[k];
    if (v > 0 && is_integer(v)) {
      out.windowCoordinate = k;
      found = true;
    }
  }
  if (!found) throw InternalError("jet density: no coordinate achieves the jump");

  TubeSpec spec = TubeSpec::monomial(alpha, out.jump, {}, radius);
  spec.innerRadius.assign(alpha.size(), 0.0);
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    if (k != out.windowCoordinate && alpha[k] > 0) spec.innerRadius[k] = radius / 2.0;
  }
  const auto tSeq = default_t_sequence();
  spec.numerator = canonicalize(f1);
  out.first = residual_measure_limit(spec, tSeq, cfg);
  spec.numerator = canonicalize(f2);
  out.second = residual_measure_limit(spec, tSeq, cfg);

  const double big = std::max(std::abs(out.first.value), std::abs(out.second.value));
  out.deviation = big == 0.0 ? 0.0 : std::abs(out.first.value - out.second.value) / big;
  return out;
}

MeasureEstimate singular_integral_Ik(int k, const QuadratureConfig& cfg) {
  if (k < 1) throw PreconditionError("singular_integral_Ik: k must be >= 1");
  cfg.validate();
  const double c = std::log(4.0);  // y_j = -log|w_j|^2 > log 4 on |w_j| < 1/2
  if (k == 1) {
    // pi int_{log 4}^inf y^{-2} dy
    boost::math::quadrature::exp_sinh<double> integrator;
    double error = 0.0;
    const double v =
        integrator.integrate([](double y) { return kPi / (y * y); }, c, kInf, cfg.relTol * 1e-3,
                             &error);
    return finish_estimate(v, error, 0.0, cfg.relTol);
  }
  // y_j = c U_j^{-a}, a = k: the weight below stays bounded on (0,1]^k.
  const double a = static_cast<double>(k);
  const double logPrefactor = k * std::log(kPi) + k * std::log(a) - std::log(c);
  auto f = [k, a, logPrefactor](std::span<const double> u) {
    double maxLog = -kInf;
    double sumLogU = 0.0;
    for (int j = 0; j < k; ++j) {
      const double lu = std::log(u[j]);
      sumLogU += lu;
      maxLog = std::max(maxLog, -a * lu);
    }
    double acc = 0.0;
    for (int j = 0; j < k; ++j) acc += std::exp(-a * std::log(u[j]) - maxLog);
    const double logSumV = maxLog + std::log(acc);
    return std::exp(logPrefactor - (a + 1.0) * sumLogU - (k + 1) * logSumV);
  };
  const auto dim = static_cast<std::size_t>(k);
  const auto est = cfg.parallel ? kernels::mc_integrate_parallel(f, dim, cfg.maxEvals, cfg.seed)
                                : kernels::mc_integrate_serial(f, dim, cfg.maxEvals, cfg.seed);
  MeasureEstimate out;
  out.value = est.mean;
  out.stdError = est.stdError;
  out.converged = est.stdError <= cfg.relTol * std::abs(est.mean);
  return out;
}

LogIntegrability local_integrability_with_log_detail(const std::vector<Rational>& alpha,
                                                     const std::vector<std::int64_t>& beta,
                                                     const Rational& m, const QuadratureConfig& cfg,
                                                     double radius) {
  const MonomialModel model{alpha};
  model.validate();
  if (beta.size() != alpha.size()) {
    throw PreconditionError("local_integrability_with_log: beta length must equal alpha length");
  }
  if (m < 0) throw PreconditionError("local_integrability_with_log: m must be >= 0");

  LogIntegrability out;
  if (m > 0) {
    const JumpingSpectrum spectrum = jumping_spectrum(to_snc_model(model).model, m);
    for (const auto& v : spectrum.values) {
      if (v < m) out.previousJump = v;
    }
  }
  if (!monomial_membership(model, beta, out.previousJump)) {
    throw PreconditionError("local_integrability_with_log: z^beta is not in I(m_{p-1} psi) for m_{p-1} = " +
                            to_string(out.previousJump));
  }

  const std::size_t n = alpha.size();
  std::vector<double> gamma(n);
  std::size_t zeros = 0;
  out.analytic = true;
  for (std::size_t k = 0; k < n; ++k) {
    const Rational g = Rational(beta[k] + 1) - m * alpha[k];
    out.analytic = out.analytic && g >= 0;
    zeros += g == 0 ? 1 : 0;
    gamma[k] = to_double(g);
  }
  // The zero-exponent directions integrate (1+|s|)^{-(n+1)} against s^{zeros-1} ds.
  out.analytic = out.analytic && zeros < n + 1;
  if (!out.analytic) return out;

  const double upper = std::log(radius * radius);
  std::vector<std::size_t> active;
  double passive = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (alpha[k] > 0) {
      active.push_back(k);
    } else {
      passive *= exp_integral(gamma[k], -kInf, upper);
    }
  }
  std::vector<double> a(n);
  for (std::size_t k = 0; k < n; ++k) a[k] = to_double(alpha[k]);
  const double power = static_cast<double>(n + 1);
  const double scale = std::pow(2.0 * kPi, static_cast<double>(n)) * passive;

  for (double T : {40.0, 160.0, 640.0, 2560.0}) {
    const double lower = upper - T;
    std::function<double(std::size_t, double, double)> nest = [&](std::size_t j, double psi,
                                                                  double logw) -> double {
      if (j == active.size()) return std::exp(logw) * std::pow(1.0 + std::abs(psi), -power);
      const std::size_t k = active[j];
      auto f = [&](double x) { return nest(j + 1, psi + a[k] * x, logw + gamma[k] * x); };
      // Split where the weight changes scale: near the corner and at log spacing.
      double total = 0.0;
      double hi = upper;
      for (double width = 8.0; hi > lower; width *= 4.0) {
        const double lo = std::max(lower, upper - width);
        total += GK::integrate(f, lo, hi, j == 0 ? 15 : 10, cfg.relTol * 1e-2);
        hi = lo;
      }
      return total;
    };
    out.cutoffs.push_back(T);
    out.estimates.push_back(scale * nest(0, 0.0, 0.0));
  }

  // Increments must shrink geometrically (ratio test on the tail as T grows 4x).
  const auto& e = out.estimates;
  const std::size_t s = e.size();
  const double d1 = e[s - 3] - e[s - 4];
  const double d2 = e[s - 2] - e[s - 3];
  const double d3 = e[s - 1] - e[s - 2];
  const double tiny = cfg.relTol * std::abs(e.back());
  auto shrinks = [tiny](double prev, double next) {
    return std::abs(next) <= tiny || std::abs(next) <= 0.75 * std::abs(prev);
  };
  out.stabilized = std::isfinite(e.back()) && shrinks(d1, d2) && shrinks(d2, d3);
  out.integrable = out.analytic && out.stabilized;
  return out;
}

bool local_integrability_with_log(const std::vector<Rational>& alpha,
                                  const std::vector<std::int64_t>& beta, const Rational& m,
                                  const QuadratureConfig& cfg) {
  return local_integrability_with_log_detail(alpha, beta, m, cfg).integrable;
}

}  // namespace mitk::oracle
