#include "mitk/cutoff_factory.hpp"

#include "mitk/errors.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mitk::cutoff {

namespace {

constexpr double kPi = boost::math::constants::pi<double>();

// Smooth step: 0 for x <= 0, 1 for x >= 1, h(x) = f(x) / (f(x) + f(1-x)), f = e^{-1/x}.
ValueAndSlope smooth_step(double x) {
  if (x <= 0.0) return {0.0, 0.0};
  if (x >= 1.0) return {1.0, 0.0};
  const double e = std::exp(1.0 / x - 1.0 / (1.0 - x));
  const double h = 1.0 / (1.0 + e);
  const double slope = h * (1.0 - h) * (1.0 / (x * x) + 1.0 / ((1.0 - x) * (1.0 - x)));
  return {h, std::isfinite(slope) ? slope : 0.0};
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

PropertyRecord record(std::string id, std::string description, double margin, double location,
                      std::string details, double scale = 1.0) {
  PropertyRecord r;
  r.id = std::move(id);
  r.description = std::move(description);
  r.worstMargin = margin;
  r.worstLocation = location;
  r.pass = margin >= -kMarginTol * scale;
  r.details = std::move(details);
  return r;
}

double nakano_margin(const fiber::CurvatureTensor& t) {
  return fiber::nakano_min_eigenvalue(t) / t.scale();
}

}  // namespace

void CutoffParams::validate() const {
  if (!(t < -1.0) || !std::isfinite(t)) throw InputError("t: must be a finite value < -1");
  if (!(delta > 0.0 && delta <= 1.0)) throw InputError("delta: must lie in (0, 1]");
  if (!(eps > 0.0 && eps <= 0.01)) throw InputError("eps: must lie in (0, 0.01]");
  if (grid < 16) throw InputError("grid: must be >= 16 points per unit");
  if (riseWidth < 0.0 || riseWidth > eps / 4.0) {
    throw InputError("riseWidth: must lie in (0, eps/4] (0 selects eps/4)");
  }
}

double gamma(double x) { return x >= 0.0 ? std::exp(-x / 2.0) : 1.0 / (1.0 + x * x); }

// ------------------------------------------------------------------ beta, xi

Beta::Beta(double s) : s_(s) {
  if (!(s > 0.0)) throw InputError("beta rise width must be positive");
}

double Beta::operator()(double tau) const { return smooth_step((tau + s_) / s_).value; }

ValueAndSlope Beta::eval(double tau) const {
  const ValueAndSlope h = smooth_step((tau + s_) / s_);
  return {h.value, h.slope / s_};
}

ValueAndSlope Xi::eval(double tau) const {
  const ValueAndSlope a = beta_.eval(tau);
  const ValueAndSlope b = beta_.eval(1.0 - tau);
  return {a.value * b.value, a.slope * b.value - a.value * b.slope};
}

Beta build_beta(double eps, double s) {
  if (!(eps > 0.0) || !(s > 0.0) || s > eps / 4.0) {
    throw InputError("beta rise width s must lie in (0, eps/4]");
  }
  return Beta(s);
}

Xi build_xi(double eps, double s) { return Xi(build_beta(eps, s).s()); }

// -------------------------------------------------------------------- chi_t

double CutoffCertificate::chi2(double tau) const {
  const double t = params_.t;
  if (tau < t - 1.0 || tau > 0.0) return 0.0;
  const double d = params_.delta;
  return d / (2.0 * kPi * (1.0 + d * d * tau * tau)) * beta_(tau - t) +
         (1.0 - params_.eps) / 4.0 * xi_(tau - t);
}

// Composite Simpson with 8 panels; chi'' is smooth on each grid cell.
double CutoffCertificate::integrate_chi2(double a, double b) const {
  if (b <= a) return 0.0;
  constexpr int panels = 8;
  const double h = (b - a) / panels;
  double sum = chi2(a) + chi2(b);
  for (int i = 1; i < panels; ++i) sum += (i % 2 ? 4.0 : 2.0) * chi2(a + i * h);
  return sum * h / 3.0;
}

std::size_t CutoffCertificate::locate(double tau) const {
  const double h = tau_[1] - tau_[0];
  auto i = static_cast<std::size_t>(std::floor((tau - tau_.front()) / h));
  return std::min(i, tau_.size() - 2);
}

double CutoffCertificate::chi1(double tau) const {
  if (tau <= tau_.front()) return 0.0;
  if (tau >= 0.0) return chi1_.back();
  const std::size_t i = locate(tau);
  return chi1_[i] + integrate_chi2(tau_[i], tau);
}

double CutoffCertificate::chi(double tau) const {
  if (tau <= tau_.front()) return chi_.front();
  if (tau >= 0.0) return chi_.back();
  const std::size_t i = locate(tau);
  const double a = tau_[i];
  const double h = tau - a;
  return chi_[i] + h / 2.0 * (chi1_[i] + chi1(tau)) + h * h / 12.0 * (chi2(a) - chi2(tau));
}

const PropertyRecord& CutoffCertificate::property(const std::string& id) const {
  for (const auto& p : properties_) {
    if (p.id == id) return p;
  }
  throw InputError("unknown certificate property: " + id);
}

bool CutoffCertificate::all_pass() const {
  return std::all_of(properties_.begin(), properties_.end(),
                     [](const PropertyRecord& p) { return p.pass; });
}

CutoffCertificate build_chi(const CutoffParams& params) {
  params.validate();
  CutoffCertificate c;
  c.params_ = params;
  c.beta_ = Beta(params.s());
  c.xi_ = Xi(params.s());
  const double t = params.t;
  const double d = params.delta;
  const double eps = params.eps;
  const double length = 1.0 - t;
  const auto cells = static_cast<std::size_t>(std::ceil(length * params.grid)) * 2;
  const double h = length / static_cast<double>(cells);

  c.tau_.resize(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) c.tau_[i] = (t - 1.0) + static_cast<double>(i) * h;
  c.tau_.back() = 0.0;
  c.chi2_.resize(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) c.chi2_[i] = c.chi2(c.tau_[i]);

  c.chi1_.assign(cells + 1, 0.0);
  for (std::size_t i = 0; i < cells; ++i) {
    c.chi1_[i + 1] = c.chi1_[i] + c.integrate_chi2(c.tau_[i], c.tau_[i + 1]);
  }
  // chi(0) = 0; integrate chi' backwards with the Hermite-corrected trapezoid rule.
  c.chi_.assign(cells + 1, 0.0);
  for (std::size_t i = cells; i-- > 0;) {
    const double w = c.tau_[i + 1] - c.tau_[i];
    const double piece = w / 2.0 * (c.chi1_[i] + c.chi1_[i + 1]) +
                         w * w / 12.0 * (c.chi2_[i] - c.chi2_[i + 1]);
    c.chi_[i] = c.chi_[i + 1] - piece;
  }

  auto& props = c.properties_;
  const std::size_t last = cells;

  {
    const double m = -std::max(std::abs(c.chi_[last]), std::abs(c.chi1_[0]));
    props.push_back(record("chi_boundary", "chi_t(0) = 0 and inf chi_t = -M_t finite", m, 0.0,
                           "M_t=" + fmt(c.M()) + " chi'(t-1)=" + fmt(c.chi1_[0])));
  }
  {
    double m = std::numeric_limits<double>::infinity();
    double where = 0.0;
    for (std::size_t i = 0; i <= last; ++i) {
      const double v = std::min(c.chi1_[i], 0.5 - c.chi1_[i]);
      if (v < m) {
        m = v;
        where = c.tau_[i];
      }
    }
    const double budget = (1.0 - eps) / 4.0 * (1.0 + eps) + 0.25;
    m = std::min(m, 0.5 - budget);
    props.push_back(record("chi_slope", "0 <= chi_t' <= 1/2 on ]-inf, 0]", m, where,
                           "max chi'=" + fmt(c.chi1_[last]) + " integral bound=" + fmt(budget)));
  }
  {
    double m = std::numeric_limits<double>::infinity();
    double where = 0.0;
    double firstPositive = 0.0;
    bool seen = false;
    for (std::size_t i = 1; i <= last; ++i) {
      if (c.chi1_[i] < m) {
        m = c.chi1_[i];
        where = c.tau_[i];
      }
      if (!seen && c.chi1_[i] > 0.0) {
        seen = true;
        firstPositive = c.tau_[i];
      }
    }
    m = std::min(m, -std::abs(c.chi1_[0]));
    props.push_back(record("chi_support",
                           "chi_t' = 0 on ]-inf, t-1] and chi_t' >= 0 on ]t-1, 0]", m, where,
                           "chi' > 0 from tau=" + fmt(firstPositive) +
                               " (beta vanishes below -s, so chi' = 0 on ]t-1, t-s])"));
  }
  {
    double m = std::numeric_limits<double>::infinity();
    double where = t;
    const double floorValue = (1.0 - eps) / 4.0;
    for (std::size_t i = 0; i <= last; ++i) {
      if (c.tau_[i] < t - 1e-12 || c.tau_[i] > t + 1.0 + 1e-12) continue;
      const double v = c.chi2_[i] - floorValue;
      if (v < m) {
        m = v;
        where = c.tau_[i];
      }
    }
    for (double edge : {t, t + 1.0}) {
      const double v = c.chi2(edge) - floorValue;
      if (v < m) {
        m = v;
        where = edge;
      }
    }
    props.push_back(record("chi_plateau", "chi_t'' >= (1-eps)/4 on [t, t+1]", m, where,
                           "min chi''=" + fmt(m + floorValue)));
  }
  double convexWorst = std::numeric_limits<double>::infinity();
  double convexWhere = 0.0;
  double coefWorst = std::numeric_limits<double>::infinity();
  double coefWhere = 0.0;
  for (std::size_t i = 1; i <= last; ++i) {
    const double tau = c.tau_[i];
    const double k = 2.0 * d / (kPi * (1.0 + d * d * tau * tau));
    const double v = c.chi2_[i] - k * c.chi1_[i] * c.chi1_[i];
    if (v < convexWorst) {
      convexWorst = v;
      convexWhere = tau;
    }
    const double lambda = kPi * (1.0 + d * d * tau * tau);
    const double coef = d * c.chi2_[i] - d * d * c.chi1_[i] * c.chi1_[i] / lambda;
    const double cm = coef - d * c.chi2_[i] / 2.0;
    if (cm < coefWorst) {
      coefWorst = cm;
      coefWhere = tau;
    }
  }
  props.push_back(record("chi_convexity",
                         "chi_t'' >= 2 delta chi_t'^2 / (pi (1 + delta^2 tau^2)) on ]t-1, 0]",
                         convexWorst, convexWhere, "checked as chi'' - K chi'^2 >= 0"));
  props.push_back(record("rt_coefficient",
                         "delta chi'' - delta^2 chi'^2 / lambda_t >= delta chi'' / 2", coefWorst,
                         coefWhere, "lambda_t = pi (1 + delta^2 tau^2)"));
  props.push_back(verify_budget(params, c));
  {
    const double v = constant_34_value(eps);
    props.push_back(record("constant_34", "4.21 * 8 (1+eps)^2 / (1-eps) < 34", 34.0 - v, eps,
                           "value=" + fmt(v)));
    // strict inequality
    props.back().pass = v < 34.0;
  }
  return c;
}

EtaLambda eta_lambda(double psiVal, const CutoffParams& params, const CutoffCertificate& chi) {
  if (!(psiVal <= 0.0)) throw PreconditionError("eta_lambda: psi must be <= 0");
  const double d = params.delta;
  return {1.0 - d * chi.chi(psiVal), kPi * (1.0 + d * d * psiVal * psiVal)};
}

BudgetOptimum budget_optimum() {
  auto negq = [](double x) { return -(1.0 + x / 2.0 + kPi * (1.0 + x * x)) / (1.0 + x * x); };
  const auto [x, v] = boost::math::tools::brent_find_minima(negq, 0.0, 10.0,
                                                            std::numeric_limits<double>::digits);
  return {x, -v};
}

double budget_optimum_closed_form() { return (std::sqrt(5.0) + 2.0) / 4.0 + kPi; }

PropertyRecord verify_budget(const CutoffParams& params, const CutoffCertificate& chi) {
  const double d = params.delta;
  double worst = std::numeric_limits<double>::infinity();
  double where = 0.0;
  auto probe = [&](double psi) {
    const EtaLambda el = eta_lambda(psi, params, chi);
    const double w = 1.0 + d * d * psi * psi;
    // the actual sum, and the intermediate bound eta <= 1 - delta psi / 2
    const double v = std::min(kBudgetConstant - (el.eta + el.lambda) / w,
                              ((1.0 - d * psi / 2.0) - el.eta) / w);
    if (v < worst) {
      worst = v;
      where = psi;
    }
  };
  for (double psi : chi.tau()) probe(psi);
  const double below = chi.tau().front();
  for (int i = 1; i <= 400; ++i) probe(below - 0.25 * i / d);
  const BudgetOptimum opt = budget_optimum();
  const double exact = budget_optimum_closed_form();
  const double optMargin = std::min(kBudgetConstant - opt.value, 1e-6 - std::abs(opt.value - exact));
  const double margin = std::min(worst, optMargin);
  return record("budget", "eta_t + lambda_t <= 4.21 (1 + delta^2 psi^2)", margin,
                optMargin < worst ? opt.argmax : where,
                "grid margin=" + fmt(worst) + " optimum=" + fmt(opt.value) + " at x=" +
                    fmt(opt.argmax) + " closed form=" + fmt(exact));
}

double constant_34_value(double eps) {
  return kBudgetConstant * 8.0 * (1.0 + eps) * (1.0 + eps) / (1.0 - eps);
}

bool check_34(double eps) {
  if (!(eps > 0.0) || !(eps < 1.0)) throw InputError("eps must lie in (0, 1)");
  return constant_34_value(eps) < 34.0;
}

// -------------------------------------------------------------------- theta

// theta(tau) = 1 - R((tau - eps/3) / w), w = 1 - 2 eps / 3, where R is the
// primitive of rho(x) = h(x/sig) h((1-x)/sig) / (1 - sig), sig = eps / 6.
ValueAndSlope theta_cutoff(double tau, double eps) {
  if (!(eps > 0.0 && eps <= 0.5)) throw InputError("theta_cutoff: eps must lie in (0, 1/2]");
  const double w = 1.0 - 2.0 * eps / 3.0;
  const double sig = eps / 6.0;
  const double x = (tau - eps / 3.0) / w;
  if (x <= 0.0) return {1.0, 0.0};
  if (x >= 1.0) return {0.0, 0.0};
  auto corner = [&](double y) {  // int_0^y h(u / sig) du, y <= sig
    if (y <= 0.0) return 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [&](double u) { return smooth_step(u / sig).value; }, 0.0, y, 15, 1e-14);
  };
  double primitive;
  if (x <= sig) {
    primitive = corner(x);
  } else if (x >= 1.0 - sig) {
    primitive = (1.0 - sig) - corner(1.0 - x);
  } else {
    primitive = sig / 2.0 + (x - sig);
  }
  primitive /= (1.0 - sig);
  const double rho = smooth_step(x / sig).value * smooth_step((1.0 - x) / sig).value / (1.0 - sig);
  return {std::clamp(1.0 - primitive, 0.0, 1.0), -rho / w};
}

PsiA psi_A(double psiVal, double A) {
  if (!(A > 0.0)) throw InputError("psi_A: A must be positive");
  const double x = A * psiVal;
  const double tail = std::log1p(std::exp(-std::abs(x)));
  // psi_A = -softplus(-x) / A directly; psi - psi+ would cancel for large x
  return {-(std::max(-x, 0.0) + tail) / A, (std::max(x, 0.0) + tail) / A};
}

// ---------------------------------------------------------------- R_t chain

bool RtChainReport::pass() const {
  return hypothesisFailures == 0 && coefficientFailures == 0 && dominationFailures == 0 &&
         tubeFailures == 0 && quotientFailures == 0;
}

std::vector<CurvatureSample> random_curvature_samples(const CutoffParams& params, int n, int r,
                                                      int count, std::uint64_t seed) {
  params.validate();
  fiber::random::Engine rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<CurvatureSample> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const fiber::CMatrix h = fiber::random::hermitian(rng, n);
    Eigen::SelfAdjointEigenSolver<fiber::CMatrix> es(h, Eigen::EigenvaluesOnly);
    const double neg = std::max(0.0, -es.eigenvalues().minCoeff());
    const fiber::CurvatureTensor ddpsi = fiber::CurvatureTensor::from_scalar(h, r);
    double shift = params.delta * neg;
    if (i % 2 == 1) shift += 0.1;
    const fiber::CurvatureTensor n0 = fiber::random::nakano_semipositive(rng, n, r) +
                                      shift * fiber::CurvatureTensor::identity_like(n, r);
    CurvatureSample s{n0 - ddpsi, ddpsi, fiber::random::covector(rng, n), 0.0};
    if (i % 10 == 9) s.dpsi.a.assign(static_cast<std::size_t>(n), fiber::Complex(0.0, 0.0));
    const double u = 1e-6 + (1.0 - 2e-6) * unit(rng);
    s.psi = (i % 2 == 0) ? params.t + u : (params.t - 1.0) * u;
    out.push_back(std::move(s));
  }
  return out;
}

RtChainReport verify_Rt_chain(const CutoffParams& params, const CutoffCertificate& chi,
                              const std::vector<CurvatureSample>& samples, std::uint64_t seed,
                              int formTrials) {
  const double d = params.delta;
  const double eps = params.eps;
  const double tubeConstant = (1.0 - eps) * d / 8.0;
  const double quotientBound = 8.0 * (1.0 + eps) * (1.0 + eps) / ((1.0 - eps) * d);
  fiber::random::Engine rng(seed);
  RtChainReport rep;
  rep.worstCoefficientMargin = std::numeric_limits<double>::infinity();
  rep.worstTubeEigenvalue = std::numeric_limits<double>::infinity();
  for (const CurvatureSample& s : samples) {
    ++rep.samples;
    const int n = s.theta.n();
    const int r = s.theta.r();
    const EtaLambda el = eta_lambda(s.psi, params, chi);
    const double c1 = chi.chi1(s.psi);
    const double c2 = chi.chi2(s.psi);
    const double alpha = 1.0 + d * c1 / el.eta;

    bool hypothesis = true;
    for (double a : {1.0, 1.0 + d, alpha}) {
      hypothesis = hypothesis && fiber::is_nakano_semipositive(s.theta + a * s.ddpsi);
    }
    if (!hypothesis) {
      ++rep.hypothesisFailures;
      continue;
    }

    const fiber::CurvatureTensor rt =
        fiber::assemble_Rt(s.theta, s.ddpsi, s.dpsi, el.eta, c1, c2, d, el.lambda);
    const fiber::CurvatureTensor rank1 = fiber::rank_one_curvature(s.dpsi, r);

    const double coefMargin = d * c2 - d * d * c1 * c1 / el.lambda - d * c2 / 2.0;
    rep.worstCoefficientMargin = std::min(rep.worstCoefficientMargin, coefMargin);
    if (coefMargin < -kMarginTol) ++rep.coefficientFailures;
    if (!fiber::is_nakano_semipositive(rt - (d * c2 / 2.0) * rank1)) ++rep.dominationFailures;

    if (!(s.psi > params.t && s.psi < params.t + 1.0)) continue;
    ++rep.tubeSamples;
    const fiber::CurvatureTensor dominated = rt - tubeConstant * rank1;
    rep.worstTubeEigenvalue = std::min(rep.worstTubeEigenvalue, nakano_margin(dominated));
    if (!fiber::is_nakano_semipositive(dominated)) ++rep.tubeFailures;

    const fiber::CMatrix B = fiber::bkn_operator_B(rt, 1);
    const fiber::ExteriorFiber f(n, r);
    const auto basis = f.bidegree_basis(n, 1);
    const fiber::CMatrix wedge = fiber::wedge01_matrix(f, s.dpsi);
    const double slope = theta_cutoff(s.psi - params.t, eps).slope;
    bool skipped = false;
    for (int k = 0; k < formTrials; ++k) {
      const fiber::FiberForm u = fiber::random::form(rng, n, r, n, 0);
      const fiber::CVector full = slope * (wedge * u.coeffs);
      fiber::CVector v(static_cast<Eigen::Index>(basis.size()));
      for (std::size_t j = 0; j < basis.size(); ++j) {
        v(static_cast<Eigen::Index>(j)) = full(static_cast<Eigen::Index>(basis[j]));
      }
      const fiber::InverseQuadratic iq = fiber::inverse_quadratic_form(B, v);
      if (!iq.positiveDefinite) {
        skipped = true;
        break;
      }
      ++rep.quotientChecks;
      const double ratio = iq.value / (quotientBound * fiber::norm_sq(u));
      rep.worstQuotientRatio = std::max(rep.worstQuotientRatio, ratio);
      if (ratio > 1.0 + kMarginTol) ++rep.quotientFailures;
    }
    if (skipped) ++rep.skippedSingular;
  }
  return rep;
}

SharpnessProbe rt_sharpness_probe(const CutoffParams& params, const CutoffCertificate& chi,
                                  double constant, int n, int r, int count, std::uint64_t seed) {
  fiber::random::Engine rng(seed);
  SharpnessProbe probe;
  probe.worstEigenvalue = std::numeric_limits<double>::infinity();
  const double d = params.delta;
  const fiber::CurvatureTensor zero(n, r);
  for (int i = 0; i < count; ++i) {
    const double psi = params.t + 0.05 * (i + 0.5) / count;
    const fiber::Covector10 a = fiber::random::covector(rng, n);
    const EtaLambda el = eta_lambda(psi, params, chi);
    const fiber::CurvatureTensor rt =
        fiber::assemble_Rt(zero, zero, a, el.eta, chi.chi1(psi), chi.chi2(psi), d, el.lambda);
    const fiber::CurvatureTensor test = rt - constant * fiber::rank_one_curvature(a, r);
    const double m = nakano_margin(test);
    ++probe.samples;
    if (m < probe.worstEigenvalue) {
      probe.worstEigenvalue = m;
      probe.worstPsi = psi;
    }
    if (!fiber::is_nakano_semipositive(test)) ++probe.failures;
  }
  return probe;
}

}  // namespace mitk::cutoff
