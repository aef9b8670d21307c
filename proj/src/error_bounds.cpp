// SPDX-License-Identifier: Apache-2.0
#include "ltv/error_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace ltv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr Index kMaxRefinedNodesPerAxis = 512;
constexpr double kSupTolerance = 0.005;

bool same_pulse(const Signald& a, const Signald& b) {
  return a.grid() == b.grid() && a.samples() == b.samples();
}

/// (sum w f^q)^{1/q}, or max f for q = infinity; f >= 0.
double weighted_norm(const Eigen::MatrixXd& f, double weight, double q) {
  if (std::isinf(q)) return f.size() ? f.maxCoeff() : 0.0;
  return std::pow(f.array().pow(q).sum() * weight, 1.0 / q);
}

/// x^{1/b} with the b -> infinity limit (1 for x > 0, 0 for x = 0).
double root_b(double x, double b) {
  if (std::isinf(b)) return x > 0 ? 1.0 : 0.0;
  return std::pow(x, 1.0 / b);
}

/// rho_bar_inf^{(p-2)/p}; exactly 1 at p = 2.
double rho_factor(double rho_bar_inf, double p) {
  if (p == 2.0) return 1.0;
  return std::pow(rho_bar_inf, (p - 2.0) / p);
}

struct LevelSamples {
  Eigen::MatrixXcd ambiguity;
  Eigen::MatrixXd rho_bar_c1;
  Eigen::MatrixXd rho_bar_c2;
};

struct Extremes {
  double r_inf_c1 = -kInf, r_inf_c2 = -kInf;
  double rho_bar_c1 = -kInf, rho_bar_c2 = -kInf;
  double abs_a_minus_one = -kInf;
  double inf_re_a = kInf;

  static Extremes of(const LevelSamples& s) {
    Extremes e;
    const Eigen::ArrayXXcd& A = s.ambiguity.array();
    e.r_inf_c1 = (1.0 - A.abs2()).maxCoeff();
    e.r_inf_c2 = (2.0 - 2.0 * A.real()).maxCoeff();
    e.rho_bar_c1 = s.rho_bar_c1.maxCoeff();
    e.rho_bar_c2 = s.rho_bar_c2.maxCoeff();
    e.abs_a_minus_one = (A - 1.0).abs().maxCoeff();
    e.inf_re_a = A.real().minCoeff();
    return e;
  }

  void absorb(const Extremes& o) {
    r_inf_c1 = std::max(r_inf_c1, o.r_inf_c1);
    r_inf_c2 = std::max(r_inf_c2, o.r_inf_c2);
    rho_bar_c1 = std::max(rho_bar_c1, o.rho_bar_c1);
    rho_bar_c2 = std::max(rho_bar_c2, o.rho_bar_c2);
    abs_a_minus_one = std::max(abs_a_minus_one, o.abs_a_minus_one);
    inf_re_a = std::min(inf_re_a, o.inf_re_a);
  }

  bool settled_against(const Extremes& prev) const {
    auto near = [](double x, double y) {
      return std::abs(x - y) <= kSupTolerance * std::max(std::abs(x), std::abs(y)) + 1e-14;
    };
    return near(r_inf_c1, prev.r_inf_c1) && near(r_inf_c2, prev.r_inf_c2) && near(rho_bar_c1, prev.rho_bar_c1) &&
           near(rho_bar_c2, prev.rho_bar_c2) && near(abs_a_minus_one, prev.abs_a_minus_one) &&
           near(inf_re_a, prev.inf_re_a);
  }
};

// e^{i2pi nu2_j t} for every grid time t (rows) and node frequency (columns).
Eigen::MatrixXcd modulation_table(const TimeGrid<double>& grid, const Eigen::VectorXd& nu2) {
  Eigen::MatrixXcd mod(grid.size(), nu2.size());
  for (Index j = 0; j < nu2.size(); ++j)
    for (Index t = 0; t < grid.size(); ++t) mod(t, j) = cis2pi(nu2(j) * grid.time(t));
  return mod;
}

LevelSamples sample_level(const Signald& g, const Signald& gamma, const SpreadingNodes& nodes, double alpha) {
  const TimeGrid<double>& grid = g.grid();
  const Index n = grid.size();
  const Index m1 = nodes.nu1.size(), m2 = nodes.nu2.size();
  const detail::ShiftBank<double> bank(gamma);
  const Eigen::MatrixXcd mod = modulation_table(grid, nodes.nu2);
  const Eigen::VectorXcd& gs = g.samples();

  LevelSamples out;
  out.ambiguity.resize(m1, m2);
  out.rho_bar_c1.resize(m1, m2);
  out.rho_bar_c2.resize(m1, m2);
  for (Index i = 0; i < m1; ++i) {
    const Eigen::VectorXcd shifted = bank.time_shifted(nodes.nu1(i));
    const Eigen::RowVectorXcd row = (gs.conjugate().cwiseProduct(shifted) * grid.dt()).transpose() * mod;
    for (Index j = 0; j < m2; ++j) {
      const std::complex<double> phase =
          detail::ShiftBank<double>::polarization_phase(Point2<double>(nodes.nu1(i), nodes.nu2(j)), alpha);
      const std::complex<double> A = row(j) * phase;
      out.ambiguity(i, j) = A;
      double sup1 = 0, sup2 = 0;
      for (Index t = 0; t < n; ++t) {
        const std::complex<double> s = phase * mod(t, j) * shifted(t);
        sup1 = std::max(sup1, std::abs(s - A * gs(t)));
        sup2 = std::max(sup2, std::abs(s - gs(t)));
      }
      out.rho_bar_c1(i, j) = sup1;
      out.rho_bar_c2(i, j) = sup2;
    }
  }
  return out;
}

// (m + 1)^2 lattice over the closed support, corners included; used for extrema only.
SpreadingNodes closed_lattice(const CellSpreading& s, Index m) {
  const Point2<double> o = s.support_origin();
  SpreadingNodes nodes;
  nodes.nu1 = Eigen::VectorXd::LinSpaced(m + 1, o(0), o(0) + s.support_side());
  nodes.nu2 = Eigen::VectorXd::LinSpaced(m + 1, o(1), o(1) + s.support_side());
  return nodes;
}

void require_subdiv(int subdiv) {
  if (subdiv < 1) throw std::invalid_argument("subdiv must be >= 1");
}

void require_profile(const PulseProfile& profile, const CellSpreading& s) {
  if (!profile.matches(s, profile.subdiv()))
    throw ShapeMismatch("pulse profile was built for a different spreading support");
}

void require_unit(const Signald& g, const Signald& gamma) {
  if (std::abs(norm(g, 2.0) - 1) > 1e-9 || std::abs(norm(gamma, 2.0) - 1) > 1e-9)
    throw PreconditionFailed("unit-pulses", "g and gamma must have unit 2-norm within 1e-9");
}

void require_alpha(const CellSpreading& s, const ErrorConfig& cfg) {
  if (cfg.alpha != s.alpha())
    throw std::invalid_argument("ErrorConfig.alpha differs from the polarization of the spreading function");
}

}  // namespace

const char* to_string(Mode mode) { return mode == Mode::c1 ? "c1" : "c2"; }

double ErrorConfig::b() const {
  if (a == 1.0) return kInf;
  if (std::isinf(a)) return 1.0;
  return a / (a - 1.0);
}

void ErrorConfig::validate() const {
  if (!(p >= 1.0) || std::isinf(p)) throw std::invalid_argument("ErrorConfig: p must satisfy 1 <= p < infinity");
  if (!(a >= 1.0)) throw std::invalid_argument("ErrorConfig: a must satisfy 1 <= a <= infinity");
  if (!std::isfinite(alpha)) throw std::invalid_argument("ErrorConfig: alpha must be finite");
}

// ---------------------------------------------------------------------------
// PulseProfile
// ---------------------------------------------------------------------------

PulseProfile::PulseProfile(const Signald& g, const Signald& gamma, const CellSpreading& s, int subdiv)
    : g_(g), gamma_(gamma), support_(s), subdiv_(subdiv), alpha_(s.alpha()), measure_(s.support_measure()) {
  require_same_grid(g, gamma);
  require_subdiv(subdiv);
  nodes_ = spreading_nodes(s, subdiv);

  LevelSamples base = sample_level(g, gamma, nodes_, alpha_);
  Extremes overall = Extremes::of(base);
  Extremes previous = overall;
  ambiguity_ = std::move(base.ambiguity);
  rho_bar_c1_ = std::move(base.rho_bar_c1);
  rho_bar_c2_ = std::move(base.rho_bar_c2);
  levels_ = 1;

  for (int level_subdiv = 2 * subdiv; Index(s.k_grid()) * level_subdiv <= kMaxRefinedNodesPerAxis;
       level_subdiv *= 2) {
    const SpreadingNodes lattice = closed_lattice(s, Index(s.k_grid()) * level_subdiv);
    const Extremes current = Extremes::of(sample_level(g, gamma, lattice, alpha_));
    overall.absorb(current);
    ++levels_;
    if (current.settled_against(previous)) {
      converged_ = true;
      break;
    }
    previous = current;
  }

  r_inf_c1_ = std::max(0.0, overall.r_inf_c1);
  r_inf_c2_ = std::max(0.0, overall.r_inf_c2);
  rho_bar_inf_c1_ = overall.rho_bar_c1;
  rho_bar_inf_c2_ = overall.rho_bar_c2;
  sup_abs_a_minus_one_ = overall.abs_a_minus_one;
  inf_re_a_ = overall.inf_re_a;
}

bool PulseProfile::matches(const CellSpreading& s, int subdiv) const {
  return subdiv == subdiv_ && support_.same_support(s);
}

Eigen::MatrixXcd PulseProfile::smoothing(Mode mode) const {
  if (mode == Mode::c1) return ambiguity_;
  return Eigen::MatrixXcd::Ones(ambiguity_.rows(), ambiguity_.cols());
}

Eigen::MatrixXd PulseProfile::r_function(Mode mode) const {
  const Eigen::ArrayXXcd A = ambiguity_.array();
  const Eigen::ArrayXXcd B = smoothing(mode).array();
  return (1.0 + (A - B).abs2() - A.abs2()).max(0.0).matrix();
}

// ---------------------------------------------------------------------------
// E_p
// ---------------------------------------------------------------------------

ErrorRoutes error_ep_routes(const CellSpreading& s, const PulseProfile& profile, const ErrorConfig& cfg) {
  cfg.validate();
  require_profile(profile, s);
  require_alpha(s, cfg);
  require_unit(profile.g(), profile.gamma());
  const int subdiv = profile.subdiv();
  const Signald& g = profile.g();
  const Signald& gamma = profile.gamma();
  const SpreadingNodes nodes = spreading_nodes(s, subdiv);
  const Eigen::MatrixXcd B = profile.smoothing(cfg.mode);

  // twisted weights Sigma(nu) e^{-i2pi eta(nu, mu)} dnu
  Eigen::MatrixXcd twisted(nodes.nu1.size(), nodes.nu2.size());
  for (Index i = 0; i < twisted.rows(); ++i)
    for (Index j = 0; j < twisted.cols(); ++j)
      twisted(i, j) = nodes.values(i, j) * nodes.cell_area *
                      cis2pi(-symplectic(Point2<double>(nodes.nu1(i), nodes.nu2(j)), cfg.mu));
  const std::complex<double> lambda = twisted.cwiseProduct(B).sum();

  ErrorRoutes routes;
  {
    const TFShift<double> to_mu{cfg.mu(0), cfg.mu(1), 0.5};
    const Signald h_gamma = apply_channel(s, shift(gamma, to_mu), subdiv);
    routes.direct = norm(h_gamma - lambda * shift(g, to_mu), cfg.p);
  }
  {
    const Eigen::MatrixXcd d = detail::diagonal_factors(nodes, g.grid(), s.alpha(), twisted);
    const detail::ShiftBank<double> bank(gamma);
    Eigen::VectorXcd z = -lambda * g.samples();
    for (Index i = 0; i < nodes.nu1.size(); ++i) z += d.col(i).cwiseProduct(bank.time_shifted(nodes.nu1(i)));
    // S_mu is an isometry of L_p, but the sampled p-norm of a non-smooth |z|
    // (odd p) is not shift invariant to 1e-6, so the outer shift is put back.
    routes.reduced = norm(shift(Signald(g.grid(), std::move(z)), TFShift<double>{cfg.mu(0), cfg.mu(1), 0.5}), cfg.p);
  }
  return routes;
}

double error_ep(const CellSpreading& s, const PulseProfile& profile, const ErrorConfig& cfg) {
  const ErrorRoutes r = error_ep_routes(s, profile, cfg);
  // scale of E_p: ||Sigma||_1 max(||gamma||_p, ||g||_p) bounds it from above
  const double scale =
      spreading_norm(s, 1.0) * std::max(norm(profile.gamma(), cfg.p), norm(profile.g(), cfg.p));
  const double tol = 1e-6 * std::max(r.direct, r.reduced) + 1e-10 * scale;
  if (!(std::abs(r.direct - r.reduced) <= tol))
    throw OracleMismatch("E_p routes disagree: direct " + std::to_string(r.direct) + " vs reduced " +
                         std::to_string(r.reduced));
  return r.direct;
}

double error_ep(const CellSpreading& s, const Signald& g, const Signald& gamma, const ErrorConfig& cfg,
                int subdiv) {
  return error_ep(s, PulseProfile(g, gamma, s, subdiv), cfg);
}

double rho_bar_inf(const Signald& g, const Signald& gamma, const CellSpreading& s, Mode mode, double alpha,
                   int subdiv) {
  require_same_grid(g, gamma);
  require_subdiv(subdiv);
  require_unit(g, gamma);
  const LevelSamples level = sample_level(g, gamma, spreading_nodes(s, subdiv), alpha);
  return mode == Mode::c1 ? level.rho_bar_c1.maxCoeff() : level.rho_bar_c2.maxCoeff();
}

// ---------------------------------------------------------------------------
// Bounds
// ---------------------------------------------------------------------------

double thm2_bound(const PulseProfile& profile, const ErrorConfig& cfg) {
  cfg.validate();
  const double b = cfg.b();
  const double q = b / cfg.p;
  const double r_norm = std::isinf(b) ? profile.r_inf(cfg.mode)
                                      : weighted_norm(profile.r_function(cfg.mode), profile.nodes().cell_area, q);
  const double rho = cfg.p == 2.0 ? 1.0 : std::pow(profile.rho_bar_inf(cfg.mode), cfg.p - 2.0);
  return std::pow(rho * r_norm, 1.0 / cfg.p);
}

double thm2_bound(const CellSpreading& s, const Signald& g, const Signald& gamma, const ErrorConfig& cfg,
                  int subdiv) {
  require_alpha(s, cfg);
  return thm2_bound(PulseProfile(g, gamma, s, subdiv), cfg);
}

double kozek_simplified(const CellSpreading& s, const PulseProfile& gamma_profile, const ErrorConfig& cfg) {
  cfg.validate();
  require_profile(gamma_profile, s);
  if (!same_pulse(gamma_profile.g(), gamma_profile.gamma()))
    throw std::invalid_argument("kozek_simplified: profile must be built with g = gamma");
  if (cfg.mode != Mode::c2) throw DomainError("Kozek bound requires mode C2");
  if (cfg.p != 2.0 || cfg.a != 1.0) throw DomainError("Kozek bound requires p = 2 and a = 1");
  if (cfg.alpha != 0.0 || s.alpha() != 0.0) throw DomainError("Kozek bound requires alpha = 0");
  if (s.placement() != Placement::centered)
    throw DomainError("Kozek bound requires U = [-t0, t0] x [-f0, f0] (centered support)");
  const double measure = s.support_measure();
  if (measure > 1.0 + 1e-12) throw DomainError("Kozek bound requires |U| <= 1");
  return 2.0 * std::sin(std::numbers::pi * measure / 4.0) + 3.0 * gamma_profile.sup_abs_a_minus_one();
}

double kozek_simplified(const CellSpreading& s, const Signald& gamma, const ErrorConfig& cfg, int subdiv) {
  return kozek_simplified(s, PulseProfile(gamma, gamma, s, subdiv), cfg);
}

double general_bound(const CellSpreading& s, const Signald& g, const Signald& gamma, const ErrorConfig& cfg) {
  cfg.validate();
  const double c = std::max(norm(gamma, cfg.p), norm(g, cfg.p));
  return 2.0 * c * WeightModel::indicator(s).norm(cfg.b());
}

double r_inf_bound(const PulseProfile& profile, const ErrorConfig& cfg) {
  cfg.validate();
  return rho_factor(profile.rho_bar_inf(cfg.mode), cfg.p) * std::pow(profile.r_inf(cfg.mode), 1.0 / cfg.p) *
         root_b(profile.measure(), cfg.b());
}

double r_inf_bound(const CellSpreading& s, const Signald& g, const Signald& gamma, const ErrorConfig& cfg,
                   int subdiv) {
  require_alpha(s, cfg);
  return r_inf_bound(PulseProfile(g, gamma, s, subdiv), cfg);
}

double rho_p_norm(const PulseProfile& profile, const ErrorConfig& cfg) {
  cfg.validate();
  const SpreadingNodes& nodes = profile.nodes();
  const Signald& g = profile.g();
  const TimeGrid<double>& grid = g.grid();
  const Eigen::MatrixXcd B = profile.smoothing(cfg.mode);
  const detail::ShiftBank<double> bank(profile.gamma());
  const Eigen::MatrixXcd mod = modulation_table(grid, nodes.nu2);

  Eigen::MatrixXd rho(nodes.nu1.size(), nodes.nu2.size());
  for (Index i = 0; i < rho.rows(); ++i) {
    const Eigen::VectorXcd shifted = bank.time_shifted(nodes.nu1(i));
    for (Index j = 0; j < rho.cols(); ++j) {
      const std::complex<double> phase = detail::ShiftBank<double>::polarization_phase(
          Point2<double>(nodes.nu1(i), nodes.nu2(j)), profile.alpha());
      const Eigen::VectorXcd diff = phase * mod.col(j).cwiseProduct(shifted) - B(i, j) * g.samples();
      rho(i, j) = norm(Signald(grid, diff), cfg.p);
    }
  }
  return weighted_norm(rho, nodes.cell_area, cfg.b());
}

double rho_kernel_bound(const PulseProfile& profile, const ErrorConfig& cfg) {
  cfg.validate();
  const double rho_bar = profile.rho_bar(cfg.mode).maxCoeff();
  const double r_norm = weighted_norm(profile.r_function(cfg.mode), profile.nodes().cell_area, cfg.b() / cfg.p);
  return rho_factor(rho_bar, cfg.p) * std::pow(r_norm, 1.0 / cfg.p);
}

Fidelities fidelities(const PulseProfile& profile) {
  const double w = profile.nodes().cell_area;
  const Eigen::ArrayXXcd A = profile.ambiguity().array();
  return Fidelities{A.abs2().sum() * w, A.real().sum() * w};
}

double fidelity_r1(const PulseProfile& profile, const ErrorConfig& cfg) {
  cfg.validate();
  const double b = cfg.b();
  if (b < cfg.p) throw PreconditionFailed("b>=p", "fidelity form requires b >= p");
  if (profile.r_inf(Mode::c1) > 1.0 + 1e-12)
    throw PreconditionFailed("R_inf<=1", "fidelity form requires R_inf <= 1");
  const double mass = std::max(0.0, profile.measure() - fidelities(profile).two_channel);
  return rho_factor(profile.rho_bar_inf(Mode::c1), cfg.p) * root_b(mass, b);
}

double fidelity_r2(const PulseProfile& profile, const ErrorConfig& cfg) {
  cfg.validate();
  const double b = cfg.b();
  if (b < cfg.p) throw PreconditionFailed("b>=p", "fidelity form requires b >= p");
  if (profile.inf_re_a() < 0.5)
    throw PreconditionFailed("C2-feasibility", "1-channel fidelity form requires inf_U Re A >= 1/2");
  const double mass = std::max(0.0, 2.0 * (profile.measure() - fidelities(profile).one_channel));
  return rho_factor(profile.rho_bar_inf(Mode::c2), cfg.p) * root_b(mass, b);
}

FidelityBounds fidelity_bounds(const PulseProfile& profile, const ErrorConfig& cfg) {
  return FidelityBounds{fidelity_r1(profile, cfg), fidelity_r2(profile, cfg)};
}

FidelityBounds fidelity_bounds(const CellSpreading& s, const Signald& g, const Signald& gamma,
                               const ErrorConfig& cfg, int subdiv) {
  return fidelity_bounds(PulseProfile(g, gamma, s, subdiv), cfg);
}

// ---------------------------------------------------------------------------
// Necessary support conditions
// ---------------------------------------------------------------------------

MassCheck ambiguity_mass_check(const Signald& g, const Signald& gamma, double r, double measure, double alpha) {
  if (!(r > 0)) throw std::invalid_argument("ambiguity_mass_check: r must be > 0");
  if (!(measure >= 0)) throw std::invalid_argument("ambiguity_mass_check: |U| must be >= 0");
  const double e = std::numbers::e;
  if (measure > e * std::min(1.0, 2.0 / r) * (1 + 1e-12))
    throw DomainError("ambiguity_mass_check requires |U| <= e min(1, 2/r)");
  const MassCheck empty{0.0, measure * std::exp(-measure * r / (2.0 * e))};
  if (measure == 0) return empty;

  double half_width = 2.0;
  Index cells = 160;
  for (int attempt = 0; attempt < 6; ++attempt, half_width *= 1.5, cells = cells * 3 / 2) {
    const double h = 2.0 * half_width / double(cells);
    if (double(cells * cells) * h * h < measure) continue;
    const TFGrid<double> tf = TFGrid<double>::centered(cells, cells, h, h);
    const Eigen::ArrayXXd mag = ambiguity_surface(g, gamma, tf, alpha).values.array().abs();

    double border = 0;
    for (Index k = 0; k < cells; ++k)
      border = std::max({border, mag(0, k), mag(cells - 1, k), mag(k, 0), mag(k, cells - 1)});

    std::vector<double> sorted(mag.data(), mag.data() + mag.size());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    const double area = h * h;
    double covered = 0, lhs = 0, threshold = 0;
    for (double v : sorted) {
      const double take = std::min(area, measure - covered);
      lhs += std::pow(v, r) * take;
      covered += take;
      threshold = v;
      if (covered >= measure) break;
    }
    if (threshold > border) return MassCheck{lhs, empty.rhs};
  }
  throw DomainError("ambiguity_mass_check: super-level set does not fit the sampled region");
}

double c2_support_threshold() { return 2.0 * std::numbers::e * std::numbers::ln2; }

C2Feasibility c2_feasibility(const PulseProfile& profile) {
  C2Feasibility out;
  out.inf_re_a = profile.inf_re_a();
  out.feasible = out.inf_re_a >= 0.5;
  out.threshold = c2_support_threshold();
  out.within_threshold = profile.measure() <= out.threshold;
  return out;
}

C2Feasibility c2_feasibility(const Signald& g, const Signald& gamma, const CellSpreading& s, double alpha,
                             int subdiv) {
  const CellSpreading support(s.k_grid(), s.cell_side(), s.coeffs(), alpha, s.placement());
  return c2_feasibility(PulseProfile(g, gamma, support, subdiv));
}

double necessary_condition_lhs(double measure, int k, double p, double b, double rho_bar_inf) {
  const double e = std::numbers::e;
  const double inner = k * measure * (1.0 - std::exp(-measure / (e * k)));
  return rho_factor(rho_bar_inf, p) * root_b(inner, b);
}

NecessaryBound necessary_u_bound(double delta, int k, double p, double b, double rho_bar_inf) {
  if (!(delta > 0 && delta < 1)) throw std::invalid_argument("necessary_u_bound: delta must lie in (0, 1)");
  if (k != 1 && k != 2) throw std::invalid_argument("necessary_u_bound: k must be 1 or 2");
  if (!(p >= 1) || std::isinf(p)) throw std::invalid_argument("necessary_u_bound: p must satisfy 1 <= p < inf");
  if (!(b >= 1)) throw std::invalid_argument("necessary_u_bound: b must be >= 1");
  if (!(rho_bar_inf >= 0)) throw std::invalid_argument("necessary_u_bound: rho_bar_inf must be >= 0");

  const double e = std::numbers::e;
  auto lhs = [&](double x) { return necessary_condition_lhs(x, k, p, b, rho_bar_inf); };
  if (lhs(e) <= delta) return NecessaryBound{e, true};
  if (!(lhs(1e-12) <= delta)) throw NoSolution("necessary_u_bound: inequality fails for every |U| > 0");

  double lo = 0.0, hi = e;
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (lhs(mid) <= delta ? lo : hi) = mid;
  }
  return NecessaryBound{lo, false};
}

// ---------------------------------------------------------------------------
// Report
// ---------------------------------------------------------------------------

BoundReport full_report(const CellSpreading& s, const PulseProfile& profile, const PulseProfile& gamma_profile,
                        const ErrorConfig& cfg) {
  cfg.validate();
  require_profile(profile, s);
  require_alpha(s, cfg);

  BoundReport rep;
  try {
    const double ep = error_ep(s, profile, cfg);
    rep.e_p = Reported<double>::ok(ep);
    rep.ratio = Reported<double>::ok(ep / spreading_norm(s, cfg.a));
  } catch (const Error& err) {
    rep.e_p = Reported<double>::absent(err.what());
    rep.ratio = Reported<double>::absent(err.what());
  }

  rep.thm2_bound = thm2_bound(profile, cfg);
  try {
    rep.kozek_simplified = Reported<double>::ok(kozek_simplified(s, gamma_profile, cfg));
  } catch (const Error& err) {
    rep.kozek_simplified = Reported<double>::absent(err.what());
  }
  rep.general_bound = general_bound(s, profile.g(), profile.gamma(), cfg);
  rep.r_inf_bound = r_inf_bound(profile, cfg);
  rep.rho_bar_inf = profile.rho_bar_inf(cfg.mode);
  rep.r_inf = profile.r_inf(cfg.mode);

  const Fidelities fid = fidelities(profile);
  rep.fidelity2 = fid.two_channel;
  rep.fidelity1 = fid.one_channel;
  const C2Feasibility feas = c2_feasibility(profile);
  rep.c2_feasible = feas.feasible && feas.within_threshold;

  try {
    rep.r1 = Reported<double>::ok(fidelity_r1(profile, cfg));
  } catch (const PreconditionFailed& err) {
    rep.r1 = Reported<double>::absent(err.condition());
  }
  try {
    rep.r2 = Reported<double>::ok(fidelity_r2(profile, cfg));
  } catch (const PreconditionFailed& err) {
    rep.r2 = Reported<double>::absent(err.condition());
  }
  rep.c2_modulus_bound = 2.0 * profile.sup_abs_a_minus_one();
  rep.sup_converged = profile.converged();
  return rep;
}

BoundReport full_report(const CellSpreading& s, const Signald& g, const Signald& gamma, const ErrorConfig& cfg,
                        int subdiv) {
  const PulseProfile profile(g, gamma, s, subdiv);
  if (same_pulse(g, gamma)) return full_report(s, profile, profile, cfg);
  return full_report(s, profile, PulseProfile(gamma, gamma, s, subdiv), cfg);
}

}  // namespace ltv
