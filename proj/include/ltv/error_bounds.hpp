// SPDX-License-Identifier: Apache-2.0
//
// The approximate-eigenstructure error
//   E_p = || H S_mu gamma - lambda(mu) S_mu g ||_p,   lambda = F_s(Sigma B),
// and the bounds on E_p / ||Sigma||_a for spreading supported on U (K = chi_U).
#pragma once

#include <optional>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "ltv/channel.hpp"
#include "ltv/core_tf.hpp"

namespace ltv {

/// Smoothing of the symbol: C1 uses B = A_{g gamma}, C2 uses B = 1.
enum class Mode { c1, c2 };

const char* to_string(Mode mode);

struct ErrorConfig {
  double p = 2.0;  ///< error norm, 1 <= p < infinity
  double a = 2.0;  ///< spreading norm, 1 <= a <= infinity
  Mode mode = Mode::c2;
  double alpha = 0.0;
  Point2<double> mu = Point2<double>::Zero();

  /// Conjugate exponent of a: 1/a + 1/b = 1.
  double b() const;
  /// Throws std::invalid_argument for p outside [1, inf) or a outside [1, inf].
  void validate() const;
};

/// Value that may be missing, with the reason it is missing.
template <typename T>
struct Reported {
  std::optional<T> value;
  std::string reason;

  static Reported ok(T v) { return Reported{std::move(v), {}}; }
  static Reported absent(std::string why) { return Reported{std::nullopt, std::move(why)}; }
  bool has_value() const { return value.has_value(); }
  const T& operator*() const { return *value; }
};

/// Pulse-pair quantities sampled over the spreading support U. They depend on
/// (g, gamma, alpha, U) but not on the spreading coefficients, so one profile
/// serves every Monte-Carlo draw with the same support.
///
/// Base-level samples live on the same sub-cell nodes that apply_channel and
/// error_ep integrate over. Suprema and infima are additionally refined on
/// lattices over the closed support (corners included), doubling the density
/// until every tracked extremum moves by less than 0.5% or the lattice exceeds
/// 512 points per axis; the reported extremum is taken over all levels.
class PulseProfile {
 public:
  PulseProfile(const Signald& g, const Signald& gamma, const CellSpreading& s, int subdiv);

  const Signald& g() const { return g_; }
  const Signald& gamma() const { return gamma_; }
  int subdiv() const { return subdiv_; }
  double alpha() const { return alpha_; }
  double measure() const { return measure_; }
  const SpreadingNodes& nodes() const { return nodes_; }
  bool matches(const CellSpreading& s, int subdiv) const;

  /// A^(alpha)_{g gamma} at the base nodes.
  const Eigen::MatrixXcd& ambiguity() const { return ambiguity_; }
  /// B at the base nodes.
  Eigen::MatrixXcd smoothing(Mode mode) const;
  /// R = 1 + |A - B|^2 - |A|^2 at the base nodes (clamped at 0).
  Eigen::MatrixXd r_function(Mode mode) const;
  /// sup_x |(S_nu gamma)(x) - B(nu) g(x)| at the base nodes (sup over samples).
  const Eigen::MatrixXd& rho_bar(Mode mode) const { return mode == Mode::c1 ? rho_bar_c1_ : rho_bar_c2_; }

  double r_inf(Mode mode) const { return mode == Mode::c1 ? r_inf_c1_ : r_inf_c2_; }
  double rho_bar_inf(Mode mode) const { return mode == Mode::c1 ? rho_bar_inf_c1_ : rho_bar_inf_c2_; }
  /// sup over U of |A - 1|
  double sup_abs_a_minus_one() const { return sup_abs_a_minus_one_; }
  /// inf over U of Re A
  double inf_re_a() const { return inf_re_a_; }
  int refinement_levels() const { return levels_; }
  bool converged() const { return converged_; }

 private:
  Signald g_;
  Signald gamma_;
  CellSpreading support_;
  int subdiv_;
  double alpha_;
  double measure_;
  SpreadingNodes nodes_;
  Eigen::MatrixXcd ambiguity_;
  Eigen::MatrixXd rho_bar_c1_;
  Eigen::MatrixXd rho_bar_c2_;
  double r_inf_c1_ = 0, r_inf_c2_ = 0;
  double rho_bar_inf_c1_ = 0, rho_bar_inf_c2_ = 0;
  double sup_abs_a_minus_one_ = 0;
  double inf_re_a_ = 1;
  int levels_ = 0;
  bool converged_ = false;
};

/// E_p along both routes: direct application of H to S_mu gamma, and the
/// reduced integral z = int Sigma(nu) e^{-i2pi eta(nu, mu)} (S_nu gamma - B g) dnu,
/// reported as ||S_mu z||_p so that both routes take the norm of the same samples.
struct ErrorRoutes {
  double direct = 0;
  double reduced = 0;
};

ErrorRoutes error_ep_routes(const CellSpreading& s, const PulseProfile& profile, const ErrorConfig& cfg);

/// E_p; throws OracleMismatch when the two routes differ by more than 1e-6 relative.
/// g and gamma must have unit 2-norm (PreconditionFailed otherwise), as in rho_bar_inf.
double error_ep(const CellSpreading& s, const Signald& g, const Signald& gamma, const ErrorConfig& cfg,
                int subdiv);
double error_ep(const CellSpreading& s, const PulseProfile& profile, const ErrorConfig& cfg);

/// max over the sub-cell nodes of U of rho_bar(nu).
double rho_bar_inf(const Signald& g, const Signald& gamma, const CellSpreading& s, Mode mode, double alpha,
                   int subdiv = 4);

/// Bound on E_p / ||Sigma||_a:  ( rho_bar_inf^{p-2} || R chi_U ||_{b/p} )^{1/p}.
double thm2_bound(const PulseProfile& profile, const ErrorConfig& cfg);
double thm2_bound(const CellSpreading& s, const Signald& g, const Signald& gamma, const ErrorConfig& cfg,
                  int subdiv = 4);

/// Bound on E_2^2 / ||Sigma||_1^2 for g = gamma and origin-symmetric rectangular
/// U with |U| <= 1:  2 sin(pi |U| / 4) + 3 sup_U |A_{gamma gamma} - 1|.
/// `gamma_profile` must be built with g = gamma. Throws DomainError outside that setting.
double kozek_simplified(const CellSpreading& s, const PulseProfile& gamma_profile, const ErrorConfig& cfg);
double kozek_simplified(const CellSpreading& s, const Signald& gamma, const ErrorConfig& cfg, int subdiv = 4);

/// 2 C ||chi_U||_b with C = max(||gamma||_p, ||g||_p).
double general_bound(const CellSpreading& s, const Signald& g, const Signald& gamma, const ErrorConfig& cfg);

/// rho_bar_inf^{(p-2)/p} R_inf^{1/p} |U|^{1/b}
double r_inf_bound(const PulseProfile& profile, const ErrorConfig& cfg);
double r_inf_bound(const CellSpreading& s, const Signald& g, const Signald& gamma, const ErrorConfig& cfg,
                   int subdiv = 4);

/// ||rho_p||_b evaluated directly from the shifted pulses on the base nodes.
double rho_p_norm(const PulseProfile& profile, const ErrorConfig& cfg);
/// rho_bar_inf^{(p-2)/p} ||R K^p||_{b/p}^{1/p} on the base nodes (no sup refinement).
double rho_kernel_bound(const PulseProfile& profile, const ErrorConfig& cfg);

/// ||A^2 chi_U||_1 and ||Re(A) chi_U||_1.
struct Fidelities {
  double two_channel = 0;
  double one_channel = 0;
};
Fidelities fidelities(const PulseProfile& profile);

/// r_1(U) (C1) and r_2(U) (C2) in fidelity form.
struct FidelityBounds {
  double r1 = 0;
  double r2 = 0;
};

/// Requires b >= p and R_inf(C1) <= 1.
double fidelity_r1(const PulseProfile& profile, const ErrorConfig& cfg);
/// Requires b >= p and the C2 feasibility condition inf_U Re A >= 1/2.
double fidelity_r2(const PulseProfile& profile, const ErrorConfig& cfg);
/// Both; throws PreconditionFailed naming the first condition that fails.
FidelityBounds fidelity_bounds(const PulseProfile& profile, const ErrorConfig& cfg);
FidelityBounds fidelity_bounds(const CellSpreading& s, const Signald& g, const Signald& gamma,
                               const ErrorConfig& cfg, int subdiv = 4);

/// Left and right side of || |A|^r chi_U ||_1 <= |U| e^{-|U| r / (2e)} where U is
/// the super-level set of |A| with the given measure (the largest left side).
struct MassCheck {
  double lhs = 0;
  double rhs = 0;
};
MassCheck ambiguity_mass_check(const Signald& g, const Signald& gamma, double r, double measure, double alpha);

/// 2 e ln 2, the largest |U| for which the C2 condition can hold.
double c2_support_threshold();

struct C2Feasibility {
  bool feasible = false;          ///< sampled inf_U Re A >= 1/2
  bool within_threshold = false;  ///< |U| <= 2 e ln 2
  double inf_re_a = 0;
  double threshold = 0;
};
C2Feasibility c2_feasibility(const PulseProfile& profile);
C2Feasibility c2_feasibility(const Signald& g, const Signald& gamma, const CellSpreading& s, double alpha,
                             int subdiv = 4);

/// rho_bar_inf^{(p-2)/p} (k |U| (1 - e^{-|U|/(e k)}))^{1/b}
double necessary_condition_lhs(double measure, int k, double p, double b, double rho_bar_inf);

struct NecessaryBound {
  double measure = 0;      ///< largest admissible |U| in (0, e]
  bool saturated = false;  ///< the inequality still holds at |U| = e
};
/// Largest |U| in (0, e] with necessary_condition_lhs <= delta, by bisection
/// to 1e-13 absolute. Throws NoSolution when no |U| > 0 satisfies it.
NecessaryBound necessary_u_bound(double delta, int k, double p, double b, double rho_bar_inf);

/// Every quantity above for one channel realisation.
struct BoundReport {
  Reported<double> e_p;
  Reported<double> ratio;  ///< E_p / ||Sigma||_a
  double thm2_bound = 0;
  Reported<double> kozek_simplified;
  double general_bound = 0;
  double r_inf_bound = 0;
  double rho_bar_inf = 0;
  double r_inf = 0;
  double fidelity2 = 0;  ///< ||A^2 chi_U||_1
  double fidelity1 = 0;  ///< ||Re(A) chi_U||_1
  bool c2_feasible = false;
  Reported<double> r1;
  Reported<double> r2;
  /// 2 sup_U |1 - A|, the modulus form of the p = 2, a = 1, C2 consequence.
  double c2_modulus_bound = 0;
  bool sup_converged = false;
};

BoundReport full_report(const CellSpreading& s, const Signald& g, const Signald& gamma, const ErrorConfig& cfg,
                        int subdiv);
/// Reuses precomputed profiles; `gamma_profile` (g = gamma) feeds the Kozek
/// bound and may be the same object as `profile` when g = gamma.
BoundReport full_report(const CellSpreading& s, const PulseProfile& profile, const PulseProfile& gamma_profile,
                        const ErrorConfig& cfg);

}  // namespace ltv
