// SPDX-License-Identifier: Apache-2.0
//
// Piecewise-constant ("cell model") spreading functions and the channel
// operators they define through the spreading representation
//   H = int Sigma(nu) S_nu(alpha) dnu.
#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

#include "ltv/core_tf.hpp"

namespace ltv {

/// Where the K x K block of cells sits in the delay-Doppler plane.
enum class Placement {
  corner,    ///< U = [0, K u]^2
  centered,  ///< U = [-K u / 2, K u / 2]^2
};

/// Sigma(nu) = sum_k c_k chi_Q(nu - cell_k) with square cells of side u.
class CellSpreading {
 public:
  CellSpreading(int k_grid, double cell_side, Eigen::MatrixXcd coeffs, double alpha = 0.0,
                Placement placement = Placement::corner);

  /// Cell side chosen as sqrt(measure) / k_grid so that |U| = measure.
  static CellSpreading with_measure(int k_grid, double measure, Eigen::MatrixXcd coeffs, double alpha = 0.0,
                                    Placement placement = Placement::corner);

  int k_grid() const { return k_grid_; }
  double cell_side() const { return u_; }
  double alpha() const { return alpha_; }
  Placement placement() const { return placement_; }
  const Eigen::MatrixXcd& coeffs() const { return coeffs_; }

  double support_side() const { return u_ * k_grid_; }
  double support_measure() const { return support_side() * support_side(); }
  /// Lower-left corner of U.
  Point2<double> support_origin() const;
  bool contains(const Point2<double>& nu) const;

  std::complex<double> operator()(const Point2<double>& nu) const;

  /// Grid of (k_grid*subdiv)^2 square sub-cells tiling U exactly.
  TFGrid<double> support_grid(int subdiv) const;

  /// Sigma sampled at the cell centers of tf (zero outside U).
  Eigen::MatrixXcd sampled(const TFGrid<double>& tf) const;

  /// Same support geometry (and polarization) as other.
  bool same_support(const CellSpreading& other) const;

 private:
  int k_grid_;
  double u_;
  Eigen::MatrixXcd coeffs_;
  double alpha_;
  Placement placement_;
};

/// Sub-cell midpoints used by every quadrature over U: node (i, j) sits at
/// (nu1(i), nu2(j)) and carries weight cell_area.
struct SpreadingNodes {
  Eigen::VectorXd nu1;
  Eigen::VectorXd nu2;
  double cell_area = 0;
  Eigen::MatrixXcd values;  ///< Sigma at the nodes
};

SpreadingNodes spreading_nodes(const CellSpreading& s, int subdiv);

/// Coefficients i.i.d. circularly-symmetric complex normal, E|c|^2 = 1,
/// drawn from a std::mt19937_64 seeded with `seed`.
CellSpreading sample_cell_spreading(int k_grid, double measure, std::uint64_t seed,
                                    Placement placement = Placement::corner, double alpha = 0.0);

/// ||Sigma||_a = u^{2/a} ||c||_a (entrywise vector norm); a = infinity gives max |c_k|.
double spreading_norm(const CellSpreading& s, double a);

/// K(nu) in Sigma = K * W. Only the indicator of U enters the bounds.
class WeightModel {
 public:
  enum class Kind { indicator, sampled };

  static WeightModel indicator(const CellSpreading& s);
  /// Non-negative samples on a grid; support is where the samples are positive.
  static WeightModel sampled(TFGrid<double> grid, Eigen::MatrixXd weights);

  Kind kind() const { return kind_; }
  double support_measure() const;
  /// ||K||_b; b = infinity gives the maximum.
  double norm(double b) const;

 private:
  WeightModel(Kind kind, TFGrid<double> grid, Eigen::MatrixXd weights)
      : kind_(kind), grid_(std::move(grid)), weights_(std::move(weights)) {}

  Kind kind_;
  TFGrid<double> grid_;
  Eigen::MatrixXd weights_;
};

/// Integral kernel of a discretized operator: (H f)(t_i) = sum_j kernel(i, j) f(t_j) dt.
struct ChannelMatrix {
  Eigen::MatrixXcd kernel;
  TimeGrid<double> grid;

  Signald apply(const Signald& f) const;
  /// Hilbert-Schmidt norm sqrt(sum |kernel|^2 dt^2).
  double hs_norm() const;
  /// sum_i kernel(i, i) dt
  std::complex<double> trace() const;
};

/// H f by midpoint quadrature over subdiv x subdiv sub-cells of every spreading
/// cell. Shifts use the factorized form e^{-i2pi nu1 nu2 (1/2 - alpha)} M_nu2 T_nu1.
Signald apply_channel(const CellSpreading& s, const Signald& f, int subdiv);

/// Column j equals apply_channel applied to the unit impulse at t_j scaled by 1/dt.
ChannelMatrix channel_matrix(const CellSpreading& s, const TimeGrid<double>& grid, int subdiv);

/// Samples of the spreading function Tr(S_mu(alpha)^* H) at the cell centers of tf.
TFFunction<double> spreading_from_matrix(const ChannelMatrix& H, const TFGrid<double>& tf, double alpha);

/// Weyl symbol L = F_s Sigma, with Sigma sampled on tf.
TFFunction<double> weyl_symbol(const CellSpreading& s, const TFGrid<double>& tf);

/// lambda(mu) = int Sigma(nu) e^{-i2pi eta(nu, mu)} dnu, i.e. B = 1 (mode C2).
std::complex<double> lambda_value(const CellSpreading& s, const Point2<double>& mu, int subdiv);

/// lambda(mu) = int Sigma(nu) B(nu) e^{-i2pi eta(nu, mu)} dnu with B sampled on a
/// grid containing every sub-cell node of U (mode C1 uses B = A_{g gamma}).
/// Throws ShapeMismatch if the grid of B does not cover those nodes.
std::complex<double> lambda_value(const CellSpreading& s, const AmbiguitySurface<double>& B,
                                  const Point2<double>& mu, int subdiv);

/// Extract B at the sub-cell nodes of s, or throw ShapeMismatch.
Eigen::MatrixXcd restrict_to_nodes(const CellSpreading& s, const TFFunction<double>& B, int subdiv);

namespace detail {

/// Column i is d_i(t) = sum_j weights(i, j) e^{-i2pi nu1_i nu2_j (1/2 - alpha)} e^{i2pi nu2_j t},
/// so that sum_ij weights(i, j) S_{nu_ij}(alpha) = sum_i diag(d_i) T_{nu1_i}.
Eigen::MatrixXcd diagonal_factors(const SpreadingNodes& nodes, const TimeGrid<double>& grid, double alpha,
                                  const Eigen::MatrixXcd& weights);

}  // namespace detail

}  // namespace ltv
