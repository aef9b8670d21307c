// SPDX-License-Identifier: Apache-2.0
#include "ltv/channel.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace ltv {

namespace {

void require_subdiv(int subdiv) {
  if (subdiv < 1) throw std::invalid_argument("subdiv must be >= 1");
}

}  // namespace

Eigen::MatrixXcd detail::diagonal_factors(const SpreadingNodes& nodes, const TimeGrid<double>& grid, double alpha,
                                  const Eigen::MatrixXcd& weights) {
  const Index n = grid.size();
  const Index m1 = nodes.nu1.size(), m2 = nodes.nu2.size();
  Eigen::MatrixXcd mod(n, m2);
  for (Index j = 0; j < m2; ++j)
    for (Index t = 0; t < n; ++t) mod(t, j) = cis2pi(nodes.nu2(j) * grid.time(t));

  Eigen::MatrixXcd coeff(m1, m2);
  for (Index i = 0; i < m1; ++i)
    for (Index j = 0; j < m2; ++j)
      coeff(i, j) = weights(i, j) * detail::ShiftBank<double>::polarization_phase(
                                        Point2<double>(nodes.nu1(i), nodes.nu2(j)), alpha);
  return mod * coeff.transpose();
}

namespace {

// First column of the circulant matrix of the time shift by tau.
Eigen::VectorXcd shift_column(const TimeGrid<double>& grid, double tau) {
  Eigen::VectorXcd impulse = Eigen::VectorXcd::Zero(grid.size());
  impulse(0) = 1.0;
  return time_shift(impulse, grid, tau);
}

bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)); }

}  // namespace

// ---------------------------------------------------------------------------
// CellSpreading
// ---------------------------------------------------------------------------

CellSpreading::CellSpreading(int k_grid, double cell_side, Eigen::MatrixXcd coeffs, double alpha,
                             Placement placement)
    : k_grid_(k_grid), u_(cell_side), coeffs_(std::move(coeffs)), alpha_(alpha), placement_(placement) {
  if (k_grid < 1) throw std::invalid_argument("CellSpreading: k_grid must be >= 1");
  if (!(cell_side > 0) || !std::isfinite(cell_side))
    throw std::invalid_argument("CellSpreading: cell side must be > 0");
  if (coeffs_.rows() != k_grid || coeffs_.cols() != k_grid)
    throw std::invalid_argument("CellSpreading: coefficient matrix must be k_grid x k_grid");
}

CellSpreading CellSpreading::with_measure(int k_grid, double measure, Eigen::MatrixXcd coeffs, double alpha,
                                          Placement placement) {
  if (!(measure > 0)) throw std::invalid_argument("CellSpreading: |U| must be > 0");
  if (k_grid < 1) throw std::invalid_argument("CellSpreading: k_grid must be >= 1");
  return CellSpreading(k_grid, std::sqrt(measure) / k_grid, std::move(coeffs), alpha, placement);
}

Point2<double> CellSpreading::support_origin() const {
  if (placement_ == Placement::centered) return Point2<double>::Constant(-support_side() / 2);
  return Point2<double>::Zero();
}

bool CellSpreading::contains(const Point2<double>& nu) const {
  const Point2<double> rel = nu - support_origin();
  return rel(0) >= 0 && rel(1) >= 0 && rel(0) < support_side() && rel(1) < support_side();
}

std::complex<double> CellSpreading::operator()(const Point2<double>& nu) const {
  if (!contains(nu)) return 0.0;
  const Point2<double> rel = (nu - support_origin()) / u_;
  const Index i = std::min<Index>(static_cast<Index>(std::floor(rel(0))), k_grid_ - 1);
  const Index j = std::min<Index>(static_cast<Index>(std::floor(rel(1))), k_grid_ - 1);
  return coeffs_(i, j);
}

TFGrid<double> CellSpreading::support_grid(int subdiv) const {
  require_subdiv(subdiv);
  const double eps = u_ / subdiv;
  const Index m = Index(k_grid_) * subdiv;
  return TFGrid<double>(m, m, eps, eps, support_origin());
}

Eigen::MatrixXcd CellSpreading::sampled(const TFGrid<double>& tf) const {
  Eigen::MatrixXcd out(tf.n1, tf.n2);
  for (Index i = 0; i < tf.n1; ++i)
    for (Index j = 0; j < tf.n2; ++j) out(i, j) = (*this)(tf.center(i, j));
  return out;
}

bool CellSpreading::same_support(const CellSpreading& other) const {
  return k_grid_ == other.k_grid_ && placement_ == other.placement_ && alpha_ == other.alpha_ &&
         close(u_, other.u_, 1e-12);
}

SpreadingNodes spreading_nodes(const CellSpreading& s, int subdiv) {
  const TFGrid<double> tf = s.support_grid(subdiv);
  SpreadingNodes nodes;
  nodes.nu1.resize(tf.n1);
  nodes.nu2.resize(tf.n2);
  for (Index i = 0; i < tf.n1; ++i) nodes.nu1(i) = tf.center1(i);
  for (Index j = 0; j < tf.n2; ++j) nodes.nu2(j) = tf.center2(j);
  nodes.cell_area = tf.cell_area();
  // sub-cell (i, j) lies inside spreading cell (i / subdiv, j / subdiv)
  nodes.values.resize(tf.n1, tf.n2);
  for (Index i = 0; i < tf.n1; ++i)
    for (Index j = 0; j < tf.n2; ++j) nodes.values(i, j) = s.coeffs()(i / subdiv, j / subdiv);
  return nodes;
}

CellSpreading sample_cell_spreading(int k_grid, double measure, std::uint64_t seed, Placement placement,
                                    double alpha) {
  if (k_grid < 1) throw std::invalid_argument("sample_cell_spreading: k_grid must be >= 1");
  if (!(measure > 0)) throw std::invalid_argument("sample_cell_spreading: |U| must be > 0");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Eigen::MatrixXcd c(k_grid, k_grid);
  for (Index i = 0; i < k_grid; ++i)
    for (Index j = 0; j < k_grid; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      c(i, j) = {re, im};
    }
  return CellSpreading::with_measure(k_grid, measure, std::move(c), alpha, placement);
}

double spreading_norm(const CellSpreading& s, double a) {
  if (std::isinf(a) && a > 0) return s.coeffs().cwiseAbs().maxCoeff();
  if (!(a >= 1)) throw std::invalid_argument("spreading_norm: a must be >= 1");
  const double sum = s.coeffs().cwiseAbs().array().pow(a).sum();
  return std::pow(s.cell_side(), 2.0 / a) * std::pow(sum, 1.0 / a);
}

// ---------------------------------------------------------------------------
// WeightModel
// ---------------------------------------------------------------------------

WeightModel WeightModel::indicator(const CellSpreading& s) {
  return WeightModel(Kind::indicator, s.support_grid(1), Eigen::MatrixXd::Ones(s.k_grid(), s.k_grid()));
}

WeightModel WeightModel::sampled(TFGrid<double> grid, Eigen::MatrixXd weights) {
  if (weights.rows() != grid.n1 || weights.cols() != grid.n2)
    throw ShapeMismatch("WeightModel: weights do not match grid");
  if ((weights.array() < 0).any()) throw std::invalid_argument("WeightModel: weights must be non-negative");
  return WeightModel(Kind::sampled, std::move(grid), std::move(weights));
}

double WeightModel::support_measure() const {
  return double((weights_.array() > 0).count()) * grid_.cell_area();
}

double WeightModel::norm(double b) const {
  if (std::isinf(b) && b > 0) return weights_.maxCoeff();
  if (!(b > 0)) throw std::invalid_argument("WeightModel::norm: b must be > 0");
  return std::pow(weights_.array().pow(b).sum() * grid_.cell_area(), 1.0 / b);
}

// ---------------------------------------------------------------------------
// Operators
// ---------------------------------------------------------------------------

Signald ChannelMatrix::apply(const Signald& f) const {
  if (!(f.grid() == grid)) throw GridMismatch("ChannelMatrix::apply: grid mismatch");
  return Signald(grid, kernel * f.samples() * grid.dt());
}

double ChannelMatrix::hs_norm() const { return std::sqrt(kernel.squaredNorm()) * grid.dt(); }

std::complex<double> ChannelMatrix::trace() const {
  std::complex<double> acc = 0.0;
  for (Index i = 0; i < kernel.rows(); ++i) acc += kernel(i, i) * grid.dt();
  return acc;
}

Signald apply_channel(const CellSpreading& s, const Signald& f, int subdiv) {
  require_subdiv(subdiv);
  const SpreadingNodes nodes = spreading_nodes(s, subdiv);
  const Eigen::MatrixXcd d = detail::diagonal_factors(nodes, f.grid(), s.alpha(), nodes.values * nodes.cell_area);
  const detail::ShiftBank<double> bank(f);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(f.size());
  for (Index i = 0; i < nodes.nu1.size(); ++i) out += d.col(i).cwiseProduct(bank.time_shifted(nodes.nu1(i)));
  return Signald(f.grid(), std::move(out));
}

ChannelMatrix channel_matrix(const CellSpreading& s, const TimeGrid<double>& grid, int subdiv) {
  require_subdiv(subdiv);
  const SpreadingNodes nodes = spreading_nodes(s, subdiv);
  const Eigen::MatrixXcd d = detail::diagonal_factors(nodes, grid, s.alpha(), nodes.values * nodes.cell_area);
  const Index n = grid.size();
  Eigen::MatrixXcd kernel = Eigen::MatrixXcd::Zero(n, n);
  for (Index i = 0; i < nodes.nu1.size(); ++i) {
    const Eigen::VectorXcd col = shift_column(grid, nodes.nu1(i));
    for (Index c = 0; c < n; ++c)
      for (Index r = 0; r < n; ++r) kernel(r, c) += d(r, i) * col((r - c + n) % n);
  }
  kernel /= grid.dt();
  return ChannelMatrix{std::move(kernel), grid};
}

TFFunction<double> spreading_from_matrix(const ChannelMatrix& H, const TFGrid<double>& tf, double alpha) {
  const TimeGrid<double>& grid = H.grid;
  const Index n = grid.size();
  if (H.kernel.rows() != n || H.kernel.cols() != n)
    throw ShapeMismatch("spreading_from_matrix: kernel does not match its grid");

  Eigen::MatrixXcd demod(n, tf.n2);  // e^{-i2pi mu2 t}
  for (Index j = 0; j < tf.n2; ++j)
    for (Index t = 0; t < n; ++t) demod(t, j) = cis2pi(-tf.center2(j) * grid.time(t));

  TFFunction<double> out{tf, Eigen::MatrixXcd(tf.n1, tf.n2)};
  Eigen::VectorXcd v(n);
  for (Index i = 0; i < tf.n1; ++i) {
    const Eigen::VectorXcd col = shift_column(grid, tf.center1(i)).conjugate();
    // v(r) = dt * sum_c conj(T(r, c)) K(r, c); T(r, c) = col[(r - c) mod n]
    for (Index r = 0; r < n; ++r) {
      std::complex<double> acc = 0.0;
      for (Index c = 0; c < n; ++c) acc += col((r - c + n) % n) * H.kernel(r, c);
      v(r) = acc * grid.dt();
    }
    for (Index j = 0; j < tf.n2; ++j) {
      std::complex<double> acc = 0.0;
      for (Index r = 0; r < n; ++r) acc += demod(r, j) * v(r);
      out.values(i, j) = std::conj(detail::ShiftBank<double>::polarization_phase(tf.center(i, j), alpha)) * acc;
    }
  }
  return out;
}

TFFunction<double> weyl_symbol(const CellSpreading& s, const TFGrid<double>& tf) {
  return symplectic_fourier(TFFunction<double>{tf, s.sampled(tf)});
}

namespace {

std::complex<double> smoothed_symbol(const SpreadingNodes& nodes, const Eigen::MatrixXcd& B,
                                     const Point2<double>& mu) {
  std::complex<double> acc = 0.0;
  for (Index i = 0; i < nodes.nu1.size(); ++i)
    for (Index j = 0; j < nodes.nu2.size(); ++j) {
      const Point2<double> nu(nodes.nu1(i), nodes.nu2(j));
      acc += nodes.values(i, j) * B(i, j) * cis2pi(-symplectic(nu, mu));
    }
  return acc * nodes.cell_area;
}

}  // namespace

std::complex<double> lambda_value(const CellSpreading& s, const Point2<double>& mu, int subdiv) {
  require_subdiv(subdiv);
  const SpreadingNodes nodes = spreading_nodes(s, subdiv);
  return smoothed_symbol(nodes, Eigen::MatrixXcd::Ones(nodes.nu1.size(), nodes.nu2.size()), mu);
}

std::complex<double> lambda_value(const CellSpreading& s, const AmbiguitySurface<double>& B,
                                  const Point2<double>& mu, int subdiv) {
  require_subdiv(subdiv);
  const SpreadingNodes nodes = spreading_nodes(s, subdiv);
  return smoothed_symbol(nodes, restrict_to_nodes(s, B, subdiv), mu);
}

Eigen::MatrixXcd restrict_to_nodes(const CellSpreading& s, const TFFunction<double>& B, int subdiv) {
  require_subdiv(subdiv);
  const TFGrid<double> want = s.support_grid(subdiv);
  const TFGrid<double>& have = B.grid;
  if (!close(have.d1, want.d1, 1e-9) || !close(have.d2, want.d2, 1e-9))
    throw ShapeMismatch("B is sampled with a cell size different from the sub-cell size");
  const double off1 = (want.center1(0) - have.center1(0)) / have.d1;
  const double off2 = (want.center2(0) - have.center2(0)) / have.d2;
  const double r1 = std::round(off1), r2 = std::round(off2);
  if (std::abs(off1 - r1) > 1e-6 || std::abs(off2 - r2) > 1e-6)
    throw ShapeMismatch("B grid is not aligned with the sub-cell nodes of U");
  const Index i0 = static_cast<Index>(r1), j0 = static_cast<Index>(r2);
  if (i0 < 0 || j0 < 0 || i0 + want.n1 > have.n1 || j0 + want.n2 > have.n2)
    throw ShapeMismatch("B grid does not cover U");
  return B.values.block(i0, j0, want.n1, want.n2);
}

}  // namespace ltv
