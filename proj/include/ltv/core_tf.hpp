// SPDX-License-Identifier: Apache-2.0
//
// Discretized signals on a periodic time grid, generalized time-frequency
// shifts S_mu(alpha), cross ambiguity functions and the symplectic Fourier
// transform. Everything here is templated on the real scalar type.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include "ltv/errors.hpp"

namespace ltv {

using Eigen::Index;

template <typename Real>
using VectorC = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using MatrixC = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using VectorR = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
/// A point (mu_1, mu_2) of the time-frequency plane: time first, frequency second.
template <typename Real>
using Point2 = Eigen::Matrix<Real, 2, 1>;

template <typename Real>
constexpr Real two_pi = Real(2) * std::numbers::pi_v<Real>;

/// exp(i*2*pi*x)
template <typename Real>
inline std::complex<Real> cis2pi(Real x) {
  return std::polar(Real(1), two_pi<Real> * x);
}

/// Symplectic form eta(mu, nu) = mu_1 nu_2 - mu_2 nu_1.
template <typename Real>
inline Real symplectic(const Point2<Real>& mu, const Point2<Real>& nu) {
  return mu(0) * nu(1) - mu(1) * nu(0);
}

// ---------------------------------------------------------------------------
// TimeGrid
// ---------------------------------------------------------------------------

/// Uniform grid t_i = t0 + i*dt, i = 0..n-1, treated as periodic with period n*dt.
template <typename Real = double>
class TimeGrid {
 public:
  TimeGrid(Index n_samples, Real dt, Real t0) : n_(n_samples), dt_(dt), t0_(t0) {
    if (n_samples < 2) throw std::invalid_argument("TimeGrid: n_samples must be >= 2");
    if (!(dt > 0) || !std::isfinite(dt)) throw std::invalid_argument("TimeGrid: dt must be > 0");
    if (!std::isfinite(t0)) throw std::invalid_argument("TimeGrid: t0 must be finite");
  }

  /// Grid symmetric about t = 0 (t0 = -n*dt/2).
  static TimeGrid centered(Index n_samples, Real dt) {
    return TimeGrid(n_samples, dt, -Real(n_samples) * dt / 2);
  }

  Index size() const { return n_; }
  Real dt() const { return dt_; }
  Real t0() const { return t0_; }
  Real duration() const { return Real(n_) * dt_; }
  Real time(Index i) const { return t0_ + Real(i) * dt_; }

  /// Signed frequency of DFT bin k; bins k >= n/2 map to negative frequencies.
  Real frequency(Index k) const {
    const Index m = (2 * k < n_) ? k : k - n_;
    return Real(m) / duration();
  }

  VectorR<Real> times() const {
    return VectorR<Real>::LinSpaced(n_, t0_, t0_ + Real(n_ - 1) * dt_);
  }

  VectorR<Real> frequencies() const {
    VectorR<Real> f(n_);
    for (Index k = 0; k < n_; ++k) f(k) = frequency(k);
    return f;
  }

  bool operator==(const TimeGrid&) const = default;

 private:
  Index n_;
  Real dt_;
  Real t0_;
};

// ---------------------------------------------------------------------------
// Signal
// ---------------------------------------------------------------------------

template <typename Real = double>
class Signal {
 public:
  using Scalar = std::complex<Real>;

  explicit Signal(TimeGrid<Real> grid) : grid_(grid), samples_(VectorC<Real>::Zero(grid.size())) {}

  Signal(TimeGrid<Real> grid, VectorC<Real> samples) : grid_(grid), samples_(std::move(samples)) {
    if (samples_.size() != grid_.size())
      throw std::invalid_argument("Signal: sample count does not match grid");
  }

  const TimeGrid<Real>& grid() const { return grid_; }
  const VectorC<Real>& samples() const { return samples_; }
  Index size() const { return samples_.size(); }
  Scalar operator[](Index i) const { return samples_(i); }

 private:
  TimeGrid<Real> grid_;
  VectorC<Real> samples_;
};

using Signald = Signal<double>;

template <typename Real>
inline void require_same_grid(const Signal<Real>& a, const Signal<Real>& b) {
  if (!(a.grid() == b.grid())) throw GridMismatch("signals are sampled on different time grids");
}

template <typename Real>
Signal<Real> operator-(const Signal<Real>& a, const Signal<Real>& b) {
  require_same_grid(a, b);
  return Signal<Real>(a.grid(), a.samples() - b.samples());
}

template <typename Real>
Signal<Real> operator+(const Signal<Real>& a, const Signal<Real>& b) {
  require_same_grid(a, b);
  return Signal<Real>(a.grid(), a.samples() + b.samples());
}

template <typename Real>
Signal<Real> operator*(std::complex<Real> c, const Signal<Real>& a) {
  return Signal<Real>(a.grid(), c * a.samples());
}

/// <g, f> = sum conj(g_i) f_i dt, conjugate-linear in the first argument.
template <typename Real>
std::complex<Real> inner(const Signal<Real>& g, const Signal<Real>& f) {
  require_same_grid(g, f);
  return g.samples().dot(f.samples()) * g.grid().dt();
}

/// max_i |f(t_i)|
template <typename Real>
Real sample_max(const Signal<Real>& f) {
  return f.samples().cwiseAbs().maxCoeff();
}

namespace detail {

template <typename Real>
Eigen::FFT<Real>& fft_engine() {
  // Eigen::FFT caches plans internally and is not safe to share across threads.
  thread_local Eigen::FFT<Real> engine;
  return engine;
}

template <typename Real>
VectorC<Real> fft(const VectorC<Real>& x) {
  VectorC<Real> y;
  fft_engine<Real>().fwd(y, x);
  return y;
}

/// Inverse DFT including the 1/n factor.
template <typename Real>
VectorC<Real> ifft(const VectorC<Real>& x) {
  VectorC<Real> y;
  fft_engine<Real>().inv(y, x);
  return y;
}

/// Band-limited periodic interpolant evaluated at time t, given the DFT of the samples.
template <typename Real>
std::complex<Real> interpolate(const VectorC<Real>& spectrum, const TimeGrid<Real>& grid, Real t) {
  std::complex<Real> acc(0);
  const Real x = t - grid.t0();
  for (Index k = 0; k < spectrum.size(); ++k) acc += spectrum(k) * cis2pi(grid.frequency(k) * x);
  return acc / Real(spectrum.size());
}

/// sup_t |f(t)| of the band-limited interpolant: 8x zero-padded search, then
/// golden-section refinement around every candidate peak.
template <typename Real>
Real interpolated_sup(const VectorC<Real>& samples, const TimeGrid<Real>& grid) {
  const Index n = samples.size();
  constexpr Index kOversample = 8;
  const VectorC<Real> spectrum = fft(samples);

  VectorC<Real> padded = VectorC<Real>::Zero(n * kOversample);
  for (Index k = 0; k < n; ++k) {
    const Index m = (2 * k < n) ? k : k - n;
    padded((m + n * kOversample) % (n * kOversample)) = spectrum(k);
  }
  const VectorR<Real> fine = ifft(padded).cwiseAbs() * Real(kOversample);
  const Index nf = fine.size();
  const Real h = grid.dt() / Real(kOversample);
  const Real top = fine.maxCoeff();

  auto magnitude = [&](Real t) { return std::abs(interpolate(spectrum, grid, t)); };
  Real best = std::max(top, sample_max(Signal<Real>(grid, samples)));
  const Real golden = (std::sqrt(Real(5)) - 1) / 2;
  for (Index i = 0; i < nf; ++i) {
    const Real v = fine(i);
    if (v < Real(0.98) * top) continue;
    if (v < fine((i + nf - 1) % nf) || v < fine((i + 1) % nf)) continue;
    Real lo = grid.t0() + Real(i - 1) * h;
    Real hi = grid.t0() + Real(i + 1) * h;
    Real x1 = hi - golden * (hi - lo), x2 = lo + golden * (hi - lo);
    Real f1 = magnitude(x1), f2 = magnitude(x2);
    for (int it = 0; it < 80 && hi - lo > std::numeric_limits<Real>::epsilon() * 8; ++it) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + golden * (hi - lo);
        f2 = magnitude(x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - golden * (hi - lo);
        f1 = magnitude(x1);
      }
    }
    best = std::max({best, f1, f2});
  }
  return best;
}

}  // namespace detail

/// Riemann-sum p-norm (sum |f_i|^p dt)^(1/p). For p = infinity the sup of the
/// band-limited interpolant is returned, which is invariant under fractional
/// time shifts; use sample_max() for the plain maximum over samples.
template <typename Real>
Real norm(const Signal<Real>& f, Real p) {
  if (std::isinf(p) && p > 0) return detail::interpolated_sup(f.samples(), f.grid());
  if (!(p >= 1)) throw std::invalid_argument("norm: p must be >= 1");
  if (p == 2) return std::sqrt(f.samples().squaredNorm() * f.grid().dt());
  const Real sum = f.samples().cwiseAbs().array().pow(p).sum();
  return std::pow(sum * f.grid().dt(), Real(1) / p);
}

// ---------------------------------------------------------------------------
// Time-frequency shifts
// ---------------------------------------------------------------------------

/// Generalized displacement S_mu(alpha); alpha = 1/2 is the plain
/// time-frequency shift e^{i2pi mu2 x} f(x - mu1), alpha = 0 the Weyl operator.
template <typename Real = double>
struct TFShift {
  Real mu1 = 0;
  Real mu2 = 0;
  Real alpha = Real(0.5);

  Point2<Real> point() const { return Point2<Real>(mu1, mu2); }
};

/// Pure time shift by tau via the DFT phase ramp (exactly unitary on the grid).
template <typename Real>
VectorC<Real> time_shift(const VectorC<Real>& x, const TimeGrid<Real>& grid, Real tau) {
  if (tau == 0) return x;
  VectorC<Real> spec = detail::fft(x);
  for (Index k = 0; k < spec.size(); ++k) spec(k) *= cis2pi(-grid.frequency(k) * tau);
  return detail::ifft(spec);
}

/// Pointwise modulation by e^{i2pi nu t}.
template <typename Real>
VectorC<Real> modulate(const VectorC<Real>& x, const TimeGrid<Real>& grid, Real nu) {
  if (nu == 0) return x;
  VectorC<Real> y(x.size());
  for (Index i = 0; i < x.size(); ++i) y(i) = x(i) * cis2pi(nu * grid.time(i));
  return y;
}

/// S_mu(alpha) f = S_(0, mu2(1/2+alpha)) S_(mu1, 0) S_(0, mu2(1/2-alpha)) f
template <typename Real>
Signal<Real> shift(const Signal<Real>& f, const TFShift<Real>& mu) {
  const auto& grid = f.grid();
  VectorC<Real> x = modulate(f.samples(), grid, mu.mu2 * (Real(0.5) - mu.alpha));
  x = time_shift(x, grid, mu.mu1);
  x = modulate(x, grid, mu.mu2 * (Real(0.5) + mu.alpha));
  return Signal<Real>(grid, std::move(x));
}

/// ||S_mu(alpha) S_nu(beta) f - e^{-i2pi eta(mu,nu)} S_nu(beta) S_mu(alpha) f||_2
template <typename Real>
Real commutation_defect(const TFShift<Real>& mu, const TFShift<Real>& nu, const Signal<Real>& f) {
  const Signal<Real> lhs = shift(shift(f, nu), mu);
  const Signal<Real> rhs = shift(shift(f, mu), nu);
  const std::complex<Real> phase = cis2pi(-symplectic(mu.point(), nu.point()));
  return norm(lhs - phase * rhs, Real(2));
}

namespace detail {

/// Caches the spectrum of one signal so that many shifted copies are cheap.
/// Shifts use the factorized form S_mu(alpha) = e^{-i2pi mu1 mu2 (1/2-alpha)} M_mu2 T_mu1.
template <typename Real>
class ShiftBank {
 public:
  explicit ShiftBank(const Signal<Real>& f) : grid_(f.grid()), samples_(f.samples()), spectrum_(fft(f.samples())) {}

  VectorC<Real> time_shifted(Real tau) const {
    if (tau == 0) return samples_;
    VectorC<Real> spec = spectrum_;
    for (Index k = 0; k < spec.size(); ++k) spec(k) *= cis2pi(-grid_.frequency(k) * tau);
    return ifft(spec);
  }

  /// Phase of the factorized form for the point mu.
  static std::complex<Real> polarization_phase(const Point2<Real>& mu, Real alpha) {
    return cis2pi(-mu(0) * mu(1) * (Real(0.5) - alpha));
  }

  const TimeGrid<Real>& grid() const { return grid_; }

 private:
  TimeGrid<Real> grid_;
  VectorC<Real> samples_;
  VectorC<Real> spectrum_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Make pulses
// ---------------------------------------------------------------------------

/// Unit-L2 Gaussian (2/w^2)^{1/4} exp(-pi (t-c1)^2 / w^2) exp(i 2pi c2 t).
/// Throws GridTooSmall when either the time tail at the grid ends or the
/// spectral tail at the Nyquist frequency exceeds 1e-12 of the peak.
template <typename Real>
Signal<Real> make_gaussian(const TimeGrid<Real>& grid, const Point2<Real>& center, Real width) {
  if (!(width > 0)) throw std::invalid_argument("make_gaussian: width must be > 0");
  const Real pi = std::numbers::pi_v<Real>;
  const Real tail = Real(1e-12);
  const Real t_first = grid.time(0);
  const Real t_last = grid.time(grid.size() - 1);
  const Real time_room = std::min(center(0) - t_first, t_last - center(0));
  const Real nyquist = Real(1) / (Real(2) * grid.dt());
  const Real freq_room = nyquist - std::abs(center(1));
  if (time_room <= 0 || std::exp(-pi * time_room * time_room / (width * width)) > tail)
    throw GridTooSmall("make_gaussian: time tail exceeds 1e-12 of the peak");
  if (freq_room <= 0 || std::exp(-pi * width * width * freq_room * freq_room) > tail)
    throw GridTooSmall("make_gaussian: spectral tail at Nyquist exceeds 1e-12 of the peak");

  const Real amp = std::pow(Real(2) / (width * width), Real(0.25));
  VectorC<Real> x(grid.size());
  for (Index i = 0; i < grid.size(); ++i) {
    const Real t = grid.time(i);
    const Real d = t - center(0);
    x(i) = amp * std::exp(-pi * d * d / (width * width)) * cis2pi(center(1) * t);
  }
  return Signal<Real>(grid, std::move(x));
}

// ---------------------------------------------------------------------------
// Time-frequency grids and sampled functions of the plane
// ---------------------------------------------------------------------------

/// n1 x n2 cells of size d1 x d2 with lower-left corner at origin; samples
/// live at cell centers origin + ((i+1/2) d1, (j+1/2) d2).
template <typename Real = double>
struct TFGrid {
  Index n1 = 1;
  Index n2 = 1;
  Real d1 = 1;
  Real d2 = 1;
  Point2<Real> origin = Point2<Real>::Zero();

  TFGrid() = default;
  TFGrid(Index n1_, Index n2_, Real d1_, Real d2_, Point2<Real> origin_)
      : n1(n1_), n2(n2_), d1(d1_), d2(d2_), origin(std::move(origin_)) {
    if (n1 < 1 || n2 < 1) throw std::invalid_argument("TFGrid: n1, n2 must be >= 1");
    if (!(d1 > 0) || !(d2 > 0)) throw std::invalid_argument("TFGrid: cell sizes must be > 0");
  }

  /// Grid whose cell centers are symmetric about the origin with a center at 0
  /// for odd counts: centers (i - floor(n/2)) d.
  static TFGrid centered(Index n1, Index n2, Real d1, Real d2) {
    return TFGrid(n1, n2, d1, d2,
                  Point2<Real>(-(Real(n1 / 2) + Real(0.5)) * d1, -(Real(n2 / 2) + Real(0.5)) * d2));
  }

  Real center1(Index i) const { return origin(0) + (Real(i) + Real(0.5)) * d1; }
  Real center2(Index j) const { return origin(1) + (Real(j) + Real(0.5)) * d2; }
  Point2<Real> center(Index i, Index j) const { return Point2<Real>(center1(i), center2(j)); }
  Real cell_area() const { return d1 * d2; }
};

/// Values of a function of the time-frequency plane at the cell centers of a grid.
template <typename Real = double>
struct TFFunction {
  TFGrid<Real> grid;
  MatrixC<Real> values;
};

/// Samples of A^(alpha)_{g gamma} on a TFGrid.
template <typename Real = double>
struct AmbiguitySurface : TFFunction<Real> {
  Real alpha = 0;
};

/// L2 norm with quadrature weight d1*d2 per cell.
template <typename Real>
Real l2_norm(const TFFunction<Real>& F) {
  return std::sqrt(F.values.squaredNorm() * F.grid.cell_area());
}

// ---------------------------------------------------------------------------
// Ambiguity functions
// ---------------------------------------------------------------------------

/// A^(alpha)_{g gamma}(mu) = <g, S_mu(alpha) gamma>
template <typename Real>
std::complex<Real> ambiguity(const Signal<Real>& g, const Signal<Real>& gamma, const TFShift<Real>& mu) {
  require_same_grid(g, gamma);
  return inner(g, shift(gamma, mu));
}

/// Ambiguity at every cell center of tf. One time shift per column of the
/// grid; modulations are applied per point, so the cost is O(n1 n2 N).
template <typename Real>
AmbiguitySurface<Real> ambiguity_surface(const Signal<Real>& g, const Signal<Real>& gamma,
                                         const TFGrid<Real>& tf, Real alpha) {
  require_same_grid(g, gamma);
  const auto& grid = g.grid();
  const Index n = grid.size();
  const detail::ShiftBank<Real> bank(gamma);

  // modulation table: mod(t, j) = e^{i2pi mu2_j t}
  MatrixC<Real> mod(n, tf.n2);
  for (Index j = 0; j < tf.n2; ++j)
    for (Index t = 0; t < n; ++t) mod(t, j) = cis2pi(tf.center2(j) * grid.time(t));

  AmbiguitySurface<Real> out;
  out.grid = tf;
  out.alpha = alpha;
  out.values.resize(tf.n1, tf.n2);
  for (Index i = 0; i < tf.n1; ++i) {
    const VectorC<Real> weighted = (g.samples().conjugate().cwiseProduct(bank.time_shifted(tf.center1(i)))) * grid.dt();
    const Eigen::Matrix<std::complex<Real>, 1, Eigen::Dynamic> row = weighted.transpose() * mod;
    for (Index j = 0; j < tf.n2; ++j)
      out.values(i, j) = row(j) * detail::ShiftBank<Real>::polarization_phase(tf.center(i, j), alpha);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Symplectic Fourier transform
// ---------------------------------------------------------------------------

/// Grid on which the symplectic transform of a function on tf is sampled.
/// Its first (time) axis is conjugate to the frequency axis of tf and vice
/// versa; both axes are centered.
template <typename Real>
TFGrid<Real> dual_grid(const TFGrid<Real>& tf) {
  return TFGrid<Real>::centered(tf.n2, tf.n1, Real(1) / (Real(tf.n2) * tf.d2), Real(1) / (Real(tf.n1) * tf.d1));
}

enum class TransformMethod { automatic, direct, fft };

namespace detail {

inline bool fft_friendly(Index n) {
  if (n < 2) return false;
  for (Index p : {2, 3, 5})
    while (n % p == 0) n /= p;
  return n == 1;
}

/// out(j) = sum_i in(i) exp(sign * i2pi x_i y_j) for x_i = x0 + i dx,
/// y_j = y0 + j dy with dx*dy = 1/n, applied to every column of `in`.
template <typename Real>
MatrixC<Real> phase_dft(const MatrixC<Real>& in, Real x0, Real dx, Real y0, Real dy, int sign,
                        bool use_fft) {
  const Index n = in.rows();
  MatrixC<Real> out(n, in.cols());
  if (!use_fft) {
    MatrixC<Real> kernel(n, n);
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < n; ++i)
        kernel(j, i) = cis2pi(Real(sign) * (x0 + Real(i) * dx) * (y0 + Real(j) * dy));
    out.noalias() = kernel * in;
    return out;
  }
  // x_i y_j = x0 y0 + x0 j dy + i dx y0 + i j / n
  VectorC<Real> pre(n), post(n);
  for (Index i = 0; i < n; ++i) pre(i) = cis2pi(Real(sign) * Real(i) * dx * y0);
  for (Index j = 0; j < n; ++j) post(j) = cis2pi(Real(sign) * (x0 * y0 + x0 * Real(j) * dy));
  auto& engine = fft_engine<Real>();
  VectorC<Real> col, tr;
  for (Index c = 0; c < in.cols(); ++c) {
    col = in.col(c).cwiseProduct(pre);
    if (sign < 0) {
      engine.fwd(tr, col);
    } else {
      engine.inv(tr, col);
      tr *= Real(n);
    }
    out.col(c) = tr.cwiseProduct(post);
  }
  return out;
}

}  // namespace detail

/// (F_s F)(mu) = int exp(-i2pi eta(nu, mu)) F(nu) dnu, rectangle rule with
/// weight d1*d2, sampled on dual_grid(F.grid). The kernel
/// exp(-i2pi(nu1 mu2 - nu2 mu1)) is a forward DFT along nu1 -> mu2 and an
/// inverse DFT along nu2 -> mu1. Applying it twice returns F on centered grids.
template <typename Real>
TFFunction<Real> symplectic_fourier(const TFFunction<Real>& F,
                                    TransformMethod method = TransformMethod::automatic) {
  const TFGrid<Real>& g = F.grid;
  if (F.values.rows() != g.n1 || F.values.cols() != g.n2)
    throw ShapeMismatch("symplectic_fourier: value matrix does not match grid");
  const TFGrid<Real> dual = dual_grid(g);
  // the FFT backend needs at least two points
  const bool fft1 = g.n1 > 1 && (method == TransformMethod::fft ||
                                 (method == TransformMethod::automatic && detail::fft_friendly(g.n1)));
  const bool fft2 = g.n2 > 1 && (method == TransformMethod::fft ||
                                 (method == TransformMethod::automatic && detail::fft_friendly(g.n2)));

  // nu1 (rows of F) -> mu2 (columns of the result)
  const MatrixC<Real> step1 =
      detail::phase_dft<Real>(F.values, g.center1(0), g.d1, dual.center2(0), dual.d2, -1, fft1);
  // nu2 (columns of F) -> mu1 (rows of the result)
  const MatrixC<Real> step1t = step1.transpose();
  MatrixC<Real> out = detail::phase_dft<Real>(step1t, g.center2(0), g.d2, dual.center1(0), dual.d1, +1, fft2);
  out *= g.cell_area();
  return TFFunction<Real>{dual, std::move(out)};
}

}  // namespace ltv
