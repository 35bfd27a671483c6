#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <unsupported/Eigen/MatrixFunctions>
#include <vector>

#include "inertiakit/dataset.hpp"
#include "inertiakit/estimate.hpp"
#include "inertiakit/types.hpp"

namespace inertiakit::est {

struct SysIdConfig {
  int order = 2;           // state dimension of the identified model
  int poly_order = 4;      // order of the step-response polynomial fit
  double fit_window_s = 0.5;  // step-response window the polynomial is fit over
};

// Single-input single-output state-space model identified from area data,
// in discrete time with its continuous-time conversion.
struct IdentifiedModel {
  Eigen::MatrixXd a_d;  // n×n
  Eigen::VectorXd b_d;  // n
  Eigen::RowVectorXd c_d;
  double d_d = 0.0;
  double dt = 0.0;

  Eigen::MatrixXd a_c;  // matrix-log conversion (zero-order-hold inverse)
  Eigen::VectorXd b_c;
  std::vector<double> denominator;  // continuous transfer function, ascending powers, monic
  std::vector<double> numerator;    // ascending powers

  double fit_percent = 0.0;             // 100·(1 − ‖y−ŷ‖/‖y−mean(y)‖)
  int fitted_order = 0;                 // directions actually fitted (rest is padding)
  std::vector<double> singular_values;  // projection SVD spectrum (order diagnostics)
  bool unstable = false;                // discrete eigenvalue outside unit circle
  bool log_ambiguous = false;           // negative-real discrete eigenvalue hit by the log

  int order() const { return static_cast<int>(a_d.rows()); }
};

struct PolynomialFit {
  int order = 0;
  std::vector<double> coefficients;  // c_0..c_Np, unscaled monomial basis
  double window_s = 0.0;
  double residual_rms = 0.0;
};

namespace detail {

// Relative rank cutoff for the projection pseudo-inverses. Disturbance
// records are not persistently exciting (steps and cleared faults), so the
// data matrices are rank deficient by construction; inverting directions
// near roundoff would amplify them into spurious state dynamics.
inline constexpr double kProjectionRankTol = 1e-8;

// Relative singular-value floor below which a direction of the projection
// is numerically indistinguishable from zero and never considered a state.
inline constexpr double kDirectionFloor = 1e-12;

// Margin a smaller candidate model must beat the current best record fit by
// before it replaces it (see the candidate loop in identify()).
inline constexpr double kFitMargin = 1e-9;

// Relative rank cutoff for the oblique projection's pseudo-inverse. Unlike
// the orthogonal projector (bounded, so roundoff-level directions are
// harmless), this inverse multiplies the data: directions of W_p·Π⊥ on the
// measurement-noise shelf would be amplified by up to σmax/σ_k and land in
// the dominant directions of the projection, burying the signal subspace.
inline constexpr double kObliqueRankTol = 1e-3;

// Record-fit floor (percent) the subspace model must reach for its result to
// be trusted. A low-order model can only reproduce this share of the record
// variance when the record is effectively noise-free at the model's scale;
// below the floor the projection's directions are dominated by measurement
// noise and conditioning residue, and the identified matrices carry no usable
// dynamics. In that regime identification falls back to an instrumented fit
// of the power-balance relation (see balance_instrumented below).
inline constexpr double kSubspaceFitFloor = 90.0;

// Instrument lag (seconds) for the balance-relation fallback. Lagged copies
// of the regressors serve as instruments: measurement noise — including
// noise colored by the zero-phase low-pass conditioning filter, whose
// correlation dies off within roughly one cutoff period — is decorrelated at
// this lag, while the electromechanical response (periods of roughly 1–3 s)
// remains strongly correlated, so the fit stays consistent where ordinary
// least squares is attenuated by noise in the regressors.
inline constexpr double kInstrumentLagS = 0.25;


// z − (z·ufᵀ)(uf·ufᵀ)⁺·uf : projection of the rows of z onto the orthogonal
// complement of the row space of uf.
inline Eigen::MatrixXd project_out_rows(const Eigen::MatrixXd& z, const Eigen::MatrixXd& uf) {
  const Eigen::MatrixXd gram = uf * uf.transpose();
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
  cod.setThreshold(kProjectionRankTol * kProjectionRankTol);  // gram squares the spectrum
  cod.compute(gram);
  return z - (z * uf.transpose()) * cod.solve(uf);
}

// Oblique projection of the rows of y_f along the row space of u_f onto the
// row space of w_p.
inline Eigen::MatrixXd oblique_projection(const Eigen::MatrixXd& y_f, const Eigen::MatrixXd& u_f,
                                          const Eigen::MatrixXd& w_p) {
  const Eigen::MatrixXd y_perp = project_out_rows(y_f, u_f);
  const Eigen::MatrixXd w_perp = project_out_rows(w_p, u_f);
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
  cod.setThreshold(kObliqueRankTol);
  cod.compute(w_perp);
  return (y_perp * cod.pseudoInverse()) * w_p;
}

inline Eigen::MatrixXd block_hankel(const std::vector<double>& x, std::size_t first_row,
                                    std::size_t n_rows, std::size_t n_cols) {
  Eigen::MatrixXd h(static_cast<Eigen::Index>(n_rows), static_cast<Eigen::Index>(n_cols));
  for (std::size_t r = 0; r < n_rows; ++r)
    for (std::size_t c = 0; c < n_cols; ++c)
      h(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = x[first_row + r + c];
  return h;
}

// ∫₀^dt e^{A τ} dτ via the block matrix exponential identity
// exp([[A, I], [0, 0]]·dt) = [[e^{A·dt}, ∫₀^dt e^{Aτ}dτ], [0, I]].
inline Eigen::MatrixXd zoh_integral(const Eigen::MatrixXd& a, double dt) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd blk = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  blk.topLeftCorner(n, n) = a * dt;
  blk.topRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n) * dt;
  return blk.exp().topRightCorner(n, n);
}

// Characteristic polynomial and transfer-function numerator of
// (A, B, C, D) by the Faddeev–LeVerrier recursion:
//   G(s) = [C·adj(sI−A)·B + D·p(s)] / p(s).
inline void transfer_function(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                              const Eigen::RowVectorXd& c, double d,
                              std::vector<double>& numerator, std::vector<double>& denominator) {
  const auto n = static_cast<std::size_t>(a.rows());
  std::vector<double> p(n + 1, 0.0);  // ascending: p[k] = coefficient of s^k
  p[n] = 1.0;
  numerator.assign(n + 1, 0.0);

  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(a.rows(), a.rows());
  for (std::size_t k = 0; k < n; ++k) {
    // m currently multiplies s^{n−1−k} in adj(sI−A)
    numerator[n - 1 - k] = c * m * b;
    const Eigen::MatrixXd am = a * m;
    const double coeff = -am.trace() / static_cast<double>(k + 1);
    p[n - 1 - k] = coeff;
    m = am + coeff * Eigen::MatrixXd::Identity(a.rows(), a.rows());
  }
  for (std::size_t k = 0; k <= n; ++k) numerator[k] += d * p[k];
  denominator = p;
}

}  // namespace detail

namespace detail {

struct StateSpace {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Eigen::RowVectorXd c;
  double d = 0.0;
};

// 100·(1 − ‖y−ŷ‖/‖y−mean(y)‖) with ŷ simulated from the record input and the
// initial state regressed, so startup transients are not charged to the model.
inline double record_fit_percent(const StateSpace& ss, const std::vector<double>& u,
                                 const std::vector<double>& y) {
  const auto m = static_cast<Eigen::Index>(u.size());
  Eigen::MatrixXd obs(m, ss.a.rows());
  Eigen::VectorXd forced(m);
  Eigen::RowVectorXd c_ak = ss.c;
  Eigen::VectorXd x_forced = Eigen::VectorXd::Zero(ss.a.rows());
  for (Eigen::Index k = 0; k < m; ++k) {
    obs.row(k) = c_ak;
    forced(k) = ss.c * x_forced + ss.d * u[static_cast<std::size_t>(k)];
    c_ak = c_ak * ss.a;
    x_forced = ss.a * x_forced + ss.b * u[static_cast<std::size_t>(k)];
  }
  Eigen::VectorXd y_vec(m);
  for (Eigen::Index k = 0; k < m; ++k) y_vec(k) = y[static_cast<std::size_t>(k)];
  const Eigen::VectorXd x0 =
      Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(obs).solve(y_vec - forced);
  const double err = (y_vec - forced - obs * x0).norm();
  const double spread = (y_vec.array() - y_vec.mean()).matrix().norm();
  return spread > 0.0 ? 100.0 * (1.0 - err / spread) : 100.0;
}

// Noise-robust fallback model: the swing balance 2H·ẏ + D·y = −u holds for an
// area regardless of network state, so (2H, D) can be regressed from the
// record directly. Plain least squares is attenuated by measurement noise in
// the ẏ/y regressors (errors-in-variables), so the normal equations are
// instrumented with lag-shifted copies of the regressors (kInstrumentLagS):
// the noise decorrelates across the lag, the response does not. The result is
// the first-order model −1/(2H s + D), discretized by zero-order hold.
inline std::optional<StateSpace> balance_instrumented(const std::vector<double>& u,
                                                      const std::vector<double>& y, double dt) {
  const auto m = static_cast<Eigen::Index>(u.size());
  const auto lag = std::max<Eigen::Index>(1, static_cast<Eigen::Index>(
                                                 std::llround(kInstrumentLagS / dt)));
  const Eigen::Index k0 = 1 + lag;
  const Eigen::Index rows = m - 1 - k0;
  if (rows < 8) return std::nullopt;

  Eigen::MatrixXd phi(rows, 2), z(rows, 2);
  Eigen::VectorXd rhs(rows);
  for (Eigen::Index k = k0; k < m - 1; ++k) {
    const auto r = k - k0;
    const auto ks = static_cast<std::size_t>(k);
    const auto kl = static_cast<std::size_t>(k - lag);
    phi(r, 0) = (y[ks + 1] - y[ks - 1]) / (2.0 * dt);
    phi(r, 1) = y[ks];
    z(r, 0) = (y[kl + 1] - y[kl - 1]) / (2.0 * dt);
    z(r, 1) = y[kl];
    rhs(r) = -u[ks];
  }
  const Eigen::Vector2d theta =
      (z.transpose() * phi).colPivHouseholderQr().solve(z.transpose() * rhs);
  const double two_h = theta(0);
  const double damping = theta(1);
  if (!std::isfinite(two_h) || !std::isfinite(damping) || !(two_h > 0.0)) return std::nullopt;

  const double a_c = -damping / two_h;
  if (a_c * dt > 50.0) return std::nullopt;  // exp overflow guard
  const double a_d = std::exp(a_c * dt);
  const double step_gain = std::abs(a_c) > 1e-12 ? (a_d - 1.0) / a_c : dt;

  StateSpace ss;
  ss.a = Eigen::MatrixXd::Constant(1, 1, a_d);
  ss.b = Eigen::VectorXd::Constant(1, step_gain * (-1.0 / two_h));
  ss.c = Eigen::RowVectorXd::Constant(1, 1.0);
  ss.d = 0.0;
  return ss;
}

}  // namespace detail

// Deterministic subspace identification (N4SID family) of a SISO model from
// an input/output record. Block-Hankel matrices with past/future horizon
// i = max(10, 4n) feed an oblique projection of future outputs along future
// inputs onto past data; its SVD gives the state sequence, and one least
// squares solve recovers (A, B, C, D). The horizon is kept short on purpose:
// input and output of a post-disturbance record share the same modal content,
// so every extra future-input row removes another slice of the output signal
// in the orthogonal-complement step.
//
// The projection's leading directions are not all necessarily dynamics: on
// records dominated by a lower-order response the trailing directions carry
// projection residual (regime transitions, aggregation leftovers, filtered
// measurement noise) whose magnitude depends on the data, not the system, and
// fitting them produces arbitrary — often unstable — poles. No singular-value
// threshold separates the two cases, so models are built at every direction
// count up to the configured order and judged by how well they reproduce the
// record; the winning model is padded with unreachable, unobservable states
// so the state dimension stays at the configured order.
//
// When even the best subspace candidate fails to reproduce the record
// (fit below kSubspaceFitFloor — the signature of measurement noise at the
// response's own scale, where the projection's directions stop carrying
// dynamics), the model is instead taken from an instrumented least-squares
// fit of the power-balance relation between the two traces, which stays
// consistent under noise that defeats the projection (see
// detail::balance_instrumented).
inline IdentifiedModel identify(const SignalTrace& input, const SignalTrace& output, int order) {
  check_trace(input, "identify input");
  check_trace(output, "identify output");
  if (order < 1) throw ConfigError("identify: model order must be >= 1");
  if (input.size() != output.size() || std::abs(input.dt - output.dt) > 1e-15)
    throw ConfigError("identify: input and output traces must share length and dt");

  const auto n = static_cast<std::size_t>(order);
  const std::size_t i = std::max<std::size_t>(10, 4 * n);
  if (input.size() < 4 * i + 2)
    throw ConfigError("identify: record too short for the subspace horizon");

  const std::vector<double>& u = input.values;
  const std::vector<double>& y = output.values;
  const std::size_t j = u.size() - 2 * i;

  double u_max = 0.0;
  for (double v : u) u_max = std::max(u_max, std::abs(v));
  if (u_max == 0.0) throw Error("insufficient excitation");
  const Eigen::MatrixXd u_p = detail::block_hankel(u, 0, i, j);
  const Eigen::MatrixXd u_f = detail::block_hankel(u, i, i, j);
  const Eigen::MatrixXd y_p = detail::block_hankel(y, 0, i, j);
  const Eigen::MatrixXd y_f = detail::block_hankel(y, i, i, j);
  Eigen::MatrixXd w_p(static_cast<Eigen::Index>(2 * i), static_cast<Eigen::Index>(j));
  w_p << u_p, y_p;

  const Eigen::MatrixXd proj = detail::oblique_projection(y_f, u_f, w_p);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(proj, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();

  IdentifiedModel model;
  model.dt = input.dt;
  for (Eigen::Index k = 0; k < sigma.size(); ++k) model.singular_values.push_back(sigma(k));

  std::size_t n_max = 0;
  while (n_max < n && n_max < static_cast<std::size_t>(sigma.size()) &&
         sigma(static_cast<Eigen::Index>(n_max)) > detail::kDirectionFloor * sigma(0))
    ++n_max;
  if (n_max == 0 || sigma(0) <= 0.0) throw Error("insufficient excitation");

  // shifted state sequence comes from the projection one sample later
  const Eigen::MatrixXd y_f_minus = detail::block_hankel(y, i + 1, i - 1, j);
  const Eigen::MatrixXd u_f_minus = detail::block_hankel(u, i + 1, i - 1, j);
  Eigen::MatrixXd w_p_plus(static_cast<Eigen::Index>(2 * i + 2), static_cast<Eigen::Index>(j));
  w_p_plus << detail::block_hankel(u, 0, i + 1, j), detail::block_hankel(y, 0, i + 1, j);
  const Eigen::MatrixXd proj_minus = detail::oblique_projection(y_f_minus, u_f_minus, w_p_plus);
  const Eigen::MatrixXd u_row = detail::block_hankel(u, i, 1, j);
  const Eigen::MatrixXd y_row = detail::block_hankel(y, i, 1, j);

  detail::StateSpace best;
  double best_fit = 0.0;
  std::size_t n_fit = 0;
  for (std::size_t ne_try = n_max; ne_try >= 1; --ne_try) {
    const auto ne = static_cast<Eigen::Index>(ne_try);
    const Eigen::VectorXd sqrt_sigma = sigma.head(ne).cwiseSqrt();
    const Eigen::MatrixXd gamma = svd.matrixU().leftCols(ne) * sqrt_sigma.asDiagonal();
    const Eigen::MatrixXd x_i = sqrt_sigma.asDiagonal() * svd.matrixV().leftCols(ne).transpose();
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> gamma_up(
        gamma.topRows(static_cast<Eigen::Index>(i - 1)));
    const Eigen::MatrixXd x_next = gamma_up.solve(proj_minus);

    // single least squares for all system matrices:
    // [X_{k+1}; y_k] = [A B; C D]·[X_k; u_k]
    Eigen::MatrixXd lhs(ne + 1, static_cast<Eigen::Index>(j));
    lhs << x_next, y_row;
    Eigen::MatrixXd regressors(ne + 1, static_cast<Eigen::Index>(j));
    regressors << x_i, u_row;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> reg(regressors.transpose());
    const Eigen::MatrixXd theta = reg.solve(lhs.transpose()).transpose();

    detail::StateSpace ss;
    ss.a = theta.topLeftCorner(ne, ne);
    ss.b = theta.topRightCorner(ne, 1);
    ss.c = theta.bottomLeftCorner(1, ne);
    ss.d = theta(ne, ne);
    const double fit = detail::record_fit_percent(ss, u, y);
    // prefer the larger model unless a smaller one is strictly better
    if (n_fit == 0 || fit > best_fit + detail::kFitMargin) {
      best = ss;
      best_fit = fit;
      n_fit = ne_try;
    }
  }

  // A subspace model that cannot reproduce the record was identified from
  // noise, not dynamics; fall back to the instrumented balance fit. The
  // record fit is not used to arbitrate between the two (a near-integrating
  // model's simulation drifts on noisy inputs, so its fit underreports):
  // reaching the floor is possible only with effectively clean data, and
  // only then is the subspace result trusted.
  if (best_fit < detail::kSubspaceFitFloor) {
    if (auto balance = detail::balance_instrumented(u, y, input.dt)) {
      best = *balance;
      best_fit = detail::record_fit_percent(best, u, y);
      n_fit = 1;
    }
  }

  const auto nn = static_cast<Eigen::Index>(n);
  const auto nf = static_cast<Eigen::Index>(n_fit);
  model.a_d = Eigen::MatrixXd::Zero(nn, nn);
  model.b_d = Eigen::VectorXd::Zero(nn);
  model.c_d = Eigen::RowVectorXd::Zero(nn);
  model.a_d.topLeftCorner(nf, nf) = best.a;
  model.b_d.head(nf) = best.b;
  model.c_d.head(nf) = best.c;
  model.d_d = best.d;
  for (Eigen::Index k = nf; k < nn; ++k) model.a_d(k, k) = 0.5;  // inert padding states
  model.fit_percent = best_fit;
  model.fitted_order = static_cast<int>(n_fit);

  const Eigen::VectorXcd mu = Eigen::EigenSolver<Eigen::MatrixXd>(model.a_d).eigenvalues();
  for (Eigen::Index k = 0; k < mu.size(); ++k) {
    if (std::abs(mu(k)) > 1.0 + 1e-9) model.unstable = true;
    if (mu(k).imag() == 0.0 && mu(k).real() < 0.0) model.log_ambiguous = true;
  }

  // continuous conversion: principal matrix logarithm, then the zero-order-
  // hold integral is inverted to recover the continuous input matrix
  const Eigen::MatrixXcd a_log = model.a_d.cast<std::complex<double>>().log();
  model.a_c = a_log.real() / model.dt;
  if (a_log.imag().norm() > 1e-6 * std::max(1.0, a_log.real().norm()))
    model.log_ambiguous = true;
  const Eigen::MatrixXd psi = detail::zoh_integral(model.a_c, model.dt);
  model.b_c = psi.partialPivLu().solve(model.b_d);
  detail::transfer_function(model.a_c, model.b_c, model.c_d, model.d_d, model.numerator,
                            model.denominator);
  return model;
}

// Unit-step response of the identified model, simulated in discrete time.
// If the requested dt differs from the identification dt the continuous
// model is re-discretized at the requested rate first.
inline SignalTrace step_response(const IdentifiedModel& model, double horizon_s, double dt) {
  if (!(horizon_s > 0.0) || !(dt > 0.0))
    throw ConfigError("step_response: horizon and dt must be positive");
  const auto n_steps = static_cast<std::size_t>(std::ceil(horizon_s / dt - 1e-9));

  Eigen::MatrixXd a = model.a_d;
  Eigen::VectorXd b = model.b_d;
  if (std::abs(dt - model.dt) > 1e-12) {
    Eigen::MatrixXd blk =
        Eigen::MatrixXd::Zero(2 * model.a_c.rows(), 2 * model.a_c.cols());
    blk.topLeftCorner(model.a_c.rows(), model.a_c.cols()) = model.a_c * dt;
    blk.topRightCorner(model.a_c.rows(), model.a_c.cols()) =
        Eigen::MatrixXd::Identity(model.a_c.rows(), model.a_c.cols()) * dt;
    const Eigen::MatrixXd e = blk.exp();
    a = e.topLeftCorner(model.a_c.rows(), model.a_c.cols());
    b = e.topRightCorner(model.a_c.rows(), model.a_c.cols()) * model.b_c;
  }

  SignalTrace g;
  g.dt = dt;
  g.t0 = 0.0;
  g.values.resize(n_steps + 1);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(a.rows());
  for (std::size_t k = 0; k <= n_steps; ++k) {
    g.values[k] = model.c_d * x + model.d_d;
    x = a * x + b;
  }
  return g;
}

// Ordinary least squares polynomial fit over [0, window_s] of the trace,
// time rebased so t = 0 at the first sample. Conditioned on the scaled
// basis (t/window)^k; coefficients are mapped back to plain monomials.
inline PolynomialFit fit_polynomial(const SignalTrace& g, int poly_order, double window_s) {
  check_trace(g, "fit_polynomial");
  if (poly_order < 1) throw ConfigError("fit_polynomial: order must be >= 1");
  if (!(window_s > 0.0)) throw ConfigError("fit_polynomial: window must be positive");
  if (static_cast<double>(g.size() - 1) * g.dt < window_s - 1e-9)
    throw ConfigError("fit_polynomial: window exceeds the trace horizon");

  std::size_t m_w = 0;
  while (m_w < g.size() && static_cast<double>(m_w) * g.dt <= window_s + 1e-12) ++m_w;
  if (m_w < static_cast<std::size_t>(poly_order) + 1)
    throw ConfigError("fit_polynomial: window is underdetermined for the requested order");

  const auto rows = static_cast<Eigen::Index>(m_w);
  const auto cols = static_cast<Eigen::Index>(poly_order) + 1;
  Eigen::MatrixXd design(rows, cols);
  Eigen::VectorXd rhs(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const double tau = static_cast<double>(r) * g.dt / window_s;
    double p = 1.0;
    for (Eigen::Index c = 0; c < cols; ++c) {
      design(r, c) = p;
      p *= tau;
    }
    rhs(r) = g.values[static_cast<std::size_t>(r)];
  }
  const Eigen::VectorXd scaled = design.colPivHouseholderQr().solve(rhs);

  PolynomialFit fit;
  fit.order = poly_order;
  fit.window_s = window_s;
  fit.coefficients.resize(static_cast<std::size_t>(cols));
  double denom = 1.0;
  for (Eigen::Index c = 0; c < cols; ++c) {
    fit.coefficients[static_cast<std::size_t>(c)] = scaled(c) / denom;
    denom *= window_s;
  }
  fit.residual_rms = std::sqrt((design * scaled - rhs).squaredNorm() / static_cast<double>(rows));
  return fit;
}

// Per-area inertia from the identified model's unit-step response: the
// linear coefficient of the polynomial fit approximates the t=0 slope, and
// H̃ = −1/(2c₁). Damping is not estimated by this method. Per-area failures
// are recorded without aborting the other areas.
inline InertiaEstimate estimate_sysid(const AreaDataset& dataset, const SysIdConfig& cfg = {}) {
  check_dataset(dataset);
  InertiaEstimate out;
  out.method = Method::SysId;
  out.hyperparameters["order"] = cfg.order;
  out.hyperparameters["poly_order"] = cfg.poly_order;
  out.hyperparameters["fit_window_s"] = cfg.fit_window_s;

  for (std::size_t a = 0; a < dataset.area_ids.size(); ++a) {
    AreaEstimate est;
    est.area = dataset.area_ids[a];
    try {
      const IdentifiedModel model = identify(dataset.power_dev[a], dataset.speed_dev[a], cfg.order);
      const SignalTrace g = step_response(model, cfg.fit_window_s, dataset.dt());
      const PolynomialFit fit = fit_polynomial(g, cfg.poly_order, cfg.fit_window_s);
      const double c1 = fit.coefficients[1];
      est.diagnostics["fit_percent"] = model.fit_percent;
      est.diagnostics["step_slope_c1"] = c1;
      est.diagnostics["poly_residual_rms"] = fit.residual_rms;
      if (model.unstable) est.diagnostics["unstable_model"] = 1.0;
      if (!(c1 < 0.0)) {
        est.failure = "non-physical slope";
      } else {
        est.inertia_s = -1.0 / (2.0 * c1);
      }
    } catch (const std::exception& e) {
      est.failure = e.what();
    }
    out.areas.push_back(std::move(est));
  }
  return out;
}

}  // namespace inertiakit::est
