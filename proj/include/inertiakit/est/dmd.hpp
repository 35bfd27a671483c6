#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "inertiakit/dataset.hpp"
#include "inertiakit/estimate.hpp"
#include "inertiakit/types.hpp"

namespace inertiakit::est {

struct DmdConfig {
  int rank = 0;             // 0 = full rank (after trimming negligible singular values)
  int start_index = 14;     // sample the amplitudes are computed at, counted from the anchor
  bool anchor_at_clear = true;  // false: count from disturbance inception instead
};

// Exact dynamic-mode decomposition of the stacked area signals. Mode rows
// are partitioned: the first n_areas rows belong to the speed deviations,
// the rest to the power deviations, matching the snapshot stacking.
struct DmdModel {
  Eigen::VectorXcd mu;      // discrete eigenvalues of the fitted propagator
  Eigen::VectorXcd lambda;  // continuous eigenvalues ln(mu)/dt, principal branch
  Eigen::MatrixXcd modes;   // 2·n_areas × r
  Eigen::VectorXcd amplitudes;  // b, valid once computed; clock t=0 at start_index
  int start_index = -1;
  int rank = 0;
  double dt = 0.0;
  std::size_t n_areas = 0;
  std::vector<double> singular_values;  // of the first snapshot block
  double residual_at_start = 0.0;       // ‖Φb − x_s‖/‖x_s‖ from the amplitude solve
  std::vector<std::string> warnings;
};

// Snapshot matrix: speed deviations stacked over power deviations, one
// column per sample, area order preserved within each block.
inline Eigen::MatrixXd build_snapshots(const AreaDataset& dataset) {
  check_dataset(dataset);
  const std::size_t na = dataset.n_areas();
  const std::size_t m = dataset.sample_count();
  Eigen::MatrixXd x(static_cast<Eigen::Index>(2 * na), static_cast<Eigen::Index>(m));
  for (std::size_t a = 0; a < na; ++a)
    for (std::size_t s = 0; s < m; ++s) {
      x(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(s)) =
          dataset.speed_dev[a].values[s];
      x(static_cast<Eigen::Index>(na + a), static_cast<Eigen::Index>(s)) =
          dataset.power_dev[a].values[s];
    }
  return x;
}

// Exact DMD: SVD of the first M−1 snapshots, reduced propagator
// Ã = Uᵀ·X₂·V·Σ⁻¹, eigendecomposition, and exact-DMD modes
// Φ = X₂·V·Σ⁻¹·W. Discrete eigenvalues at zero are dropped (their log is
// undefined); negative-real eigenvalues use the principal logarithm and are
// flagged, since their continuous frequency is aliased.
inline DmdModel fit(const Eigen::MatrixXd& x, double dt, int rank = 0) {
  if (x.cols() < 2) throw ConfigError("dmd fit: need at least 2 snapshots");
  if (!(dt > 0.0)) throw ConfigError("dmd fit: dt must be positive");

  DmdModel model;
  model.dt = dt;
  model.n_areas = static_cast<std::size_t>(x.rows()) / 2;

  const Eigen::MatrixXd x1 = x.leftCols(x.cols() - 1);
  const Eigen::MatrixXd x2 = x.rightCols(x.cols() - 1);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(x1, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  for (Eigen::Index k = 0; k < sigma.size(); ++k) model.singular_values.push_back(sigma(k));

  Eigen::Index r = sigma.size();
  if (rank > 0) r = std::min<Eigen::Index>(r, rank);
  if (static_cast<Eigen::Index>(x.cols()) - 1 < r)
    throw ConfigError("dmd fit: not enough snapshots for the requested rank");
  Eigen::Index r_kept = 0;
  while (r_kept < r && sigma(r_kept) > 1e-12 * sigma(0)) ++r_kept;
  if (r_kept < r)
    model.warnings.push_back("rank trimmed to " + std::to_string(r_kept) +
                             " (negligible singular values)");
  if (r_kept == 0) {
    model.rank = 0;
    model.modes.resize(x.rows(), 0);
    model.mu.resize(0);
    model.lambda.resize(0);
    return model;
  }

  const Eigen::MatrixXd u_r = svd.matrixU().leftCols(r_kept);
  const Eigen::MatrixXd v_r = svd.matrixV().leftCols(r_kept);
  const Eigen::VectorXd sig_inv = sigma.head(r_kept).cwiseInverse();
  const Eigen::MatrixXd x2vs = x2 * v_r * sig_inv.asDiagonal();
  const Eigen::MatrixXd a_tilde = u_r.transpose() * x2vs;

  Eigen::EigenSolver<Eigen::MatrixXd> eig(a_tilde);
  const Eigen::VectorXcd mu_all = eig.eigenvalues();
  const Eigen::MatrixXcd w = eig.eigenvectors();
  const Eigen::MatrixXcd phi_all = x2vs.cast<std::complex<double>>() * w;

  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < mu_all.size(); ++k) {
    if (std::abs(mu_all(k)) < 1e-12) {
      model.warnings.push_back("dropped mode with zero discrete eigenvalue (log of zero)");
      continue;
    }
    if (mu_all(k).imag() == 0.0 && mu_all(k).real() < 0.0)
      model.warnings.push_back("negative real eigenvalue: principal logarithm is aliased");
    keep.push_back(k);
  }
  model.rank = static_cast<int>(keep.size());
  model.mu.resize(static_cast<Eigen::Index>(keep.size()));
  model.lambda.resize(static_cast<Eigen::Index>(keep.size()));
  model.modes.resize(x.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    const auto idx = static_cast<Eigen::Index>(k);
    model.mu(idx) = mu_all(keep[k]);
    model.lambda(idx) = std::log(mu_all(keep[k])) / dt;
    model.modes.col(idx) = phi_all.col(keep[k]);
  }
  return model;
}

// Least-squares amplitudes anchoring the reconstruction clock at sample s:
// Φ·b = X[:, s]. A rank-deficient mode matrix yields the minimum-norm
// solution with a warning.
inline Eigen::VectorXcd amplitudes(DmdModel& model, const Eigen::MatrixXd& x, int start_index) {
  if (start_index < 0 || start_index >= x.cols())
    throw ConfigError("dmd amplitudes: start index outside the snapshot range");
  const Eigen::VectorXcd snapshot = x.col(start_index).cast<std::complex<double>>();
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(model.modes);
  if (model.modes.cols() > 0 && cod.rank() < model.modes.cols())
    model.warnings.push_back("rank-deficient mode matrix; minimum-norm amplitudes");
  model.amplitudes = cod.solve(snapshot);
  model.start_index = start_index;
  const double denom = snapshot.norm();
  model.residual_at_start =
      denom > 0.0 ? (model.modes * model.amplitudes - snapshot).norm() / denom : 0.0;
  return model.amplitudes;
}

// Complex reconstruction Σ_k φ_k·b_k·e^{λ_k t} at the given times (seconds,
// relative to the amplitude anchor). Exposed for residue checks.
inline Eigen::MatrixXcd reconstruct_complex(const DmdModel& model,
                                            const std::vector<double>& times) {
  if (model.start_index < 0)
    throw ConfigError("dmd reconstruct: amplitudes have not been computed");
  Eigen::MatrixXcd out(model.modes.rows(), static_cast<Eigen::Index>(times.size()));
  for (std::size_t t = 0; t < times.size(); ++t) {
    Eigen::VectorXcd scaled(model.lambda.size());
    for (Eigen::Index k = 0; k < model.lambda.size(); ++k)
      scaled(k) = model.amplitudes(k) * std::exp(model.lambda(k) * times[t]);
    out.col(static_cast<Eigen::Index>(t)) = model.modes * scaled;
  }
  return out;
}

// Real-signal reconstruction; the imaginary residue (which conjugate-pair
// symmetry keeps negligible for real input data) is discarded.
inline Eigen::MatrixXd reconstruct(const DmdModel& model, const std::vector<double>& times) {
  return reconstruct_complex(model, times).real();
}

namespace detail {

// Per-area 2×2 real system assembled from the mode sums, taken over one
// representative per conjugate pair (positive-frequency half-spectrum).
// Summing both members of every pair would make all three sums real —
// the system would be singular for any data — while the per-mode swing
// relation is linear in the modes, so any sub-sum of oscillatory modes
// satisfies it exactly. Unconstrained solve first; if the damping leaves
// [0, 1] it is clamped to the nearest bound and inertia is re-solved in
// one dimension (exact for a 2-dimensional box-constrained least squares).
inline AreaEstimate solve_area(const DmdModel& model, std::size_t area_row,
                               const std::string& area_id) {
  AreaEstimate est;
  est.area = area_id;

  std::complex<double> alpha(0.0, 0.0), beta(0.0, 0.0), rho(0.0, 0.0);
  for (Eigen::Index k = 0; k < model.lambda.size(); ++k) {
    if (!(model.lambda(k).imag() > 1e-9)) continue;
    const std::complex<double> b = model.amplitudes(k);
    const std::complex<double> phi_w = model.modes(static_cast<Eigen::Index>(area_row), k);
    const std::complex<double> phi_p =
        model.modes(static_cast<Eigen::Index>(model.n_areas + area_row), k);
    alpha += phi_w * model.lambda(k) * b;
    beta += phi_w * b;
    rho += phi_p * b;
  }

  const double a11 = alpha.real(), a12 = beta.real();
  const double a21 = alpha.imag(), a22 = beta.imag();
  const double r1 = -rho.real(), r2 = -rho.imag();
  // det = Im(conj(alpha)·beta); relative to |alpha||beta| it measures the
  // angle between the two complex coefficients, independent of their scale.
  const double det = a11 * a22 - a12 * a21;
  const double scale = std::abs(alpha) * std::abs(beta);
  if (!(std::abs(det) > 1e-9 * scale)) {
    est.failure = "no electromechanical content in area signals";
    return est;
  }

  double two_h = (r1 * a22 - a12 * r2) / det;
  double damping = (a11 * r2 - r1 * a21) / det;
  est.diagnostics["h_unconstrained"] = two_h / 2.0;
  est.diagnostics["d_unconstrained"] = damping;

  if (damping < 0.0 || damping > 1.0) {
    const double clamped = std::clamp(damping, 0.0, 1.0);
    const double denom = a11 * a11 + a21 * a21;
    if (!(denom > 0.0)) {
      est.failure = "no electromechanical content in area signals";
      return est;
    }
    two_h = (a11 * (r1 - a12 * clamped) + a21 * (r2 - a22 * clamped)) / denom;
    damping = clamped;
    est.diagnostics["damping_clamped"] = 1.0;
  }

  if (!(two_h > 0.0)) {
    est.failure = "non-physical inertia";
    return est;
  }
  est.inertia_s = two_h / 2.0;
  est.damping_pu = damping;
  return est;
}

}  // namespace detail

// Full pipeline: slice the dataset at the configured anchor (disturbance
// clearing by default), fit exact DMD to the slice, compute amplitudes at
// start_index within the slice, and solve the per-area constrained system
// for (H̃, D̃). The clear time comes from scenario metadata; it is never
// auto-detected. The fitted model is copied to model_out when requested
// (diagnostics export).
inline InertiaEstimate estimate_dmd(const AreaDataset& dataset, const DisturbanceSpec& disturbance,
                                    const DmdConfig& cfg = {}, DmdModel* model_out = nullptr) {
  check_dataset(dataset);
  const double anchor_time =
      cfg.anchor_at_clear ? disturbance.effective_clear_s() : disturbance.t_start_s;
  std::size_t anchor = 0;
  while (anchor < dataset.sample_count() &&
         dataset.speed_dev.front().time_at(anchor) < anchor_time - 1e-12)
    ++anchor;
  if (anchor >= dataset.sample_count())
    throw ConfigError("dmd estimate: disturbance anchor beyond the record end");

  const AreaDataset slice = slice_dataset(dataset, anchor, dataset.sample_count());
  check_dataset(slice);
  const Eigen::MatrixXd x = build_snapshots(slice);
  DmdModel model = fit(x, slice.dt(), cfg.rank);
  if (cfg.start_index >= x.cols())
    throw ConfigError("dmd estimate: start index beyond the post-anchor record");
  amplitudes(model, x, cfg.start_index);

  InertiaEstimate out;
  out.method = Method::Dmd;
  out.hyperparameters["rank"] = model.rank;
  out.hyperparameters["start_index"] = cfg.start_index;
  out.hyperparameters["anchor_at_clear"] = cfg.anchor_at_clear ? 1.0 : 0.0;
  for (std::size_t a = 0; a < dataset.n_areas(); ++a) {
    AreaEstimate est = detail::solve_area(model, a, dataset.area_ids[a]);
    est.diagnostics["reconstruction_residual"] = model.residual_at_start;
    out.areas.push_back(std::move(est));
  }
  if (model_out) *model_out = model;
  return out;
}

}  // namespace inertiakit::est
