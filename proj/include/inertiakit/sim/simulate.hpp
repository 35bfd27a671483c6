#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "inertiakit/dataset.hpp"
#include "inertiakit/grid.hpp"
#include "inertiakit/sim/kron.hpp"
#include "inertiakit/types.hpp"

namespace inertiakit::sim {

// Upper bound on the internal integration step. The actual step divides the
// measurement interval exactly (h = (1/rate)/ceil((1/rate)/bound)) so
// recorded samples land on integration-grid points with no interpolation.
constexpr double kMaxInternalStepS = 1e-3;

// Operating point snapshot at t = 0.
struct SteadyState {
  std::vector<double> delta0;        // rotor angles [rad], generator order
  std::vector<double> mech_power;    // equilibrium mechanical powers [pu, system base]
  std::vector<double> bus_v_mag;     // solved bus voltages
  std::vector<double> bus_v_angle;
  std::vector<double> area_pe0;      // baseline area exports, area order
};

struct SimulationResult {
  std::vector<double> time;                   // uniform measurement grid [s]
  std::vector<std::string> gen_ids;           // model generator order
  std::vector<std::vector<double>> delta;     // [gen][sample], rad
  std::vector<std::vector<double>> domega;    // [gen][sample], pu speed deviation
  std::vector<std::string> area_ids;          // canonical (sorted) area labels
  std::vector<std::vector<double>> area_pe;   // [area][sample], pu export, system base
  SteadyState initial;
  DisturbanceSpec disturbance;                // with times snapped to the step grid
  double measurement_rate_hz = 0.0;
  double nominal_frequency_hz = 0.0;
  double internal_step_s = 0.0;

  std::size_t sample_count() const { return time.size(); }
  double dt() const { return time.size() > 1 ? time[1] - time[0] : 0.0; }
};

namespace detail {

// Machine electrical powers at the given rotor angles, using precomputed
// per-machine cos/sin so the pairwise terms cancel exactly for a lossless
// network (keeps Σ M·Δω conserved to integrator precision when D = 0).
struct ElectricalPower {
  std::size_t ng;
  std::vector<double> conductance, susceptance;  // row-major ng×ng, includes EMF factors
  // entry (m,j) already scaled by |E_m||E_j|

  ElectricalPower(const Eigen::MatrixXcd& y, const std::vector<double>& emf)
      : ng(emf.size()), conductance(ng * ng), susceptance(ng * ng) {
    for (std::size_t m = 0; m < ng; ++m)
      for (std::size_t j = 0; j < ng; ++j) {
        const auto c = y(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(j));
        conductance[m * ng + j] = emf[m] * emf[j] * c.real();
        susceptance[m * ng + j] = emf[m] * emf[j] * c.imag();
      }
  }

  void eval(const std::vector<double>& cos_d, const std::vector<double>& sin_d,
            std::vector<double>& pe) const {
    for (std::size_t m = 0; m < ng; ++m) {
      double acc = 0.0;
      for (std::size_t j = 0; j < ng; ++j) {
        const double cdiff = cos_d[m] * cos_d[j] + sin_d[m] * sin_d[j];
        const double sdiff = sin_d[m] * cos_d[j] - cos_d[m] * sin_d[j];
        acc += conductance[m * ng + j] * cdiff + susceptance[m * ng + j] * sdiff;
      }
      pe[m] = acc;
    }
  }
};

}  // namespace detail

// Fixed-step explicit RK4 integration of the per-machine swing equations
//   dδ_m/dt  = ω_s·Δω_m
//   2H_m·(S_m/S_base)·dΔω_m/dt = P_m − P_e,m(δ) − D_m·(S_m/S_base)·Δω_m
// over a disturbance scenario. Mechanical powers are re-anchored to the
// reduced-network electrical powers at δ(0) so the pre-disturbance window is
// an exact numerical equilibrium. Topology-change times are snapped to the
// integration grid; the sample taken at a switch instant reports electrical
// power on the post-switch network.
inline SimulationResult simulate(const GridModel& model, const DisturbanceSpec& disturbance,
                                 double duration_s, double measurement_rate_hz = 60.0) {
  check_disturbance(disturbance);
  if (!(measurement_rate_hz > 0.0))
    throw ConfigError("simulate: measurement rate must be positive");
  if (!(duration_s >= disturbance.effective_clear_s() + 1.0))
    throw ConfigError("simulate: duration must extend at least 1 s past disturbance clearing");

  const ReducedNetwork net = kron_reduce(model, disturbance);
  const std::size_t ng = model.generators.size();
  const std::size_t nb = model.buses.size();

  std::vector<double> m_sys(ng), d_sys(ng);
  for (std::size_t m = 0; m < ng; ++m) {
    const auto& g = model.generators[m];
    m_sys[m] = 2.0 * g.inertia_s * g.rating_mva / model.system_base_mva;
    d_sys[m] = g.damping_pu * g.rating_mva / model.system_base_mva;
  }
  const double omega_s = 2.0 * M_PI * model.nominal_frequency_hz;

  const double interval = 1.0 / measurement_rate_hz;
  const auto n_sub = static_cast<std::size_t>(
      std::max(1.0, std::ceil(interval / kMaxInternalStepS - 1e-9)));
  const double h = interval / static_cast<double>(n_sub);
  const auto n_samples =
      static_cast<std::size_t>(std::floor(duration_s * measurement_rate_hz + 1e-9)) + 1;
  const std::size_t total_steps = (n_samples - 1) * n_sub;

  const auto k_start = static_cast<std::size_t>(std::llround(disturbance.t_start_s / h));
  std::size_t k_clear = k_start;
  if (disturbance.kind == DisturbanceKind::BusFault)
    k_clear = std::max<std::size_t>(
        k_start + 1, static_cast<std::size_t>(std::llround(disturbance.t_clear_s / h)));

  auto phase_of_step = [&](std::size_t k) -> int {
    if (k < k_start) return 0;
    if (disturbance.kind == DisturbanceKind::BusFault && k < k_clear) return 1;
    return 2;
  };

  const detail::ElectricalPower pe_pre(net.y_pre, net.emf_mag);
  const detail::ElectricalPower pe_during(net.y_during, net.emf_mag);
  const detail::ElectricalPower pe_post(net.y_post, net.emf_mag);
  const detail::ElectricalPower* pe_of[3] = {&pe_pre, &pe_during, &pe_post};

  // exact numerical equilibrium: mechanical power = electrical power at δ(0)
  std::vector<double> delta = net.emf_angle0;
  std::vector<double> domega(ng, 0.0);
  std::vector<double> cos_d(ng), sin_d(ng), pe(ng), pmech(ng);
  auto trig = [&](const std::vector<double>& d) {
    for (std::size_t m = 0; m < ng; ++m) {
      cos_d[m] = std::cos(d[m]);
      sin_d[m] = std::sin(d[m]);
    }
  };
  trig(delta);
  pe_pre.eval(cos_d, sin_d, pe);
  pmech = pe;

  // area bookkeeping
  const std::vector<std::string> area_ids = model.area_labels();
  auto area_index = [&](const std::string& label) {
    return static_cast<std::size_t>(
        std::lower_bound(area_ids.begin(), area_ids.end(), label) - area_ids.begin());
  };
  std::vector<std::size_t> gen_area(ng), bus_area(nb);
  for (std::size_t m = 0; m < ng; ++m)
    gen_area[m] = area_index(*model.area_of_bus(model.generators[m].bus));
  for (std::size_t b = 0; b < nb; ++b) bus_area[b] = area_index(*model.area_of_bus(model.buses[b].id));

  SimulationResult out;
  out.gen_ids = net.gen_ids;
  out.area_ids = area_ids;
  out.measurement_rate_hz = measurement_rate_hz;
  out.nominal_frequency_hz = model.nominal_frequency_hz;
  out.internal_step_s = h;
  out.disturbance = disturbance;
  out.disturbance.t_start_s = static_cast<double>(k_start) * h;
  if (disturbance.kind == DisturbanceKind::BusFault)
    out.disturbance.t_clear_s = static_cast<double>(k_clear) * h;
  out.delta.assign(ng, std::vector<double>(n_samples));
  out.domega.assign(ng, std::vector<double>(n_samples));
  out.area_pe.assign(area_ids.size(), std::vector<double>(n_samples));
  out.time.resize(n_samples);

  Eigen::VectorXcd emf_vec(static_cast<Eigen::Index>(ng));
  auto record_sample = [&](std::size_t s, std::size_t step) {
    out.time[s] = static_cast<double>(s) / measurement_rate_hz;
    const int phase = phase_of_step(step);
    trig(delta);
    pe_of[phase]->eval(cos_d, sin_d, pe);
    for (std::size_t m = 0; m < ng; ++m) {
      out.delta[m][s] = delta[m];
      out.domega[m][s] = domega[m];
      emf_vec(static_cast<Eigen::Index>(m)) =
          net.emf_mag[m] * std::complex<double>(cos_d[m], sin_d[m]);
    }
    const Eigen::VectorXcd v_bus = net.phase_voltage_map(phase) * emf_vec;
    std::vector<double> export_pu(area_ids.size(), 0.0);
    for (std::size_t m = 0; m < ng; ++m) export_pu[gen_area[m]] += pe[m];
    for (std::size_t b = 0; b < nb; ++b)
      export_pu[bus_area[b]] -= net.baseline_load_conductance[b] *
                                std::norm(v_bus(static_cast<Eigen::Index>(b)));
    for (std::size_t a = 0; a < area_ids.size(); ++a) out.area_pe[a][s] = export_pu[a];
  };

  // RK4 stage derivative at rotor state (d, w) on the given network phase
  std::vector<double> kd1(ng), kw1(ng), kd2(ng), kw2(ng), kd3(ng), kw3(ng), kd4(ng), kw4(ng);
  std::vector<double> d_tmp(ng), w_tmp(ng);
  auto derivative = [&](const std::vector<double>& d, const std::vector<double>& w, int phase,
                        std::vector<double>& dd, std::vector<double>& dw) {
    trig(d);
    pe_of[phase]->eval(cos_d, sin_d, pe);
    for (std::size_t m = 0; m < ng; ++m) {
      dd[m] = omega_s * w[m];
      dw[m] = (pmech[m] - pe[m] - d_sys[m] * w[m]) / m_sys[m];
    }
  };

  record_sample(0, 0);
  std::size_t next_sample = 1;
  for (std::size_t k = 0; k < total_steps; ++k) {
    const int phase = phase_of_step(k);
    derivative(delta, domega, phase, kd1, kw1);
    for (std::size_t m = 0; m < ng; ++m) {
      d_tmp[m] = delta[m] + 0.5 * h * kd1[m];
      w_tmp[m] = domega[m] + 0.5 * h * kw1[m];
    }
    derivative(d_tmp, w_tmp, phase, kd2, kw2);
    for (std::size_t m = 0; m < ng; ++m) {
      d_tmp[m] = delta[m] + 0.5 * h * kd2[m];
      w_tmp[m] = domega[m] + 0.5 * h * kw2[m];
    }
    derivative(d_tmp, w_tmp, phase, kd3, kw3);
    for (std::size_t m = 0; m < ng; ++m) {
      d_tmp[m] = delta[m] + h * kd3[m];
      w_tmp[m] = domega[m] + h * kw3[m];
    }
    derivative(d_tmp, w_tmp, phase, kd4, kw4);
    for (std::size_t m = 0; m < ng; ++m) {
      delta[m] += h / 6.0 * (kd1[m] + 2.0 * kd2[m] + 2.0 * kd3[m] + kd4[m]);
      domega[m] += h / 6.0 * (kw1[m] + 2.0 * kw2[m] + 2.0 * kw3[m] + kw4[m]);
    }

    const auto [lo, hi] = std::minmax_element(delta.begin(), delta.end());
    if (ng > 1 && *hi - *lo > M_PI)
      throw SimulationError("unstable scenario: loss of synchronism (rotor angle spread > pi)");

    if ((k + 1) % n_sub == 0) {
      record_sample(next_sample, k + 1);
      ++next_sample;
    }
  }

  out.initial.delta0 = net.emf_angle0;
  out.initial.mech_power = pmech;
  out.initial.bus_v_mag = net.operating_point.v_mag;
  out.initial.bus_v_angle = net.operating_point.v_angle;
  out.initial.area_pe0.resize(area_ids.size());
  for (std::size_t a = 0; a < area_ids.size(); ++a) out.initial.area_pe0[a] = out.area_pe[a][0];
  return out;
}

// Rating-weighted center-of-inertia speed deviation per area, in pu.
// Areas containing no generators are absent from the result.
inline std::map<std::string, SignalTrace> compute_area_coi(const SimulationResult& result,
                                                           const GridModel& model) {
  std::map<std::string, double> rating_sum;
  std::map<std::string, std::vector<std::size_t>> members;
  for (std::size_t m = 0; m < model.generators.size(); ++m) {
    const auto& g = model.generators[m];
    const std::string* area = model.area_of_bus(g.bus);
    if (!area) throw ConfigError("generator '" + g.id + "' bus has no area assignment");
    rating_sum[*area] += g.rating_mva;
    members[*area].push_back(m);
  }

  std::map<std::string, SignalTrace> out;
  const std::size_t n = result.sample_count();
  for (const auto& [area, gens] : members) {
    SignalTrace trace;
    trace.dt = result.dt();
    trace.t0 = result.time.empty() ? 0.0 : result.time.front();
    trace.values.assign(n, 0.0);
    for (std::size_t s = 0; s < n; ++s) {
      double acc = 0.0;
      for (const std::size_t m : gens)
        acc += model.generators[m].rating_mva * result.domega[m][s];
      trace.values[s] = acc / rating_sum[area];
    }
    out.emplace(area, std::move(trace));
  }
  return out;
}

// Per-area deviation signals for the estimators: COI speed deviation and
// electrical-power export deviation, both relative to the pre-disturbance
// mean. Positive power deviation = increased export from the area. Only
// areas containing generators are included (the others have no speed
// signal).
inline AreaDataset extract_area_dataset(const SimulationResult& result, const GridModel& model) {
  const double t_start = result.disturbance.t_start_s;
  if (t_start < 1.0 - 1e-9)
    throw ConfigError("dataset extraction requires at least 1 s of pre-disturbance data");

  std::size_t n_base = 0;
  while (n_base < result.sample_count() && result.time[n_base] < t_start - 1e-12) ++n_base;
  if (n_base < 2) throw ConfigError("dataset extraction: missing pre-disturbance steady window");

  auto demean = [&](const std::vector<double>& values) {
    double mean = 0.0;
    for (std::size_t s = 0; s < n_base; ++s) mean += values[s];
    mean /= static_cast<double>(n_base);
    SignalTrace trace;
    trace.dt = result.dt();
    trace.t0 = result.time.front();
    trace.values.resize(values.size());
    for (std::size_t s = 0; s < values.size(); ++s) trace.values[s] = values[s] - mean;
    return trace;
  };

  const auto coi = compute_area_coi(result, model);
  AreaDataset ds;
  for (std::size_t a = 0; a < result.area_ids.size(); ++a) {
    const auto it = coi.find(result.area_ids[a]);
    if (it == coi.end()) continue;  // area has no generators
    ds.area_ids.push_back(result.area_ids[a]);
    SignalTrace w = it->second;
    double mean = 0.0;
    for (std::size_t s = 0; s < n_base; ++s) mean += w.values[s];
    mean /= static_cast<double>(n_base);
    for (double& v : w.values) v -= mean;
    ds.speed_dev.push_back(std::move(w));
    ds.power_dev.push_back(demean(result.area_pe[a]));
  }
  check_dataset(ds);
  return ds;
}

// CSV export: one row per measurement sample, 12 significant digits.
inline void export_csv(const SimulationResult& result, std::ostream& os) {
  os << "t";
  for (const auto& id : result.gen_ids) os << ",gen_" << id << "_domega";
  for (const auto& id : result.gen_ids) os << ",gen_" << id << "_delta";
  for (const auto& id : result.area_ids) os << ",area_" << id << "_Pe";
  os << "\n";
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    os << buf;
  };
  for (std::size_t s = 0; s < result.sample_count(); ++s) {
    put(result.time[s]);
    for (std::size_t m = 0; m < result.gen_ids.size(); ++m) {
      os << ",";
      put(result.domega[m][s]);
    }
    for (std::size_t m = 0; m < result.gen_ids.size(); ++m) {
      os << ",";
      put(result.delta[m][s]);
    }
    for (std::size_t a = 0; a < result.area_ids.size(); ++a) {
      os << ",";
      put(result.area_pe[a][s]);
    }
    os << "\n";
  }
}

}  // namespace inertiakit::sim
