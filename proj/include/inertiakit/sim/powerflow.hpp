#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include "inertiakit/grid.hpp"
#include "inertiakit/types.hpp"

namespace inertiakit::sim {

// Solved pre-disturbance operating point. Everything is on the system MVA
// base; bus order follows model.buses, generator order follows
// model.generators.
struct PowerFlowResult {
  std::vector<double> v_mag;                    // pu
  std::vector<double> v_angle;                  // rad
  std::vector<double> bus_p_injection;          // net pu injection per bus
  std::vector<std::complex<double>> gen_current;  // pu, into the network
  std::vector<std::complex<double>> gen_emf;      // EMF behind transient reactance
  std::vector<double> load_conductance;           // per-bus shunt equivalent of loads
  int iterations = 0;
};

namespace detail {

// Network bus admittance matrix from the line list (pure series reactances,
// no shunts). Loads are handled by the caller.
inline Eigen::MatrixXcd build_ybus(const GridModel& model) {
  const std::size_t nb = model.buses.size();
  Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(nb, nb);
  for (const auto& line : model.lines) {
    const auto f = static_cast<Eigen::Index>(model.bus_index(line.from));
    const auto t = static_cast<Eigen::Index>(model.bus_index(line.to));
    const std::complex<double> adm(0.0, -1.0 / line.reactance_pu);
    y(f, f) += adm;
    y(t, t) += adm;
    y(f, t) -= adm;
    y(t, f) -= adm;
  }
  return y;
}

}  // namespace detail

// Newton–Raphson AC power flow in polar form. Generator buses hold 1.0 pu
// voltage (the first generator's bus is the angle reference and balances the
// system); all other buses are PQ with constant-power loads. The solved
// point supplies the constant-impedance load model and the internal EMFs
// used by the dynamic simulation.
inline PowerFlowResult solve_powerflow(const GridModel& model) {
  require_valid(model);
  const std::size_t nb = model.buses.size();
  const std::size_t ng = model.generators.size();
  const Eigen::MatrixXcd ybus = detail::build_ybus(model);

  // per-bus scheduled injections (generation minus load), loads as constant
  // power with zero reactive demand
  std::vector<double> p_sched(nb, 0.0), p_load(nb, 0.0);
  std::vector<bool> is_gen_bus(nb, false);
  for (const auto& g : model.generators) {
    const auto b = static_cast<std::size_t>(model.bus_index(g.bus));
    p_sched[b] += g.mech_power_pu;
    is_gen_bus[b] = true;
  }
  for (const auto& l : model.loads) {
    const auto b = static_cast<std::size_t>(model.bus_index(l.bus));
    p_sched[b] -= l.active_power_pu;
    p_load[b] += l.active_power_pu;
  }
  const auto slack = static_cast<std::size_t>(model.bus_index(model.generators.front().bus));

  std::vector<double> vm(nb, 1.0), va(nb, 0.0);

  // unknowns: angle at every non-slack bus, magnitude at every non-gen bus
  std::vector<std::size_t> ang_idx, mag_idx;
  for (std::size_t b = 0; b < nb; ++b) {
    if (b != slack) ang_idx.push_back(b);
    if (!is_gen_bus[b]) mag_idx.push_back(b);
  }
  const std::size_t n_unknown = ang_idx.size() + mag_idx.size();

  auto calc_pq = [&](std::size_t i) {
    double p = 0.0, q = 0.0;
    for (std::size_t j = 0; j < nb; ++j) {
      const double g = ybus(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)).real();
      const double b = ybus(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)).imag();
      const double th = va[i] - va[j];
      p += vm[i] * vm[j] * (g * std::cos(th) + b * std::sin(th));
      q += vm[i] * vm[j] * (g * std::sin(th) - b * std::cos(th));
    }
    return std::pair<double, double>(p, q);
  };

  // convergence threshold scales with the injection magnitudes so the solve
  // is invariant under a change of MVA base
  double p_scale = 0.0;
  for (std::size_t b = 0; b < nb; ++b) p_scale = std::max(p_scale, std::abs(p_sched[b]));
  const double tol = 1e-11 * std::max(p_scale, std::numeric_limits<double>::min());

  int iter = 0;
  if (n_unknown > 0) {
    const int max_iter = 50;
    for (iter = 0; iter <= max_iter; ++iter) {
      Eigen::VectorXd mismatch(n_unknown);
      std::vector<double> p_calc(nb), q_calc(nb);
      for (std::size_t b = 0; b < nb; ++b) std::tie(p_calc[b], q_calc[b]) = calc_pq(b);
      for (std::size_t r = 0; r < ang_idx.size(); ++r)
        mismatch(static_cast<Eigen::Index>(r)) = p_sched[ang_idx[r]] - p_calc[ang_idx[r]];
      for (std::size_t r = 0; r < mag_idx.size(); ++r)
        mismatch(static_cast<Eigen::Index>(ang_idx.size() + r)) = 0.0 - q_calc[mag_idx[r]];

      if (mismatch.lpNorm<Eigen::Infinity>() <= tol) break;
      if (iter == max_iter)
        throw SimulationError("power flow did not converge within 50 iterations");

      Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_unknown),
                                                  static_cast<Eigen::Index>(n_unknown));
      auto g_of = [&](std::size_t i, std::size_t j) {
        return ybus(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)).real();
      };
      auto b_of = [&](std::size_t i, std::size_t j) {
        return ybus(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)).imag();
      };
      for (std::size_t r = 0; r < ang_idx.size(); ++r) {
        const std::size_t i = ang_idx[r];
        for (std::size_t c = 0; c < ang_idx.size(); ++c) {
          const std::size_t j = ang_idx[c];
          const double th = va[i] - va[j];
          jac(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
              (i == j) ? -q_calc[i] - b_of(i, i) * vm[i] * vm[i]
                       : vm[i] * vm[j] * (g_of(i, j) * std::sin(th) - b_of(i, j) * std::cos(th));
        }
        for (std::size_t c = 0; c < mag_idx.size(); ++c) {
          const std::size_t j = mag_idx[c];
          const double th = va[i] - va[j];
          jac(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(ang_idx.size() + c)) =
              (i == j) ? p_calc[i] / vm[i] + g_of(i, i) * vm[i]
                       : vm[i] * (g_of(i, j) * std::cos(th) + b_of(i, j) * std::sin(th));
        }
      }
      for (std::size_t r = 0; r < mag_idx.size(); ++r) {
        const std::size_t i = mag_idx[r];
        for (std::size_t c = 0; c < ang_idx.size(); ++c) {
          const std::size_t j = ang_idx[c];
          const double th = va[i] - va[j];
          jac(static_cast<Eigen::Index>(ang_idx.size() + r), static_cast<Eigen::Index>(c)) =
              (i == j) ? p_calc[i] - g_of(i, i) * vm[i] * vm[i]
                       : -vm[i] * vm[j] * (g_of(i, j) * std::cos(th) + b_of(i, j) * std::sin(th));
        }
        for (std::size_t c = 0; c < mag_idx.size(); ++c) {
          const std::size_t j = mag_idx[c];
          const double th = va[i] - va[j];
          jac(static_cast<Eigen::Index>(ang_idx.size() + r),
              static_cast<Eigen::Index>(ang_idx.size() + c)) =
              (i == j) ? q_calc[i] / vm[i] - b_of(i, i) * vm[i]
                       : vm[i] * (g_of(i, j) * std::sin(th) - b_of(i, j) * std::cos(th));
        }
      }

      const Eigen::VectorXd dx = jac.partialPivLu().solve(mismatch);
      if (!dx.allFinite())
        throw SimulationError("power flow Jacobian is singular (degenerate operating point)");
      for (std::size_t r = 0; r < ang_idx.size(); ++r)
        va[ang_idx[r]] += dx(static_cast<Eigen::Index>(r));
      for (std::size_t r = 0; r < mag_idx.size(); ++r)
        vm[mag_idx[r]] += dx(static_cast<Eigen::Index>(ang_idx.size() + r));
    }
  }

  PowerFlowResult out;
  out.v_mag = vm;
  out.v_angle = va;
  out.iterations = iter;
  out.bus_p_injection.resize(nb);
  std::vector<double> q_inj(nb);
  for (std::size_t b = 0; b < nb; ++b) std::tie(out.bus_p_injection[b], q_inj[b]) = calc_pq(b);

  // constant-impedance equivalents of the loads at the solved voltages
  out.load_conductance.assign(nb, 0.0);
  for (std::size_t b = 0; b < nb; ++b)
    if (p_load[b] != 0.0) out.load_conductance[b] = p_load[b] / (vm[b] * vm[b]);

  // split each bus's generation among its units: active power follows the
  // dispatch (plus any solver residual), reactive power follows the ratings
  std::vector<double> rating_at_bus(nb, 0.0), dispatch_at_bus(nb, 0.0);
  for (const auto& g : model.generators) {
    const auto b = static_cast<std::size_t>(model.bus_index(g.bus));
    rating_at_bus[b] += g.rating_mva;
    dispatch_at_bus[b] += g.mech_power_pu;
  }
  out.gen_current.resize(ng);
  out.gen_emf.resize(ng);
  for (std::size_t m = 0; m < ng; ++m) {
    const auto& g = model.generators[m];
    const auto b = static_cast<std::size_t>(model.bus_index(g.bus));
    const double share = g.rating_mva / rating_at_bus[b];
    const double p_gen_bus = out.bus_p_injection[b] + p_load[b];
    const double q_gen_bus = q_inj[b];  // loads carry no reactive demand
    const double p_m = g.mech_power_pu + (p_gen_bus - dispatch_at_bus[b]) * share;
    const double q_m = q_gen_bus * share;
    const std::complex<double> v = std::polar(vm[b], va[b]);
    const std::complex<double> i_m = std::conj(std::complex<double>(p_m, q_m) / v);
    const double xd_sys = g.xd_transient_pu * model.system_base_mva / g.rating_mva;
    out.gen_current[m] = i_m;
    out.gen_emf[m] = v + std::complex<double>(0.0, xd_sys) * i_m;
  }
  return out;
}

}  // namespace inertiakit::sim
