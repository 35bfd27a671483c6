#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "inertiakit/grid.hpp"
#include "inertiakit/sim/powerflow.hpp"
#include "inertiakit/types.hpp"

namespace inertiakit::sim {

// Network reduced to the generator internal nodes, in the three topology
// phases of a disturbance scenario. Row/column m corresponds to
// model.generators[m] (gen_ids records the mapping). voltage_map recovers
// bus voltages from the internal EMF vector: V_bus = voltage_map · E.
struct ReducedNetwork {
  Eigen::MatrixXcd y_pre, y_during, y_post;             // ng × ng
  Eigen::MatrixXcd voltage_map_pre, voltage_map_during, voltage_map_post;  // nb × ng
  std::vector<double> emf_mag;       // |E_m|, constant through the transient
  std::vector<double> emf_angle0;    // initial rotor angles δ_m(0) [rad]
  std::vector<std::string> gen_ids;  // generator → matrix row
  std::vector<double> baseline_load_conductance;  // per bus, excludes disturbance shunts
  bool has_fault_phase = false;      // y_during distinct from y_pre/y_post
  PowerFlowResult operating_point;

  const Eigen::MatrixXcd& phase_matrix(int phase) const {
    return phase == 0 ? y_pre : (phase == 1 ? y_during : y_post);
  }
  const Eigen::MatrixXcd& phase_voltage_map(int phase) const {
    return phase == 0 ? voltage_map_pre : (phase == 1 ? voltage_map_during : voltage_map_post);
  }
};

namespace detail {

struct Reduction {
  Eigen::MatrixXcd y_red;
  Eigen::MatrixXcd voltage_map;
};

// Eliminate the physical buses from the augmented (internal nodes + buses)
// admittance matrix: Y_red = Y_GG − Y_GB·Y_BB⁻¹·Y_BG with the generator
// block diagonal. y_bb must include load shunts and any disturbance shunt.
inline Reduction eliminate_buses(const GridModel& model, const Eigen::MatrixXcd& y_bb,
                                 const std::vector<std::complex<double>>& y_internal) {
  const auto nb = static_cast<Eigen::Index>(model.buses.size());
  const auto ng = static_cast<Eigen::Index>(model.generators.size());

  Eigen::MatrixXcd y_gb = Eigen::MatrixXcd::Zero(ng, nb);
  Eigen::MatrixXcd y_bb_full = y_bb;
  for (Eigen::Index m = 0; m < ng; ++m) {
    const auto b = static_cast<Eigen::Index>(
        model.bus_index(model.generators[static_cast<std::size_t>(m)].bus));
    y_gb(m, b) = -y_internal[static_cast<std::size_t>(m)];
    y_bb_full(b, b) += y_internal[static_cast<std::size_t>(m)];
  }

  Eigen::FullPivLU<Eigen::MatrixXcd> lu(y_bb_full);
  if (!lu.isInvertible())
    throw ConfigError("kron_reduce: bus admittance block is singular (islanded bus)");

  Reduction out;
  out.voltage_map = -lu.solve(y_gb.transpose());  // −Y_BB⁻¹·Y_BG
  out.y_red = Eigen::MatrixXcd::Zero(ng, ng);
  for (Eigen::Index m = 0; m < ng; ++m) out.y_red(m, m) = y_internal[static_cast<std::size_t>(m)];
  out.y_red += y_gb * out.voltage_map;  // Y_GG − Y_GB·Y_BB⁻¹·Y_BG
  return out;
}

}  // namespace detail

// Build the reduced-network phases for a scenario: loads become constant
// shunt conductances at the solved operating point; a LoadStep adds a
// conductance at its bus from onset onward; a BusFault adds a large purely
// reactive shunt between onset and clearing (so the network stays lossless
// and no spurious energy sink appears).
inline ReducedNetwork kron_reduce(const GridModel& model, const DisturbanceSpec& disturbance) {
  require_valid(model);
  if (model.bus_index(disturbance.bus) < 0)
    throw ConfigError("disturbance bus '" + disturbance.bus + "' is not in the model");

  const PowerFlowResult pf = solve_powerflow(model);
  const auto nb = static_cast<Eigen::Index>(model.buses.size());
  const auto bus = static_cast<Eigen::Index>(model.bus_index(disturbance.bus));

  Eigen::MatrixXcd y_base = detail::build_ybus(model);
  for (Eigen::Index b = 0; b < nb; ++b)
    y_base(b, b) += pf.load_conductance[static_cast<std::size_t>(b)];

  std::vector<std::complex<double>> y_internal;
  for (const auto& g : model.generators) {
    const double xd_sys = g.xd_transient_pu * model.system_base_mva / g.rating_mva;
    y_internal.emplace_back(0.0, -1.0 / xd_sys);
  }

  Eigen::MatrixXcd y_bb_during = y_base, y_bb_post = y_base;
  if (disturbance.kind == DisturbanceKind::BusFault) {
    y_bb_during(bus, bus) += std::complex<double>(0.0, -disturbance.magnitude);
  } else {
    const double v0 = pf.v_mag[static_cast<std::size_t>(bus)];
    const double delta_g = disturbance.magnitude / (v0 * v0);
    y_bb_post(bus, bus) += delta_g;
    y_bb_during = y_bb_post;  // a load step has no separate clearing phase
  }

  const auto pre = detail::eliminate_buses(model, y_base, y_internal);
  const auto during = detail::eliminate_buses(model, y_bb_during, y_internal);
  const auto post = detail::eliminate_buses(model, y_bb_post, y_internal);

  ReducedNetwork out;
  out.y_pre = pre.y_red;
  out.y_during = during.y_red;
  out.y_post = post.y_red;
  out.voltage_map_pre = pre.voltage_map;
  out.voltage_map_during = during.voltage_map;
  out.voltage_map_post = post.voltage_map;
  out.has_fault_phase = disturbance.kind == DisturbanceKind::BusFault;
  out.baseline_load_conductance = pf.load_conductance;
  out.operating_point = pf;
  for (const auto& g : model.generators) out.gen_ids.push_back(g.id);
  for (const auto& e : pf.gen_emf) {
    out.emf_mag.push_back(std::abs(e));
    out.emf_angle0.push_back(std::arg(e));
  }
  return out;
}

}  // namespace inertiakit::sim
