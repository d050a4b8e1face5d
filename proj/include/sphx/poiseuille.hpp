#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "sphx/dynamics.hpp"

namespace sphx {

// Body-force-driven startup channel flow, periodic in x with no-slip walls at
// y = 0 and y = L. Low-Reynolds configuration; the weakly compressible sound
// speed sits a decade above the peak velocity.
struct PoiseuilleConfig {
  double L = 1.0e-3;    // channel width [m]
  double aspect = 1.0;  // streamwise extent in units of L
  double F = 2.0e-4;    // body acceleration [m/s^2]
  double nu = 1.0e-6;   // kinematic viscosity [m^2/s]
  double rho0 = 1.0e3;  // reference density [kg/m^3]
  double c = 2.5e-4;    // sound speed [m/s]
  double ds = 0.025;    // particle spacing in units of L
  double t_end = 1.0;   // [s]

  double ds_phys() const { return ds * L; }
  double h() const { return 1.2 * ds_phys(); }
  double v_max() const { return F * L * L / (8.0 * nu); }
  // Viscous and acoustic stability bounds.
  double dt() const {
    const double hh = h();
    const double dt_visc = 0.125 * hh * hh / nu;
    const double dt_ac = 0.25 * hh / c;
    return dt_visc < dt_ac ? dt_visc : dt_ac;
  }
};

// Transient series solution v(y, t); terms are dropped once they fall below
// 1e-14 of the leading series coefficient.
double poiseuille_velocity(double y, double t, const PoiseuilleConfig& cfg);

// Time integral of the series solution: the theoretical accumulated
// displacement of a tracer released at height y.
double poiseuille_displacement(double y, double t, const PoiseuilleConfig& cfg);

class PoiseuilleSim {
 public:
  PoiseuilleSim(const PoiseuilleConfig& cfg, Approach approach);

  // Advances one step and returns whether the step's neighbor table was
  // produced without error.
  void step();
  std::size_t step_count() const { return steps_; }
  double time() const { return time_; }
  double dt() const { return cfg_.dt(); }
  bool done() const { return time_ >= cfg_.t_end - 0.5 * cfg_.dt(); }

  const PoiseuilleConfig& config() const { return cfg_; }
  const MixedState& state() const { return *st_; }
  std::size_t n_fluid() const { return n_fluid_; }
  const NeighborTable& table() const { return table_; }

  // Max over fluid particles of |x_sim - x_theory| in units of ds_phys.
  double max_location_discrepancy_ds() const;
  // Linf velocity error against the series, relative to the profile maximum.
  double linf_velocity_error_rel() const;
  // Peak streamwise velocity over the fluid particles.
  double centerline_velocity() const;
  bool has_nan() const;

  // Profile dump rows (y, v_sim, v_theory) at the current time, one row per
  // fluid row of the initial lattice (column-averaged).
  std::vector<std::array<double, 3>> velocity_profile() const;

 private:
  void refresh_dummies(ParticleSystem& ps) const;

  PoiseuilleConfig cfg_;
  Approach approach_;
  std::size_t n_fluid_ = 0;
  std::size_t nx_ = 0, ny_ = 0;
  std::vector<std::int32_t> mirror_;   // dummy slot -> fluid index
  std::vector<double> y0_;             // initial heights (fluid)
  std::vector<double> disp_x_, disp_y_;  // accumulated unwrapped displacement
  std::unique_ptr<MixedState> st_;
  NeighborTable table_;
  StepConfig step_cfg_;
  double time_ = 0.0;
  std::size_t steps_ = 0;
};

}  // namespace sphx
