#include "sphx/poiseuille.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sphx {

namespace {
constexpr double kPi = std::numbers::pi;
}

double poiseuille_velocity(double y, double t, const PoiseuilleConfig& cfg) {
  const double L = cfg.L;
  const double steady = cfg.F / (2.0 * cfg.nu) * y * (L - y);
  const double lead = 4.0 * cfg.F * L * L / (cfg.nu * kPi * kPi * kPi);
  double sum = 0.0;
  for (int n = 0;; ++n) {
    const double m = 2.0 * n + 1.0;
    const double lam = m * m * kPi * kPi * cfg.nu / (L * L);
    const double coef = lead / (m * m * m) * std::exp(-lam * t);
    if (coef < 1e-14 * lead) break;
    sum += coef * std::sin(m * kPi * y / L);
  }
  return steady - sum;
}

double poiseuille_displacement(double y, double t, const PoiseuilleConfig& cfg) {
  const double L = cfg.L;
  const double steady = cfg.F / (2.0 * cfg.nu) * y * (L - y) * t;
  const double lead = 4.0 * cfg.F * L * L / (cfg.nu * kPi * kPi * kPi);
  double sum = 0.0;
  // Integrated terms decay like m^-5; cut at 1e-14 of the leading one.
  for (int n = 0;; ++n) {
    const double m = 2.0 * n + 1.0;
    if (m * m * m * m * m > 1e14) break;
    const double lam = m * m * kPi * kPi * cfg.nu / (L * L);
    sum += (lead / (m * m * m)) * ((1.0 - std::exp(-lam * t)) / lam) *
           std::sin(m * kPi * y / L);
  }
  return steady - sum;
}

PoiseuilleSim::PoiseuilleSim(const PoiseuilleConfig& cfg, Approach approach)
    : cfg_(cfg), approach_(approach) {
  const double dsp = cfg.ds_phys();
  nx_ = static_cast<std::size_t>(std::floor(cfg.aspect * cfg.L / dsp + 0.5));
  ny_ = static_cast<std::size_t>(std::floor(cfg.L / dsp + 0.5));
  if (nx_ < 5 || ny_ < 5) throw std::invalid_argument("poiseuille lattice too coarse");
  const std::size_t layers = 3;  // covers the 2h = 2.4 ds support
  n_fluid_ = nx_ * ny_;
  const std::size_t n_dummy = 2 * layers * nx_;
  const std::size_t n = n_fluid_ + n_dummy;

  Domain dom = Domain::box(
      2, {0.0, -static_cast<double>(layers) * dsp, 0.0},
      {cfg.aspect * cfg.L, cfg.L + static_cast<double>(layers) * dsp, 0.0});
  ParticleSystem ps(dom, dsp, n, cfg.rho0);

  std::size_t idx = 0;
  y0_.resize(n_fluid_);
  for (std::size_t row = 0; row < ny_; ++row) {
    for (std::size_t col = 0; col < nx_; ++col) {
      ps.x(0)[idx] = (static_cast<double>(col) + 0.5) * dsp;
      ps.x(1)[idx] = (static_cast<double>(row) + 0.5) * dsp;
      y0_[idx] = ps.x(1)[idx];
      ++idx;
    }
  }
  mirror_.resize(n_dummy);
  std::size_t d = 0;
  for (std::size_t layer = 0; layer < layers; ++layer) {
    for (std::size_t col = 0; col < nx_; ++col) {  // below y = 0
      ps.x(0)[idx] = (static_cast<double>(col) + 0.5) * dsp;
      ps.x(1)[idx] = -(static_cast<double>(layer) + 0.5) * dsp;
      mirror_[d++] = static_cast<std::int32_t>(layer * nx_ + col);
      ++idx;
    }
    for (std::size_t col = 0; col < nx_; ++col) {  // above y = L
      ps.x(0)[idx] = (static_cast<double>(col) + 0.5) * dsp;
      ps.x(1)[idx] = cfg.L + (static_cast<double>(layer) + 0.5) * dsp;
      mirror_[d++] = static_cast<std::int32_t>((ny_ - 1 - layer) * nx_ + col);
      ++idx;
    }
  }

  disp_x_.assign(n_fluid_, 0.0);
  disp_y_.assign(n_fluid_, 0.0);

  st_ = std::make_unique<MixedState>(std::move(ps), std::array<bool, 3>{true, false, false},
                                     approach);

  step_cfg_.dt = cfg.dt();
  step_cfg_.c_sound = cfg.c;
  step_cfg_.rho0 = cfg.rho0;
  step_cfg_.mu = cfg.rho0 * cfg.nu;
  step_cfg_.body_force = {cfg.F, 0.0, 0.0};
  step_cfg_.n_moving = n_fluid_;
  step_cfg_.pre_force = [this](ParticleSystem& sys) { refresh_dummies(sys); };
}

void PoiseuilleSim::refresh_dummies(ParticleSystem& ps) const {
  // No-slip: dummies run the reversed velocity of their mirrored fluid row and
  // copy its density so the wall carries a balanced pressure.
  for (std::size_t d = 0; d < mirror_.size(); ++d) {
    const std::size_t i = n_fluid_ + d;
    const std::size_t f = static_cast<std::size_t>(mirror_[d]);
    ps.v(0)[i] = -ps.v(0)[f];
    ps.v(1)[i] = -ps.v(1)[f];
    ps.rho()[i] = ps.rho()[f];
  }
}

void PoiseuilleSim::step() {
  auto res = step_mixed(*st_, step_cfg_);
  table_ = std::move(res.table);
  const double dt = step_cfg_.dt;
  for (std::size_t i = 0; i < n_fluid_; ++i) {
    disp_x_[i] += st_->ps.v(0)[i] * dt;
    disp_y_[i] += st_->ps.v(1)[i] * dt;
  }
  time_ += dt;
  ++steps_;
}

double PoiseuilleSim::max_location_discrepancy_ds() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < n_fluid_; ++i) {
    const double xt = poiseuille_displacement(y0_[i], time_, cfg_);
    const double ex = disp_x_[i] - xt;
    const double ey = disp_y_[i];
    const double err = std::sqrt(ex * ex + ey * ey);
    if (err > worst) worst = err;
  }
  return worst / cfg_.ds_phys();
}

double PoiseuilleSim::linf_velocity_error_rel() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < n_fluid_; ++i) {
    const double vt = poiseuille_velocity(st_->ps.x(1)[i], time_, cfg_);
    worst = std::max(worst, std::abs(st_->ps.v(0)[i] - vt));
  }
  const double vpeak = poiseuille_velocity(0.5 * cfg_.L, time_, cfg_);
  return vpeak > 0.0 ? worst / vpeak : worst;
}

double PoiseuilleSim::centerline_velocity() const {
  double peak = 0.0;
  for (std::size_t i = 0; i < n_fluid_; ++i) peak = std::max(peak, st_->ps.v(0)[i]);
  return peak;
}

bool PoiseuilleSim::has_nan() const {
  for (std::size_t i = 0; i < n_fluid_; ++i) {
    if (!std::isfinite(st_->ps.x(0)[i]) || !std::isfinite(st_->ps.v(0)[i]) ||
        !std::isfinite(st_->ps.rho()[i])) {
      return true;
    }
  }
  return false;
}

std::vector<std::array<double, 3>> PoiseuilleSim::velocity_profile() const {
  std::vector<std::array<double, 3>> rows(ny_);
  std::vector<double> vsum(ny_, 0.0), ysum(ny_, 0.0);
  for (std::size_t row = 0; row < ny_; ++row) {
    for (std::size_t col = 0; col < nx_; ++col) {
      const std::size_t i = row * nx_ + col;
      vsum[row] += st_->ps.v(0)[i];
      ysum[row] += st_->ps.x(1)[i];
    }
  }
  for (std::size_t row = 0; row < ny_; ++row) {
    const double y = ysum[row] / static_cast<double>(nx_);
    rows[row] = {y, vsum[row] / static_cast<double>(nx_),
                 poiseuille_velocity(y, time_, cfg_)};
  }
  return rows;
}

}  // namespace sphx
