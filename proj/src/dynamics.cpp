#include "sphx/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace sphx {

StressState assemble_newtonian_stress(const ParticleSystem& ps, const NeighborTable& nt,
                                      const KernelParams& kp, double mu) {
  const int dim = ps.dim();
  const std::size_t n = ps.size();
  StressState st;
  for (auto& comp : st.sigma) comp.assign(n, 0.0);
  for (auto& comp : st.tau) comp.assign(n, 0.0);
  for (auto& comp : st.eps) comp.assign(n, 0.0);

  std::array<GradField, 3> gv;
  for (int a = 0; a < dim; ++a) gv[a] = grad_normalized(ps.v(a), ps, nt, kp);

  for (std::size_t i = 0; i < n; ++i) {
    for (int a = 0; a < dim; ++a) {
      for (int b = a; b < dim; ++b) {
        const int s = sym_index(a, b);
        const double dva_dxb = gv[a].g[b][i];
        const double dvb_dxa = gv[b].g[a][i];
        st.eps[s][i] = 0.5 * (dva_dxb + dvb_dxa);
        st.tau[s][i] = mu * (dva_dxb + dvb_dxa);
        st.sigma[s][i] = st.tau[s][i] - (a == b ? ps.p()[i] : 0.0);
      }
    }
  }
  return st;
}

std::vector<double> rhs_density(const ParticleSystem& ps, const NeighborTable& nt,
                                const KernelParams& kp) {
  const int dim = ps.dim();
  const std::size_t n = ps.size();
  std::vector<double> out(n, 0.0);

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    std::array<double, 3> dx{0.0, 0.0, 0.0};
    for (const std::int32_t j : nt.row(i)) {
      for (int k = 0; k < dim; ++k) dx[k] = ps.x(k)[i] - ps.x(k)[j];
      const auto gw = kernel_grad(dx, kp);
      double dv_dot = 0.0;
      for (int k = 0; k < dim; ++k) dv_dot += (ps.v(k)[i] - ps.v(k)[j]) * gw[k];
      acc += ps.m()[j] * dv_dot;
    }
    out[i] = acc;
  }
  return out;
}

std::array<std::vector<double>, 3> rhs_momentum(const ParticleSystem& ps,
                                                const StressState& stress,
                                                const std::array<double, 3>& body_force,
                                                const NeighborTable& nt,
                                                const KernelParams& kp) {
  const int dim = ps.dim();
  const std::size_t n = ps.size();
  std::array<std::vector<double>, 3> out;
  for (int k = 0; k < dim; ++k) out[k].assign(n, 0.0);

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::size_t i = 0; i < n; ++i) {
    const double inv_rho2_i = 1.0 / (ps.rho()[i] * ps.rho()[i]);
    std::array<double, 3> acc{0.0, 0.0, 0.0};
    std::array<double, 3> dx{0.0, 0.0, 0.0};
    for (const std::int32_t j : nt.row(i)) {
      for (int k = 0; k < dim; ++k) dx[k] = ps.x(k)[i] - ps.x(k)[j];
      const auto gw = kernel_grad(dx, kp);
      const double inv_rho2_j = 1.0 / (ps.rho()[j] * ps.rho()[j]);
      for (int a = 0; a < dim; ++a) {
        double term = 0.0;
        for (int b = 0; b < dim; ++b) {
          const int s = sym_index(a, b);
          term += (stress.sigma[s][i] * inv_rho2_i + stress.sigma[s][j] * inv_rho2_j) * gw[b];
        }
        acc[a] += ps.m()[j] * term;
      }
    }
    for (int a = 0; a < dim; ++a) out[a][i] = acc[a] + body_force[a];
  }
  return out;
}

std::vector<double> rhs_energy(const ParticleSystem& ps, const StressState& stress,
                               const NeighborTable& nt, const KernelParams& kp) {
  const int dim = ps.dim();
  const std::size_t n = ps.size();
  std::vector<double> out(n, 0.0);

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::size_t i = 0; i < n; ++i) {
    const double inv_rho2_i = 1.0 / (ps.rho()[i] * ps.rho()[i]);
    double acc = 0.0;
    std::array<double, 3> dx{0.0, 0.0, 0.0};
    for (const std::int32_t j : nt.row(i)) {
      for (int k = 0; k < dim; ++k) dx[k] = ps.x(k)[i] - ps.x(k)[j];
      const auto gw = kernel_grad(dx, kp);
      const double inv_rho2_j = 1.0 / (ps.rho()[j] * ps.rho()[j]);
      double dv_dot = 0.0;
      for (int k = 0; k < dim; ++k) dv_dot += (ps.v(k)[i] - ps.v(k)[j]) * gw[k];
      acc += 0.5 * ps.m()[j] * (ps.p()[i] * inv_rho2_i + ps.p()[j] * inv_rho2_j) * dv_dot;
    }
    // tau : eps contraction; the full (a,b) loop counts off-diagonals twice,
    // as the contraction requires.
    double work = 0.0;
    for (int a = 0; a < dim; ++a) {
      for (int b = 0; b < dim; ++b) {
        const int s = sym_index(a, b);
        work += stress.tau[s][i] * stress.eps[s][i];
      }
    }
    out[i] = acc + work / ps.rho()[i];
  }
  return out;
}

void apply_eos(ParticleSystem& ps, double c_sound, double rho0) {
  const double c2 = c_sound * c_sound;
  auto& p = ps.p();
  const auto& rho = ps.rho();
  for (std::size_t i = 0; i < ps.size(); ++i) p[i] = c2 * (rho[i] - rho0);
}

StepResult step_mixed(MixedState& st, const StepConfig& cfg) {
  ParticleSystem& ps = st.ps;
  const int dim = ps.dim();
  const std::size_t n = ps.size();
  const std::size_t n_mov = cfg.n_moving == 0 ? n : cfg.n_moving;
  const KernelParams kp = make_kernel(ps.h(), dim);

  StepResult res;
  // (1) neighbor search per approach
  switch (st.approach) {
    case Approach::I:
      res.table = cell_link_list(ps, st.grid, Precision::fp64);
      break;
    case Approach::II:
      res.table = cell_link_list(ps, st.grid, Precision::fp16);
      break;
    case Approach::III:
      res.table = rcll(st.rel, st.grid, Precision::fp16);
      break;
  }

  if (cfg.pre_force) cfg.pre_force(ps);
  apply_eos(ps, cfg.c_sound, cfg.rho0);

  // (2) FP64 rates
  const StressState stress = assemble_newtonian_stress(ps, res.table, kp, cfg.mu);
  const auto drho = cfg.evolve_density ? rhs_density(ps, res.table, kp) : std::vector<double>();
  const auto dv = rhs_momentum(ps, stress, cfg.body_force, res.table, kp);
  const auto de = cfg.compute_energy ? rhs_energy(ps, stress, res.table, kp)
                                     : std::vector<double>();

  // (3)-(4) symplectic Euler: kick velocities, then drift positions with the
  // updated velocities; Eq. 9 displacement feeds the coordinate maintenance.
  std::array<double, 3> dx{0.0, 0.0, 0.0};
  double max_dx = 0.0;
  for (std::size_t i = 0; i < n_mov; ++i) {
    for (int k = 0; k < dim; ++k) ps.v(k)[i] += dv[k][i] * cfg.dt;
    if (cfg.evolve_density) ps.rho()[i] += drho[i] * cfg.dt;
    if (cfg.compute_energy) ps.e()[i] += de[i] * cfg.dt;
  }
  const Domain& dom = ps.domain();
  for (std::size_t i = 0; i < n_mov; ++i) {
    for (int k = 0; k < dim; ++k) {
      dx[k] = ps.v(k)[i] * cfg.dt;
      max_dx = std::max(max_dx, std::abs(dx[k]));
      double xk = ps.x(k)[i] + dx[k];
      if (st.grid.periodic(k)) {
        const double span = dom.span(k);
        if (xk >= dom.hi[k]) xk -= span;
        if (xk < dom.lo[k]) xk += span;
      }
      ps.x(k)[i] = xk;
    }
    // (5) approach III maintains relative coordinates incrementally (FP64
    // maintenance; FP16 applies inside the RCLL distance kernel only).
    if (st.approach == Approach::III) {
      update_relative(st.rel, i, dx, st.grid, Precision::fp64);
    }
  }
  res.max_dx = max_dx;

  if (st.approach == Approach::III) {
    st.grid.rebuild_members(st.rel);
  } else {
    st.grid.rebin(ps);
  }
  return res;
}

}  // namespace sphx
