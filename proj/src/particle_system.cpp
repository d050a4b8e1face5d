#include "sphx/particle_system.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "sphx/rng.hpp"

namespace sphx {

ParticleSystem::ParticleSystem(Domain domain, double ds, std::size_t n, double rho0)
    : domain_(domain), n_(n), ds_(ds), h_(1.2 * ds), rho0_(rho0) {
  domain_.validate();
  for (int k = 0; k < domain_.dim; ++k) {
    x_[k].assign(n, 0.0);
    v_[k].assign(n, 0.0);
  }
  rho_.assign(n, rho0);
  p_.assign(n, 0.0);
  e_.assign(n, 0.0);
  const double mass = rho0 * std::pow(ds, domain_.dim);
  m_.assign(n, mass);
}

double ParticleSystem::mass_total() const {
  double s = 0.0;
  for (double mi : m_) s += mi;
  return s;
}

ParticleSystem build_lattice(const Domain& domain, double ds, double jitter,
                             std::uint64_t seed, double rho0) {
  domain.validate();
  if (!(ds > 0.0)) throw std::invalid_argument("ds must be positive");
  if (jitter < 0.0 || jitter >= 0.5) throw std::invalid_argument("jitter must be in [0, 0.5)");
  std::array<std::size_t, 3> counts{1, 1, 1};
  std::size_t n = 1;
  for (int k = 0; k < domain.dim; ++k) {
    const double span = domain.span(k);
    if (ds > span) throw std::invalid_argument("ds exceeds the smallest domain span");
    counts[k] = static_cast<std::size_t>(std::floor(span / ds + 0.5));
    n *= counts[k];
  }

  ParticleSystem ps(domain, ds, n, rho0);
  Rng rng(seed);
  std::size_t idx = 0;
  std::array<std::size_t, 3> c{0, 0, 0};
  for (c[2] = 0; c[2] < counts[2]; ++c[2]) {
    for (c[1] = 0; c[1] < counts[1]; ++c[1]) {
      for (c[0] = 0; c[0] < counts[0]; ++c[0]) {
        for (int k = 0; k < domain.dim; ++k) {
          double xk = domain.lo[k] + (static_cast<double>(c[k]) + 0.5) * ds;
          if (jitter > 0.0) xk += jitter * ds * (2.0 * rng.uniform01() - 1.0);
          ps.x_[k][idx] = xk;
        }
        ++idx;
      }
    }
  }
  return ps;
}

ParticleSystem build_random_uniform(const Domain& domain, std::size_t n,
                                    std::uint64_t seed, double rho0) {
  domain.validate();
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  const double ds = std::pow(domain.volume() / static_cast<double>(n), 1.0 / domain.dim);
  ParticleSystem ps(domain, ds, n, rho0);
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 0; k < domain.dim; ++k) {
      ps.x_[k][i] = rng.uniform(domain.lo[k], domain.hi[k]);
    }
  }
  return ps;
}

void write_csv(const ParticleSystem& ps, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open " + path);
  const int d = ps.dim();
  std::fprintf(f, "id,x");
  if (d > 1) std::fprintf(f, ",y");
  if (d > 2) std::fprintf(f, ",z");
  std::fprintf(f, ",vx");
  if (d > 1) std::fprintf(f, ",vy");
  if (d > 2) std::fprintf(f, ",vz");
  std::fprintf(f, ",rho,p\n");
  for (std::size_t i = 0; i < ps.size(); ++i) {
    std::fprintf(f, "%zu", i);
    for (int k = 0; k < d; ++k) std::fprintf(f, ",%.17g", ps.x(k)[i]);
    for (int k = 0; k < d; ++k) std::fprintf(f, ",%.17g", ps.v(k)[i]);
    std::fprintf(f, ",%.17g,%.17g\n", ps.rho()[i], ps.p()[i]);
  }
  std::fclose(f);
}

}  // namespace sphx
