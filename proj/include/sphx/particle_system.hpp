#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sphx/domain.hpp"

namespace sphx {

// Structure-of-arrays particle store. Every field is its own contiguous
// array so the search backends can stream positions without touching the
// rest of the state. Mass is fixed at construction.
class ParticleSystem {
 public:
  ParticleSystem(Domain domain, double ds, std::size_t n, double rho0);

  const Domain& domain() const { return domain_; }
  int dim() const { return domain_.dim; }
  std::size_t size() const { return n_; }
  double ds() const { return ds_; }
  double h() const { return h_; }       // smoothing length, 1.2 * ds
  double rho0() const { return rho0_; }

  std::vector<double>& x(int axis) { return x_[axis]; }
  const std::vector<double>& x(int axis) const { return x_[axis]; }
  std::vector<double>& v(int axis) { return v_[axis]; }
  const std::vector<double>& v(int axis) const { return v_[axis]; }
  std::vector<double>& rho() { return rho_; }
  const std::vector<double>& rho() const { return rho_; }
  std::vector<double>& p() { return p_; }
  const std::vector<double>& p() const { return p_; }
  std::vector<double>& e() { return e_; }
  const std::vector<double>& e() const { return e_; }
  const std::vector<double>& m() const { return m_; }

  double mass_total() const;

  // Overrides the h = 1.2*ds convention.
  void set_h(double h) { h_ = h; }

  std::array<double, 3> position(std::size_t i) const {
    return {x_[0].empty() ? 0.0 : x_[0][i], x_[1].empty() ? 0.0 : x_[1][i],
            x_[2].empty() ? 0.0 : x_[2][i]};
  }

 private:
  friend ParticleSystem build_lattice(const Domain&, double, double, std::uint64_t, double);
  friend ParticleSystem build_random_uniform(const Domain&, std::size_t, std::uint64_t, double);
  friend void apply_permutation(ParticleSystem&, const std::vector<std::uint32_t>&);

  Domain domain_;
  std::size_t n_ = 0;
  double ds_ = 0.0;
  double h_ = 0.0;
  double rho0_ = 1.0;
  std::array<std::vector<double>, 3> x_;
  std::array<std::vector<double>, 3> v_;
  std::vector<double> rho_, p_, e_, m_;
};

// Cell-centered lattice (first particle at lo + ds/2) with optional per-axis
// jitter of amplitude jitter*ds from a seeded generator. jitter must stay
// below 0.5 so particles remain inside the domain.
ParticleSystem build_lattice(const Domain& domain, double ds, double jitter,
                             std::uint64_t seed, double rho0 = 1.0);

// n i.i.d.-uniform positions; ds = (volume/n)^(1/d).
ParticleSystem build_random_uniform(const Domain& domain, std::size_t n,
                                    std::uint64_t seed, double rho0 = 1.0);

// Snapshot with header id,x,y[,z],vx,vy[,vz],rho,p and %.17g formatting so
// every double survives the text round trip.
void write_csv(const ParticleSystem& ps, const std::string& path);

}  // namespace sphx
