#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sphx/binary16.hpp"
#include "sphx/dynamics.hpp"
#include "sphx/poiseuille.hpp"

namespace sphx {

inline constexpr const char* kVersion = "sphx 0.1.0";

// ---------------------------------------------------------------------------
// circle: ring of radius 1 +- dR around a target at the origin, cutoff 1.
// Misclassification counts per precision against exact rational arithmetic.

struct CircleConfig {
  std::vector<double> dR_ladder{1e-1, 1e-2, 1e-3, 1e-4, 1e-6, 1e-8};
  int n_ring = 64;
  std::uint64_t seed = 1;  // recorded in the manifest; the layout is fixed
};

struct CircleRow {
  Precision precision;
  double dR;
  std::uint64_t incorrect_count;
};

std::vector<CircleRow> exp_circle(const CircleConfig& cfg);

// ---------------------------------------------------------------------------
// square: jittered unit-square lattices; FP16 backends against the FP64
// oracle.

struct SquareConfig {
  std::vector<double> ds_ladder{0.01, 0.005, 0.002, 0.00125, 0.001, 0.0005};
  // Half-width of the guard annulus around the search radius, as a fraction
  // of the cutoff. Pair distances inside the annulus are relaxed away so the
  // classification question is never borderline at FP64 scale.
  double gap_rel = 0.04;
  std::uint64_t seed = 1;
  double memory_budget_gb = 8.0;
  // All-list runs are skipped above this particle count (the link-list
  // backends still cover the rung).
  std::size_t allist_max_n = 1'200'000;
};

struct SquareRow {
  std::string backend;  // all | cell | rcll
  Precision precision;
  double ds;
  std::size_t n;
  std::uint64_t incorrect_count;
  double incorrect_percent;
};

std::vector<SquareRow> exp_square(const SquareConfig& cfg);

// ---------------------------------------------------------------------------
// gradient: 1-D jittered lattice on [0,1], f(x) = x^3, RMSE of the normalized
// gradient against 3x^2.

struct GradientConfig {
  std::vector<double> ds_ladder{0.01, 0.005, 0.002, 0.00125, 0.001, 0.0005};
  double jitter = 0.15;
  std::uint64_t seed = 1;
};

struct GradientRow {
  std::string backend;
  Precision precision;
  double ds;
  double rmse;
};

std::vector<GradientRow> exp_gradient(const GradientConfig& cfg);

// ---------------------------------------------------------------------------
// poiseuille: Table-5 style runs; approaches I and III advance in lockstep so
// their per-step neighbor tables can be compared; II runs separately.

struct PoiseuilleExpConfig {
  std::vector<double> ds_ladder{0.025, 0.01, 0.0025};
  PoiseuilleConfig base;
  std::string profile_dir;  // when set, velocity profiles are written here
};

struct PoiseuilleRow {
  std::string approach;  // I | II | III
  double ds;
  double max_discrepancy_ds;
  bool tables_identical_with_I;  // only meaningful for III
  double runtime_seconds;
};

std::vector<PoiseuilleRow> exp_poiseuille(const PoiseuilleExpConfig& cfg);

// ---------------------------------------------------------------------------
// scaling: wall-clock medians over the backend ladder.

struct ScalingConfig {
  std::vector<std::size_t> n_ladder{1'000, 10'000, 100'000, 1'000'000};
  std::size_t allist_max_n = 100'000;
  int repeats = 5;
  std::uint64_t seed = 1;
  std::vector<Precision> precisions{Precision::fp64, Precision::fp16};
};

struct ScalingRow {
  std::string backend;  // all | cell | rcll | rcll_sorted
  Precision precision;
  std::size_t n;
  double median_seconds;
};

std::vector<ScalingRow> exp_scaling(const ScalingConfig& cfg);

// ---------------------------------------------------------------------------
// CSV + manifest output.

void write_circle_csv(const std::vector<CircleRow>& rows, const std::string& path);
void write_square_csv(const std::vector<SquareRow>& rows, const std::string& path);
void write_gradient_csv(const std::vector<GradientRow>& rows, const std::string& path);
void write_poiseuille_csv(const std::vector<PoiseuilleRow>& rows, const std::string& path);
void write_scaling_csv(const std::vector<ScalingRow>& rows, const std::string& path);

// run.json style manifest: experiment name, version, seed, config key/values
// and produced files.
void write_manifest(const std::string& path, const std::string& experiment,
                    std::uint64_t seed, const std::map<std::string, std::string>& config,
                    const std::vector<std::string>& outputs);

}  // namespace sphx
