#pragma once

// Deterministic Gaussian increment streams. Every increment is a pure
// function of (seed, path_id, step, component), generated by Philox4x32-10
// (128-bit counter, 64-bit key) followed by the inverse normal CDF on a
// 53-bit uniform. Random access makes shared-noise coupling, coarse/fine
// refinement and stream splitting exact rather than approximate.

#include <array>
#include <cstdint>
#include <span>
#include <utility>

namespace balldiff {

// Raw Philox4x32-10 block function, exposed for tests.
std::array<std::uint32_t, 4> philox4x32(const std::array<std::uint32_t, 4>& counter,
                                        const std::array<std::uint32_t, 2>& key);

class NoiseDriver {
 public:
  // dim: number of components the driver serves; dt: variance of each
  // increment (time step). Increments are i.i.d. N(0, dt).
  NoiseDriver(std::uint64_t seed, std::int64_t path_id, int dim, double dt);

  double gaussian_increment(std::int64_t step, int component) const;

  // Fills out[0..dim) with the increments of the given step.
  void fill_increments(std::int64_t step, std::span<double> out) const;

  // Uniform variate in (0,1) behind the Gaussian above, exposed for tests.
  double uniform01(std::int64_t step, int component) const;

  std::uint64_t seed() const { return seed_; }
  std::int64_t path_id() const { return path_id_; }
  int dim() const { return dim_; }
  double dt() const { return dt_; }

  // Same increment streams, different component window. Used by split_driver.
  NoiseDriver window(int offset, int dim) const;

 private:
  std::uint64_t seed_;
  std::int64_t path_id_;
  int dim_;
  double dt_;
  int component_offset_ = 0;
  double sqrt_dt_;
};

// Splits a driver into two with disjoint component windows [0, first) and
// [first, dim). Concatenating their streams reproduces the original exactly.
std::pair<NoiseDriver, NoiseDriver> split_driver(const NoiseDriver& d, int first);

}  // namespace balldiff
