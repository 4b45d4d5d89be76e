#include "balldiff/noise.hpp"

#include <cmath>

#include "balldiff/errors.hpp"
#include "balldiff/special_functions.hpp"

namespace balldiff {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void philox_round(std::array<std::uint32_t, 4>& c,
                         const std::array<std::uint32_t, 2>& k) {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * c[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * c[2];
  const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
  const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
  c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(const std::array<std::uint32_t, 4>& counter,
                                        const std::array<std::uint32_t, 2>& key) {
  std::array<std::uint32_t, 4> c = counter;
  std::array<std::uint32_t, 2> k = key;
  for (int round = 0; round < 10; ++round) {
    philox_round(c, k);
    k[0] += kPhiloxW0;
    k[1] += kPhiloxW1;
  }
  return c;
}

NoiseDriver::NoiseDriver(std::uint64_t seed, std::int64_t path_id, int dim, double dt)
    : seed_(seed), path_id_(path_id), dim_(dim), dt_(dt) {
  if (dim < 1) throw DimensionError("NoiseDriver: dim must be >= 1");
  if (!(dt > 0.0)) throw DomainError("NoiseDriver: dt must be positive");
  sqrt_dt_ = std::sqrt(dt);
}

double NoiseDriver::uniform01(std::int64_t step, int component) const {
  if (component < 0 || component >= dim_)
    throw DimensionError("NoiseDriver: component out of range");
  const std::uint64_t pid = static_cast<std::uint64_t>(path_id_);
  const std::uint64_t stp = static_cast<std::uint64_t>(step);
  // Counter: (step, component window index, low path bits); key: seed mixed
  // with the high path bits. The map (seed, path_id, step, component) ->
  // (counter, key) is injective for fixed seed.
  const std::array<std::uint32_t, 4> counter = {
      static_cast<std::uint32_t>(stp),
      static_cast<std::uint32_t>(stp >> 32),
      static_cast<std::uint32_t>(component + component_offset_),
      static_cast<std::uint32_t>(pid),
  };
  const std::array<std::uint32_t, 2> key = {
      static_cast<std::uint32_t>(seed_),
      static_cast<std::uint32_t>(seed_ >> 32) ^ static_cast<std::uint32_t>(pid >> 32),
  };
  const auto out = philox4x32(counter, key);
  const std::uint64_t bits =
      (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
  // 53-bit uniform, shifted off 0 so the quantile is always finite.
  return static_cast<double>(bits >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

double NoiseDriver::gaussian_increment(std::int64_t step, int component) const {
  return normal_quantile(uniform01(step, component)) * sqrt_dt_;
}

void NoiseDriver::fill_increments(std::int64_t step, std::span<double> out) const {
  if (static_cast<int>(out.size()) > dim_)
    throw DimensionError("NoiseDriver: fill span exceeds driver dim");
  for (int i = 0; i < static_cast<int>(out.size()); ++i)
    out[i] = gaussian_increment(step, i);
}

NoiseDriver NoiseDriver::window(int offset, int dim) const {
  NoiseDriver d(seed_, path_id_, dim, dt_);
  d.component_offset_ = component_offset_ + offset;
  return d;
}

std::pair<NoiseDriver, NoiseDriver> split_driver(const NoiseDriver& d, int first) {
  if (first <= 0 || first >= d.dim())
    throw DimensionError("split_driver: split point must satisfy 0 < first < dim");
  return {d.window(0, first), d.window(first, d.dim() - first)};
}

}  // namespace balldiff
