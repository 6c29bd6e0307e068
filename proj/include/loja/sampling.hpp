#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace loja {

/// Row-major block of points of one dimension.
class PointSet {
 public:
  PointSet() = default;
  PointSet(std::size_t dimension, std::size_t count) : dim_(dimension), coords_(dimension * count, 0.0) {}

  std::size_t dimension() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  std::span<const double> operator[](std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
  std::span<double> operator[](std::size_t i) { return {coords_.data() + i * dim_, dim_}; }
  void push_back(std::span<const double> p);

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
};

/// Uniform points in the closed ball of the given radius around center
/// (origin if center is empty). Deterministic in seed.
PointSet sample_ball(std::size_t dimension, double radius, std::size_t count, std::uint64_t seed,
                     std::span<const double> center = {});

/// Uniform points on the sphere of the given radius around center.
PointSet sample_sphere(std::size_t dimension, double radius, std::size_t count, std::uint64_t seed,
                       std::span<const double> center = {});

/// Quasi-uniform unit-sphere mesh: {+1,-1} in dimension 1, equally spaced
/// angles in dimension 2, a Fibonacci lattice in dimension 3 and seeded
/// uniform points beyond.
PointSet sphere_mesh(std::size_t dimension, std::size_t count, std::uint64_t seed = 7);

double norm(std::span<const double> v);

}  // namespace loja

namespace loja {

/// Shared knobs for the sampled checks.
struct SamplingOptions {
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

}  // namespace loja
