#include "loja/sampling.hpp"

#include "loja/errors.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace loja {

void PointSet::push_back(std::span<const double> p) {
  if (dim_ == 0 && coords_.empty()) dim_ = p.size();
  if (p.size() != dim_) throw DimensionError("point dimension does not match point set");
  coords_.insert(coords_.end(), p.begin(), p.end());
}

double norm(std::span<const double> v) {
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double s = 0.0;
  for (double x : v) s += (x / scale) * (x / scale);
  return scale * std::sqrt(s);
}

namespace {

void random_direction(std::mt19937_64& rng, std::span<double> out) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  double n = 0.0;
  do {
    for (double& x : out) x = gauss(rng);
    n = norm(out);
  } while (n < 1e-12);
  for (double& x : out) x /= n;
}

PointSet sample(std::size_t d, double radius, std::size_t count, std::uint64_t seed, std::span<const double> center,
                bool interior) {
  if (d == 0) throw DimensionError("cannot sample in dimension 0");
  if (!center.empty() && center.size() != d) throw DimensionError("center dimension mismatch");
  PointSet out(d, count);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < count; ++i) {
    auto p = out[i];
    random_direction(rng, p);
    double r = interior ? radius * std::pow(unit(rng), 1.0 / static_cast<double>(d)) : radius;
    for (std::size_t k = 0; k < d; ++k) p[k] = r * p[k] + (center.empty() ? 0.0 : center[k]);
  }
  return out;
}

}  // namespace

PointSet sample_ball(std::size_t dimension, double radius, std::size_t count, std::uint64_t seed,
                     std::span<const double> center) {
  return sample(dimension, radius, count, seed, center, true);
}

PointSet sample_sphere(std::size_t dimension, double radius, std::size_t count, std::uint64_t seed,
                       std::span<const double> center) {
  return sample(dimension, radius, count, seed, center, false);
}

PointSet sphere_mesh(std::size_t dimension, std::size_t count, std::uint64_t seed) {
  if (dimension == 0) throw DimensionError("cannot mesh a sphere in dimension 0");
  if (dimension == 1) {
    PointSet out(1, 2);
    out[0][0] = 1.0;
    out[1][0] = -1.0;
    return out;
  }
  if (dimension == 2) {
    PointSet out(2, count);
    for (std::size_t i = 0; i < count; ++i) {
      double a = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(count);
      out[i][0] = std::cos(a);
      out[i][1] = std::sin(a);
    }
    return out;
  }
  if (dimension == 3) {
    PointSet out(3, count);
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < count; ++i) {
      double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(count);
      double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      double phi = golden * static_cast<double>(i);
      out[i][0] = rho * std::cos(phi);
      out[i][1] = rho * std::sin(phi);
      out[i][2] = z;
    }
    return out;
  }
  return sample_sphere(dimension, 1.0, count, seed);
}

}  // namespace loja
