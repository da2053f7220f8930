#pragma once

// Entropy sources and Gaussian quadrature-pair generation.
//
// Alice's encodings are drawn by radial inversion: a Rayleigh radius from one
// 16-bit uniform and a uniform angle from a second one. The radius uses
//   r = sigma * sqrt(-2 ln u)
// which is the inverse CDF of f(r) = (r / sigma^2) exp(-r^2 / (2 sigma^2)) and
// gives per-quadrature variance sigma^2. The shorter form sigma * sqrt(-ln u)
// yields sigma^2 / 2 per quadrature; rayleigh_radius_unscaled() keeps it for
// comparison.

#include <cstdint>
#include <filesystem>
#include <random>
#include <vector>

namespace cvqkd::rng {

enum class EntropyKind { SeededPseudorandom, FileBacked };

/// Source of uniform 16-bit integers. Not thread safe; use one per worker.
class EntropySource {
 public:
  virtual ~EntropySource() = default;
  virtual std::uint16_t next_u16() = 0;
  virtual EntropyKind kind() const = 0;
};

/// mt19937_64 stream; each 64-bit output yields four 16-bit words, low first.
class SeededEntropy final : public EntropySource {
 public:
  explicit SeededEntropy(std::uint64_t seed);
  std::uint16_t next_u16() override;
  EntropyKind kind() const override { return EntropyKind::SeededPseudorandom; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t buffer_ = 0;
  int remaining_ = 0;
};

/// Consumes little-endian uint16 words sequentially; throws EntropyExhausted
/// once the words run out.
class FileEntropy final : public EntropySource {
 public:
  explicit FileEntropy(std::vector<std::uint16_t> words);
  static FileEntropy from_file(const std::filesystem::path& path);

  std::uint16_t next_u16() override;
  EntropyKind kind() const override { return EntropyKind::FileBacked; }
  std::size_t remaining() const { return words_.size() - position_; }

 private:
  std::vector<std::uint16_t> words_;
  std::size_t position_ = 0;
};

struct GaussianPair {
  double x = 0.0;
  double p = 0.0;
  double sigma = 1.0;
};

/// k -> (k + 1) / 2^16, so u is never zero.
double uniform_from_u16(std::uint16_t k);
/// k -> 2 pi k / 2^16.
double angle_from_u16(std::uint16_t k);

/// sigma * sqrt(-2 ln u). Throws DomainError for u outside (0, 1] or sigma <= 0.
double rayleigh_radius(double u, double sigma);
/// sigma * sqrt(-ln u), the variance-halving variant.
double rayleigh_radius_unscaled(double u, double sigma);

GaussianPair gaussian_pair_from_uniforms(double u, double theta, double sigma);

/// Draws two fresh 16-bit words (radius first, then angle).
GaussianPair gaussian_pair(EntropySource& source, double sigma);

/// Double-precision noise for the physical simulation (shot noise, drifts).
/// Deterministic for a given seed on a given standard library.
class NoiseSource {
 public:
  explicit NoiseSource(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double normal(double stddev) { return stddev * normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  /// Uniform phase in [0, 2 pi).
  double phase();
  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// SplitMix64 step, used to derive independent sub-seeds from one run seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace cvqkd::rng
