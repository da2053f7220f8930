#include "cvqkd/rng.hpp"

#include <cmath>
#include <fstream>
#include <iterator>

#include "cvqkd/core.hpp"
#include "cvqkd/error.hpp"

namespace cvqkd::rng {

SeededEntropy::SeededEntropy(std::uint64_t seed) : engine_(seed) {}

std::uint16_t SeededEntropy::next_u16() {
  if (remaining_ == 0) {
    buffer_ = engine_();
    remaining_ = 4;
  }
  const auto word = static_cast<std::uint16_t>(buffer_ & 0xFFFFu);
  buffer_ >>= 16;
  --remaining_;
  return word;
}

FileEntropy::FileEntropy(std::vector<std::uint16_t> words) : words_(std::move(words)) {}

FileEntropy FileEntropy::from_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw EntropyExhausted("cannot open entropy file " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<std::uint16_t> words;
  words.reserve(bytes.size() / 2);
  for (std::size_t i = 0; i + 1 < bytes.size(); i += 2) {
    words.push_back(static_cast<std::uint16_t>(bytes[i] | (bytes[i + 1] << 8)));
  }
  return FileEntropy(std::move(words));
}

std::uint16_t FileEntropy::next_u16() {
  if (position_ >= words_.size()) throw EntropyExhausted("entropy file exhausted");
  return words_[position_++];
}

double uniform_from_u16(std::uint16_t k) { return (static_cast<double>(k) + 1.0) / 65536.0; }

double angle_from_u16(std::uint16_t k) { return kTwoPi * static_cast<double>(k) / 65536.0; }

namespace {
void check_radius_inputs(double u, double sigma) {
  if (!(u > 0.0 && u <= 1.0)) throw DomainError("uniform input must lie in (0, 1]");
  if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
}
}  // namespace

double rayleigh_radius(double u, double sigma) {
  check_radius_inputs(u, sigma);
  return sigma * std::sqrt(-2.0 * std::log(u));
}

double rayleigh_radius_unscaled(double u, double sigma) {
  check_radius_inputs(u, sigma);
  return sigma * std::sqrt(-std::log(u));
}

GaussianPair gaussian_pair_from_uniforms(double u, double theta, double sigma) {
  const double r = rayleigh_radius(u, sigma);
  return {r * std::cos(theta), r * std::sin(theta), sigma};
}

GaussianPair gaussian_pair(EntropySource& source, double sigma) {
  const double u = uniform_from_u16(source.next_u16());
  const double theta = angle_from_u16(source.next_u16());
  return gaussian_pair_from_uniforms(u, theta, sigma);
}

double NoiseSource::phase() { return kTwoPi * uniform(); }

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace cvqkd::rng
