#include "chaosclt/random.hpp"

#include <cmath>

namespace chaosclt {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

inline double to_open_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t substream)
    : key_{static_cast<std::uint32_t>(seed),
           static_cast<std::uint32_t>(seed >> 32)},
      substream_(substream) {}

std::array<std::uint32_t, 4> RandomStream::next_block() {
  const auto words = philox4x32({static_cast<std::uint32_t>(block_),
                                 static_cast<std::uint32_t>(block_ >> 32),
                                 static_cast<std::uint32_t>(substream_),
                                 static_cast<std::uint32_t>(substream_ >> 32)},
                                key_);
  ++block_;
  return words;
}

void RandomStream::refill() {
  buffer_ = next_block();
  buffered_words_ = 4;
}

double RandomStream::uniform() {
  if (buffered_words_ < 2) refill();
  const int i = 4 - buffered_words_;
  buffered_words_ -= 2;
  const std::uint64_t bits =
      (static_cast<std::uint64_t>(buffer_[i]) << 32) | buffer_[i + 1];
  return to_open_unit(bits);
}

void RandomStream::normal_pair(double& first, double& second) {
  for (;;) {
    const auto w = next_block();
    const double u = 2.0 * to_open_unit((static_cast<std::uint64_t>(w[0]) << 32) | w[1]) - 1.0;
    const double v = 2.0 * to_open_unit((static_cast<std::uint64_t>(w[2]) << 32) | w[3]) - 1.0;
    const double s = u * u + v * v;
    if (s >= 1.0 || s == 0.0) continue;
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    first = u * factor;
    second = v * factor;
    return;
  }
}

double RandomStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  double first;
  normal_pair(first, spare_normal_);
  has_spare_ = true;
  return first;
}

void RandomStream::fill_normal(std::span<double> out) {
  std::size_t i = 0;
  if (has_spare_ && !out.empty()) out[i++] = normal();
  for (; i + 1 < out.size(); i += 2) normal_pair(out[i], out[i + 1]);
  if (i < out.size()) out[i] = normal();
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (tag + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace chaosclt
