#include "codashrink/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace codashrink {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  const std::uint64_t prod = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(prod >> 32);
  lo = static_cast<std::uint32_t>(prod);
}

inline std::array<std::uint32_t, 4> philox_round(
    const std::array<std::uint32_t, 4>& ctr,
    const std::array<std::uint32_t, 2>& key) {
  std::uint32_t hi0, lo0, hi1, lo1;
  mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
  mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
  return {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kPhiloxW0;
      key[1] += kPhiloxW1;
    }
    ctr = philox_round(ctr, key);
  }
  return ctr;
}

std::uint64_t stream_id(std::string_view scenario, std::string_view component,
                        std::uint64_t index) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](unsigned char byte) {
    h ^= byte;
    h *= 0x100000001b3ull;
  };
  for (char c : scenario) mix(static_cast<unsigned char>(c));
  mix(0x1f);  // separator so ("ab","c") != ("a","bc")
  for (char c : component) mix(static_cast<unsigned char>(c));
  mix(0x1f);
  for (int i = 0; i < 8; ++i) mix(static_cast<unsigned char>(index >> (8 * i)));
  return h;
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_{static_cast<std::uint32_t>(seed),
           static_cast<std::uint32_t>(seed >> 32)},
      stream_{static_cast<std::uint32_t>(stream),
              static_cast<std::uint32_t>(stream >> 32)} {}

std::uint32_t CounterRng::next_u32() {
  if (block_pos_ == 4) {
    block_ = philox4x32({static_cast<std::uint32_t>(counter_),
                         static_cast<std::uint32_t>(counter_ >> 32),
                         stream_[0], stream_[1]},
                        key_);
    ++counter_;
    block_pos_ = 0;
  }
  return block_[block_pos_++];
}

std::uint64_t CounterRng::next_u64() {
  const std::uint64_t hi = next_u32();
  const std::uint64_t lo = next_u32();
  return (hi << 32) | lo;
}

double CounterRng::uniform() {
  // 53 random bits, offset to the open interval (0, 1)
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_normal_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_normal_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

double CounterRng::gamma(double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("gamma: shape must be > 0");
  if (shape < 1.0) {
    const double u = uniform();
    return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double CounterRng::beta(double a, double b) {
  const double g1 = gamma(a);
  const double g2 = gamma(b);
  return g1 / (g1 + g2);
}

double CounterRng::chi_squared(double dof) { return 2.0 * gamma(0.5 * dof); }

double CounterRng::student_t(double dof) {
  return normal() / std::sqrt(chi_squared(dof) / dof);
}

int CounterRng::bernoulli(double prob) { return uniform() < prob ? 1 : 0; }

int CounterRng::binomial2(double prob) {
  return bernoulli(prob) + bernoulli(prob);
}

std::uint64_t CounterRng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("below: bound must be > 0");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t u;
  do {
    u = next_u64();
  } while (u >= limit);
  return u % bound;
}

std::vector<Eigen::Index> CounterRng::sample_without_replacement(
    Eigen::Index n, Eigen::Index k) {
  if (k > n) throw std::invalid_argument("sample: k > n");
  std::vector<Eigen::Index> pool(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto j = i + static_cast<Eigen::Index>(
                           below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[static_cast<std::size_t>(i)],
              pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(k));
  return pool;
}

void CounterRng::shuffle(std::vector<Eigen::Index>& values) {
  const auto n = static_cast<Eigen::Index>(values.size());
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const auto j = i + static_cast<Eigen::Index>(
                           below(static_cast<std::uint64_t>(n - i)));
    std::swap(values[static_cast<std::size_t>(i)],
              values[static_cast<std::size_t>(j)]);
  }
}

}  // namespace codashrink
