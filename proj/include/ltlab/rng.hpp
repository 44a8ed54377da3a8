#pragma once

#include <cstdint>
#include <cmath>

namespace ltlab::rng {

// Stream purposes. Streams with different purposes never overlap even for
// the same replica id, so e.g. the eta draws of the CLT harness are
// independent of the path increments by construction.
enum class Purpose : std::uint32_t {
  path = 0,
  eta = 1,
  walk = 2,
  stats = 3,
};

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
//
// The 64-bit key is the master seed; the 128-bit counter holds
// (block, block_hi, stream, purpose). Each (seed, stream, purpose) triple
// is an independent stream of 2^64 blocks of four 32-bit words, so replicas
// can be generated in any order, on any thread, with identical output.
class Philox {
 public:
  Philox(std::uint64_t seed, std::uint64_t stream, Purpose purpose)
      : key0_(static_cast<std::uint32_t>(seed)),
        key1_(static_cast<std::uint32_t>(seed >> 32)),
        ctr2_(static_cast<std::uint32_t>(stream)),
        ctr3_(static_cast<std::uint32_t>(stream >> 32) ^
              (static_cast<std::uint32_t>(purpose) << 28)) {}

  std::uint32_t next_u32() {
    if (buf_pos_ == 4) {
      fill_block();
      buf_pos_ = 0;
    }
    return buf_[buf_pos_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return (hi << 32) | lo;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller (trigonometric form). The method is part
  // of the release contract: seeded runs are bit-for-bit reproducible and
  // every pair of uniforms yields exactly two normals.
  double gaussian() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(theta);
    have_cached_ = true;
    return r * std::cos(theta);
  }

 private:
  static std::uint32_t mulhi(std::uint32_t a, std::uint32_t b) {
    return static_cast<std::uint32_t>(
        (static_cast<std::uint64_t>(a) * b) >> 32);
  }

  void fill_block() {
    std::uint32_t c0 = static_cast<std::uint32_t>(block_);
    std::uint32_t c1 = static_cast<std::uint32_t>(block_ >> 32);
    std::uint32_t c2 = ctr2_;
    std::uint32_t c3 = ctr3_;
    std::uint32_t k0 = key0_;
    std::uint32_t k1 = key1_;
    for (int round = 0; round < 10; ++round) {
      const std::uint32_t hi0 = mulhi(kMul0, c0);
      const std::uint32_t lo0 = kMul0 * c0;
      const std::uint32_t hi1 = mulhi(kMul1, c2);
      const std::uint32_t lo1 = kMul1 * c2;
      const std::uint32_t n0 = hi1 ^ c1 ^ k0;
      const std::uint32_t n1 = lo1;
      const std::uint32_t n2 = hi0 ^ c3 ^ k1;
      const std::uint32_t n3 = lo0;
      c0 = n0;
      c1 = n1;
      c2 = n2;
      c3 = n3;
      k0 += kWeyl0;
      k1 += kWeyl1;
    }
    buf_[0] = c0;
    buf_[1] = c1;
    buf_[2] = c2;
    buf_[3] = c3;
    ++block_;
  }

  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  std::uint32_t key0_, key1_, ctr2_, ctr3_;
  std::uint64_t block_ = 0;
  std::uint32_t buf_[4] = {0, 0, 0, 0};
  int buf_pos_ = 4;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace ltlab::rng
