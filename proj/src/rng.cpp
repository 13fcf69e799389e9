#include "svwe/rng.hpp"

#include <cmath>

namespace svwe {

namespace {

constexpr std::uint32_t kWeylA = 0x9E3779B9u;
constexpr std::uint32_t kWeylB = 0xBB67AE85u;
constexpr std::uint32_t kMultA = 0xD2511F53u;
constexpr std::uint32_t kMultB = 0xCD9E8D57u;

inline void round_once(std::array<std::uint32_t, 4>& ctr, const std::array<std::uint32_t, 2>& key) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMultA) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMultB) * ctr[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) {
    for (int r = 0; r < 10; ++r) {
        round_once(counter, key);
        key[0] += kWeylA;
        key[1] += kWeylB;
    }
    return counter;
}

namespace {

inline std::array<std::uint32_t, 4> block_for(std::uint64_t master, std::uint32_t step,
                                              std::uint32_t replicate, std::uint64_t cell) {
    const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(master),
                                              static_cast<std::uint32_t>(master >> 32)};
    const std::array<std::uint32_t, 4> counter = {static_cast<std::uint32_t>(cell),
                                                  static_cast<std::uint32_t>(cell >> 32), step,
                                                  replicate};
    return philox4x32(counter, key);
}

}  // namespace

void RngPolicy::normal_pair(std::uint32_t step, std::uint32_t replicate, std::uint64_t pair_index,
                            double out[2]) const {
    const auto b = block_for(master_seed_, step, replicate, pair_index);
    const std::uint64_t v = (static_cast<std::uint64_t>(b[0]) << 32) | b[1];
    const double u1 = (static_cast<double>(v) + 0.5) * 0x1p-64;
    const double u2 = (static_cast<double>(b[2]) + 0.5) * 0x1p-32;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    out[0] = r * std::cos(angle);
    out[1] = r * std::sin(angle);
}

double RngPolicy::normal(std::uint32_t step, std::uint32_t replicate, std::uint64_t cell) const {
    // Cells share Philox blocks in pairs: block index cell/2, the two
    // Box-Muller branches split by cell parity. One block and one
    // log/sqrt/sincos pair serve two cells.
    double pair[2];
    normal_pair(step, replicate, cell >> 1, pair);
    return pair[cell & 1];
}

double RngPolicy::uniform(std::uint32_t step, std::uint32_t replicate, std::uint64_t cell) const {
    const auto b = block_for(master_seed_ ^ 0xA5A5A5A5A5A5A5A5ull, step, replicate, cell);
    const std::uint64_t v = (static_cast<std::uint64_t>(b[3]) << 32) | b[2];
    return (static_cast<double>(v) + 0.5) * 0x1p-64;
}

}  // namespace svwe
