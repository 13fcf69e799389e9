#pragma once

#include <array>
#include <cstdint>

namespace svwe {

// Philox4x32-10 block cipher (Salmon et al., SC 2011). Pure function of
// (counter, key), which is what makes noise streams derivable rather than
// sequential: every (step, replicate, cell) owns its own block.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// Stream derivation rule for lattice noise. The master seed keys the cipher;
// the counter packs (cell, step, replicate). Distinct (step, replicate)
// pairs therefore index disjoint counter blocks.
class RngPolicy {
  public:
    explicit RngPolicy(std::uint64_t master_seed) : master_seed_(master_seed) {}

    std::uint64_t master_seed() const { return master_seed_; }

    // Standard normal sample for the given lattice cell of the given
    // (step, replicate) stream. Deterministic, thread-safe, O(1).
    double normal(std::uint32_t step, std::uint32_t replicate, std::uint64_t cell) const;

    // Normals of cells (2k, 2k+1), one cipher block and one Box-Muller pair.
    // Identical values to normal() at those cells.
    void normal_pair(std::uint32_t step, std::uint32_t replicate, std::uint64_t pair_index,
                     double out[2]) const;

    // Uniform in (0,1), same indexing, independent of normal() draws.
    double uniform(std::uint32_t step, std::uint32_t replicate, std::uint64_t cell) const;

  private:
    std::uint64_t master_seed_;
};

}  // namespace svwe
