#pragma once

#include <cstdint>
#include <random>

namespace handoff {

/// Identifies one independent random stream. Equal (seed, stream_id) pairs
/// always produce the same sequence.
struct RngStream {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;

    std::mt19937_64 engine() const {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream_id),
                          static_cast<std::uint32_t>(stream_id >> 32)};
        return std::mt19937_64(seq);
    }

    friend bool operator==(const RngStream&, const RngStream&) = default;
};

/// Stream for link `link_id` (0 = BS1, 1 = BS2) of Monte Carlo run `run_index`.
inline RngStream link_stream(std::uint64_t master_seed, std::uint64_t run_index,
                             std::uint64_t link_id) {
    return RngStream{master_seed, run_index * 2 + link_id};
}

}  // namespace handoff
