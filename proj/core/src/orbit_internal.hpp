#pragma once
// Internal flat representation for conjugation-orbit BFS.  A subgroup key of
// m elements in degree n is packed as m contiguous blocks of n*n entry
// indices, blocks sorted lexicographically.  The visited set stores only a
// 128-bit content hash per node; full keys live in the frontier.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <endorank/matgroup.hpp>

namespace endorank::detail {

struct Key128 {
  std::uint64_t a = 0, b = 0;
  friend bool operator==(const Key128&, const Key128&) = default;
};

struct Key128Hash {
  std::size_t operator()(const Key128& k) const {
    return static_cast<std::size_t>(k.a ^ (k.b * 0x9e3779b97f4a7c15ULL));
  }
};

Key128 hash_block_data(std::span<const FieldElem> data, std::uint32_t n);

std::vector<FieldElem> pack_key(const SubgroupKey& key);
SubgroupKey unpack_key(std::span<const FieldElem> data, std::uint32_t n);

// on_visit(block_data, hash): block_data has the same stride as the start
// key.  Deterministic visiting order for any thread count.
OrbitWalkResult orbit_walk_flat(
    const GroupCtx& ctx, const SubgroupKey& start, const OrbitOptions& opts,
    const std::function<void(std::span<const FieldElem>, const Key128&)>&
        on_visit);

}  // namespace endorank::detail
