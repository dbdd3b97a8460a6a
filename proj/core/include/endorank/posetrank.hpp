#pragma once

// Brute-force torsion-free rank pipeline: catalog every noncyclic elementary
// abelian ell-subgroup of a Sylow ell-subgroup, fuse the catalog under
// G-conjugacy into an orbit poset, and read the rank off the component
// structure:
//
//   rank = 0                   when the ell-rank of G is at most 1,
//   rank = #components         otherwise,
//
// cross-checked on every run against the clause-wise form (ell-rank 2:
// components = conjugacy classes, all maximal; ell-rank > 2: components =
// maximal-rank-2 classes + 1).  Disagreement between the two formulations,
// or violation of the structural tripwires (high rank excludes maximal
// rank-2 classes for odd ell; a noncyclic Sylow center forces exactly one
// maximal class at ell-rank 2 and none of rank 2 at ell-rank >= 3), throws
// std::logic_error — a wrong rank must never be reported quietly.
//
// Budget exhaustion is not an error but poisons the poset: the report then
// carries tf = unknown with a caveat, never a number.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <endorank/groups.hpp>
#include <endorank/matgroup.hpp>

namespace endorank {

// All noncyclic elementary abelian ell-subgroups of one Sylow ell-subgroup,
// layered by rank.  gens is a generating set of size rank, kept so that
// commutation tests against a member need O(rank) products.
struct CatalogEntry {
  SubgroupKey key;
  int rank = 0;
  std::vector<Mat> gens;
};

struct ElemAbCatalog {
  std::uint32_t ell = 0;
  std::vector<Mat> sylow;              // sorted element set of S
  std::vector<CatalogEntry> members;   // sorted by (rank, key)
  // All strict inclusions (sub, super) between members, by index.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> inclusions;
};

// Exhaustive catalog for the given closed Sylow element set: the rank-2
// layer is generated by commuting pairs of order-ell elements, and each
// higher layer extends the previous one by commuting order-ell elements
// outside the member.  Every elementary abelian subgroup of rank r + 1
// contains rank-r subgroups, so the layering misses nothing.
ElemAbCatalog catalog_elem_ab(const GroupCtx& ctx,
                              const std::vector<Mat>& sylow_elements,
                              std::uint32_t ell);

// One G-conjugacy class of catalog members.  orbit_size counts subgroups in
// the full conjugation orbit (meaningful when complete); members indexes
// into the catalog.  maximal means no member of the class is properly
// contained in another catalog member — correct globally because every
// elementary abelian overgroup lies in some Sylow subgroup and all Sylow
// subgroups are conjugate, so non-maximality always has a witness inside S.
struct OrbitClass {
  std::uint32_t id = 0;
  int rank = 0;
  std::uint64_t orbit_size = 0;
  std::vector<std::uint32_t> members;
  bool maximal = false;
  bool complete = false;
};

struct OrbitPoset {
  std::uint32_t ell = 0;
  std::vector<OrbitClass> classes;     // id equals index; ordered by (rank,
                                       // key of first member) by construction
  // Class pairs (sub, super) witnessed by a catalog inclusion.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  std::vector<std::vector<std::uint32_t>> components;  // class ids, grouped
  int center_rank = 0;                 // rank of the order-ell part of Z(S)
  bool all_complete = true;
};

struct FuseOptions {
  std::uint64_t orbit_budget = kDefaultOrbitBudget;
  std::uint32_t threads = 1;
};

// Fuses catalog members into conjugacy classes by walking one conjugation
// orbit per still-unfused member (in catalog order) and collecting every
// catalog member the orbit visits.  Each walk may use several threads; the
// result is deterministic for any thread count.  An orbit that exhausts the
// budget marks its class incomplete and clears all_complete.
OrbitPoset fuse(const GroupCtx& ctx, const ElemAbCatalog& catalog,
                const FuseOptions& options = {});

struct RankReport {
  std::uint32_t ell = 0;
  int ell_rank = 0;
  std::map<int, std::size_t> class_counts_by_rank;
  std::size_t maximal_rank2_classes = 0;
  std::size_t component_count = 0;
  std::optional<int> tf;               // empty means "unknown"
  std::string rule;                    // dictionary clause applied
  std::vector<std::string> caveats;
};

// Applies the rank dictionary to a fully fused poset.  ell_rank is the
// ell-rank of the ambient group (the maximal catalog rank, or 0/1 when the
// catalog is empty).  Throws std::invalid_argument on a poisoned poset and
// std::logic_error when any cross-check or tripwire fails.
RankReport tf_rank(const OrbitPoset& poset, int ell_rank);

struct RankBudgets {
  std::uint64_t enum_bound = kDefaultEnumBound;
  std::uint64_t subgroup_cap = kDefaultSubgroupCap;
  std::uint64_t orbit_budget = kDefaultOrbitBudget;
  std::uint32_t threads = 1;
};

// Full pipeline artifacts, for callers that export the poset as well.
struct RankPipelineResult {
  ElemAbCatalog catalog;
  OrbitPoset poset;
  RankReport report;
  std::string sylow_strategy;
};

RankPipelineResult run_rank_pipeline(const GroupDescriptor& descriptor,
                                     std::uint32_t ell,
                                     const RankBudgets& budgets = {});

// build -> sylow -> catalog -> fuse -> dictionary, reporting unknown (with
// caveats) instead of a number whenever an orbit exceeded its budget.
RankReport rank_of(const GroupDescriptor& descriptor, std::uint32_t ell,
                   const RankBudgets& budgets = {});

// Exports.  JSON objects use sorted keys; schemas are versioned.
std::string poset_to_json(const OrbitPoset& poset);       // endorank.poset/v1
std::string report_to_json(const RankReport& report);     // endorank.rank/v1
std::string poset_to_dot(const OrbitPoset& poset);

}  // namespace endorank
