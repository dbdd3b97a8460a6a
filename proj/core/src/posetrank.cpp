#include <endorank/posetrank.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace endorank {
namespace {

using nlohmann::json;

// {id, t, t^2, ...} as canonical representatives.
std::vector<Mat> power_chain(const GroupCtx& ctx, const Mat& t,
                             std::uint32_t ell) {
  std::vector<Mat> pw;
  pw.push_back(canonicalize(ctx.F, ctx.central, mat_identity(ctx.F, ctx.n)));
  Mat cur = canonicalize(ctx.F, ctx.central, t);
  for (std::uint32_t i = 1; i < ell; ++i) {
    pw.push_back(cur);
    cur = group_mul(ctx, cur, t);
  }
  return pw;
}

bool commutes(const GroupCtx& ctx, const Mat& a, const Mat& b) {
  return group_mul(ctx, a, b) == group_mul(ctx, b, a);
}

// Product set {m * p : m in elems, p in powers}, sorted and deduplicated.
std::vector<Mat> extend_by(const GroupCtx& ctx, const std::vector<Mat>& elems,
                           const std::vector<Mat>& powers) {
  std::vector<Mat> out;
  out.reserve(elems.size() * powers.size());
  for (const Mat& m : elems)
    for (const Mat& p : powers) out.push_back(group_mul(ctx, m, p));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::uint64_t pow_u64(std::uint64_t b, std::uint32_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

struct UnionFind {
  std::vector<std::uint32_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  std::uint32_t find(std::uint32_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

ElemAbCatalog catalog_elem_ab(const GroupCtx& ctx,
                              const std::vector<Mat>& sylow_elements,
                              std::uint32_t ell) {
  ElemAbCatalog cat;
  cat.ell = ell;
  cat.sylow = sylow_elements;
  std::sort(cat.sylow.begin(), cat.sylow.end());
  cat.sylow.erase(std::unique(cat.sylow.begin(), cat.sylow.end()),
                  cat.sylow.end());

  std::vector<Mat> T;
  for (const Mat& g : cat.sylow)
    if (!is_identity(ctx, g) && element_order(ctx, g) == ell) T.push_back(g);
  std::vector<std::vector<Mat>> pw;
  pw.reserve(T.size());
  for (const Mat& t : T) pw.push_back(power_chain(ctx, t, ell));

  std::vector<CatalogEntry> members;
  std::set<SubgroupKey> seen;
  auto try_insert = [&](std::vector<Mat> elems, int rank,
                        std::vector<Mat> gens) -> bool {
    if (elems.size() != pow_u64(ell, static_cast<std::uint32_t>(rank)))
      throw std::logic_error(
          "catalog tripwire: closure of commuting order-ell generators has "
          "unexpected size");
    SubgroupKey key;
    key.elems = std::move(elems);
    if (!seen.insert(key).second) return false;
    members.push_back(CatalogEntry{std::move(key), rank, std::move(gens)});
    return true;
  };

  // Rank-2 layer: commuting pairs outside each other's power chain.
  for (std::size_t i = 0; i < T.size(); ++i) {
    for (std::size_t j = i + 1; j < T.size(); ++j) {
      if (std::find(pw[i].begin(), pw[i].end(), T[j]) != pw[i].end())
        continue;  // cyclic pair
      if (!commutes(ctx, T[i], T[j])) continue;
      try_insert(extend_by(ctx, pw[i], pw[j]), 2, {T[i], T[j]});
    }
  }

  // Higher layers: extend each member by commuting order-ell elements not
  // already inside it.  Exhaustive because a rank r+1 subgroup contains a
  // rank-r subgroup found in the previous layer.
  std::vector<std::size_t> layer(members.size());
  std::iota(layer.begin(), layer.end(), 0);
  int rank = 2;
  while (!layer.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t idx : layer) {
      // Copies: `members` may reallocate while this layer extends.
      const std::vector<Mat> elems = members[idx].key.elems;
      const std::vector<Mat> gens = members[idx].gens;
      for (std::size_t k = 0; k < T.size(); ++k) {
        if (std::binary_search(elems.begin(), elems.end(), T[k])) continue;
        bool comm = true;
        for (const Mat& g : gens)
          if (!commutes(ctx, T[k], g)) {
            comm = false;
            break;
          }
        if (!comm) continue;
        std::vector<Mat> bigger_gens = gens;
        bigger_gens.push_back(T[k]);
        if (try_insert(extend_by(ctx, elems, pw[k]), rank + 1,
                       std::move(bigger_gens)))
          next.push_back(members.size() - 1);
      }
    }
    layer = std::move(next);
    ++rank;
  }

  std::sort(members.begin(), members.end(),
            [](const CatalogEntry& a, const CatalogEntry& b) {
              if (a.rank != b.rank) return a.rank < b.rank;
              return a.key < b.key;
            });
  cat.members = std::move(members);

  for (std::uint32_t j = 0; j < cat.members.size(); ++j) {
    const auto& big = cat.members[j].key.elems;
    for (std::uint32_t i = 0; i < j; ++i) {
      if (cat.members[i].rank >= cat.members[j].rank) continue;
      const auto& small = cat.members[i].key.elems;
      if (std::includes(big.begin(), big.end(), small.begin(), small.end()))
        cat.inclusions.emplace_back(i, j);
    }
  }
  return cat;
}

OrbitPoset fuse(const GroupCtx& ctx, const ElemAbCatalog& catalog,
                const FuseOptions& options) {
  OrbitPoset poset;
  poset.ell = catalog.ell;

  // Rank of the order-ell part of the Sylow center, for the tripwires.
  {
    std::uint64_t count = 0;
    for (const Mat& z : catalog.sylow) {
      bool central = true;
      for (const Mat& g : catalog.sylow)
        if (!commutes(ctx, z, g)) {
          central = false;
          break;
        }
      if (!central) continue;
      if (is_identity(ctx, z) || element_order(ctx, z) == catalog.ell)
        ++count;
    }
    int r = 0;
    std::uint64_t c = count;
    while (c % catalog.ell == 0) {
      c /= catalog.ell;
      ++r;
    }
    if (c != 1)
      throw std::logic_error(
          "fusion tripwire: order-ell part of the Sylow center is not an "
          "ell-power");
    poset.center_rank = r;
  }

  std::map<SubgroupKey, std::uint32_t> index_of;
  for (std::uint32_t i = 0; i < catalog.members.size(); ++i)
    index_of.emplace(catalog.members[i].key, i);

  std::vector<std::int64_t> assigned(catalog.members.size(), -1);
  for (std::uint32_t i = 0; i < catalog.members.size(); ++i) {
    if (assigned[i] >= 0) continue;
    OrbitOptions opts;
    opts.budget = options.orbit_budget;
    opts.threads = options.threads;
    std::vector<std::uint32_t> hits;
    OrbitWalkResult walk = conjugation_orbit_walk(
        ctx, catalog.members[i].key, opts, [&](const SubgroupKey& k) {
          auto it = index_of.find(k);
          if (it != index_of.end()) hits.push_back(it->second);
        });
    std::sort(hits.begin(), hits.end());
    OrbitClass cls;
    cls.id = static_cast<std::uint32_t>(poset.classes.size());
    cls.rank = catalog.members[i].rank;
    cls.orbit_size = walk.size;
    cls.complete = walk.complete;
    for (std::uint32_t j : hits) {
      if (assigned[j] < 0) {
        assigned[j] = cls.id;
        cls.members.push_back(j);
        continue;
      }
      // A complete orbit visits every conjugate, so overlapping an earlier
      // complete class is impossible; overlapping an earlier budget-cut
      // class just means fusion failed to unite them — poison, don't merge.
      if (poset.classes[static_cast<std::size_t>(assigned[j])].complete)
        throw std::logic_error(
            "fusion tripwire: conjugate catalog members landed in distinct "
            "classes");
      cls.complete = false;
    }
    if (!cls.complete) poset.all_complete = false;
    poset.classes.push_back(std::move(cls));
  }
  std::size_t covered = 0;
  for (const OrbitClass& c : poset.classes) covered += c.members.size();
  if (covered != catalog.members.size())
    throw std::logic_error(
        "fusion tripwire: class sizes do not sum to the catalog size");

  // Maximality, class-wise: a class fails to be maximal exactly when one of
  // its members sits strictly inside another catalog member.
  std::vector<char> has_super(catalog.members.size(), 0);
  for (const auto& [sub, super] : catalog.inclusions) {
    (void)super;
    has_super[sub] = 1;
  }
  for (OrbitClass& c : poset.classes) {
    c.maximal = true;
    for (std::uint32_t m : c.members)
      if (has_super[m]) {
        c.maximal = false;
        break;
      }
  }

  std::set<std::pair<std::uint32_t, std::uint32_t>> edge_set;
  for (const auto& [sub, super] : catalog.inclusions)
    edge_set.emplace(static_cast<std::uint32_t>(assigned[sub]),
                     static_cast<std::uint32_t>(assigned[super]));
  poset.edges.assign(edge_set.begin(), edge_set.end());

  UnionFind uf(poset.classes.size());
  for (const auto& [a, b] : poset.edges) uf.unite(a, b);
  std::map<std::uint32_t, std::vector<std::uint32_t>> comps;
  for (std::uint32_t c = 0; c < poset.classes.size(); ++c)
    comps[uf.find(c)].push_back(c);
  for (auto& [root, ids] : comps) {
    (void)root;
    poset.components.push_back(std::move(ids));
  }
  return poset;
}

RankReport tf_rank(const OrbitPoset& poset, int ell_rank) {
  if (!poset.all_complete)
    throw std::invalid_argument(
        "tf_rank requires a fully fused poset; this one has incomplete "
        "orbits");
  RankReport rep;
  rep.ell = poset.ell;
  rep.ell_rank = ell_rank;
  for (const OrbitClass& c : poset.classes) {
    ++rep.class_counts_by_rank[c.rank];
    if (c.rank == 2 && c.maximal) ++rep.maximal_rank2_classes;
  }
  rep.component_count = poset.components.size();

  if (ell_rank <= 1) {
    if (!poset.classes.empty())
      throw std::logic_error(
          "rank tripwire: catalog classes exist although the ell-rank is at "
          "most 1");
    rep.tf = 0;
    rep.rule = "Thm 1.5 rk_l <= 1";
    return rep;
  }

  int max_rank = 0;
  for (const OrbitClass& c : poset.classes) max_rank = std::max(max_rank, c.rank);
  if (max_rank != ell_rank)
    throw std::logic_error(
        "rank tripwire: declared ell-rank differs from the maximal catalog "
        "rank");

  rep.tf = static_cast<int>(rep.component_count);
  if (ell_rank == 2) {
    bool singletons = true;
    for (const auto& comp : poset.components)
      singletons = singletons && comp.size() == 1;
    const bool all_max_rank2 =
        rep.maximal_rank2_classes == poset.classes.size();
    if (!singletons || !all_max_rank2 ||
        rep.component_count != poset.classes.size())
      throw std::logic_error(
          "rank tripwire: at ell-rank 2 the components must be exactly the "
          "classes, all maximal of rank 2");
    rep.rule = "Thm 1.5 rk_l = 2";
  } else {
    if (rep.component_count != rep.maximal_rank2_classes + 1)
      throw std::logic_error(
          "rank tripwire: at ell-rank > 2 the component count must exceed "
          "the number of maximal rank-2 classes by exactly one");
    rep.rule = "Thm 1.5 rk_l > 2";
  }

  // Structural tripwires, independent of the dictionary.
  if (poset.ell % 2 == 1 && ell_rank >= static_cast<int>(poset.ell) + 1 &&
      rep.maximal_rank2_classes != 0)
    throw std::logic_error(
        "rank tripwire: odd ell with ell-rank >= ell+1 admits no maximal "
        "rank-2 class");
  if (ell_rank == 2 && poset.center_rank >= 2 && poset.classes.size() != 1)
    throw std::logic_error(
        "rank tripwire: noncyclic Sylow center at ell-rank 2 forces a single "
        "maximal class");
  if (ell_rank >= 3 && poset.center_rank >= 2 &&
      rep.maximal_rank2_classes != 0)
    throw std::logic_error(
        "rank tripwire: noncyclic Sylow center at ell-rank >= 3 admits no "
        "maximal rank-2 class");
  return rep;
}

RankPipelineResult run_rank_pipeline(const GroupDescriptor& descriptor,
                                     std::uint32_t ell,
                                     const RankBudgets& budgets) {
  GroupCtx ctx = build_group(descriptor);
  SylowResult syl = sylow_subgroup(ctx, ell, budgets.enum_bound);

  RankPipelineResult out;
  out.sylow_strategy = syl.strategy;
  out.catalog = catalog_elem_ab(ctx, syl.elements, ell);
  out.poset = fuse(ctx, out.catalog,
                   FuseOptions{budgets.orbit_budget, budgets.threads});

  int ell_rank = 0;
  if (out.catalog.members.empty()) {
    ell_rank = syl.elements.size() <= 1 ? 0 : 1;
  } else {
    for (const CatalogEntry& m : out.catalog.members)
      ell_rank = std::max(ell_rank, m.rank);
  }

  if (out.poset.all_complete) {
    out.report = tf_rank(out.poset, ell_rank);
  } else {
    RankReport rep;
    rep.ell = ell;
    rep.ell_rank = ell_rank;
    for (const OrbitClass& c : out.poset.classes) {
      ++rep.class_counts_by_rank[c.rank];
      if (c.rank == 2 && c.maximal) ++rep.maximal_rank2_classes;
    }
    rep.component_count = out.poset.components.size();
    rep.rule = "incomplete";
    for (const OrbitClass& c : out.poset.classes)
      if (!c.complete) {
        std::ostringstream os;
        os << "orbit budget exhausted for class " << c.id << " (rank "
           << c.rank << "); fusion incomplete, rank withheld";
        rep.caveats.push_back(os.str());
      }
    out.report = std::move(rep);
  }
  return out;
}

RankReport rank_of(const GroupDescriptor& descriptor, std::uint32_t ell,
                   const RankBudgets& budgets) {
  return run_rank_pipeline(descriptor, ell, budgets).report;
}

std::string poset_to_json(const OrbitPoset& poset) {
  json j;
  j["schema"] = "endorank.poset/v1";
  j["ell"] = poset.ell;
  j["center_rank"] = poset.center_rank;
  j["all_complete"] = poset.all_complete;
  j["classes"] = json::array();
  for (const OrbitClass& c : poset.classes) {
    json jc;
    jc["id"] = c.id;
    jc["rank"] = c.rank;
    jc["orbit_size"] = c.orbit_size;
    jc["complete"] = c.complete;
    jc["maximal"] = c.maximal;
    jc["members"] = c.members;
    j["classes"].push_back(std::move(jc));
  }
  j["edges"] = json::array();
  for (const auto& [a, b] : poset.edges) j["edges"].push_back({a, b});
  j["components"] = poset.components;
  return j.dump(2) + "\n";
}

std::string report_to_json(const RankReport& report) {
  json j;
  j["schema"] = "endorank.rank/v1";
  j["ell"] = report.ell;
  j["ell_rank"] = report.ell_rank;
  json counts = json::object();
  for (const auto& [rank, n] : report.class_counts_by_rank)
    counts[std::to_string(rank)] = n;
  j["class_counts_by_rank"] = std::move(counts);
  j["maximal_rank2_classes"] = report.maximal_rank2_classes;
  j["component_count"] = report.component_count;
  if (report.tf)
    j["tf_rank"] = *report.tf;
  else
    j["tf_rank"] = nullptr;
  j["status"] = report.tf ? "ok" : "unknown";
  j["rule"] = report.rule;
  j["caveats"] = report.caveats;
  return j.dump(2) + "\n";
}

std::string poset_to_dot(const OrbitPoset& poset) {
  std::ostringstream os;
  os << "digraph orbit_poset {\n";
  os << "  rankdir=BT;\n";
  os << "  node [shape=box];\n";
  for (const OrbitClass& c : poset.classes) {
    os << "  c" << c.id << " [label=\"c" << c.id << "\\nrank " << c.rank
       << "\\norbit " << c.orbit_size << (c.maximal ? "\\nmaximal" : "")
       << (c.complete ? "" : "\\nINCOMPLETE") << "\""
       << (c.complete ? "" : ", style=dashed") << "];\n";
  }
  for (const auto& [a, b] : poset.edges)
    os << "  c" << a << " -> c" << b << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace endorank
