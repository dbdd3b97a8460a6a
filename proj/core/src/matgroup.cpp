#include <endorank/matgroup.hpp>

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "orbit_internal.hpp"

namespace endorank {
namespace {

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

}  // namespace

std::size_t MatHash::operator()(const Mat& m) const {
  std::uint64_t h = fnv1a(m.a.data(), sizeof(m.a), 14695981039346656037ULL);
  h = fnv1a(&m.n, 1, h);
  return static_cast<std::size_t>(mix64(h));
}

Mat mat_zero(std::uint32_t n) {
  Mat m;
  m.n = static_cast<std::uint8_t>(n);
  return m;
}

Mat mat_identity(const Field& F, std::uint32_t n) {
  Mat m = mat_zero(n);
  for (std::uint32_t i = 0; i < n; ++i) m.at(i, i) = F.one();
  return m;
}

Mat mat_mul(const Field& F, const Mat& x, const Mat& y) {
  const std::uint32_t n = x.n;
  Mat z = mat_zero(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t k = 0; k < n; ++k) {
      const FieldElem xik = x.at(i, k);
      if (xik == 0) continue;
      for (std::uint32_t j = 0; j < n; ++j) {
        const FieldElem ykj = y.at(k, j);
        if (ykj == 0) continue;
        z.at(i, j) = F.add(z.at(i, j), F.mul(xik, ykj));
      }
    }
  }
  return z;
}

Mat mat_inv(const Field& F, const Mat& x) {
  const std::uint32_t n = x.n;
  Mat a = x;
  Mat inv = mat_identity(F, n);
  for (std::uint32_t col = 0; col < n; ++col) {
    std::uint32_t pivot = col;
    while (pivot < n && a.at(pivot, col) == 0) ++pivot;
    if (pivot == n) throw std::domain_error("matrix is singular");
    if (pivot != col) {
      for (std::uint32_t j = 0; j < n; ++j) {
        std::swap(a.a[pivot * n + j], a.a[col * n + j]);
        std::swap(inv.a[pivot * n + j], inv.a[col * n + j]);
      }
    }
    const FieldElem pinv = F.inv(a.at(col, col));
    for (std::uint32_t j = 0; j < n; ++j) {
      a.at(col, j) = F.mul(a.at(col, j), pinv);
      inv.at(col, j) = F.mul(inv.at(col, j), pinv);
    }
    for (std::uint32_t row = 0; row < n; ++row) {
      if (row == col) continue;
      const FieldElem f = a.at(row, col);
      if (f == 0) continue;
      for (std::uint32_t j = 0; j < n; ++j) {
        a.at(row, j) = F.sub(a.at(row, j), F.mul(f, a.at(col, j)));
        inv.at(row, j) = F.sub(inv.at(row, j), F.mul(f, inv.at(col, j)));
      }
    }
  }
  return inv;
}

FieldElem mat_det(const Field& F, const Mat& x) {
  const std::uint32_t n = x.n;
  Mat a = x;
  FieldElem det = F.one();
  for (std::uint32_t col = 0; col < n; ++col) {
    std::uint32_t pivot = col;
    while (pivot < n && a.at(pivot, col) == 0) ++pivot;
    if (pivot == n) return F.zero();
    if (pivot != col) {
      for (std::uint32_t j = 0; j < n; ++j)
        std::swap(a.a[pivot * n + j], a.a[col * n + j]);
      det = F.neg(det);
    }
    det = F.mul(det, a.at(col, col));
    const FieldElem pinv = F.inv(a.at(col, col));
    for (std::uint32_t row = col + 1; row < n; ++row) {
      const FieldElem f = F.mul(a.at(row, col), pinv);
      if (f == 0) continue;
      for (std::uint32_t j = col; j < n; ++j)
        a.at(row, j) = F.sub(a.at(row, j), F.mul(f, a.at(col, j)));
    }
  }
  return det;
}

Mat mat_pow(const Field& F, Mat x, std::uint64_t e) {
  Mat r = mat_identity(F, x.n);
  while (e > 0) {
    if (e & 1) r = mat_mul(F, r, x);
    x = mat_mul(F, x, x);
    e >>= 1;
  }
  return r;
}

Mat conj(const Field& F, const Mat& g, const Mat& h) {
  return mat_mul(F, mat_mul(F, h, g), mat_inv(F, h));
}

Mat transpose(const Mat& x) {
  Mat t = mat_zero(x.n);
  for (std::uint32_t i = 0; i < x.n; ++i)
    for (std::uint32_t j = 0; j < x.n; ++j) t.at(j, i) = x.at(i, j);
  return t;
}

Mat entrywise_frobenius(const Field& F, Mat x, std::uint32_t m) {
  for (std::uint32_t i = 0; i < x.n; ++i)
    for (std::uint32_t j = 0; j < x.n; ++j)
      x.at(i, j) = F.frobenius(x.at(i, j), m);
  return x;
}

Mat scalar_mat(const Field& F, std::uint32_t n, FieldElem lambda) {
  Mat m = mat_zero(n);
  (void)F;
  for (std::uint32_t i = 0; i < n; ++i) m.at(i, i) = lambda;
  return m;
}

Mat scalar_mul(const Field& F, FieldElem lambda, Mat x) {
  for (std::uint32_t i = 0; i < x.n; ++i)
    for (std::uint32_t j = 0; j < x.n; ++j)
      x.at(i, j) = F.mul(lambda, x.at(i, j));
  return x;
}

CentralSpec CentralSpec::all_scalars(const Field& F) {
  CentralSpec c;
  c.scalars.clear();
  for (std::uint32_t i = 1; i < F.q(); ++i)
    c.scalars.push_back(static_cast<FieldElem>(i));
  return c;
}

CentralSpec CentralSpec::mth_roots(const Field& F, std::uint32_t m) {
  CentralSpec c;
  c.scalars.clear();
  const std::uint32_t qm1 = F.q() - 1;
  const std::uint32_t d = std::gcd(qm1, m);
  // lambda^m = 1 iff lambda = g^(j*(q-1)/d); indices 1 + j*(q-1)/d.
  const std::uint32_t step = qm1 / d;
  for (std::uint32_t j = 0; j < d; ++j)
    c.scalars.push_back(static_cast<FieldElem>(1 + j * step));
  std::sort(c.scalars.begin(), c.scalars.end());
  return c;
}

CentralSpec CentralSpec::norm_one(const Field& F, std::uint32_t r) {
  std::uint64_t m = 1;
  for (std::uint32_t i = 0; i < r; ++i) m *= F.p();
  return mth_roots(F, static_cast<std::uint32_t>(m + 1));
}

Mat canonicalize(const Field& F, const CentralSpec& central, const Mat& m) {
  if (central.is_trivial()) return m;
  // The first nonzero entry (row-major) is scalar-invariant in position and
  // determines the minimizing scalar uniquely, so only that entry has to be
  // scanned.
  const std::uint32_t nn = static_cast<std::uint32_t>(m.n) * m.n;
  std::uint32_t first = nn;
  for (std::uint32_t i = 0; i < nn; ++i) {
    if (m.a[i] != 0) {
      first = i;
      break;
    }
  }
  if (first == nn) return m;  // zero matrix; not a group element
  FieldElem best_val = 0;
  FieldElem best_lambda = 0;
  for (FieldElem lam : central.scalars) {
    const FieldElem v = F.mul(lam, m.a[first]);
    if (best_lambda == 0 || v < best_val) {
      best_val = v;
      best_lambda = lam;
    }
  }
  if (best_lambda == F.one()) return m;
  return scalar_mul(F, best_lambda, m);
}

Mat group_mul(const GroupCtx& ctx, const Mat& x, const Mat& y) {
  return canonicalize(ctx.F, ctx.central, mat_mul(ctx.F, x, y));
}

Mat group_inv(const GroupCtx& ctx, const Mat& x) {
  return canonicalize(ctx.F, ctx.central, mat_inv(ctx.F, x));
}

bool is_identity(const GroupCtx& ctx, const Mat& x) {
  return x == mat_identity(ctx.F, ctx.n);
}

std::uint64_t element_order(const GroupCtx& ctx, const Mat& x) {
  constexpr std::uint64_t kCap = 1u << 20;
  const Mat id = mat_identity(ctx.F, ctx.n);
  Mat y = canonicalize(ctx.F, ctx.central, x);
  std::uint64_t ord = 1;
  while (!(y == id)) {
    y = group_mul(ctx, y, x);
    if (++ord > kCap) throw std::runtime_error("element order exceeds cap");
  }
  return ord;
}

EnumResult enumerate_elements(const GroupCtx& ctx, std::uint64_t bound) {
  EnumResult res;
  if (ctx.order > BigInt(bound)) {
    res.refused = true;
    res.reason = "group order " + ctx.order.str() +
                 " exceeds enumeration bound " + std::to_string(bound);
    return res;
  }
  std::vector<Mat> gens;
  for (const Mat& g : ctx.gens)
    gens.push_back(canonicalize(ctx.F, ctx.central, g));

  std::unordered_set<Mat, MatHash> seen;
  std::vector<Mat> work;
  const Mat id = mat_identity(ctx.F, ctx.n);
  seen.insert(id);
  work.push_back(id);
  for (std::size_t i = 0; i < work.size(); ++i) {
    const Mat x = work[i];
    for (const Mat& g : gens) {
      Mat y = group_mul(ctx, x, g);
      if (seen.insert(y).second) {
        work.push_back(y);
        if (BigInt(work.size()) > ctx.order)
          throw std::logic_error("closure exceeds declared group order for " +
                                 ctx.name);
      }
    }
  }
  if (BigInt(work.size()) != ctx.order)
    throw std::logic_error("closure size " + std::to_string(work.size()) +
                           " does not match declared order " +
                           ctx.order.str() + " for " + ctx.name);
  std::sort(work.begin(), work.end());
  res.elements = std::move(work);
  return res;
}

ClosureResult subgroup_generated(const GroupCtx& ctx,
                                 const std::vector<Mat>& gens,
                                 std::uint64_t cap) {
  ClosureResult res;
  std::vector<Mat> cgens;
  for (const Mat& g : gens) {
    Mat c = canonicalize(ctx.F, ctx.central, g);
    if (!(c == mat_identity(ctx.F, ctx.n))) cgens.push_back(c);
  }
  std::unordered_set<Mat, MatHash> seen;
  std::vector<Mat> work;
  const Mat id = mat_identity(ctx.F, ctx.n);
  seen.insert(id);
  work.push_back(id);
  for (std::size_t i = 0; i < work.size(); ++i) {
    const Mat x = work[i];
    for (const Mat& g : cgens) {
      Mat y = group_mul(ctx, x, g);
      if (seen.insert(y).second) {
        if (work.size() >= cap) {
          res.refused = true;
          res.reason = "subgroup closure exceeds cap " + std::to_string(cap);
          return res;
        }
        work.push_back(y);
      }
    }
  }
  std::sort(work.begin(), work.end());
  Subgroup& sg = res.subgroup;
  sg.key.elems = std::move(work);

  // Elementary abelian iff the generators pairwise commute and all share one
  // prime order; the closure is then (C_ell)^rank.
  bool abelian = true;
  for (std::size_t i = 0; i < cgens.size() && abelian; ++i)
    for (std::size_t j = i + 1; j < cgens.size() && abelian; ++j)
      if (!(group_mul(ctx, cgens[i], cgens[j]) ==
            group_mul(ctx, cgens[j], cgens[i])))
        abelian = false;
  std::uint64_t common = 0;
  bool prime_order = true;
  for (const Mat& g : cgens) {
    std::uint64_t o = element_order(ctx, g);
    if (common == 0) common = o;
    if (o != common) prime_order = false;
  }
  if (common != 0) {
    for (std::uint64_t d = 2; d * d <= common; ++d)
      if (common % d == 0) prime_order = false;
  }
  if (abelian && prime_order && common >= 2) {
    sg.elementary_abelian = true;
    sg.ell = static_cast<std::uint32_t>(common);
    std::uint64_t sz = sg.key.elems.size();
    int rank = 0;
    while (sz % common == 0 && sz > 1) {
      sz /= common;
      ++rank;
    }
    if (sz != 1)
      throw std::logic_error("elementary abelian closure has non-prime-power size");
    sg.rank = rank;
  }
  return res;
}

namespace detail {

Key128 hash_block_data(std::span<const FieldElem> data, std::uint32_t n) {
  const std::size_t bytes = data.size() * sizeof(FieldElem);
  std::uint64_t h1 = fnv1a(data.data(), bytes, 14695981039346656037ULL);
  std::uint64_t h2 = fnv1a(data.data(), bytes, 0x6c62272e07bb0142ULL);
  h1 = fnv1a(&n, sizeof(n), h1);
  std::uint64_t len = data.size();
  h2 = fnv1a(&len, sizeof(len), h2);
  return Key128{mix64(h1), mix64(h2)};
}

std::vector<FieldElem> pack_key(const SubgroupKey& key) {
  if (key.elems.empty()) throw std::invalid_argument("empty subgroup key");
  const std::uint32_t n = key.elems.front().n;
  const std::uint32_t nn = n * n;
  std::vector<FieldElem> out;
  out.reserve(key.elems.size() * nn);
  for (const Mat& m : key.elems)
    out.insert(out.end(), m.a.begin(), m.a.begin() + nn);
  return out;
}

SubgroupKey unpack_key(std::span<const FieldElem> data, std::uint32_t n) {
  const std::uint32_t nn = n * n;
  SubgroupKey key;
  for (std::size_t off = 0; off < data.size(); off += nn) {
    Mat m = mat_zero(n);
    std::copy(data.begin() + off, data.begin() + off + nn, m.a.begin());
    key.elems.push_back(m);
  }
  return key;
}

namespace {

// Conjugates every block of `key` by (g, ginv), canonicalizes, and writes the
// blocks to `out` in sorted order.
void conjugate_key(const GroupCtx& ctx, std::span<const FieldElem> key,
                   const Mat& g, const Mat& ginv, std::vector<FieldElem>& out,
                   std::vector<Mat>& scratch) {
  const std::uint32_t n = ctx.n;
  const std::uint32_t nn = n * n;
  scratch.clear();
  for (std::size_t off = 0; off < key.size(); off += nn) {
    Mat m = mat_zero(n);
    std::copy(key.begin() + off, key.begin() + off + nn, m.a.begin());
    Mat c = canonicalize(ctx.F, ctx.central,
                         mat_mul(ctx.F, mat_mul(ctx.F, g, m), ginv));
    scratch.push_back(c);
  }
  std::sort(scratch.begin(), scratch.end());
  out.clear();
  for (const Mat& m : scratch)
    out.insert(out.end(), m.a.begin(), m.a.begin() + nn);
}

struct ConjPair {
  Mat g, ginv;
};

}  // namespace

OrbitWalkResult orbit_walk_flat(
    const GroupCtx& ctx, const SubgroupKey& start, const OrbitOptions& opts,
    const std::function<void(std::span<const FieldElem>, const Key128&)>&
        on_visit) {
  const std::vector<Mat>& base =
      opts.conjugators != nullptr ? *opts.conjugators : ctx.gens;
  std::vector<ConjPair> conjs;
  for (const Mat& g : base) {
    Mat ginv = mat_inv(ctx.F, g);
    conjs.push_back({g, ginv});
    if (!(canonicalize(ctx.F, ctx.central, ginv) ==
          canonicalize(ctx.F, ctx.central, g)))
      conjs.push_back({ginv, g});
  }

  std::vector<FieldElem> start_flat = pack_key(start);
  const std::size_t stride = start_flat.size();

  std::unordered_set<Key128, Key128Hash> visited;
  const Key128 h0 = hash_block_data(start_flat, ctx.n);
  visited.insert(h0);
  on_visit(start_flat, h0);

  // Frontier as one contiguous buffer of fixed-stride keys.
  std::vector<FieldElem> frontier = start_flat;
  std::vector<FieldElem> next;

  const std::uint32_t threads = std::max<std::uint32_t>(1, opts.threads);
  constexpr std::size_t kSliceKeys = 4096;

  bool complete = false;
  while (!frontier.empty()) {
    next.clear();
    const std::size_t fcount = frontier.size() / stride;
    bool stopped = false;
    for (std::size_t slice = 0; slice < fcount && !stopped;
         slice += kSliceKeys) {
      const std::size_t scount = std::min(kSliceKeys, fcount - slice);
      // Candidate children for this slice, in deterministic order
      // (key-major, conjugator-minor), generated in parallel chunks.
      std::vector<std::vector<FieldElem>> cand(threads);
      std::vector<std::vector<Key128>> cand_hash(threads);
      auto work = [&](std::uint32_t t) {
        std::vector<Mat> scratch;
        std::vector<FieldElem> child;
        const std::size_t per = (scount + threads - 1) / threads;
        const std::size_t lo = t * per;
        const std::size_t hi = std::min(scount, lo + per);
        for (std::size_t i = lo; i < hi; ++i) {
          std::span<const FieldElem> key(
              frontier.data() + (slice + i) * stride, stride);
          for (const ConjPair& c : conjs) {
            conjugate_key(ctx, key, c.g, c.ginv, child, scratch);
            cand[t].insert(cand[t].end(), child.begin(), child.end());
            cand_hash[t].push_back(hash_block_data(child, ctx.n));
          }
        }
      };
      if (threads == 1) {
        work(0);
      } else {
        std::vector<std::thread> pool;
        for (std::uint32_t t = 0; t < threads; ++t)
          pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
      }
      // Sequential merge preserving the deterministic candidate order.
      for (std::uint32_t t = 0; t < threads && !stopped; ++t) {
        const std::size_t m = cand_hash[t].size();
        for (std::size_t i = 0; i < m; ++i) {
          const Key128& h = cand_hash[t][i];
          if (visited.contains(h)) continue;
          if (visited.size() >= opts.budget) {
            stopped = true;
            break;
          }
          visited.insert(h);
          std::span<const FieldElem> child(cand[t].data() + i * stride,
                                           stride);
          on_visit(child, h);
          next.insert(next.end(), child.begin(), child.end());
        }
      }
    }
    if (stopped) return {false, visited.size()};
    frontier.swap(next);
  }
  complete = true;
  return {complete, visited.size()};
}

}  // namespace detail

OrbitWalkResult conjugation_orbit_walk(
    const GroupCtx& ctx, const SubgroupKey& start, const OrbitOptions& opts,
    const std::function<void(const SubgroupKey&)>& on_visit) {
  return detail::orbit_walk_flat(
      ctx, start, opts,
      [&](std::span<const FieldElem> data, const detail::Key128&) {
        on_visit(detail::unpack_key(data, ctx.n));
      });
}

OrbitResult conjugation_orbit(const GroupCtx& ctx, const SubgroupKey& start,
                              const OrbitOptions& opts) {
  OrbitResult res;
  OrbitWalkResult w = detail::orbit_walk_flat(
      ctx, start, opts,
      [&](std::span<const FieldElem> data, const detail::Key128&) {
        res.orbit.push_back(detail::unpack_key(data, ctx.n));
      });
  res.complete = w.complete;
  res.size = w.size;
  return res;
}

std::uint64_t ell_part(const BigInt& n, std::uint32_t ell) {
  BigInt m = n;
  std::uint64_t part = 1;
  while (m % ell == 0) {
    m /= ell;
    part *= ell;
  }
  return part;
}

std::uint32_t ell_valuation(const BigInt& n, std::uint32_t ell) {
  BigInt m = n;
  std::uint32_t v = 0;
  while (m % ell == 0) {
    m /= ell;
    ++v;
  }
  return v;
}

SylowResult sylow_subgroup(const GroupCtx& ctx, std::uint32_t ell,
                           std::uint64_t enum_bound) {
  const std::uint64_t target = ell_part(ctx.order, ell);
  if (target == 1)
    throw std::invalid_argument("ell does not divide the group order");

  if (ctx.sylow_provider) {
    std::optional<SylowResult> r = ctx.sylow_provider(ctx, ell);
    if (r) {
      if (r->order != target)
        throw std::logic_error("sylow provider returned order " +
                               std::to_string(r->order) + ", expected " +
                               std::to_string(target) + " for " + ctx.name);
      return *r;
    }
  }

  EnumResult en = enumerate_elements(ctx, enum_bound);
  if (en.refused)
    throw std::runtime_error("sylow_subgroup(" + ctx.name +
                             "): no named provider applies and " + en.reason);
  const std::vector<Mat>& all = en.elements;

  auto is_ell_element = [&](const Mat& x) {
    std::uint64_t o = element_order(ctx, x);
    while (o % ell == 0) o /= ell;
    return o == 1;
  };

  // Greedy normalizer-directed growth: starting from the canonically least
  // nontrivial ell-element, repeatedly adjoin the least ell-element outside S
  // normalizing S.  Inside a Sylow P > S, N_P(S) > S, so progress is
  // guaranteed and S stays an ell-group.
  const Mat id = mat_identity(ctx.F, ctx.n);
  SylowResult res;
  std::vector<Mat> S{id};
  auto in_S = [&](const Mat& x) {
    return std::binary_search(S.begin(), S.end(), x);
  };
  while (S.size() < target) {
    bool grown = false;
    for (const Mat& t : all) {
      if (t == id || in_S(t) || !is_ell_element(t)) continue;
      Mat tinv = group_inv(ctx, t);
      bool normalizes = true;
      for (const Mat& s : S) {
        Mat c = group_mul(ctx, group_mul(ctx, t, s), tinv);
        if (!in_S(c)) {
          normalizes = false;
          break;
        }
      }
      if (!normalizes) continue;
      std::vector<Mat> gens = res.gens;
      gens.push_back(t);
      ClosureResult cl = subgroup_generated(ctx, gens, target + 1);
      if (cl.refused || cl.subgroup.key.elems.size() > target)
        throw std::logic_error("sylow growth left the ell-part");
      res.gens = std::move(gens);
      S = cl.subgroup.key.elems;
      grown = true;
      break;
    }
    if (!grown)
      throw std::logic_error("sylow growth stalled below the ell-part for " +
                             ctx.name);
  }
  res.elements = std::move(S);
  res.order = target;
  res.strategy = "enumeration+normalizer-growth";
  return res;
}

}  // namespace endorank
