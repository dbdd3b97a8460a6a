#pragma once
// Small dense matrix groups over GF(q), with canonical coset representatives
// modulo a central subgroup of scalars.  This is the computational substrate
// for the orbit-poset pipeline: bounded enumeration of group elements,
// subgroup closure, conjugation orbits of subgroup keys under a budget, and
// Sylow subgroup extraction.
//
// Degree is capped at 6 and matrices are stored inline; unused entries are
// kept zero so that comparison and hashing can work on the raw array.
// Canonical representative of a coset Z.m is the lexicographically least
// scalar multiple in row-major index order; with the zero element ordered
// first this makes the identity coset always canonicalize to the identity.

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include <endorank/field.hpp>

namespace endorank {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr std::uint32_t kMaxDegree = 6;
inline constexpr std::uint64_t kDefaultEnumBound = 200000;
inline constexpr std::uint64_t kDefaultSubgroupCap = 10000;
inline constexpr std::uint64_t kDefaultOrbitBudget = 10000000;

struct Mat {
  std::uint8_t n = 0;
  std::array<FieldElem, kMaxDegree * kMaxDegree> a{};

  FieldElem& at(std::uint32_t i, std::uint32_t j) { return a[i * n + j]; }
  FieldElem at(std::uint32_t i, std::uint32_t j) const { return a[i * n + j]; }

  friend bool operator==(const Mat&, const Mat&) = default;
  friend auto operator<=>(const Mat& x, const Mat& y) {
    if (auto c = x.n <=> y.n; c != 0) return c;
    return x.a <=> y.a;  // trailing entries are zero on both sides
  }
};

struct MatHash {
  std::size_t operator()(const Mat& m) const;
};

Mat mat_identity(const Field& F, std::uint32_t n);
Mat mat_zero(std::uint32_t n);
Mat mat_mul(const Field& F, const Mat& x, const Mat& y);
// Inverse by Gauss-Jordan elimination; throws std::domain_error if singular.
Mat mat_inv(const Field& F, const Mat& x);
FieldElem mat_det(const Field& F, const Mat& x);
Mat mat_pow(const Field& F, Mat x, std::uint64_t e);
// conj(g, h) = h g h^-1.
Mat conj(const Field& F, const Mat& g, const Mat& h);
Mat transpose(const Mat& x);
Mat entrywise_frobenius(const Field& F, Mat x, std::uint32_t m);
Mat scalar_mat(const Field& F, std::uint32_t n, FieldElem lambda);
Mat scalar_mul(const Field& F, FieldElem lambda, Mat x);

// The central subgroup the group is read modulo.  Always contains 1; sorted
// by element index.  Trivial spec = {1}.
struct CentralSpec {
  std::vector<FieldElem> scalars{1};

  bool is_trivial() const { return scalars.size() == 1; }
  static CentralSpec trivial() { return CentralSpec{}; }
  // All q-1 nonzero scalars.
  static CentralSpec all_scalars(const Field& F);
  // Scalars with lambda^m = 1 (the m-th roots of unity present in F).
  static CentralSpec mth_roots(const Field& F, std::uint32_t m);
  // Scalars with lambda^(p^r + 1) = 1, the norm-one scalars of a quadratic
  // extension GF(q^2), q = p^r.
  static CentralSpec norm_one(const Field& F, std::uint32_t r);
};

// Lexicographically least element of { z.m : z in central }.
Mat canonicalize(const Field& F, const CentralSpec& central, const Mat& m);

// Sorted list of canonical elements; the identity key of a subgroup.
struct SubgroupKey {
  std::vector<Mat> elems;

  friend bool operator==(const SubgroupKey&, const SubgroupKey&) = default;
  friend auto operator<=>(const SubgroupKey& x, const SubgroupKey& y) {
    return x.elems <=> y.elems;
  }
};

struct Subgroup {
  SubgroupKey key;
  std::uint32_t ell = 0;  // reference prime for the rank attribute
  int rank = -1;          // log_ell(size) when elementary abelian
  bool elementary_abelian = false;
};

struct SylowResult {
  std::vector<Mat> gens;
  std::vector<Mat> elements;
  std::uint64_t order = 0;
  std::string strategy;
};

struct GroupCtx {
  explicit GroupCtx(Field field) : F(std::move(field)) {}

  Field F;
  std::uint32_t n = 0;
  std::vector<Mat> gens;
  CentralSpec central;
  BigInt order;  // exact order of the group modulo central
  enum class Form { none, hermitian, symplectic } form_kind = Form::none;
  std::optional<Mat> form;
  std::uint32_t frob_power = 0;  // r with conj-transpose = frobenius^r o transpose
  std::string name;
  std::function<std::optional<SylowResult>(const GroupCtx&, std::uint32_t)>
      sylow_provider;
  std::string sylow_provider_name;
};

// Multiplication / inversion of canonical representatives (well defined on
// cosets because the central subgroup is central).
Mat group_mul(const GroupCtx& ctx, const Mat& x, const Mat& y);
Mat group_inv(const GroupCtx& ctx, const Mat& x);
bool is_identity(const GroupCtx& ctx, const Mat& x);
// Order of the coset of x in the quotient group.
std::uint64_t element_order(const GroupCtx& ctx, const Mat& x);

struct EnumResult {
  std::vector<Mat> elements;  // sorted canonical representatives
  bool refused = false;
  std::string reason;
};
// Breadth-first closure of the generators; refuses (rather than truncates)
// when the declared group order exceeds the bound.
EnumResult enumerate_elements(const GroupCtx& ctx,
                              std::uint64_t bound = kDefaultEnumBound);

struct ClosureResult {
  Subgroup subgroup;
  bool refused = false;
  std::string reason;
};
// Closure of the given canonical elements under group_mul, capped.
ClosureResult subgroup_generated(const GroupCtx& ctx,
                                 const std::vector<Mat>& gens,
                                 std::uint64_t cap = kDefaultSubgroupCap);

struct OrbitOptions {
  std::uint64_t budget = kDefaultOrbitBudget;  // visited-node budget
  std::uint32_t threads = 1;
  // Conjugate by these elements instead of ctx.gens when set (used by the
  // torus-orbit fallback).
  const std::vector<Mat>* conjugators = nullptr;
};

struct OrbitWalkResult {
  bool complete = false;
  std::uint64_t size = 0;
};
// Level-synchronous BFS over { g K g^-1 } for g in the conjugator set closed
// under inverses.  Calls on_visit for every distinct subgroup key discovered
// (including the start), in a deterministic order independent of thread
// count.  Stops, reporting incomplete, as soon as the visited count would
// exceed the budget.
OrbitWalkResult conjugation_orbit_walk(
    const GroupCtx& ctx, const SubgroupKey& start, const OrbitOptions& opts,
    const std::function<void(const SubgroupKey&)>& on_visit);

struct OrbitResult {
  std::vector<SubgroupKey> orbit;  // discovery order
  bool complete = false;
  std::uint64_t size = 0;
};
OrbitResult conjugation_orbit(const GroupCtx& ctx, const SubgroupKey& start,
                              const OrbitOptions& opts = {});

// Sylow ell-subgroup: the named provider when the context carries one and it
// applies, otherwise bounded enumeration plus normalizer-directed growth.
// Throws std::runtime_error when neither route is available in budget.
SylowResult sylow_subgroup(const GroupCtx& ctx, std::uint32_t ell,
                           std::uint64_t enum_bound = kDefaultEnumBound);

// ell-part of a positive integer.
std::uint64_t ell_part(const BigInt& n, std::uint32_t ell);
std::uint32_t ell_valuation(const BigInt& n, std::uint32_t ell);

}  // namespace endorank
