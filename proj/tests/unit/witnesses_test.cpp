// Witness builders: every builder self-verifies its algebraic identities and
// throws on the first failure, so the grid tests below are primarily "the
// whole identity list holds" sweeps plus spot checks of derived facts the
// builders do not themselves pin (depth s, ranks, orbit separations).
#include <doctest.h>
#include <endorank/groups.hpp>
#include <endorank/witnesses.hpp>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

using namespace endorank;

namespace {

// (ell, q) pairs with ell | q - 1 covering every supported q <= 64, with the
// exact depth s = v_ell(q - 1) recorded independently of the builder.
struct GridPoint {
  std::uint32_t ell, q, s;
};

const std::vector<GridPoint>& grid() {
  static const std::vector<GridPoint> g = {
      {3, 4, 1},  {3, 7, 1},  {3, 13, 1}, {3, 16, 1}, {3, 19, 2},
      {3, 25, 1}, {3, 31, 1}, {3, 37, 2}, {3, 43, 1}, {3, 49, 1},
      {3, 61, 1}, {3, 64, 2}, {5, 11, 1}, {5, 16, 1}, {5, 31, 1},
      {5, 41, 1}, {5, 61, 1}};
  return g;
}

bool orbit_contains(const OrbitResult& orbit, const SubgroupKey& key) {
  return std::find(orbit.orbit.begin(), orbit.orbit.end(), key) !=
         orbit.orbit.end();
}

}  // namespace

TEST_SUITE("witnesses") {

TEST_CASE("gl witness grid: identities hold and ranks are as designed") {
  for (const GridPoint& pt : grid()) {
    CAPTURE(pt.ell);
    CAPTURE(pt.q);
    WitnessSetGL w = build_witness_gl(pt.ell, pt.q);
    CHECK(w.s == pt.s);
    CHECK(!w.checks.empty());
    CHECK(w.E1.rank == static_cast<int>(pt.ell) - 1);
    CHECK(w.E2.rank == 2);
    CHECK(w.E3.rank == 2);
    // The determinant-class separator is recorded by name.
    CHECK(std::count(w.checks.begin(), w.checks.end(),
                     "E3_image_det_separator") == 1);
    if (pt.s >= 2) {
      CHECK(std::count(w.checks.begin(), w.checks.end(),
                       "alt_third_seed_no_separator_when_deep") == 1);
    }
  }
}

TEST_CASE("gl witness: degree-3 q=7 head subgroup is extraspecial-like") {
  WitnessSetGL w = build_witness_gl(3, 7);
  const Field& F = w.F;
  CHECK(w.E2_gl.key.elems.size() == 27);
  CHECK(mat_mul(F, w.x, w.b) != mat_mul(F, w.b, w.x));
  for (const Mat& e : w.E2_gl.key.elems)
    CHECK(mat_pow(F, e, 3) == mat_identity(F, 3));
}

TEST_CASE("sl witness grid: conjugator identities and seed families") {
  for (const GridPoint& pt : grid()) {
    CAPTURE(pt.ell);
    CAPTURE(pt.q);
    WitnessSetSL w = build_witness_sl(pt.ell, pt.q);
    CHECK(w.s == pt.s);
    CHECK(w.mu != 0);
    CHECK(w.eps == (pt.ell == 3 ? -1 : 1));
    CHECK(w.E_sl.size() == pt.ell);
    CHECK(w.E_psl.size() == pt.ell);
    for (const Subgroup& e : w.E_psl) {
      CHECK(e.elementary_abelian);
      CHECK(e.rank == 2);
    }
    const char* expected = (pt.ell == 3 && pt.s == 1)
                               ? "E_keys_all_coincide_at_depth_one"
                               : "E_keys_pairwise_distinct";
    CHECK(std::count(w.checks.begin(), w.checks.end(), expected) == 1);
    CHECK(std::count(w.checks.begin(), w.checks.end(),
                     "diag_conjugator_shifts_seed_index") == 1);
  }
}

TEST_CASE("pgl degree 3: the three witness classes are pairwise non-conjugate") {
  for (std::uint32_t q : {4u, 7u}) {
    CAPTURE(q);
    WitnessSetGL w = build_witness_gl(3, q);
    GroupCtx pgl = build_group(descriptor_from_name("PGL", 3, q));
    OrbitOptions opts;
    opts.budget = 200000;

    // Conjugacy is an equivalence relation, so two complete orbits that
    // miss the other seeds already separate all three classes (the E3 class
    // is by far the largest — 208544 subgroups at q = 7 — and walking it
    // would add nothing).
    OrbitResult o1 = conjugation_orbit(pgl, w.E1.key, opts);
    OrbitResult o2 = conjugation_orbit(pgl, w.E2.key, opts);
    REQUIRE(o1.complete);
    REQUIRE(o2.complete);
    CHECK(!orbit_contains(o1, w.E2.key));
    CHECK(!orbit_contains(o1, w.E3.key));
    CHECK(!orbit_contains(o2, w.E1.key));
    CHECK(!orbit_contains(o2, w.E3.key));
  }
}

TEST_CASE("congruence and degree preconditions are enforced") {
  CHECK_THROWS_AS(build_witness_gl(3, 5), std::invalid_argument);
  CHECK_THROWS_AS(build_witness_gl(4, 5), std::invalid_argument);
  CHECK_THROWS_AS(build_witness_sl(3, 8), std::invalid_argument);
  CHECK_THROWS_AS(build_witness_defchar(2, DefCharVariant::unitary),
                  std::invalid_argument);
}

TEST_CASE("defchar linear: census counts and torus orbit counts") {
  for (std::uint32_t p : {2u, 3u, 5u, 7u, 11u, 13u}) {
    CAPTURE(p);
    WitnessSetDefChar w = build_witness_defchar(p, DefCharVariant::linear);
    std::size_t expected_census = p == 2 ? 2 : p + 1;
    CHECK(w.E.size() == expected_census);
    CHECK(w.torus_classes_full == (p == 2 ? 2u : 3u));
    std::size_t expected_det1 =
        p == 2 ? 2 : 2 + static_cast<std::size_t>(cube_coset_count(p));
    CHECK(w.torus_classes_det1 == expected_det1);
  }
}

TEST_CASE("defchar unitary: census counts and torus orbit counts") {
  for (std::uint32_t p : {3u, 5u, 7u, 11u, 13u}) {
    CAPTURE(p);
    WitnessSetDefChar w = build_witness_defchar(p, DefCharVariant::unitary);
    CHECK(w.E.size() == p + 1);
    CHECK(w.torus_classes_full == 1);
    CHECK(w.torus_classes_det1 == std::gcd<std::uint64_t>(3, p + 1));
  }
}

TEST_CASE("cube coset count") {
  CHECK(cube_coset_count(3) == 1);
  CHECK(cube_coset_count(5) == 1);
  CHECK(cube_coset_count(7) == 3);
  CHECK(cube_coset_count(11) == 1);
  CHECK(cube_coset_count(13) == 3);
  CHECK_THROWS_AS(cube_coset_count(2), std::invalid_argument);
}

}  // TEST_SUITE
