#include <doctest.h>

#include <endorank/matgroup.hpp>

#include <random>
#include <stdexcept>

using namespace endorank;

namespace {

Mat from_rows(const Field& F, std::uint32_t n,
              std::vector<std::vector<std::uint64_t>> rows) {
  Mat m = mat_zero(n);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j) m.at(i, j) = F.from_int(rows[i][j]);
  return m;
}

Mat random_mat(const Field& F, std::uint32_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint32_t> dist(0, F.q() - 1);
  Mat m = mat_zero(n);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j)
      m.at(i, j) = static_cast<FieldElem>(dist(rng));
  return m;
}

Mat random_invertible(const Field& F, std::uint32_t n, std::mt19937_64& rng) {
  for (;;) {
    Mat m = random_mat(F, n, rng);
    if (mat_det(F, m) != F.zero()) return m;
  }
}

// Reference canonicalization: scan the whole coset.
Mat naive_canonicalize(const Field& F, const CentralSpec& central,
                       const Mat& m) {
  Mat best = scalar_mul(F, central.scalars.front(), m);
  for (FieldElem z : central.scalars) {
    Mat c = scalar_mul(F, z, m);
    if (c < best) best = c;
  }
  return best;
}

// GL2(3): order (9-1)(9-3) = 48.
GroupCtx make_gl2_3() {
  GroupCtx ctx(Field::make(3, 1));
  ctx.n = 2;
  const Field& F = ctx.F;
  ctx.gens = {from_rows(F, 2, {{1, 1}, {0, 1}}),
              from_rows(F, 2, {{1, 0}, {1, 1}}),
              from_rows(F, 2, {{2, 0}, {0, 1}})};
  ctx.order = 48;
  ctx.name = "GL2(3)";
  return ctx;
}

GroupCtx make_pgl2_3() {
  GroupCtx ctx = make_gl2_3();
  ctx.central = CentralSpec::all_scalars(ctx.F);
  ctx.order = 24;
  ctx.name = "PGL2(3)";
  return ctx;
}

// GL3(2) = SL3(2), order 7*6*4 = 168.
GroupCtx make_gl3_2() {
  GroupCtx ctx(Field::make(2, 1));
  ctx.n = 3;
  const Field& F = ctx.F;
  ctx.gens = {from_rows(F, 3, {{1, 1, 0}, {0, 1, 0}, {0, 0, 1}}),
              from_rows(F, 3, {{0, 0, 1}, {1, 0, 0}, {0, 1, 0}})};
  ctx.order = 168;
  ctx.name = "GL3(2)";
  return ctx;
}

}  // namespace

TEST_SUITE("matgroup") {
  TEST_CASE("matrix arithmetic basics") {
    Field F = Field::make(7, 1);
    std::mt19937_64 rng(11);
    const Mat id = mat_identity(F, 3);
    for (int t = 0; t < 50; ++t) {
      Mat x = random_invertible(F, 3, rng);
      Mat y = random_mat(F, 3, rng);
      CHECK(mat_mul(F, x, mat_inv(F, x)) == id);
      CHECK(mat_mul(F, mat_inv(F, x), x) == id);
      CHECK(F.mul(mat_det(F, x), mat_det(F, y)) ==
            mat_det(F, mat_mul(F, x, y)));
      CHECK(mat_det(F, transpose(x)) == mat_det(F, x));
      CHECK(mat_mul(F, x, id) == x);
      // conj(g, h) = h g h^-1.
      Mat h = random_invertible(F, 3, rng);
      CHECK(conj(F, y, h) == mat_mul(F, mat_mul(F, h, y), mat_inv(F, h)));
      CHECK(mat_det(F, conj(F, x, h)) == mat_det(F, x));
    }
    CHECK(mat_pow(F, from_rows(F, 2, {{1, 1}, {0, 1}}), 7) ==
          mat_identity(F, 2));
    CHECK_THROWS_AS(mat_inv(F, mat_zero(3)), std::domain_error);
    CHECK(mat_det(F, mat_zero(3)) == F.zero());
  }

  TEST_CASE("entrywise frobenius respects products") {
    Field F = Field::make(2, 2);
    std::mt19937_64 rng(12);
    for (int t = 0; t < 30; ++t) {
      Mat x = random_mat(F, 3, rng);
      Mat y = random_mat(F, 3, rng);
      CHECK(entrywise_frobenius(F, mat_mul(F, x, y), 1) ==
            mat_mul(F, entrywise_frobenius(F, x, 1),
                    entrywise_frobenius(F, y, 1)));
      CHECK(entrywise_frobenius(F, x, 2) == x);
    }
  }

  TEST_CASE("central spec variants") {
    Field F9 = Field::make(3, 2);
    CHECK(CentralSpec::trivial().scalars == std::vector<FieldElem>{1});
    CHECK(CentralSpec::all_scalars(F9).scalars.size() == 8);
    // Cube roots of unity in GF(9): indices 1, 1+8/... step (q-1)/gcd = 8/...
    auto cubes = CentralSpec::mth_roots(F9, 3);
    CHECK(cubes.scalars.size() == 1);  // gcd(3, 8) = 1
    auto fourth = CentralSpec::mth_roots(F9, 4);
    CHECK(fourth.scalars.size() == 4);
    for (FieldElem z : fourth.scalars) CHECK(F9.pow(z, 4) == F9.one());
    // Norm-one scalars of GF(9) over GF(3): lambda^(3+1) = 1.
    auto n1 = CentralSpec::norm_one(F9, 1);
    CHECK(n1.scalars == fourth.scalars);
  }

  TEST_CASE("canonicalize agrees with the whole-coset scan") {
    std::mt19937_64 rng(13);
    for (auto [p, k] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{
             {3, 1}, {7, 1}, {2, 2}, {3, 2}, {5, 1}}) {
      Field F = Field::make(p, k);
      for (const CentralSpec& Z :
           {CentralSpec::all_scalars(F), CentralSpec::mth_roots(F, 2),
            CentralSpec::mth_roots(F, 3)}) {
        for (int t = 0; t < 60; ++t) {
          Mat m = random_mat(F, 3, rng);
          Mat c = canonicalize(F, Z, m);
          CHECK(c == naive_canonicalize(F, Z, m));
          // Idempotent and constant on the coset.
          CHECK(canonicalize(F, Z, c) == c);
          for (FieldElem z : Z.scalars)
            CHECK(canonicalize(F, Z, scalar_mul(F, z, m)) == c);
        }
        // The identity coset canonicalizes to the identity.
        CHECK(canonicalize(F, Z, scalar_mul(F, Z.scalars.back(),
                                            mat_identity(F, 3))) ==
              mat_identity(F, 3));
      }
    }
  }

  TEST_CASE("enumeration matches declared orders") {
    GroupCtx gl23 = make_gl2_3();
    EnumResult e = enumerate_elements(gl23);
    CHECK(!e.refused);
    CHECK(e.elements.size() == 48);
    CHECK(std::is_sorted(e.elements.begin(), e.elements.end()));

    GroupCtx pgl23 = make_pgl2_3();
    EnumResult ep = enumerate_elements(pgl23);
    CHECK(!ep.refused);
    CHECK(ep.elements.size() == 24);

    GroupCtx gl32 = make_gl3_2();
    EnumResult e2 = enumerate_elements(gl32);
    CHECK(!e2.refused);
    CHECK(e2.elements.size() == 168);
  }

  TEST_CASE("enumeration refuses oversized groups without truncating") {
    GroupCtx ctx = make_gl2_3();
    EnumResult e = enumerate_elements(ctx, 10);
    CHECK(e.refused);
    CHECK(e.elements.empty());
    CHECK(!e.reason.empty());
    // A wrong declared order is a hard logic error, not a refusal.
    ctx.order = 50;
    CHECK_THROWS_AS(enumerate_elements(ctx), std::logic_error);
  }

  TEST_CASE("element orders in quotient groups") {
    GroupCtx gl23 = make_gl2_3();
    const Field& F = gl23.F;
    Mat t = from_rows(F, 2, {{1, 1}, {0, 1}});
    Mat w = from_rows(F, 2, {{0, 2}, {1, 0}});  // [[0,-1],[1,0]]
    CHECK(element_order(gl23, t) == 3);
    CHECK(element_order(gl23, w) == 4);
    CHECK(element_order(gl23, mat_identity(F, 2)) == 1);
    GroupCtx pgl23 = make_pgl2_3();
    CHECK(element_order(pgl23, w) == 2);  // w^2 = -I is central
  }

  TEST_CASE("subgroup closure flags elementary abelian groups") {
    GroupCtx ctx = make_gl2_3();
    const Field& F = ctx.F;
    // Klein four group of diagonal sign matrices.
    ClosureResult klein = subgroup_generated(
        ctx, {from_rows(F, 2, {{2, 0}, {0, 1}}),
              from_rows(F, 2, {{1, 0}, {0, 2}})});
    CHECK(!klein.refused);
    CHECK(klein.subgroup.elementary_abelian);
    CHECK(klein.subgroup.ell == 2);
    CHECK(klein.subgroup.rank == 2);
    CHECK(klein.subgroup.key.elems.size() == 4);
    CHECK(std::is_sorted(klein.subgroup.key.elems.begin(),
                         klein.subgroup.key.elems.end()));

    ClosureResult c3 =
        subgroup_generated(ctx, {from_rows(F, 2, {{1, 1}, {0, 1}})});
    CHECK(c3.subgroup.elementary_abelian);
    CHECK(c3.subgroup.ell == 3);
    CHECK(c3.subgroup.rank == 1);

    // Non-commuting generators: the whole SL2(3), not elementary abelian.
    ClosureResult sl = subgroup_generated(
        ctx, {from_rows(F, 2, {{1, 1}, {0, 1}}),
              from_rows(F, 2, {{1, 0}, {1, 1}})});
    CHECK(!sl.subgroup.elementary_abelian);
    CHECK(sl.subgroup.key.elems.size() == 24);

    // Cap enforcement refuses rather than truncates.
    ClosureResult capped = subgroup_generated(
        ctx, {from_rows(F, 2, {{1, 1}, {0, 1}}),
              from_rows(F, 2, {{1, 0}, {1, 1}})},
        10);
    CHECK(capped.refused);
  }

  TEST_CASE("rank two elementary abelian over gf7") {
    GroupCtx ctx(Field::make(7, 1));
    ctx.n = 2;
    const Field& F = ctx.F;
    ctx.gens = {from_rows(F, 2, {{2, 0}, {0, 1}}),
                from_rows(F, 2, {{1, 0}, {0, 2}})};
    ctx.order = 9;
    ctx.name = "C3xC3";
    ClosureResult r = subgroup_generated(ctx, ctx.gens);
    CHECK(r.subgroup.elementary_abelian);
    CHECK(r.subgroup.ell == 3);
    CHECK(r.subgroup.rank == 2);
    CHECK(r.subgroup.key.elems.size() == 9);
  }

  TEST_CASE("conjugation orbit finds all four sylow threes of gl2(3)") {
    GroupCtx ctx = make_gl2_3();
    const Field& F = ctx.F;
    ClosureResult u =
        subgroup_generated(ctx, {from_rows(F, 2, {{1, 1}, {0, 1}})});
    OrbitResult orbit = conjugation_orbit(ctx, u.subgroup.key, {});
    CHECK(orbit.complete);
    CHECK(orbit.size == 4);
    CHECK(orbit.orbit.size() == 4);
    CHECK(orbit.orbit.front() == u.subgroup.key);  // start visited first
    for (const SubgroupKey& k : orbit.orbit) CHECK(k.elems.size() == 3);
  }

  TEST_CASE("orbit order is identical for any thread count") {
    GroupCtx ctx = make_gl3_2();
    const Field& F = ctx.F;
    ClosureResult u = subgroup_generated(
        ctx, {from_rows(F, 3, {{1, 1, 0}, {0, 1, 0}, {0, 0, 1}})});
    OrbitOptions one;
    one.threads = 1;
    OrbitOptions four;
    four.threads = 4;
    OrbitResult a = conjugation_orbit(ctx, u.subgroup.key, one);
    OrbitResult b = conjugation_orbit(ctx, u.subgroup.key, four);
    CHECK(a.complete);
    CHECK(b.complete);
    CHECK(a.size == b.size);
    CHECK(a.orbit == b.orbit);
    // 21 conjugates: the transvection group <E12> sits in 168/8 = 21
    // positions (its normalizer is the Sylow-2 normalizer of order 8).
    CHECK(a.size == 21);
  }

  TEST_CASE("orbit budget stops early and reports incomplete") {
    GroupCtx ctx = make_gl3_2();
    const Field& F = ctx.F;
    ClosureResult u = subgroup_generated(
        ctx, {from_rows(F, 3, {{1, 1, 0}, {0, 1, 0}, {0, 0, 1}})});
    OrbitOptions opts;
    opts.budget = 5;
    OrbitResult r = conjugation_orbit(ctx, u.subgroup.key, opts);
    CHECK(!r.complete);
    CHECK(r.size == 5);
    CHECK(r.orbit.size() == 5);
    // The truncated prefix agrees with the full walk's prefix.
    OrbitResult full = conjugation_orbit(ctx, u.subgroup.key, {});
    for (std::size_t i = 0; i < 5; ++i) CHECK(r.orbit[i] == full.orbit[i]);
  }

  TEST_CASE("conjugator override restricts the acting set") {
    GroupCtx ctx = make_gl2_3();
    const Field& F = ctx.F;
    ClosureResult u =
        subgroup_generated(ctx, {from_rows(F, 2, {{1, 1}, {0, 1}})});
    // The diagonal torus normalizes the upper unitriangular subgroup.
    std::vector<Mat> torus = {from_rows(F, 2, {{2, 0}, {0, 1}})};
    OrbitOptions opts;
    opts.conjugators = &torus;
    OrbitResult r = conjugation_orbit(ctx, u.subgroup.key, opts);
    CHECK(r.complete);
    CHECK(r.size == 1);
  }

  TEST_CASE("generic sylow extraction by normalizer growth") {
    GroupCtx gl23 = make_gl2_3();
    SylowResult s2 = sylow_subgroup(gl23, 2);
    CHECK(s2.order == 16);
    CHECK(s2.elements.size() == 16);
    CHECK(s2.strategy == "enumeration+normalizer-growth");
    // Result is closed: regenerating from its gens reproduces it.
    ClosureResult closure = subgroup_generated(gl23, s2.gens, 17);
    CHECK(closure.subgroup.key.elems == s2.elements);

    SylowResult s3 = sylow_subgroup(gl23, 3);
    CHECK(s3.order == 3);

    GroupCtx pgl23 = make_pgl2_3();
    SylowResult p2 = sylow_subgroup(pgl23, 2);
    CHECK(p2.order == 8);

    CHECK_THROWS_AS(sylow_subgroup(gl23, 5), std::invalid_argument);
  }

  TEST_CASE("sylow provider is preferred and validated") {
    GroupCtx ctx = make_gl2_3();
    const Field& F = ctx.F;
    ctx.sylow_provider = [&F](const GroupCtx& c,
                              std::uint32_t ell) -> std::optional<SylowResult> {
      if (ell != 3) return std::nullopt;
      Mat t = from_rows(F, 2, {{1, 1}, {0, 1}});
      ClosureResult r = subgroup_generated(c, {t});
      SylowResult s;
      s.gens = {t};
      s.elements = r.subgroup.key.elems;
      s.order = 3;
      s.strategy = "provider";
      return s;
    };
    SylowResult s = sylow_subgroup(ctx, 3);
    CHECK(s.strategy == "provider");
    CHECK(s.order == 3);
    // Provider declined for ell=2: falls back to the generic route.
    SylowResult s2 = sylow_subgroup(ctx, 2);
    CHECK(s2.strategy == "enumeration+normalizer-growth");

    // A provider returning the wrong order is a logic error.
    ctx.sylow_provider = [](const GroupCtx&,
                            std::uint32_t) -> std::optional<SylowResult> {
      SylowResult s;
      s.order = 5;
      return s;
    };
    CHECK_THROWS_AS(sylow_subgroup(ctx, 3), std::logic_error);
  }

  TEST_CASE("ell part helpers") {
    CHECK(ell_part(BigInt(48), 2) == 16);
    CHECK(ell_valuation(BigInt(48), 2) == 4);
    CHECK(ell_part(BigInt(48), 3) == 3);
    CHECK(ell_part(BigInt(5515776), 3) == 81);
    CHECK(ell_valuation(BigInt(5515776), 3) == 4);
    CHECK(ell_part(BigInt(7), 5) == 1);
    BigInt big("51840");
    CHECK(ell_valuation(big, 3) == 4);  // 51840 = 2^7 * 3^4 * 5
  }

  TEST_CASE("element order of a full multiplicative cycle") {
    GroupCtx ctx(Field::make(2, 6));
    ctx.n = 1;
    Mat g = mat_zero(1);
    g.at(0, 0) = ctx.F.gen();
    ctx.gens = {g};
    ctx.order = 63;
    ctx.name = "C63";
    CHECK(element_order(ctx, g) == 63);
  }
}
