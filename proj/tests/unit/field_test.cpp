#include <doctest.h>

#include <endorank/field.hpp>

#include <random>
#include <stdexcept>
#include <vector>

using endorank::Field;
using endorank::FieldElem;

namespace {

// The (p, k) pairs the project's group grid actually touches.
const std::vector<std::pair<std::uint32_t, std::uint32_t>> kGridFields = {
    {2, 1},  {2, 2},  {2, 4},  {2, 6},  {3, 1},  {3, 2},  {3, 3},
    {5, 1},  {5, 2},  {7, 1},  {7, 2},  {11, 1}, {11, 2}, {13, 1},
    {13, 2}, {17, 1}, {19, 1}, {31, 1}, {37, 1}, {41, 1}, {43, 1},
    {61, 1}};

}  // namespace

TEST_SUITE("field") {
  TEST_CASE("gf4 arithmetic matches the hand calculation") {
    Field F = Field::make(2, 2);
    CHECK(F.q() == 4);
    const FieldElem g = F.gen();
    // g^2 = g + 1 for the defining polynomial x^2 + x + 1.
    CHECK(F.mul(g, g) == F.add(g, F.one()));
    CHECK(F.multiplicative_order(g) == 3);
    CHECK(F.defining_poly() == std::vector<std::uint32_t>{1, 1, 1});
    // Characteristic 2: x + x = 0.
    CHECK(F.add(g, g) == F.zero());
    CHECK(F.neg(g) == g);
  }

  TEST_CASE("gf7 uses the smallest primitive root") {
    Field F = Field::make(7, 1);
    // 3 is the least primitive root mod 7, so gen() is the class of 3.
    CHECK(F.gen() == F.from_int(3));
    CHECK(F.inv(F.from_int(3)) == F.from_int(5));
    CHECK(F.multiplicative_order(F.from_int(2)) == 3);
    CHECK(F.multiplicative_order(F.from_int(3)) == 6);
    CHECK(F.add(F.from_int(3), F.from_int(5)) == F.from_int(1));
    CHECK(F.mul(F.from_int(4), F.from_int(2)) == F.from_int(1));
  }

  TEST_CASE("oversized fields are rejected") {
    CHECK_THROWS_AS(Field::make(2, 17), std::invalid_argument);
    CHECK_THROWS_AS(Field::make(4, 1), std::invalid_argument);   // not prime
    CHECK_THROWS_AS(Field::make(15, 1), std::invalid_argument);  // not prime
    CHECK_THROWS_AS(Field::make(257, 2), std::invalid_argument);
  }

  TEST_CASE("gf64 frobenius has order six") {
    Field F = Field::make(2, 6);
    CHECK(F.q() == 64);
    for (std::uint32_t i = 0; i < 64; ++i) {
      const FieldElem a = static_cast<FieldElem>(i);
      CHECK(F.frobenius(a, 6) == a);
      CHECK(F.frobenius(a, 1) == F.mul(a, a));
    }
    // Frobenius^3 fixes exactly the GF(8) subfield (8 elements).
    int fixed = 0;
    for (std::uint32_t i = 0; i < 64; ++i)
      if (F.frobenius(static_cast<FieldElem>(i), 3) == i) ++fixed;
    CHECK(fixed == 8);
  }

  TEST_CASE("gf2 degenerate generator") {
    Field F = Field::make(2, 1);
    CHECK(F.gen() == F.one());
    CHECK(F.add(F.one(), F.one()) == F.zero());
    CHECK(F.multiplicative_order(F.one()) == 1);
  }

  TEST_CASE("pinned defining polynomials") {
    CHECK(Field::make(2, 3).defining_poly() ==
          std::vector<std::uint32_t>{1, 1, 0, 1});
    CHECK(Field::make(2, 4).defining_poly() ==
          std::vector<std::uint32_t>{1, 1, 0, 0, 1});
    CHECK(Field::make(2, 6).defining_poly() ==
          std::vector<std::uint32_t>{1, 1, 0, 1, 1, 0, 1});
    CHECK(Field::make(3, 2).defining_poly() ==
          std::vector<std::uint32_t>{2, 2, 1});
    CHECK(Field::make(3, 3).defining_poly() ==
          std::vector<std::uint32_t>{1, 2, 0, 1});
    CHECK(Field::make(5, 2).defining_poly() ==
          std::vector<std::uint32_t>{2, 4, 1});
    CHECK(Field::make(7, 2).defining_poly() ==
          std::vector<std::uint32_t>{3, 6, 1});
    CHECK(Field::make(11, 2).defining_poly() ==
          std::vector<std::uint32_t>{2, 7, 1});
    CHECK(Field::make(13, 2).defining_poly() ==
          std::vector<std::uint32_t>{2, 12, 1});
  }

  TEST_CASE("poly coordinates round-trip") {
    for (auto [p, k] :
         std::vector<std::pair<std::uint32_t, std::uint32_t>>{{2, 6},
                                                              {3, 2},
                                                              {5, 2},
                                                              {7, 1}}) {
      Field F = Field::make(p, k);
      for (std::uint32_t i = 0; i < F.q(); ++i) {
        const FieldElem a = static_cast<FieldElem>(i);
        auto coords = F.to_poly(a);
        CHECK(coords.size() == k);
        CHECK(F.from_poly(coords) == a);
      }
    }
  }

  TEST_CASE("display names") {
    Field F = Field::make(3, 2);
    CHECK(F.display(F.zero()) == "0");
    CHECK(F.display(F.one()) == "1");
    CHECK(F.display(F.gen()) == "g");
    CHECK(F.display(F.mul(F.gen(), F.gen())) == "g^2");
  }

  TEST_CASE("field axioms hold on random samples") {
    std::mt19937_64 rng(0x5eedf1e1d);
    for (auto [p, k] : kGridFields) {
      Field F = Field::make(p, k);
      std::uniform_int_distribution<std::uint32_t> dist(0, F.q() - 1);
      for (int trial = 0; trial < 400; ++trial) {
        const FieldElem a = static_cast<FieldElem>(dist(rng));
        const FieldElem b = static_cast<FieldElem>(dist(rng));
        const FieldElem c = static_cast<FieldElem>(dist(rng));
        CHECK(F.add(a, b) == F.add(b, a));
        CHECK(F.mul(a, b) == F.mul(b, a));
        CHECK(F.add(F.add(a, b), c) == F.add(a, F.add(b, c)));
        CHECK(F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c)));
        CHECK(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
        CHECK(F.add(a, F.neg(a)) == F.zero());
        CHECK(F.add(a, F.zero()) == a);
        CHECK(F.mul(a, F.one()) == a);
        CHECK(F.mul(a, F.zero()) == F.zero());
        if (a != 0) {
          CHECK(F.mul(a, F.inv(a)) == F.one());
          CHECK(F.pow(a, static_cast<std::int64_t>(F.q()) - 1) == F.one());
          CHECK(F.pow(a, -1) == F.inv(a));
          CHECK(F.multiplicative_order(a) % 1 == 0);
          CHECK((F.q() - 1) % F.multiplicative_order(a) == 0);
        }
        // Frobenius is a ring homomorphism fixing the prime field.
        CHECK(F.frobenius(F.add(a, b), 1) ==
              F.add(F.frobenius(a, 1), F.frobenius(b, 1)));
        CHECK(F.frobenius(F.mul(a, b), 1) ==
              F.mul(F.frobenius(a, 1), F.frobenius(b, 1)));
        CHECK(F.frobenius(a, F.k()) == a);
      }
      CHECK(F.frobenius(F.from_int(p - 1), 1) == F.from_int(p - 1));
    }
  }

  TEST_CASE("generator has full multiplicative order on the grid") {
    for (auto [p, k] : kGridFields) {
      Field F = Field::make(p, k);
      if (F.q() == 2) continue;
      CHECK(F.multiplicative_order(F.gen()) == F.q() - 1);
    }
  }
}
