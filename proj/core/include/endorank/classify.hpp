#pragma once
// Symbolic rank oracle for the torsion-free part of the endotrivial-module
// group of a finite group of Lie type.  A LieDescriptor names a group by
// root-system data (family, twist, isogeny, q = p^r), optionally marked as a
// central quotient of the simply connected form or as a direct product of
// such groups.  classify() walks a fixed decision tree over that data and
// returns the rank together with a citation string for the rule that decided
// it.  No group elements are ever constructed, which makes the oracle an
// independent cross-check for the orbit-poset pipeline in posetrank.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace endorank {

enum class RootFamily { A, B, C, D, E, F, G };

struct LieDescriptor {
  RootFamily family = RootFamily::A;
  int n = 1;    // Dynkin subscript
  int twist = 1;  // order of the graph symmetry used by the Steinberg map
  // "sc" | "ad" | "other" (an intermediate isogeny form).
  std::string isogeny = "sc";
  std::uint64_t p = 2;  // defining characteristic
  int r = 1;            // q = p^r
  // Central-quotient marker for groups between the simply connected and
  // adjoint forms (type A only):
  //   ""         the isogeny form itself
  //   "psl-like" quotient of the sc form by its full (finite) center
  //   "pgl-like" the adjoint form, offered as a convenience spelling
  //   "hj"       an unresolved intermediate central quotient
  std::string associated = "";
  // Nonempty (size >= 2) makes this a direct product of the listed factors;
  // all other fields of the outer descriptor are then ignored.
  std::vector<LieDescriptor> factors;
  // Optional per-factor annotation: whether ell divides this factor's order.
  // Only read on entries of `factors`; verified against the order polynomial
  // and rejected on mismatch.
  std::optional<bool> ell_divisible;

  bool operator==(const LieDescriptor&) const = default;
};

struct ClassifyResult {
  // Engaged iff the oracle certifies a number for this descriptor.
  std::optional<int> tf_rank;
  // "" for numeric answers, else "unknown-small-q" (degenerate small group
  // outside the generic statements) or "unknown" (caller must resolve the
  // descriptor further, e.g. pick the sc or ad form).
  std::string special;
  std::string rule;  // citation string for the deciding rule
  std::vector<std::string> caveats;

  bool operator==(const ClassifyResult&) const = default;
};

struct OrderEllPart {
  bool divides = false;  // ell divides the group order
  int valuation = 0;     // exact ell-adic valuation of the group order
};

// Validates and canonicalizes a descriptor: checks family/twist/isogeny
// legality (including the characteristic constraints of the very twisted
// B2/G2/F4 families), folds C2 into B2 and twisted A1 into A1, resolves
// "pgl-like" to the adjoint form, and drops isogeny/quotient distinctions
// whenever the fixed-point center is trivial (e.g. type A with
// gcd(n+1, q -/+ 1) = 1, where sc, psl-like and ad name the same group).
// Throws std::invalid_argument on malformed input.
LieDescriptor normalize_descriptor(const LieDescriptor& d);

// Exact ell-part of the group order, from the cyclotomic factorization of
// the order polynomial evaluated at q (products: sum over factors).  For
// "psl-like" quotients the central gcd factor is divided out.
OrderEllPart order_ell_part(const LieDescriptor& d, std::uint64_t ell);

// Number of orbits of the twisting symmetry on the nodes of the Dynkin
// diagram (1 for the very twisted B2/G2 families, 2 for triality D4, ...).
int orbit_count_on_simple_roots(const LieDescriptor& d);

// Decision tree over the descriptor; see the .cpp for the full rule order.
// Throws std::invalid_argument on malformed descriptors and
// std::domain_error when ell does not divide the group order.
ClassifyResult classify(const LieDescriptor& d, std::uint64_t ell);

// Builds a descriptor from a conventional matrix-group name: SL3, PSL3,
// PGL3, SU4, PSU4, PGU4, Sp4, PSp4, SO5, G2, F4, E6, E7, E8, 2B2, 2G2, 2F4,
// 3D4, 2E6.  q must be a prime power.  Throws std::invalid_argument.
LieDescriptor descriptor_from_name(const std::string& name, std::uint64_t q);

// JSON round-trip for descriptors and a stable report encoding for results
// (schema "endorank.classify/v1").  Serialization is byte-deterministic.
std::string descriptor_to_json(const LieDescriptor& d);
LieDescriptor descriptor_from_json(const std::string& text);
std::string classify_to_json(const LieDescriptor& d, std::uint64_t ell,
                             const ClassifyResult& res);

}  // namespace endorank
