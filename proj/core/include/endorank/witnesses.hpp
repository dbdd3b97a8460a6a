#pragma once

// Hand-constructed witness subgroups for the small-rank matrix groups the
// rank computations are calibrated against, in two regimes:
//
//  * build_witness_gl / build_witness_sl: for a degree l in {3, 5} and a
//    prime power q with l | q - 1, explicit generators (monomial cycle,
//    diagonal markers, scalars) for the elementary abelian subgroups that
//    head the distinct conjugacy classes in the projective groups of degree
//    l over GF(q), together with the linear-algebra identities that make
//    them work (Vandermonde conjugator, determinant-class separators).
//
//  * build_witness_defchar: for a prime p, the root-subgroup configuration
//    of the p + 1 maximal elementary abelian subgroups inside a Sylow
//    p-subgroup of the degree-3 linear or unitary group over its prime
//    field, plus literal diagonal-torus orbit counts cross-checked against
//    the closed-form class counts.
//
// Every builder verifies its identities eagerly and throws std::logic_error
// on the first failure; the `checks` vector lists the names of the
// identities that passed, in order, so callers can dump them.

#include <cstdint>
#include <string>
#include <vector>

#include <endorank/field.hpp>
#include <endorank/matgroup.hpp>

namespace endorank {

// Witness data for the general linear group of degree ell over GF(q),
// ell | q - 1, and its projective quotient.  s is the exact power to which
// ell divides q - 1; gamma generates the Sylow ell-subgroup of GF(q)^x and
// zeta = gamma^(ell^(s-1)) has order ell.
//
// x is the ell-cycle permutation matrix, y = diag(gamma, 1, ..., 1),
// z = gamma.I, a = y^(ell^(s-1)), b = diag(1, zeta, ..., zeta^(ell-1)).
// E1 is generated by the x-conjugates of a together with z; E2 by x, b, z;
// E3 by y.x, b, z.  The third seed is y.x rather than a.x: the image of a
// subgroup in the projective group carries a well-defined determinant class
// modulo ell-th powers (scalar representatives shift determinants by exact
// ell-th powers), every order-ell element of the E2 image has trivial
// class, and y.x has class gamma, which is never an ell-th power — whereas
// the a.x seed loses that separator whenever s >= 2 and its closure merges
// into the E2 class.
struct WitnessSetGL {
  explicit WitnessSetGL(Field f) : F(std::move(f)) {}

  std::uint32_t ell = 0;
  std::uint32_t q = 0;
  std::uint32_t s = 0;
  Field F;
  FieldElem gamma = 0;
  FieldElem zeta = 0;
  Mat x, y, z, a, b;
  Subgroup E1_gl, E2_gl, E3_gl;  // closures in the degree-ell linear group
  Subgroup E1, E2, E3;           // their images in the projective group
  std::vector<std::string> checks;
};

WitnessSetGL build_witness_gl(std::uint32_t ell, std::uint32_t q);

// Witness data for the special linear group of degree ell over GF(q) and
// its projective quotient.  z = zeta.I now has determinant 1 and order ell;
// w = x^-1 y^-1 x y = diag(gamma, gamma^-1, 1, ..., 1) crosses determinant
// classes, and E_i = <w^i x, b, z> for i = 0..ell-1 are extraspecial of
// order ell^3 and exponent ell inside the special linear group.  They are
// pairwise distinct unless ell = 3 and s = 1, where all of them coincide
// (the depth dichotomy behind the class counts: for ell = 3 the families
// separate only once 9 | q - 1, for ell >= 5 the first depth suffices).
// v is the Vandermonde matrix
// v[j][k] = zeta^(jk); mu is a scalar with mu^2 = eps.ell (eps = (-1)^((ell-1)/2))
// and mu^ell = det(v), so h = mu^-1 v lands in the special linear group and
// conjugates x to b, b to x^-1.
struct WitnessSetSL {
  explicit WitnessSetSL(Field f) : F(std::move(f)) {}

  std::uint32_t ell = 0;
  std::uint32_t q = 0;
  std::uint32_t s = 0;
  Field F;
  FieldElem gamma = 0;
  FieldElem zeta = 0;
  FieldElem mu = 0;
  int eps = 0;  // (-1)^((ell-1)/2), the sign in mu^2 = eps.ell
  Mat x, y, z, b, w, v, h;
  std::vector<Subgroup> E_sl;   // closures in the special linear group
  std::vector<Subgroup> E_psl;  // their images in the projective quotient
  std::vector<std::string> checks;
};

WitnessSetSL build_witness_sl(std::uint32_t ell, std::uint32_t q);

// Defining-characteristic witnesses: the maximal elementary abelian
// subgroups of a Sylow p-subgroup U (order p^3) of the degree-3 linear
// group over GF(p) (variant linear) or the degree-3 unitary group over
// GF(p^2) (variant unitary, p >= 3; the form is antidiag(1, -1, 1), which
// the lower unitriangular root elements preserve on the nose).
//
// The census is computed by an argument independent of generic subgroup
// enumeration: U has center of order p, every noncyclic elementary abelian
// subgroup contains a noncentral element and hence lies inside that
// element's centralizer, and the centralizers of noncentral elements are
// verified to be abelian of exponent p — so the distinct such centralizers
// are exactly the maximal elementary abelians.  The census is then matched
// against the explicit root-subgroup configuration:
//
//  * linear: E_0 = <x_alpha, x_alphabeta>, E_i = <x_alpha x_beta^i,
//    x_alphabeta> (0 < i < p), E_p = <x_beta, x_alphabeta>; p = 2 collapses
//    to the two Klein subgroups of a dihedral Sylow subgroup.
//  * unitary: E_i = <x_line[i], z_center> for the p + 1 root lines.
//
// torus_classes_full / torus_classes_det1 are literal orbit counts of the
// diagonal torus (all of it, resp. its determinant-1 part) acting on the
// census; they are verified against the closed forms: linear 3 resp.
// 2 + cube_coset_count(p) for odd p (2 and 2 at p = 2), unitary 1 resp.
// gcd(3, p + 1).
enum class DefCharVariant { linear, unitary };

struct WitnessSetDefChar {
  explicit WitnessSetDefChar(Field f) : F(std::move(f)) {}

  DefCharVariant variant = DefCharVariant::linear;
  std::uint32_t p = 0;
  Field F;  // GF(p) for linear, GF(p^2) for unitary
  Mat x_alpha, x_beta, x_alphabeta;  // linear root elements
  std::vector<Mat> x_line;           // unitary root elements, size p + 1
  Mat z_center;                      // unitary central root element
  std::vector<Subgroup> E;           // maximal elementary abelians of U
  std::size_t torus_classes_full = 0;
  std::size_t torus_classes_det1 = 0;
  std::vector<std::string> checks;
};

WitnessSetDefChar build_witness_defchar(std::uint32_t p, DefCharVariant variant);

// Number of cosets of the cubes in GF(p)^x that the index multipliers of
// the middle root lines can occupy: 3 when p = 1 (mod 3), else 1.
int cube_coset_count(std::uint32_t p);

}  // namespace endorank
