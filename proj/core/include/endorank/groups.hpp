#pragma once
// Builders for the classical matrix groups over small finite fields and
// their central quotients, each delivered as a GroupCtx carrying standard
// generators, the exact group order in closed form, and a named Sylow
// construction for the (family, prime) shapes that admit one:
//
//   - defining characteristic: the full unipotent upper subgroup, from root
//     elements (order q^{#positive roots});
//   - degree ell with ell | q-1 (linear) or ell | q+1 (unitary), ell odd:
//     the torus-normalizer wreath shape generated by a permutation cycle and
//     a diagonal of ell-power order.
//
// Unitary groups (degree 2 and 3 only) are realized with the identity
// hermitian form: generators are first written against the antidiagonal
// form, where the unipotent elements are triangular, then conjugated by an
// orthonormalizing change of basis.  The symplectic group (degree 4 only)
// preserves the fixed block form given below.  The conformal symplectic
// family is order-only: rank computations never need to build it, since
// conjugator searches stay inside the symplectic group and its quotients.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <endorank/matgroup.hpp>

namespace endorank {

enum class Family { GL, SL, GU, SU, Sp, CSp };

enum class QuotientKind {
  none,             // the matrix group itself
  full_center,      // quotient by all central scalars of the group
  central_order,    // quotient by the unique central subgroup of this order
  explicit_scalars  // quotient by the listed scalars g^e
};

struct GroupDescriptor {
  Family family = Family::GL;
  std::uint32_t n = 0;
  std::uint32_t q = 0;  // unitary families: entries live in GF(q^2)
  QuotientKind quotient = QuotientKind::none;
  std::uint64_t quotient_order = 0;  // central_order only
  std::vector<std::uint64_t> quotient_exponents;  // explicit_scalars only
  // When set (GL family only): the subgroup of determinants, the unique
  // multiplicative subgroup of this order; defines the group of matrices
  // whose determinant lies in it, between SL and GL.
  std::optional<std::uint64_t> det_subgroup_order;
};

// Accepts GL, SL, GU, SU, Sp, CSp and the P-prefixed central quotients.
GroupDescriptor descriptor_from_name(const std::string& name, std::uint32_t n,
                                     std::uint32_t q);

// Closed-form order of the described group (after the quotient).
BigInt exact_order(const GroupDescriptor& d);

// Number of central scalars of the un-quotiented matrix group.
std::uint64_t center_order(const GroupDescriptor& d);

// Display name, e.g. "PGL3(4)", "SU3(5)", "Sp4(3)".
std::string group_name(const GroupDescriptor& d);

// Builds the group: generators (verified against the declared form and
// determinant constraints), central spec, exact order, Sylow provider.
// Throws std::invalid_argument for inconsistent or unsupported descriptors
// (CSp is deliberately not buildable).
GroupCtx build_group(const GroupDescriptor& d);

}  // namespace endorank
