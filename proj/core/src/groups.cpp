#include <endorank/groups.hpp>

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace endorank {
namespace {

bool is_linear(Family f) { return f == Family::GL || f == Family::SL; }
bool is_unitary(Family f) { return f == Family::GU || f == Family::SU; }

struct PrimePower {
  std::uint32_t p = 0, r = 0;
};

PrimePower factor_prime_power(std::uint32_t q) {
  if (q < 2) throw std::invalid_argument("q must be at least 2");
  std::uint32_t p = q;
  for (std::uint32_t d = 2; d * d <= q; ++d) {
    if (q % d == 0) {
      p = d;
      break;
    }
  }
  PrimePower pp{p, 0};
  std::uint32_t m = q;
  while (m % p == 0) {
    m /= p;
    ++pp.r;
  }
  if (m != 1)
    throw std::invalid_argument("q = " + std::to_string(q) +
                                " is not a prime power");
  return pp;
}

BigInt big_pow(std::uint32_t base, std::uint32_t e) {
  BigInt r = 1;
  for (std::uint32_t i = 0; i < e; ++i) r *= base;
  return r;
}

std::string family_str(Family f) {
  switch (f) {
    case Family::GL: return "GL";
    case Family::SL: return "SL";
    case Family::GU: return "GU";
    case Family::SU: return "SU";
    case Family::Sp: return "Sp";
    case Family::CSp: return "CSp";
  }
  throw std::logic_error("unreachable family");
}

void validate(const GroupDescriptor& d) {
  const PrimePower pp = factor_prime_power(d.q);
  switch (d.family) {
    case Family::GL:
    case Family::SL:
      if (d.n < 2 || d.n > kMaxDegree)
        throw std::invalid_argument("linear degree must be in [2,6]");
      if (static_cast<std::uint64_t>(d.q) >= kMaxFieldSize)
        throw std::invalid_argument("field too large");
      break;
    case Family::GU:
    case Family::SU:
      if (d.n != 2 && d.n != 3)
        throw std::invalid_argument("unitary groups are built in degree 2 or 3 only");
      if (static_cast<std::uint64_t>(d.q) * d.q >= kMaxFieldSize)
        throw std::invalid_argument("field GF(q^2) too large");
      break;
    case Family::Sp:
    case Family::CSp:
      if (d.n != 4)
        throw std::invalid_argument("symplectic groups are built in degree 4 only");
      if (static_cast<std::uint64_t>(d.q) >= kMaxFieldSize)
        throw std::invalid_argument("field too large");
      break;
  }
  if (d.det_subgroup_order) {
    if (d.family != Family::GL)
      throw std::invalid_argument(
          "determinant subgroups only refine the GL family");
    const std::uint64_t M = *d.det_subgroup_order;
    if (M == 0 || (d.q - 1) % M != 0)
      throw std::invalid_argument(
          "determinant subgroup order must divide q-1");
  }
  if (d.quotient == QuotientKind::central_order) {
    const std::uint64_t z = center_order(d);
    if (d.quotient_order == 0 || z % d.quotient_order != 0)
      throw std::invalid_argument(
          "quotient order must divide the center order " + std::to_string(z));
  }
  (void)pp;
}

// ---- matrix building blocks -------------------------------------------------

Mat diag_mat(const Field& F, const std::vector<FieldElem>& d) {
  Mat m = mat_zero(static_cast<std::uint32_t>(d.size()));
  (void)F;
  for (std::uint32_t i = 0; i < d.size(); ++i) m.at(i, i) = d[i];
  return m;
}

// I + c E_ij.
Mat elem_mat(const Field& F, std::uint32_t n, std::uint32_t i, std::uint32_t j,
             FieldElem c) {
  Mat m = mat_identity(F, n);
  m.at(i, j) = F.add(m.at(i, j), c);
  return m;
}

// Cycle e_j -> e_{j+1 mod n}; the wrap entry carries the sign needed for
// determinant one (the n-cycle permutation has determinant (-1)^(n-1)).
Mat signed_cycle(const Field& F, std::uint32_t n) {
  Mat m = mat_zero(n);
  for (std::uint32_t j = 0; j + 1 < n; ++j) m.at(j + 1, j) = F.one();
  m.at(0, n - 1) = (n % 2 == 0) ? F.neg(F.one()) : F.one();
  return m;
}

// The GF(p)-basis 1, g, ..., g^(k-1) of GF(q).
std::vector<FieldElem> prime_basis(const Field& F) {
  std::vector<FieldElem> basis;
  for (std::uint32_t j = 0; j < F.k(); ++j)
    basis.push_back(F.pow(F.gen(), j));
  return basis;
}

std::vector<Mat> sl_generators(const Field& F, std::uint32_t n) {
  std::vector<Mat> gens;
  for (FieldElem c : prime_basis(F)) gens.push_back(elem_mat(F, n, 0, 1, c));
  gens.push_back(signed_cycle(F, n));
  return gens;
}

// ---- symplectic form and transvections --------------------------------------

Mat symplectic_form(const Field& F) {
  Mat f = mat_zero(4);
  f.at(0, 1) = F.one();
  f.at(1, 0) = F.neg(F.one());
  f.at(2, 3) = F.one();
  f.at(3, 2) = F.neg(F.one());
  return f;
}

// T_v(c): x -> x + c <x,v> v with <x,v> = x^T f v, i.e. I + c v (f v)^T.
Mat symplectic_transvection(const Field& F, const Mat& f,
                            const std::vector<FieldElem>& v, FieldElem c) {
  const std::uint32_t n = 4;
  std::vector<FieldElem> fv(n, 0);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j)
      fv[i] = F.add(fv[i], F.mul(f.at(i, j), v[j]));
  Mat m = mat_identity(F, n);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j)
      m.at(i, j) = F.add(m.at(i, j), F.mul(c, F.mul(v[i], fv[j])));
  return m;
}

std::vector<Mat> sp4_generators(const Field& F) {
  const Mat f = symplectic_form(F);
  const std::vector<std::vector<FieldElem>> dirs = {
      {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, 1, 0}};
  std::vector<Mat> gens;
  for (const auto& v : dirs)
    for (FieldElem c : prime_basis(F))
      gens.push_back(symplectic_transvection(F, f, v, c));
  return gens;
}

// The four positive-root one-parameter subgroups of the symplectic group,
// whose product is a full unipotent subgroup of order q^4.
std::vector<Mat> sp4_unipotent_generators(const Field& F) {
  const Mat f = symplectic_form(F);
  std::vector<Mat> gens;
  for (FieldElem c : prime_basis(F)) {
    gens.push_back(symplectic_transvection(F, f, {1, 0, 0, 0}, c));
    gens.push_back(symplectic_transvection(F, f, {0, 0, 1, 0}, c));
    Mat a = mat_identity(F, 4);  // e3 -> e3 + c e1, e2 -> e2 - c e4
    a.at(0, 2) = c;
    a.at(3, 1) = F.neg(c);
    gens.push_back(a);
    Mat b = mat_identity(F, 4);  // e2 -> e2 + c e3, e4 -> e4 + c e1
    b.at(2, 1) = c;
    b.at(0, 3) = c;
    gens.push_back(b);
  }
  return gens;
}

// ---- unitary model -----------------------------------------------------------

// Everything needed to build unitary groups with the identity hermitian
// form.  Generators are natural against the antidiagonal form J (reversal
// matrix), where unipotent elements are triangular; conjugating by D with
// D* J D = I transports them to the identity-form group.
struct UnitaryModel {
  Field F;          // GF(q^2)
  std::uint32_t q;  // base field size
  std::uint32_t r;  // q = p^r
  std::uint32_t n;
  Mat D, Dinv;
};

Mat conj_transpose(const Field& F, const Mat& m, std::uint32_t r) {
  return transpose(entrywise_frobenius(F, m, r));
}

Mat reversal_mat(const Field& F, std::uint32_t n) {
  Mat j = mat_zero(n);
  for (std::uint32_t i = 0; i < n; ++i) j.at(i, n - 1 - i) = F.one();
  return j;
}

// x + x^q, the trace to the base field.
FieldElem base_trace(const Field& F, std::uint32_t r, FieldElem x) {
  return F.add(x, F.frobenius(x, r));
}

UnitaryModel make_unitary_model(std::uint32_t n, std::uint32_t q) {
  const PrimePower pp = factor_prime_power(q);
  UnitaryModel M{Field::make(pp.p, 2 * pp.r), q, pp.r, n, Mat{}, Mat{}};
  const Field& F = M.F;
  // beta with beta + beta^q = 1, rho with rho^(q+1) = -1: first matches in
  // index order, so the basis is reproducible.
  FieldElem beta = 0, rho = 0;
  for (std::uint32_t i = 1; i < F.q(); ++i) {
    if (base_trace(F, M.r, static_cast<FieldElem>(i)) == F.one()) {
      beta = static_cast<FieldElem>(i);
      break;
    }
  }
  const FieldElem minus_one = F.neg(F.one());
  for (std::uint32_t i = 1; i < F.q(); ++i) {
    if (F.pow(static_cast<FieldElem>(i), q + 1) == minus_one) {
      rho = static_cast<FieldElem>(i);
      break;
    }
  }
  if (beta == 0 || rho == 0)
    throw std::logic_error("unitary basis scan failed");
  const FieldElem beta_q = F.frobenius(beta, M.r);
  Mat D = mat_zero(n);
  if (n == 2) {
    D.at(0, 0) = F.one();
    D.at(1, 0) = beta;
    D.at(0, 1) = rho;
    D.at(1, 1) = F.mul(rho, F.neg(beta_q));
  } else {
    D.at(0, 0) = F.one();
    D.at(2, 0) = beta;
    D.at(1, 1) = F.one();
    D.at(0, 2) = rho;
    D.at(2, 2) = F.mul(rho, F.neg(beta_q));
  }
  const Mat J = reversal_mat(F, n);
  if (mat_mul(F, mat_mul(F, conj_transpose(F, D, M.r), J), D) !=
      mat_identity(F, n))
    throw std::logic_error("unitary basis change is not orthonormal");
  M.D = D;
  M.Dinv = mat_inv(F, D);
  return M;
}

Mat to_identity_model(const UnitaryModel& M, const Mat& x) {
  return mat_mul(M.F, mat_mul(M.F, M.Dinv, x), M.D);
}

// Upper unipotent elements of the antidiagonal-form unitary group.  Degree 3:
// rows (1, a, b; 0, 1, -a^q; 0, 0, 1) with b + b^q = -a^(q+1); degree 2:
// (1, b; 0, 1) with b + b^q = 0.
Mat antidiag_upper3(const UnitaryModel& M, FieldElem a, FieldElem b) {
  const Field& F = M.F;
  Mat u = mat_identity(F, 3);
  u.at(0, 1) = a;
  u.at(0, 2) = b;
  u.at(1, 2) = F.neg(F.frobenius(a, M.r));
  return u;
}

// First b (in index order) with b + b^q = -a^(q+1).
FieldElem solve_upper_b(const UnitaryModel& M, FieldElem a) {
  const Field& F = M.F;
  const FieldElem target = F.neg(F.pow(a, M.q + 1));
  for (std::uint32_t i = 0; i < F.q(); ++i)
    if (base_trace(F, M.r, static_cast<FieldElem>(i)) == target)
      return static_cast<FieldElem>(i);
  throw std::logic_error("no trace solution for unipotent entry");
}

// Generators of the full upper unipotent subgroup, in the identity model:
// one element per prime-basis direction of the top-row parameter plus every
// nonzero trace-zero center element.
std::vector<Mat> unitary_unipotent_generators(const UnitaryModel& M) {
  const Field& F = M.F;
  std::vector<Mat> gens;
  if (M.n == 3) {
    for (std::uint32_t j = 0; j < F.k(); ++j) {
      const FieldElem a = F.pow(F.gen(), j);
      gens.push_back(
          to_identity_model(M, antidiag_upper3(M, a, solve_upper_b(M, a))));
    }
    for (std::uint32_t i = 1; i < F.q(); ++i) {
      const FieldElem b = static_cast<FieldElem>(i);
      if (base_trace(F, M.r, b) == F.zero())
        gens.push_back(to_identity_model(M, antidiag_upper3(M, 0, b)));
    }
  } else {
    for (std::uint32_t i = 1; i < F.q(); ++i) {
      const FieldElem b = static_cast<FieldElem>(i);
      if (base_trace(F, M.r, b) != F.zero()) continue;
      Mat u = mat_identity(F, 2);
      u.at(0, 1) = b;
      gens.push_back(to_identity_model(M, u));
    }
  }
  return gens;
}

std::vector<Mat> unitary_group_generators(const UnitaryModel& M,
                                          bool general) {
  const Field& F = M.F;
  const Mat J = reversal_mat(F, M.n);
  std::vector<Mat> uppers;
  // Rebuild the antidiagonal-model uppers so the lowers J u J stay exact.
  if (M.n == 3) {
    for (std::uint32_t j = 0; j < F.k(); ++j) {
      const FieldElem a = F.pow(F.gen(), j);
      uppers.push_back(antidiag_upper3(M, a, solve_upper_b(M, a)));
    }
    for (std::uint32_t i = 1; i < F.q(); ++i)
      if (base_trace(F, M.r, static_cast<FieldElem>(i)) == F.zero())
        uppers.push_back(antidiag_upper3(M, 0, static_cast<FieldElem>(i)));
  } else {
    for (std::uint32_t i = 1; i < F.q(); ++i) {
      if (base_trace(F, M.r, static_cast<FieldElem>(i)) != F.zero()) continue;
      Mat u = mat_identity(F, 2);
      u.at(0, 1) = static_cast<FieldElem>(i);
      uppers.push_back(u);
    }
  }
  std::vector<Mat> gens;
  for (const Mat& u : uppers) {
    gens.push_back(to_identity_model(M, u));
    gens.push_back(to_identity_model(M, mat_mul(F, mat_mul(F, J, u), J)));
  }
  const FieldElem t = F.gen();
  if (M.n == 3) {
    const FieldElem tq = F.frobenius(t, M.r);
    gens.push_back(to_identity_model(
        M, diag_mat(F, {t, F.div(tq, t), F.inv(tq)})));
    if (general)
      gens.push_back(to_identity_model(M, diag_mat(F, {t, F.one(), F.inv(tq)})));
  } else {
    const FieldElem a = F.pow(t, M.q + 1);  // generates the base field units
    if (a != F.one())
      gens.push_back(to_identity_model(M, diag_mat(F, {a, F.inv(a)})));
    if (general)
      gens.push_back(
          to_identity_model(M, diag_mat(F, {t, F.inv(F.frobenius(t, M.r))})));
  }
  return gens;
}

// ---- centers and quotients ---------------------------------------------------

// All central scalars of the matrix group itself (before any quotient).
std::vector<FieldElem> center_scalars(const GroupDescriptor& d,
                                      const Field& F) {
  std::vector<FieldElem> out;
  const std::uint32_t Q = F.q();
  auto add_mth_roots = [&](std::uint64_t m) {
    for (std::uint32_t i = 1; i < Q; ++i)
      if (F.pow(static_cast<FieldElem>(i),
                static_cast<std::int64_t>(m)) == F.one())
        out.push_back(static_cast<FieldElem>(i));
  };
  switch (d.family) {
    case Family::GL:
      if (d.det_subgroup_order) {
        // lambda I lies in the group iff lambda^n lands in the determinant
        // subgroup, the unique one of order M.
        const std::uint64_t M = *d.det_subgroup_order;
        for (std::uint32_t i = 1; i < Q; ++i) {
          const FieldElem det = F.pow(static_cast<FieldElem>(i), d.n);
          if (M % F.multiplicative_order(det) == 0)
            out.push_back(static_cast<FieldElem>(i));
        }
      } else {
        for (std::uint32_t i = 1; i < Q; ++i)
          out.push_back(static_cast<FieldElem>(i));
      }
      break;
    case Family::SL:
      add_mth_roots(d.n);
      break;
    case Family::GU:
      add_mth_roots(d.q + 1);
      break;
    case Family::SU:
      add_mth_roots(std::gcd<std::uint64_t>(d.n, d.q + 1));
      break;
    case Family::Sp:
      add_mth_roots(2);
      break;
    case Family::CSp:
      for (std::uint32_t i = 1; i < Q; ++i)
        out.push_back(static_cast<FieldElem>(i));
      break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

CentralSpec materialize_quotient(const GroupDescriptor& d, const Field& F) {
  CentralSpec spec = CentralSpec::trivial();
  if (d.quotient == QuotientKind::none) return spec;
  const std::vector<FieldElem> center = center_scalars(d, F);
  if (d.quotient == QuotientKind::full_center) {
    spec.scalars = center;
    return spec;
  }
  if (d.quotient == QuotientKind::central_order) {
    // The center is cyclic, so the subgroup of each dividing order is the
    // set of elements whose order divides it.
    spec.scalars.clear();
    for (FieldElem z : center)
      if (d.quotient_order % F.multiplicative_order(z) == 0)
        spec.scalars.push_back(z);
    if (spec.scalars.size() != d.quotient_order)
      throw std::invalid_argument("no central subgroup of the requested order");
    return spec;
  }
  // explicit_scalars
  spec.scalars.clear();
  spec.scalars.push_back(F.one());
  for (std::uint64_t e : d.quotient_exponents) {
    const FieldElem z = F.pow(F.gen(), static_cast<std::int64_t>(e));
    if (std::find(center.begin(), center.end(), z) == center.end())
      throw std::invalid_argument("listed scalar is not central in the group");
    spec.scalars.push_back(z);
  }
  std::sort(spec.scalars.begin(), spec.scalars.end());
  spec.scalars.erase(std::unique(spec.scalars.begin(), spec.scalars.end()),
                     spec.scalars.end());
  for (FieldElem a : spec.scalars)
    for (FieldElem b : spec.scalars)
      if (!std::binary_search(spec.scalars.begin(), spec.scalars.end(),
                              F.mul(a, b)))
        throw std::invalid_argument("listed scalars do not form a subgroup");
  return spec;
}

// ---- sylow providers ---------------------------------------------------------

SylowResult closure_provider(const GroupCtx& ctx, std::vector<Mat> gens,
                             std::uint64_t expected, const char* strategy) {
  for (Mat& g : gens) g = canonicalize(ctx.F, ctx.central, g);
  ClosureResult r = subgroup_generated(ctx, gens, expected + 1);
  if (r.refused)
    throw std::logic_error(std::string(strategy) +
                           " construction exceeded its expected order in " +
                           ctx.name);
  SylowResult s;
  s.gens = std::move(gens);
  s.elements = r.subgroup.key.elems;
  s.order = s.elements.size();
  s.strategy = strategy;
  return s;
}

// The expected order of a named construction, as the ell-part of the group
// order; refuses groups whose ell-part is beyond desk scale.
std::uint64_t ell_part_checked(const GroupCtx& ctx, std::uint32_t ell) {
  constexpr std::uint64_t kMaxNamedSylow = 1u << 21;
  BigInt part = 1;
  BigInt m = ctx.order;
  while (m % ell == 0) {
    m /= ell;
    part *= ell;
    if (part > kMaxNamedSylow)
      throw std::runtime_error("Sylow subgroup of " + ctx.name +
                               " is beyond desk scale");
  }
  return static_cast<std::uint64_t>(part);
}

std::optional<SylowResult> defchar_provider(const GroupCtx& ctx,
                                            const GroupDescriptor& d,
                                            const UnitaryModel* model) {
  const std::uint64_t expected = ell_part_checked(ctx, ctx.F.p());
  std::vector<Mat> gens;
  switch (d.family) {
    case Family::GL:
    case Family::SL:
      for (std::uint32_t i = 0; i + 1 < d.n; ++i)
        for (FieldElem c : prime_basis(ctx.F))
          gens.push_back(elem_mat(ctx.F, d.n, i, i + 1, c));
      break;
    case Family::GU:
    case Family::SU:
      gens = unitary_unipotent_generators(*model);
      break;
    case Family::Sp:
      gens = sp4_unipotent_generators(ctx.F);
      break;
    case Family::CSp:
      return std::nullopt;
  }
  return closure_provider(ctx, std::move(gens), expected, "unitriangular");
}

// Degree-ell torus-normalizer construction: an ell-power-order diagonal and
// the ell-cycle x with x[i][j] = 1 iff j = i+1 (mod ell).
std::optional<SylowResult> wreath_provider(const GroupCtx& ctx,
                                           const GroupDescriptor& d,
                                           std::uint32_t ell) {
  const Field& F = ctx.F;
  const bool special = d.family == Family::SL || d.family == Family::SU;
  FieldElem gamma;
  if (is_linear(d.family)) {
    if ((d.q - 1) % ell != 0) return std::nullopt;
    const std::uint32_t s = ell_valuation(BigInt(d.q - 1), ell);
    std::uint64_t ls = 1;
    for (std::uint32_t i = 0; i < s; ++i) ls *= ell;
    gamma = F.pow(F.gen(), (d.q - 1) / ls);
  } else {
    if ((d.q + 1) % ell != 0) return std::nullopt;
    const std::uint32_t s = ell_valuation(BigInt(d.q + 1), ell);
    std::uint64_t ls = 1;
    for (std::uint32_t i = 0; i < s; ++i) ls *= ell;
    const FieldElem mu = F.pow(F.gen(), d.q - 1);  // norm-one generator
    gamma = F.pow(mu, (d.q + 1) / ls);
  }
  Mat x = mat_zero(d.n);
  for (std::uint32_t i = 0; i < d.n; ++i) x.at(i, (i + 1) % d.n) = F.one();
  std::vector<FieldElem> diag(d.n, F.one());
  diag[0] = gamma;
  const Mat y = diag_mat(F, diag);
  std::vector<Mat> gens;
  if (special) {
    const Mat w = mat_mul(F, mat_mul(F, mat_inv(F, x), mat_inv(F, y)),
                          mat_mul(F, x, y));
    gens = {x, w};
  } else {
    gens = {x, y};
  }
  const std::uint64_t expected = ell_part_checked(ctx, ell);
  return closure_provider(ctx, std::move(gens), expected,
                          is_linear(d.family) ? "wreath-linear"
                                              : "wreath-unitary");
}

}  // namespace

std::uint64_t center_order(const GroupDescriptor& d) {
  const std::uint64_t q = d.q;
  switch (d.family) {
    case Family::GL:
      if (d.det_subgroup_order) {
        const std::uint64_t g = std::gcd<std::uint64_t>(d.n, q - 1);
        return g * std::gcd(*d.det_subgroup_order, (q - 1) / g);
      }
      return q - 1;
    case Family::SL: return std::gcd<std::uint64_t>(d.n, q - 1);
    case Family::GU: return q + 1;
    case Family::SU: return std::gcd<std::uint64_t>(d.n, q + 1);
    case Family::Sp: return std::gcd<std::uint64_t>(2, q - 1);
    case Family::CSp: return q - 1;
  }
  throw std::logic_error("unreachable family");
}

BigInt exact_order(const GroupDescriptor& d) {
  validate(d);
  const std::uint32_t q = d.q;
  BigInt base;
  switch (d.family) {
    case Family::GL:
    case Family::SL: {
      base = big_pow(q, d.n * (d.n - 1) / 2);
      for (std::uint32_t i = 1; i <= d.n; ++i) base *= big_pow(q, i) - 1;
      if (d.family == Family::SL) base /= q - 1;
      if (d.det_subgroup_order) base = base / (q - 1) * *d.det_subgroup_order;
      break;
    }
    case Family::GU:
    case Family::SU: {
      base = big_pow(q, d.n * (d.n - 1) / 2);
      for (std::uint32_t i = 1; i <= d.n; ++i) {
        BigInt f = big_pow(q, i);
        base *= (i % 2 == 1) ? BigInt(f + 1) : BigInt(f - 1);
      }
      if (d.family == Family::SU) base /= q + 1;
      break;
    }
    case Family::Sp:
    case Family::CSp: {
      base = big_pow(q, 4) * (big_pow(q, 2) - 1) * (big_pow(q, 4) - 1);
      if (d.family == Family::CSp) base *= q - 1;
      break;
    }
  }
  switch (d.quotient) {
    case QuotientKind::none: break;
    case QuotientKind::full_center: base /= center_order(d); break;
    case QuotientKind::central_order: base /= d.quotient_order; break;
    case QuotientKind::explicit_scalars: {
      // Count distinct listed exponents modulo the scalar group order.
      const std::uint64_t m =
          is_unitary(d.family)
              ? static_cast<std::uint64_t>(q) * q - 1
              : static_cast<std::uint64_t>(q) - 1;
      std::vector<std::uint64_t> reduced{0};
      for (std::uint64_t e : d.quotient_exponents) reduced.push_back(e % m);
      std::sort(reduced.begin(), reduced.end());
      reduced.erase(std::unique(reduced.begin(), reduced.end()),
                    reduced.end());
      base /= static_cast<std::uint64_t>(reduced.size());
      break;
    }
  }
  return base;
}

std::string group_name(const GroupDescriptor& d) {
  std::string name;
  if (d.quotient == QuotientKind::full_center) name += "P";
  if (d.det_subgroup_order) {
    name += "H" + std::to_string(d.n) + "(" + std::to_string(d.q) + ",det" +
            std::to_string(*d.det_subgroup_order) + ")";
  } else {
    name += family_str(d.family) + std::to_string(d.n) + "(" +
            std::to_string(d.q) + ")";
  }
  if (d.quotient == QuotientKind::central_order)
    name += "/Z" + std::to_string(d.quotient_order);
  if (d.quotient == QuotientKind::explicit_scalars) name += "/Zlist";
  return name;
}

GroupDescriptor descriptor_from_name(const std::string& name, std::uint32_t n,
                                     std::uint32_t q) {
  GroupDescriptor d;
  d.n = n;
  d.q = q;
  std::string base = name;
  if (base.size() > 1 && base[0] == 'P') {
    d.quotient = QuotientKind::full_center;
    base = base.substr(1);
  }
  if (base == "GL") d.family = Family::GL;
  else if (base == "SL") d.family = Family::SL;
  else if (base == "GU") d.family = Family::GU;
  else if (base == "SU") d.family = Family::SU;
  else if (base == "Sp") d.family = Family::Sp;
  else if (base == "CSp") d.family = Family::CSp;
  else throw std::invalid_argument("unknown group family name: " + name);
  return d;
}

GroupCtx build_group(const GroupDescriptor& d) {
  validate(d);
  if (d.family == Family::CSp)
    throw std::invalid_argument(
        "the conformal symplectic group is order-only: conjugator searches "
        "stay inside Sp4 and its quotients");
  const PrimePower pp = factor_prime_power(d.q);

  std::optional<UnitaryModel> model;
  Field F = [&]() {
    if (is_unitary(d.family)) {
      model = make_unitary_model(d.n, d.q);
      return model->F;
    }
    return Field::make(pp.p, pp.r);
  }();

  GroupCtx ctx(F);
  ctx.n = d.n;
  ctx.name = group_name(d);
  ctx.order = exact_order(d);
  ctx.central = materialize_quotient(d, F);

  switch (d.family) {
    case Family::GL:
      ctx.gens = sl_generators(F, d.n);
      if (d.det_subgroup_order) {
        std::vector<FieldElem> diag(d.n, F.one());
        diag[0] = F.pow(F.gen(), (d.q - 1) / *d.det_subgroup_order);
        ctx.gens.push_back(diag_mat(F, diag));
      } else {
        std::vector<FieldElem> diag(d.n, F.one());
        diag[0] = F.gen();
        ctx.gens.push_back(diag_mat(F, diag));
      }
      break;
    case Family::SL:
      ctx.gens = sl_generators(F, d.n);
      break;
    case Family::GU:
    case Family::SU:
      ctx.gens = unitary_group_generators(*model, d.family == Family::GU);
      ctx.form_kind = GroupCtx::Form::hermitian;
      ctx.form = mat_identity(F, d.n);
      ctx.frob_power = pp.r;
      break;
    case Family::Sp:
      ctx.gens = sp4_generators(F);
      ctx.form_kind = GroupCtx::Form::symplectic;
      ctx.form = symplectic_form(F);
      break;
    case Family::CSp:
      break;  // unreachable
  }

  // Every generator must satisfy the declared form and determinant
  // constraints exactly; a violation is a construction bug, not bad input.
  for (const Mat& g : ctx.gens) {
    if (ctx.form_kind == GroupCtx::Form::hermitian) {
      if (mat_mul(F, conj_transpose(F, g, ctx.frob_power), g) !=
          mat_identity(F, d.n))
        throw std::logic_error("generator breaks the hermitian form in " +
                               ctx.name);
    } else if (ctx.form_kind == GroupCtx::Form::symplectic) {
      if (mat_mul(F, mat_mul(F, transpose(g), *ctx.form), g) != *ctx.form)
        throw std::logic_error("generator breaks the symplectic form in " +
                               ctx.name);
    }
    if (d.family == Family::SL || d.family == Family::SU) {
      if (mat_det(F, g) != F.one())
        throw std::logic_error("special-group generator has determinant != 1");
    }
  }

  GroupDescriptor desc = d;
  std::optional<UnitaryModel> mdl = model;
  ctx.sylow_provider = [desc, mdl](const GroupCtx& c, std::uint32_t ell)
      -> std::optional<SylowResult> {
    if (ell == c.F.p())
      return defchar_provider(c, desc, mdl ? &*mdl : nullptr);
    if (ell % 2 == 1 && desc.n == ell &&
        (is_linear(desc.family) || is_unitary(desc.family)))
      return wreath_provider(c, desc, ell);
    return std::nullopt;
  };
  ctx.sylow_provider_name = "family-dispatch";
  return ctx;
}

}  // namespace endorank
