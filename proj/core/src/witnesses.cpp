#include <endorank/witnesses.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <endorank/groups.hpp>

namespace endorank {
namespace {

void verify(std::vector<std::string>& checks, const std::string& name,
            bool ok) {
  if (!ok) throw std::logic_error("witness identity failed: " + name);
  checks.push_back(name);
}

struct PrimePower {
  std::uint32_t p = 0, r = 0;
};

PrimePower factor_prime_power(std::uint32_t q) {
  if (q < 2) throw std::invalid_argument("not a prime power: " + std::to_string(q));
  std::uint32_t p = 2;
  while (q % p != 0) {
    ++p;
    if (p * p > q) {
      p = q;
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
    throw std::invalid_argument("not a prime power: " + std::to_string(q));
  return pp;
}

Mat diag_mat(const Field& F, const std::vector<FieldElem>& d) {
  Mat m = mat_zero(static_cast<std::uint32_t>(d.size()));
  for (std::uint32_t i = 0; i < d.size(); ++i) m.at(i, i) = d[i];
  (void)F;
  return m;
}

// The l-cycle permutation matrix: entry (i, j) = 1 iff j = i+1 (mod l).
Mat cycle_mat(const Field& F, std::uint32_t ell) {
  Mat m = mat_zero(ell);
  for (std::uint32_t i = 0; i < ell; ++i) m.at(i, (i + 1) % ell) = F.one();
  return m;
}

bool commute(const Field& F, const Mat& x, const Mat& y) {
  return mat_mul(F, x, y) == mat_mul(F, y, x);
}

// True when c is an l-th power in GF(q)^x.
bool is_ell_power(const Field& F, FieldElem c, std::uint32_t ell) {
  return F.pow(c, static_cast<std::int64_t>((F.q() - 1) / ell)) == F.one();
}

Subgroup close_or_throw(const GroupCtx& ctx, const std::vector<Mat>& gens,
                        std::uint64_t cap = kDefaultSubgroupCap) {
  ClosureResult res = subgroup_generated(ctx, gens, cap);
  if (res.refused)
    throw std::logic_error("witness subgroup closure refused: " + res.reason);
  return std::move(res.subgroup);
}

// Every element of order l in the image subgroup has determinant an l-th
// power (the determinant class of a coset is well defined modulo l-th
// powers because scalars contribute det(c.I) = c^l).
bool image_dets_are_ell_powers(const GroupCtx& image_ctx, const Subgroup& sub,
                               std::uint32_t ell) {
  for (const Mat& e : sub.key.elems) {
    if (is_identity(image_ctx, e)) continue;
    if (element_order(image_ctx, e) != ell) continue;
    if (!is_ell_power(image_ctx.F, mat_det(image_ctx.F, e), ell)) return false;
  }
  return true;
}

Subgroup image_subgroup(const GroupCtx& image_ctx, const std::vector<Mat>& gens) {
  return close_or_throw(image_ctx, gens);
}

// ---------------------------------------------------------------------------
// Defining-characteristic support

// Census of the maximal elementary abelian subgroups of a p-group U of
// exponent p whose center has order p: every noncyclic elementary abelian
// subgroup contains a noncentral element g, hence lies in C_U(g); so when
// every such centralizer is abelian of exponent p the distinct centralizers
// of noncentral elements are exactly the maximal elementary abelians.
// The abelian/exponent hypotheses are asserted, not assumed.
std::vector<SubgroupKey> max_elemab_census(const Field& F,
                                           const std::vector<Mat>& U,
                                           std::uint32_t p,
                                           const std::vector<Mat>& gens,
                                           std::vector<std::string>& checks,
                                           const std::string& tag) {
  const Mat id = mat_identity(F, U.front().n);
  // Center: commuting with a generating set suffices.
  std::vector<char> central(U.size(), 1);
  std::size_t zsize = 0;
  for (std::size_t i = 0; i < U.size(); ++i) {
    for (const Mat& g : gens)
      if (!commute(F, U[i], g)) {
        central[i] = 0;
        break;
      }
    zsize += central[i];
  }
  verify(checks, tag + "_center_order_p", zsize == p);

  std::vector<char> order_p(U.size(), 0);
  for (std::size_t i = 0; i < U.size(); ++i)
    order_p[i] = !(U[i] == id) && mat_pow(F, U[i], p) == id;

  std::vector<SubgroupKey> found;
  std::vector<char> claimed(U.size(), 0);
  for (std::size_t i = 0; i < U.size(); ++i) {
    if (!order_p[i] || central[i] || claimed[i]) continue;
    // C_U(g) for the noncentral g = U[i].
    std::vector<Mat> cent;
    std::vector<std::size_t> cent_idx;
    for (std::size_t j = 0; j < U.size(); ++j)
      if (commute(F, U[j], U[i])) {
        cent.push_back(U[j]);
        cent_idx.push_back(j);
      }
    bool abelian = true;
    for (std::size_t a = 0; a < cent.size() && abelian; ++a)
      for (std::size_t b = a + 1; b < cent.size(); ++b)
        if (!commute(F, cent[a], cent[b])) {
          abelian = false;
          break;
        }
    bool exp_p = true;
    for (const Mat& e : cent)
      if (!(mat_pow(F, e, p) == id)) {
        exp_p = false;
        break;
      }
    if (!(abelian && exp_p))
      throw std::logic_error("witness identity failed: " + tag +
                             "_centralizers_abelian_exponent_p");
    for (std::size_t j : cent_idx)
      if (!central[j]) claimed[j] = 1;
    SubgroupKey key;
    key.elems = cent;
    std::sort(key.elems.begin(), key.elems.end());
    found.push_back(std::move(key));
  }
  checks.push_back(tag + "_centralizers_abelian_exponent_p");
  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());

  // No member extends to a larger elementary abelian inside U.
  for (const SubgroupKey& k : found) {
    for (std::size_t j = 0; j < U.size(); ++j) {
      if (!order_p[j]) continue;
      if (std::binary_search(k.elems.begin(), k.elems.end(), U[j])) continue;
      bool commutes_all = true;
      for (const Mat& e : k.elems)
        if (!commute(F, U[j], e)) {
          commutes_all = false;
          break;
        }
      if (commutes_all)
        throw std::logic_error("witness identity failed: " + tag +
                               "_no_larger_extension");
    }
  }
  checks.push_back(tag + "_no_larger_extension");
  return found;
}

// Orbit count of a conjugation action given by a list of acting matrices on
// a closed set of subgroup keys.  Asserts closure (every conjugate is again
// one of the keys).
std::size_t torus_orbit_count(const Field& F,
                              const std::vector<SubgroupKey>& keys,
                              const std::vector<Mat>& actors,
                              std::vector<std::string>& checks,
                              const std::string& tag) {
  std::vector<std::size_t> parent(keys.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  auto locate = [&](const SubgroupKey& k) {
    auto it = std::lower_bound(keys.begin(), keys.end(), k);
    if (it == keys.end() || !(*it == k))
      throw std::logic_error("witness identity failed: " + tag +
                             "_action_preserves_census");
    return static_cast<std::size_t>(it - keys.begin());
  };
  for (const Mat& t : actors) {
    for (std::size_t i = 0; i < keys.size(); ++i) {
      SubgroupKey img;
      img.elems.reserve(keys[i].elems.size());
      for (const Mat& e : keys[i].elems) img.elems.push_back(conj(F, e, t));
      std::sort(img.elems.begin(), img.elems.end());
      std::size_t j = locate(img);
      std::size_t ri = find(i), rj = find(j);
      if (ri != rj) parent[ri] = rj;
    }
  }
  checks.push_back(tag + "_action_preserves_census");
  std::size_t classes = 0;
  for (std::size_t i = 0; i < keys.size(); ++i) classes += find(i) == i;
  return classes;
}

std::uint64_t gcd64(std::uint64_t a, std::uint64_t b) {
  while (b) {
    std::uint64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

WitnessSetDefChar build_defchar_linear(std::uint32_t p) {
  WitnessSetDefChar w(Field::make(p, 1));
  w.variant = DefCharVariant::linear;
  w.p = p;
  const Field& F = w.F;
  const Mat id = mat_identity(F, 3);

  auto unit = [&](std::uint32_t i, std::uint32_t j, FieldElem c) {
    Mat m = id;
    m.at(i, j) = c;
    return m;
  };
  w.x_alpha = unit(1, 0, F.one());
  w.x_beta = unit(2, 1, F.one());
  w.x_alphabeta = unit(2, 0, F.one());

  // Full unitriangular group, built directly.
  std::vector<Mat> U;
  for (FieldElem a = 0; a < F.q(); ++a)
    for (FieldElem b = 0; b < F.q(); ++b)
      for (FieldElem c = 0; c < F.q(); ++c) {
        Mat m = id;
        m.at(1, 0) = a;
        m.at(2, 0) = b;
        m.at(2, 1) = c;
        U.push_back(m);
      }
  std::sort(U.begin(), U.end());
  verify(w.checks, "linear_U_order_p_cubed", U.size() == std::size_t(p) * p * p);

  // Closures must be literal (no central canonicalization), so use a bare
  // context over F rather than an ambient group whose center is nontrivial.
  GroupCtx flat(F);
  flat.n = 3;
  flat.central = CentralSpec::trivial();
  flat.order = exact_order(descriptor_from_name("SL", 3, p));
  flat.name = "U(sl3) literal";

  Subgroup Ufull = close_or_throw(flat, {w.x_alpha, w.x_beta},
                                  std::uint64_t(p) * p * p + 1);
  verify(w.checks, "linear_U_generated_by_root_elements",
         Ufull.key.elems == U);

  std::vector<SubgroupKey> census = max_elemab_census(
      F, U, p, {w.x_alpha, w.x_beta}, w.checks, "linear");
  verify(w.checks, "linear_census_count",
         census.size() == (p == 2 ? 2u : p + 1u));

  // Configuration list: E_0, E_1..E_{p-1} (odd p only), E_p.
  std::vector<std::vector<Mat>> config;
  config.push_back({w.x_alpha, w.x_alphabeta});
  if (p != 2) {
    for (std::uint32_t i = 1; i < p; ++i) {
      config.push_back({mat_mul(F, w.x_alpha, mat_pow(F, w.x_beta, i)),
                        w.x_alphabeta});
    }
  }
  config.push_back({w.x_beta, w.x_alphabeta});

  std::vector<SubgroupKey> config_keys;
  for (const auto& gens : config) {
    Subgroup e = close_or_throw(flat, gens);
    verify(w.checks,
           "linear_E" + std::to_string(config_keys.size()) + "_ea_rank2",
           e.elementary_abelian && e.rank == 2 && e.ell == p);
    config_keys.push_back(e.key);
    w.E.push_back(std::move(e));
  }
  std::vector<SubgroupKey> sorted_config = config_keys;
  std::sort(sorted_config.begin(), sorted_config.end());
  sorted_config.erase(std::unique(sorted_config.begin(), sorted_config.end()),
                      sorted_config.end());
  verify(w.checks, "linear_census_matches_configuration",
         sorted_config == census);

  // Torus conjugation moves root coefficients by a^-1 b, b^-1 c, a^-1 c.
  bool formulas = true;
  for (FieldElem a = 1; a < F.q() && formulas; ++a)
    for (FieldElem b = 1; b < F.q() && formulas; ++b)
      for (FieldElem c = 1; c < F.q(); ++c) {
        Mat t = diag_mat(F, {a, b, c});
        if (!(conj(F, w.x_alpha, t) == unit(1, 0, F.div(b, a)) &&
              conj(F, w.x_beta, t) == unit(2, 1, F.div(c, b)) &&
              conj(F, w.x_alphabeta, t) == unit(2, 0, F.div(c, a)))) {
          formulas = false;
          break;
        }
      }
  verify(w.checks, "linear_torus_conj_formulas", formulas);

  // Literal torus orbits.  Conjugation by diag(a,b,c) only depends on the
  // multipliers (a^-1 b, b^-1 c), so diag(1, u, uv) covers the full torus.
  std::vector<Mat> actors_full, actors_det1;
  for (FieldElem u = 1; u < F.q(); ++u)
    for (FieldElem v = 1; v < F.q(); ++v)
      actors_full.push_back(diag_mat(F, {F.one(), u, F.mul(u, v)}));
  for (FieldElem a = 1; a < F.q(); ++a)
    for (FieldElem b = 1; b < F.q(); ++b)
      actors_det1.push_back(diag_mat(F, {a, b, F.inv(F.mul(a, b))}));
  w.torus_classes_full =
      torus_orbit_count(F, census, actors_full, w.checks, "linear_full");
  w.torus_classes_det1 =
      torus_orbit_count(F, census, actors_det1, w.checks, "linear_det1");

  std::size_t expect_full = p == 2 ? 2 : 3;
  std::size_t expect_det1 = p == 2 ? 2 : 2 + cube_coset_count(p);
  verify(w.checks, "linear_torus_orbit_counts_symbolic_match",
         w.torus_classes_full == expect_full &&
             w.torus_classes_det1 == expect_det1);
  return w;
}

WitnessSetDefChar build_defchar_unitary(std::uint32_t p) {
  if (p < 3)
    throw std::invalid_argument("unitary witness requires p >= 3");
  WitnessSetDefChar w(Field::make(p, 2));
  w.variant = DefCharVariant::unitary;
  w.p = p;
  const Field& F = w.F;
  const Mat id = mat_identity(F, 3);
  const FieldElem t = F.gen();

  auto frob = [&](FieldElem e) { return F.frobenius(e, 1); };
  auto star = [&](const Mat& m) { return entrywise_frobenius(F, transpose(m), 1); };
  Mat J = mat_zero(3);
  J.at(0, 2) = F.one();
  J.at(1, 1) = F.neg(F.one());
  J.at(2, 0) = F.one();
  auto preserves_form = [&](const Mat& m) {
    return mat_mul(F, star(m), mat_mul(F, J, m)) == J;
  };

  // trace-zero kernel and a first-solution trace solver for b + b^p = c.
  std::vector<FieldElem> trace_zero;
  for (FieldElem e = 0; e < F.q(); ++e)
    if (F.add(e, frob(e)) == F.zero()) trace_zero.push_back(e);
  verify(w.checks, "unitary_trace_kernel_order_p", trace_zero.size() == p);
  auto solve_trace = [&](FieldElem c) {
    for (FieldElem b = 0; b < F.q(); ++b)
      if (F.add(b, frob(b)) == c) return b;
    throw std::logic_error("witness identity failed: unitary_trace_surjective");
  };

  auto lower = [&](FieldElem lam, FieldElem b) {
    Mat m = id;
    m.at(1, 0) = lam;
    m.at(2, 0) = b;
    m.at(2, 1) = frob(lam);
    return m;
  };

  // x_line[i]: lower entries (t^i, b_i, t^ip), b_i + b_i^p = t^(i(p+1)).
  bool rel = true, form_ok = true;
  for (std::uint32_t i = 0; i <= p; ++i) {
    FieldElem lam = F.pow(t, i);
    FieldElem target = F.mul(lam, frob(lam));  // t^(i(p+1))
    FieldElem bi = solve_trace(target);
    rel = rel && F.add(bi, frob(bi)) == target;
    Mat xi = lower(lam, bi);
    form_ok = form_ok && preserves_form(xi);
    w.x_line.push_back(xi);
  }
  verify(w.checks, "unitary_b_trace_relation", rel);
  verify(w.checks, "unitary_x_preserve_form", form_ok);

  FieldElem u = 0;
  for (FieldElem e = 1; e < F.q(); ++e)
    if (F.add(e, frob(e)) == F.zero()) {
      u = e;
      break;
    }
  verify(w.checks, "unitary_z_trace_zero", u != 0);
  w.z_center = lower(F.zero(), u);
  verify(w.checks, "unitary_z_preserves_form", preserves_form(w.z_center));

  // Full unitriangular form-preserving group: lambda free, b ranging over a
  // coset of the trace kernel.
  std::vector<Mat> U;
  for (FieldElem lam = 0; lam < F.q(); ++lam) {
    FieldElem b0 = solve_trace(F.mul(lam, frob(lam)));
    for (FieldElem k : trace_zero) U.push_back(lower(lam, F.add(b0, k)));
  }
  std::sort(U.begin(), U.end());
  verify(w.checks, "unitary_U_order_p_cubed",
         U.size() == std::size_t(p) * p * p);
  for (const Mat& m : U)
    if (!preserves_form(m))
      throw std::logic_error("witness identity failed: unitary_U_preserves_form");
  w.checks.push_back("unitary_U_preserves_form");

  // Closures are taken literally in the matrix group over F; the witness
  // form here is its own model, independent of the ambient group builder.
  GroupCtx flat(F);
  flat.n = 3;
  flat.central = CentralSpec::trivial();
  flat.order = exact_order(descriptor_from_name("SU", 3, p));
  flat.name = "U(su3) literal";

  Subgroup Ufull = close_or_throw(flat, {w.x_line[0], w.x_line[1]},
                                  std::uint64_t(p) * p * p + 1);
  verify(w.checks, "unitary_U_generated_by_root_elements",
         Ufull.key.elems == U);

  std::vector<SubgroupKey> census = max_elemab_census(
      F, U, p, {w.x_line[0], w.x_line[1]}, w.checks, "unitary");
  verify(w.checks, "unitary_census_count", census.size() == p + 1u);

  std::vector<SubgroupKey> config_keys;
  for (std::uint32_t i = 0; i <= p; ++i) {
    Subgroup e = close_or_throw(flat, {w.x_line[i], w.z_center});
    verify(w.checks, "unitary_E" + std::to_string(i) + "_ea_rank2",
           e.elementary_abelian && e.rank == 2 && e.ell == p);
    config_keys.push_back(e.key);
    w.E.push_back(std::move(e));
  }
  std::vector<SubgroupKey> sorted_config = config_keys;
  std::sort(sorted_config.begin(), sorted_config.end());
  sorted_config.erase(std::unique(sorted_config.begin(), sorted_config.end()),
                      sorted_config.end());
  verify(w.checks, "unitary_census_matches_configuration",
         sorted_config == census);

  // Diagonal torus of the full unitary group: diag(a, b, a^-p) with
  // b^(p+1) = 1; the special subgroup adds det = 1, i.e. b = a^(p-1).
  std::vector<FieldElem> norm_one;
  for (FieldElem e = 1; e < F.q(); ++e)
    if (F.pow(e, static_cast<std::int64_t>(p) + 1) == F.one())
      norm_one.push_back(e);
  verify(w.checks, "unitary_norm_one_count", norm_one.size() == p + 1u);

  std::vector<Mat> actors_full, actors_det1;
  bool torus_form = true;
  for (FieldElem a = 1; a < F.q(); ++a) {
    FieldElem c = F.inv(frob(a));
    for (FieldElem b : norm_one) {
      Mat td = diag_mat(F, {a, b, c});
      torus_form = torus_form && preserves_form(td);
      actors_full.push_back(td);
    }
    Mat ts = diag_mat(F, {a, F.pow(a, static_cast<std::int64_t>(p) - 1), c});
    torus_form = torus_form && preserves_form(ts) &&
                 mat_det(F, ts) == F.one();
    actors_det1.push_back(ts);
  }
  verify(w.checks, "unitary_torus_preserves_form", torus_form);

  w.torus_classes_full =
      torus_orbit_count(F, census, actors_full, w.checks, "unitary_full");
  w.torus_classes_det1 =
      torus_orbit_count(F, census, actors_det1, w.checks, "unitary_det1");
  verify(w.checks, "unitary_torus_orbit_counts_symbolic_match",
         w.torus_classes_full == 1 &&
             w.torus_classes_det1 == gcd64(3, p + 1));
  return w;
}

}  // namespace

int cube_coset_count(std::uint32_t p) {
  if (p < 3) throw std::invalid_argument("cube_coset_count needs an odd prime");
  return p % 3 == 1 ? 3 : 1;
}

WitnessSetGL build_witness_gl(std::uint32_t ell, std::uint32_t q) {
  if (ell != 3 && ell != 5)
    throw std::invalid_argument("supported degrees are 3 and 5");
  if ((q - 1) % ell != 0)
    throw std::invalid_argument("congruence violated: need ell | q-1");

  PrimePower pp = factor_prime_power(q);
  WitnessSetGL w(Field::make(pp.p, pp.r));
  w.ell = ell;
  w.q = q;
  const Field& F = w.F;

  std::uint32_t ells = 1;
  w.s = 0;
  while ((q - 1) % (ells * ell) == 0) {
    ells *= ell;
    ++w.s;
  }
  w.gamma = F.pow(F.gen(), (q - 1) / ells);
  w.zeta = F.pow(w.gamma, ells / ell);
  verify(w.checks, "gamma_order_ell_pow_s",
         F.multiplicative_order(w.gamma) == ells);
  verify(w.checks, "zeta_order_ell", F.multiplicative_order(w.zeta) == ell);
  verify(w.checks, "gamma_not_ell_power", !is_ell_power(F, w.gamma, ell));

  const Mat id = mat_identity(F, ell);
  w.x = cycle_mat(F, ell);
  std::vector<FieldElem> yd(ell, F.one());
  yd[0] = w.gamma;
  w.y = diag_mat(F, yd);
  w.z = scalar_mat(F, ell, w.gamma);
  w.a = mat_pow(F, w.y, ells / ell);
  std::vector<FieldElem> bd(ell);
  for (std::uint32_t i = 0; i < ell; ++i) bd[i] = F.pow(w.zeta, i);
  w.b = diag_mat(F, bd);

  verify(w.checks, "x_pow_ell_identity", mat_pow(F, w.x, ell) == id);
  std::vector<FieldElem> ad(ell, F.one());
  ad[0] = w.zeta;
  verify(w.checks, "a_is_diag_zeta", w.a == diag_mat(F, ad));
  verify(w.checks, "z_commutes", commute(F, w.z, w.x) && commute(F, w.z, w.b));
  Mat comm = mat_mul(F, mat_mul(F, w.x, w.b),
                     mat_mul(F, mat_inv(F, w.x), mat_inv(F, w.b)));
  verify(w.checks, "xbx_inv_binv_is_zeta", comm == scalar_mat(F, ell, w.zeta));

  GroupCtx gl = build_group(descriptor_from_name("GL", ell, q));
  GroupCtx pgl = build_group(descriptor_from_name("PGL", ell, q));

  std::vector<Mat> e1_gens;
  for (std::uint32_t i = 0; i < ell; ++i)
    e1_gens.push_back(conj(F, w.a, mat_pow(F, w.x, i)));
  e1_gens.push_back(w.z);
  std::vector<Mat> e2_gens{w.x, w.b, w.z};
  std::vector<Mat> e3_gens{mat_mul(F, w.y, w.x), w.b, w.z};

  bool e1_abelian = true;
  for (std::size_t i = 0; i < e1_gens.size(); ++i)
    for (std::size_t j = i + 1; j < e1_gens.size(); ++j)
      e1_abelian = e1_abelian && commute(F, e1_gens[i], e1_gens[j]);
  verify(w.checks, "E1_generators_commute", e1_abelian);

  w.E1_gl = close_or_throw(gl, e1_gens);
  w.E2_gl = close_or_throw(gl, e2_gens);
  w.E3_gl = close_or_throw(gl, e3_gens);

  std::uint64_t pow_ell_ell = 1;
  for (std::uint32_t i = 0; i < ell; ++i) pow_ell_ell *= ell;
  verify(w.checks, "E1_order",
         w.E1_gl.key.elems.size() == pow_ell_ell * (ells / ell));
  std::uint64_t e23 = std::uint64_t(ell) * ell * ells;
  verify(w.checks, "E2_E3_order",
         w.E2_gl.key.elems.size() == e23 && w.E3_gl.key.elems.size() == e23);
  // Rank of the abelian group E1 equals ell: its elements of order dividing
  // ell are exactly the diagonal matrices with ell-th root entries.
  std::uint64_t omega1 = 0;
  for (const Mat& e : w.E1_gl.key.elems)
    omega1 += mat_pow(F, e, ell) == id;
  verify(w.checks, "E1_omega1_order_ell_pow_ell", omega1 == pow_ell_ell);

  w.E1 = image_subgroup(pgl, e1_gens);
  w.E2 = image_subgroup(pgl, e2_gens);
  w.E3 = image_subgroup(pgl, e3_gens);
  verify(w.checks, "E1_image_ea_rank_ell_minus_1",
         w.E1.elementary_abelian && w.E1.ell == ell &&
             w.E1.rank == static_cast<int>(ell) - 1);
  verify(w.checks, "E2_image_ea_rank2",
         w.E2.elementary_abelian && w.E2.ell == ell && w.E2.rank == 2);
  verify(w.checks, "E3_image_ea_rank2",
         w.E3.elementary_abelian && w.E3.ell == ell && w.E3.rank == 2);
  verify(w.checks, "images_pairwise_distinct",
         !(w.E1.key == w.E2.key) && !(w.E1.key == w.E3.key) &&
             !(w.E2.key == w.E3.key));

  // Determinant-class separator: trivial on E2, non-trivial on E3.
  verify(w.checks, "E2_image_dets_ell_powers",
         image_dets_are_ell_powers(pgl, w.E2, ell));
  bool separator = false;
  for (const Mat& e : w.E3.key.elems) {
    if (is_identity(pgl, e) || element_order(pgl, e) != ell) continue;
    if (!is_ell_power(F, mat_det(F, e), ell)) {
      separator = true;
      break;
    }
  }
  verify(w.checks, "E3_image_det_separator", separator);

  if (w.s >= 2) {
    // With a = y^(l^(s-1)) the seed <a.x, b, z> loses the separator: all of
    // its order-l image elements have l-th-power determinants, so it cannot
    // head a third class.  This documents why E3 is seeded with y.x.
    Subgroup alt =
        image_subgroup(pgl, {mat_mul(F, w.a, w.x), w.b, w.z});
    verify(w.checks, "alt_third_seed_no_separator_when_deep",
           image_dets_are_ell_powers(pgl, alt, ell));
  }
  return w;
}

WitnessSetSL build_witness_sl(std::uint32_t ell, std::uint32_t q) {
  if (ell != 3 && ell != 5)
    throw std::invalid_argument("supported degrees are 3 and 5");
  if ((q - 1) % ell != 0)
    throw std::invalid_argument("congruence violated: need ell | q-1");

  PrimePower pp = factor_prime_power(q);
  WitnessSetSL w(Field::make(pp.p, pp.r));
  w.ell = ell;
  w.q = q;
  const Field& F = w.F;

  std::uint32_t ells = 1;
  w.s = 0;
  while ((q - 1) % (ells * ell) == 0) {
    ells *= ell;
    ++w.s;
  }
  w.gamma = F.pow(F.gen(), (q - 1) / ells);
  w.zeta = F.pow(w.gamma, ells / ell);

  const Mat id = mat_identity(F, ell);
  w.x = cycle_mat(F, ell);
  std::vector<FieldElem> yd(ell, F.one());
  yd[0] = w.gamma;
  w.y = diag_mat(F, yd);
  w.z = scalar_mat(F, ell, w.zeta);
  std::vector<FieldElem> bd(ell);
  for (std::uint32_t i = 0; i < ell; ++i) bd[i] = F.pow(w.zeta, i);
  w.b = diag_mat(F, bd);
  w.w = mat_mul(F, mat_mul(F, mat_inv(F, w.x), mat_inv(F, w.y)),
                mat_mul(F, w.x, w.y));

  std::vector<FieldElem> wd(ell, F.one());
  wd[0] = w.gamma;
  wd[1] = F.inv(w.gamma);
  verify(w.checks, "w_is_diag_gamma_gammainv", w.w == diag_mat(F, wd));
  verify(w.checks, "det_y_gamma_not_ell_power",
         mat_det(F, w.y) == w.gamma && !is_ell_power(F, w.gamma, ell));
  verify(w.checks, "z_in_sl_order_ell",
         mat_det(F, w.z) == F.one() && mat_pow(F, w.z, ell) == id &&
             !(w.z == id));

  // Vandermonde v[j][k] = zeta^(jk); v^2 = l.P with P the permutation fixing
  // index 0 and reversing the rest.
  w.v = mat_zero(ell);
  for (std::uint32_t j = 0; j < ell; ++j)
    for (std::uint32_t k = 0; k < ell; ++k)
      w.v.at(j, k) = F.pow(w.zeta, std::int64_t(j) * k);
  Mat P = mat_zero(ell);
  for (std::uint32_t j = 0; j < ell; ++j) P.at(j, (ell - j) % ell) = F.one();
  verify(w.checks, "v_squared_ell_times_reversal",
         mat_mul(F, w.v, w.v) == scalar_mul(F, F.from_int(ell), P));

  w.eps = ((ell - 1) / 2) % 2 == 0 ? 1 : -1;
  FieldElem target = F.from_int(ell);
  if (w.eps < 0) target = F.neg(target);
  FieldElem detv = mat_det(F, w.v);
  w.mu = 0;
  for (FieldElem m = 1; m < F.q(); ++m)
    if (F.mul(m, m) == target &&
        F.pow(m, static_cast<std::int64_t>(ell)) == detv) {
      w.mu = m;
      break;
    }
  verify(w.checks, "mu_exists_square_eps_ell_and_mu_ell_det_v", w.mu != 0);
  w.h = scalar_mul(F, F.inv(w.mu), w.v);

  verify(w.checks, "det_h_one", mat_det(F, w.h) == F.one());
  verify(w.checks, "xv_eq_vb",
         mat_mul(F, w.x, w.v) == mat_mul(F, w.v, w.b));
  Mat hinv = mat_inv(F, w.h);
  verify(w.checks, "h_conj_x_to_b",
         mat_mul(F, hinv, mat_mul(F, w.x, w.h)) == w.b);
  verify(w.checks, "h_conj_b_to_x_inv",
         mat_mul(F, hinv, mat_mul(F, w.b, w.h)) == mat_inv(F, w.x));
  Mat h2 = mat_mul(F, w.h, w.h);
  verify(w.checks, "h2_x_h_minus2_eq_x_inv",
         mat_mul(F, h2, mat_mul(F, w.x, mat_inv(F, h2))) == mat_inv(F, w.x));

  GroupCtx sl = build_group(descriptor_from_name("SL", ell, q));
  GroupCtx psl = build_group(descriptor_from_name("PSL", ell, q));

  std::uint64_t ell3 = std::uint64_t(ell) * ell * ell;
  std::vector<std::vector<Mat>> gens_by_i;
  for (std::uint32_t i = 0; i < ell; ++i) {
    Mat wi_x = mat_mul(F, mat_pow(F, w.w, i), w.x);
    verify(w.checks, "E" + std::to_string(i) + "_gen_in_sl",
           mat_det(F, wi_x) == F.one());
    gens_by_i.push_back({wi_x, w.b, w.z});
    Subgroup e = close_or_throw(sl, gens_by_i.back());
    bool exp_ell = true;
    for (const Mat& m : e.key.elems)
      exp_ell = exp_ell && mat_pow(F, m, ell) == id;
    verify(w.checks, "E" + std::to_string(i) + "_order_ell3_exponent_ell",
           e.key.elems.size() == ell3 && exp_ell);
    w.E_sl.push_back(std::move(e));
  }
  verify(w.checks, "E0_nonabelian_extraspecial_type",
         !commute(F, w.x, w.b));

  // The seeds collapse to a single subgroup exactly when ell = 3 and s = 1:
  // the w-exponent pattern (1, -1, 0, ..., 0) is an arithmetic progression
  // mod ell only for ell = 3, and for s >= 2 its entries are not multiples
  // of ell^(s-1).  (This is the depth dichotomy behind "mod 9 for ell = 3,
  // mod ell otherwise" in the class counts.)
  if (ell == 3 && w.s == 1) {
    bool coincide = true;
    for (std::size_t i = 1; i < w.E_sl.size(); ++i)
      coincide = coincide && w.E_sl[i].key == w.E_sl[0].key;
    verify(w.checks, "E_keys_all_coincide_at_depth_one", coincide);
  } else {
    bool distinct = true;
    for (std::size_t i = 0; i < w.E_sl.size(); ++i)
      for (std::size_t j = i + 1; j < w.E_sl.size(); ++j)
        distinct = distinct && !(w.E_sl[i].key == w.E_sl[j].key);
    verify(w.checks, "E_keys_pairwise_distinct", distinct);
  }

  // g = diag(gamma, 1, gamma, ..., gamma) satisfies g x g^-1 = w.x exactly,
  // commutes with b and z, and therefore shifts the seed index by one; its
  // determinant gamma^(ell-1) is not an ell-th power, so the shift crosses
  // determinant classes.  The wrap-around step ell-1 -> 0 holds only when
  // w^ell re-enters <b, z> (s = 1, or ell = 3 with s = 2).
  std::vector<FieldElem> gd(ell, w.gamma);
  gd[1] = F.one();
  Mat g = diag_mat(F, gd);
  verify(w.checks, "shift_conjugator_moves_x_to_wx",
         conj(F, w.x, g) == mat_mul(F, w.w, w.x));
  verify(w.checks, "shift_conjugator_det_class_nontrivial",
         mat_det(F, g) == F.pow(w.gamma, static_cast<std::int64_t>(ell) - 1) &&
             !is_ell_power(F, mat_det(F, g), ell));
  auto conj_key = [&](const Subgroup& e, const Mat& c) {
    SubgroupKey k;
    k.elems.reserve(e.key.elems.size());
    for (const Mat& m : e.key.elems) k.elems.push_back(conj(F, m, c));
    std::sort(k.elems.begin(), k.elems.end());
    return k;
  };
  const bool wraps = w.s == 1 || (ell == 3 && w.s == 2);
  bool shifts = true;
  for (std::uint32_t i = 0; i < ell; ++i) {
    if (i == ell - 1 && !wraps) continue;
    shifts = shifts && conj_key(w.E_sl[i], g) == w.E_sl[(i + 1) % ell].key;
  }
  verify(w.checks, "diag_conjugator_shifts_seed_index", shifts);

  for (std::uint32_t i = 0; i < ell; ++i) {
    Subgroup e = image_subgroup(psl, gens_by_i[i]);
    verify(w.checks, "E" + std::to_string(i) + "_image_ea_rank2",
           e.elementary_abelian && e.ell == ell && e.rank == 2);
    w.E_psl.push_back(std::move(e));
  }
  return w;
}

WitnessSetDefChar build_witness_defchar(std::uint32_t p, DefCharVariant variant) {
  // p must be prime; Field::make validates.
  if (variant == DefCharVariant::linear) return build_defchar_linear(p);
  return build_defchar_unitary(p);
}

}  // namespace endorank
