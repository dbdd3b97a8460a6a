#include <endorank/field.hpp>

#include <algorithm>
#include <map>
#include <stdexcept>
#include <utility>

namespace endorank {
namespace {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

// Dense polynomials over GF(p), coefficients in [0,p), constant term first.
using Poly = std::vector<std::uint32_t>;

void poly_trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mul(const Poly& a, const Poly& b, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      c[i + j] = (c[i + j] + static_cast<std::uint64_t>(a[i]) * b[j]) % p;
  poly_trim(c);
  return c;
}

std::uint32_t mod_inv(std::uint32_t a, std::uint32_t p) {
  // Extended Euclid; p is prime and a != 0 mod p.
  std::int64_t t = 0, newt = 1, r = p, newr = a % p;
  while (newr != 0) {
    std::int64_t qt = r / newr;
    std::int64_t tmp = t - qt * newt;
    t = newt;
    newt = tmp;
    tmp = r - qt * newr;
    r = newr;
    newr = tmp;
  }
  if (t < 0) t += p;
  return static_cast<std::uint32_t>(t);
}

Poly poly_mod(Poly a, const Poly& m, std::uint32_t p) {
  // m is monic of degree >= 1.
  poly_trim(a);
  const std::size_t dm = m.size() - 1;
  while (a.size() > dm) {
    std::uint32_t lead = a.back();
    std::size_t shift = a.size() - 1 - dm;
    if (lead != 0) {
      for (std::size_t i = 0; i <= dm; ++i) {
        std::uint64_t sub = static_cast<std::uint64_t>(lead) * m[i] % p;
        std::uint32_t& c = a[shift + i];
        c = static_cast<std::uint32_t>((c + p - sub) % p);
      }
    }
    a.pop_back();
    poly_trim(a);
    if (a.size() <= dm) break;
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, std::uint32_t p) {
  return poly_mod(poly_mul(a, b, p), m, p);
}

Poly poly_powmod(Poly base, std::uint64_t e, const Poly& m, std::uint32_t p) {
  Poly result{1};
  base = poly_mod(std::move(base), m, p);
  while (e > 0) {
    if (e & 1) result = poly_mulmod(result, base, m, p);
    base = poly_mulmod(base, base, m, p);
    e >>= 1;
  }
  return result;
}

Poly poly_gcd(Poly a, Poly b, std::uint32_t p) {
  poly_trim(a);
  poly_trim(b);
  while (!b.empty()) {
    // Reduce a mod b after making b monic.
    std::uint32_t lead_inv = mod_inv(b.back(), p);
    Poly bm = b;
    for (auto& c : bm) c = static_cast<std::uint32_t>(static_cast<std::uint64_t>(c) * lead_inv % p);
    Poly r = poly_mod(a, bm, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// f monic of degree k >= 2: irreducible iff gcd(f, x^(p^i) - x) is constant
// for every 1 <= i <= k/2.
bool is_irreducible(const Poly& f, std::uint32_t p) {
  const std::size_t k = f.size() - 1;
  Poly x{0, 1};
  for (std::size_t i = 1; i <= k / 2; ++i) {
    std::uint64_t e = 1;
    for (std::size_t j = 0; j < i; ++j) e *= p;
    Poly xpi = poly_powmod(x, e, f, p);
    // xpi - x
    Poly diff = xpi;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = static_cast<std::uint32_t>((diff[1] + p - 1) % p);
    poly_trim(diff);
    Poly g = poly_gcd(f, diff, p);
    if (g.size() > 1) return false;
  }
  return true;
}

std::uint32_t poly_encode(const Poly& a, std::uint32_t p) {
  std::uint32_t enc = 0;
  for (std::size_t i = a.size(); i-- > 0;) enc = enc * p + a[i];
  return enc;
}

Poly poly_decode(std::uint32_t enc, std::uint32_t p) {
  Poly a;
  while (enc > 0) {
    a.push_back(enc % p);
    enc /= p;
  }
  return a;
}

// Pinned defining polynomials for extension degrees >= 2 (constant term
// first, including the leading 1).  Every entry has been checked to be
// irreducible with x primitive.
const std::map<std::pair<std::uint32_t, std::uint32_t>, Poly>& pinned_polys() {
  static const std::map<std::pair<std::uint32_t, std::uint32_t>, Poly> table = {
      {{2, 2}, {1, 1, 1}},
      {{2, 3}, {1, 1, 0, 1}},
      {{2, 4}, {1, 1, 0, 0, 1}},
      {{2, 5}, {1, 0, 1, 0, 0, 1}},
      {{2, 6}, {1, 1, 0, 1, 1, 0, 1}},
      {{3, 2}, {2, 2, 1}},
      {{3, 3}, {1, 2, 0, 1}},
      {{5, 2}, {2, 4, 1}},
      {{7, 2}, {3, 6, 1}},
      {{11, 2}, {2, 7, 1}},
      {{13, 2}, {2, 12, 1}},
  };
  return table;
}

bool has_full_order(const Poly& elem, std::uint64_t qm1,
                    const std::vector<std::uint64_t>& factors, const Poly& f,
                    std::uint32_t p) {
  for (std::uint64_t fac : factors) {
    Poly pw = poly_powmod(elem, qm1 / fac, f, p);
    if (pw.size() == 1 && pw[0] == 1) return false;
  }
  return true;
}

std::uint32_t smallest_primitive_root(std::uint32_t p,
                                      const std::vector<std::uint64_t>& factors) {
  for (std::uint32_t r = 2; r < p; ++r) {
    bool ok = true;
    for (std::uint64_t fac : factors) {
      // r^((p-1)/fac) mod p
      std::uint64_t e = (p - 1) / fac, base = r, acc = 1;
      while (e) {
        if (e & 1) acc = acc * base % p;
        base = base * base % p;
        e >>= 1;
      }
      if (acc == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return r;
  }
  return 1;  // p = 2
}

}  // namespace

Field Field::make(std::uint32_t p, std::uint32_t k) {
  if (!is_prime(p)) throw std::invalid_argument("field characteristic must be prime");
  if (k == 0) throw std::invalid_argument("field extension degree must be positive");
  std::uint64_t q64 = 1;
  for (std::uint32_t i = 0; i < k; ++i) {
    q64 *= p;
    if (q64 > kMaxFieldSize) throw std::invalid_argument("field size exceeds 2^16");
  }
  const std::uint32_t q = static_cast<std::uint32_t>(q64);
  const std::uint64_t qm1 = q - 1;

  auto impl = std::make_shared<Impl>();
  impl->p = p;
  impl->k = k;
  impl->q = q;
  impl->qm1_prime_factors = prime_factors(qm1);

  // Defining polynomial.
  Poly f;
  if (k == 1) {
    std::uint32_t r = smallest_primitive_root(p, impl->qm1_prime_factors);
    f = {static_cast<std::uint32_t>((p - r) % p), 1};  // x - r
  } else if (auto it = pinned_polys().find({p, k}); it != pinned_polys().end()) {
    f = it->second;
  } else {
    // First irreducible monic polynomial in lexicographic coefficient order,
    // constant term compared first.
    bool found = false;
    std::vector<std::uint32_t> c(k, 0);
    while (!found) {
      Poly cand(c.begin(), c.end());
      cand.push_back(1);
      if (is_irreducible(cand, p)) {
        f = cand;
        found = true;
        break;
      }
      // Increment (c[k-1], ..., c[0]) as a base-p counter so the constant
      // term varies slowest... constant term must vary LAST in lex order,
      // meaning it is the most significant digit: increment from the back.
      std::size_t i = k;
      while (i > 0) {
        --i;
        if (++c[i] < p) break;
        c[i] = 0;
        if (i == 0) throw std::logic_error("no irreducible polynomial found");
      }
    }
  }
  impl->defpoly = f;

  // Primitive element: x when it has full order (true for all pinned
  // entries and k = 1 by construction), else the full-order element with the
  // smallest base-p encoding.
  Poly g{0, 1};
  if (k == 1) g = {f.size() >= 1 ? (p - f[0]) % p : 0};  // the root r itself
  g = poly_mod(std::move(g), f, p);
  if (q > 2 && !has_full_order(g, qm1, impl->qm1_prime_factors, f, p)) {
    bool found = false;
    for (std::uint32_t enc = 2; enc < q; ++enc) {
      Poly cand = poly_decode(enc, p);
      if (has_full_order(cand, qm1, impl->qm1_prime_factors, f, p)) {
        g = cand;
        found = true;
        break;
      }
    }
    if (!found) throw std::logic_error("no primitive element found");
  }

  // Discrete log / exp tables.
  impl->poly_of.assign(q, 0);
  impl->index_of.assign(q, 0);
  Poly cur{1};
  for (std::uint32_t e = 0; e < qm1; ++e) {
    std::uint32_t enc = poly_encode(cur, p);
    impl->poly_of[e + 1] = enc;
    if (impl->index_of[enc] != 0)
      throw std::logic_error("generator is not primitive");
    impl->index_of[enc] = static_cast<FieldElem>(e + 1);
    cur = poly_mulmod(cur, g, f, p);
  }
  if (!(cur.size() == 1 && cur[0] == 1))
    throw std::logic_error("generator order mismatch");

  // Zech logarithms: zech[d] = log(g^d + 1).
  impl->zech.assign(qm1, kZechNone);
  impl->minus_one_exp = 0;
  for (std::uint32_t d = 0; d < qm1; ++d) {
    Poly gd = poly_decode(impl->poly_of[d + 1], p);
    Poly s = gd;
    if (s.empty()) s = {1};
    else {
      s[0] = (s[0] + 1) % p;
      poly_trim(s);
    }
    std::uint32_t enc = poly_encode(s, p);
    if (enc == 0) {
      impl->zech[d] = kZechNone;
      impl->minus_one_exp = d;
    } else {
      impl->zech[d] = impl->index_of[enc] - 1u;
    }
  }

  return Field(std::move(impl));
}

FieldElem Field::add(FieldElem a, FieldElem b) const {
  if (a == 0) return b;
  if (b == 0) return a;
  const std::uint32_t qm1 = impl_->q - 1;
  std::uint32_t ea = a - 1u, eb = b - 1u;
  // g^ea + g^eb = g^eb (g^(ea-eb) + 1)
  std::uint32_t d = ea >= eb ? ea - eb : ea + qm1 - eb;
  std::uint32_t z = impl_->zech[d];
  if (z == kZechNone) return 0;
  return static_cast<FieldElem>(1u + (eb + z) % qm1);
}

FieldElem Field::neg(FieldElem a) const {
  if (a == 0 || impl_->p == 2) return a;
  const std::uint32_t qm1 = impl_->q - 1;
  return static_cast<FieldElem>(1u + (a - 1u + impl_->minus_one_exp) % qm1);
}

FieldElem Field::mul(FieldElem a, FieldElem b) const {
  if (a == 0 || b == 0) return 0;
  const std::uint32_t qm1 = impl_->q - 1;
  return static_cast<FieldElem>(1u + (a - 1u + b - 1u) % qm1);
}

FieldElem Field::inv(FieldElem a) const {
  if (a == 0) throw std::domain_error("inverse of zero");
  const std::uint32_t qm1 = impl_->q - 1;
  return static_cast<FieldElem>(1u + (qm1 - (a - 1u)) % qm1);
}

FieldElem Field::pow(FieldElem a, std::int64_t e) const {
  const std::int64_t qm1 = impl_->q - 1;
  if (a == 0) {
    if (e <= 0) throw std::domain_error("0 raised to a non-positive power");
    return 0;
  }
  std::int64_t ee = e % qm1;
  if (ee < 0) ee += qm1;
  return static_cast<FieldElem>(1 + (static_cast<std::int64_t>(a - 1) * ee) % qm1);
}

FieldElem Field::frobenius(FieldElem a, std::uint32_t m) const {
  if (a == 0) return 0;
  const std::uint64_t qm1 = impl_->q - 1;
  std::uint64_t pm = 1;
  for (std::uint32_t i = 0; i < m % impl_->k; ++i) pm = pm * impl_->p % qm1;
  return static_cast<FieldElem>(1 + (a - 1u) * pm % qm1);
}

std::uint64_t Field::multiplicative_order(FieldElem a) const {
  if (a == 0) throw std::domain_error("order of zero");
  std::uint64_t t = impl_->q - 1;
  for (std::uint64_t f : impl_->qm1_prime_factors) {
    while (t % f == 0 && pow(a, static_cast<std::int64_t>(t / f)) == one()) t /= f;
  }
  return t;
}

FieldElem Field::from_int(std::uint64_t u) const {
  std::uint32_t r = static_cast<std::uint32_t>(u % impl_->p);
  return impl_->index_of[r];
}

FieldElem Field::from_poly(const std::vector<std::uint32_t>& coeffs) const {
  if (coeffs.size() > impl_->k)
    throw std::invalid_argument("coordinate vector longer than extension degree");
  std::uint32_t enc = 0;
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    if (coeffs[i] >= impl_->p) throw std::invalid_argument("coordinate out of range");
    enc = enc * impl_->p + coeffs[i];
  }
  return impl_->index_of[enc];
}

std::vector<std::uint32_t> Field::to_poly(FieldElem a) const {
  std::vector<std::uint32_t> out(impl_->k, 0);
  std::uint32_t enc = impl_->poly_of[a];
  for (std::uint32_t i = 0; i < impl_->k && enc > 0; ++i) {
    out[i] = enc % impl_->p;
    enc /= impl_->p;
  }
  return out;
}

std::string Field::display(FieldElem a) const {
  if (a == 0) return "0";
  if (a == 1) return "1";
  if (a == 2) return "g";
  return "g^" + std::to_string(a - 1);
}

}  // namespace endorank
