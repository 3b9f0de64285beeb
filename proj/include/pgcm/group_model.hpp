#pragma once

// Concrete groups G(p, m, w): class two, G' = <x, y, z> central of exponent p, and
//   a_i^(p^m_i) = x^w_i1 y^w_i2 z^w_i3,  x = [a2,a3], y = [a3,a1], z = [a1,a2],
// with the convention [g,h] = g^-1 h^-1 g h.

#include <algorithm>
#include <array>
#include <cctype>
#include <functional>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "iso_action.hpp"
#include "report.hpp"

namespace pgcm {

constexpr std::uint64_t kElementOrderCap = 6561;  // 3^8
constexpr std::uint64_t kSubgroupOrderCap = 1024; // 2^10
constexpr std::uint64_t kLatticeOrderCap = 64;    // 2^6
constexpr std::uint64_t kCosetCap = 6561;

struct GroupSpec {
  Ctx ctx;
  ExponentType et;
  Mat3 w;
};

struct GroupElement {
  std::array<long long, 3> i{};
  std::array<Fp, 3> e{};
  friend bool operator==(const GroupElement &, const GroupElement &) = default;
};

class Group {
public:
  explicit Group(GroupSpec s, std::uint64_t order_cap = kElementOrderCap) : spec_(std::move(s))
  {
    p_ = spec_.ctx->p();
    order_ = 1;
    for (int k = 0; k < 3; ++k) {
      mod_[k] = 1;
      for (int j = 0; j < spec_.et[k]; ++j)
        mod_[k] *= p_;
      order_ *= static_cast<std::uint64_t>(mod_[k]) * p_;
      if (order_ > order_cap)
        throw InfeasibleError("group order exceeds cap " + std::to_string(order_cap));
    }
    quotient_ = static_cast<std::uint64_t>(mod_[0]) * mod_[1] * mod_[2];
  }

  const GroupSpec &spec() const { return spec_; }
  const PrimeContext &field() const { return *spec_.ctx; }
  int p() const { return p_; }
  std::uint64_t order() const { return order_; }
  /// |G/G'|; coset representatives are the codes divisible by p^3.
  std::uint64_t quotient_order() const { return quotient_; }
  long long modulus(int k) const { return mod_[k]; }

  std::uint64_t code(const GroupElement &g) const
  {
    std::uint64_t c = 0;
    for (int k = 0; k < 3; ++k)
      c = c * mod_[k] + static_cast<std::uint64_t>(g.i[k]);
    for (int k = 0; k < 3; ++k)
      c = c * p_ + static_cast<std::uint64_t>(g.e[k]);
    return c;
  }

  GroupElement element(std::uint64_t c) const
  {
    GroupElement g;
    for (int k = 2; k >= 0; --k) {
      g.e[k] = static_cast<Fp>(c % p_);
      c /= p_;
    }
    for (int k = 2; k >= 0; --k) {
      g.i[k] = static_cast<long long>(c % mod_[k]);
      c /= mod_[k];
    }
    return g;
  }

  GroupElement identity() const { return {}; }
  GroupElement gen(int k) const
  {
    GroupElement g;
    g.i[k] = 1 % mod_[k];
    if (mod_[k] == 1)
      throw Error("generator with trivial exponent");
    return g;
  }
  /// x, y, z for k = 0, 1, 2.
  GroupElement central(int k) const
  {
    GroupElement g;
    g.e[k] = 1;
    return g;
  }
  GroupElement central(const std::array<Fp, 3> &e) const
  {
    GroupElement g;
    g.e = e;
    return g;
  }
  static bool in_derived(const GroupElement &g) { return !g.i[0] && !g.i[1] && !g.i[2]; }

  GroupElement mul(const GroupElement &g, const GroupElement &h) const
  {
    const PrimeContext &F = field();
    GroupElement r;
    // collection: x^(-i3 j2) y^(i3 j1) z^(-i2 j1)
    long long cx = -(g.i[2] % p_) * (h.i[1] % p_);
    long long cy = (g.i[2] % p_) * (h.i[0] % p_);
    long long cz = -(g.i[1] % p_) * (h.i[0] % p_);
    r.e[0] = F.reduce(g.e[0] + h.e[0] + cx);
    r.e[1] = F.reduce(g.e[1] + h.e[1] + cy);
    r.e[2] = F.reduce(g.e[2] + h.e[2] + cz);
    for (int k = 0; k < 3; ++k) {
      long long s = g.i[k] + h.i[k];
      if (s >= mod_[k]) {
        s -= mod_[k];
        for (int j = 0; j < 3; ++j)
          r.e[j] = F.add(r.e[j], spec_.w(k, j));
      }
      r.i[k] = s;
    }
    return r;
  }

  GroupElement inv(const GroupElement &g) const
  {
    GroupElement h;
    for (int k = 0; k < 3; ++k)
      h.i[k] = (mod_[k] - g.i[k]) % mod_[k];
    GroupElement r = mul(g, h);
    for (int k = 0; k < 3; ++k)
      h.e[k] = field().neg(r.e[k]);
    return h;
  }

  GroupElement pow(GroupElement g, long long k) const
  {
    if (k < 0) {
      g = inv(g);
      k = -k;
    }
    GroupElement r;
    while (k > 0) {
      if (k & 1)
        r = mul(r, g);
      g = mul(g, g);
      k >>= 1;
    }
    return r;
  }

  GroupElement comm(const GroupElement &g, const GroupElement &h) const
  {
    return mul(mul(inv(g), inv(h)), mul(g, h));
  }

  /// Order of the image of g in G/G'.
  long long quotient_order(const GroupElement &g) const
  {
    long long o = 1;
    for (int k = 0; k < 3; ++k) {
      long long a = g.i[k], m = mod_[k], ok = 1;
      while (a % m) {
        a *= p_;
        ok *= p_;
      }
      o = std::max(o, ok);
    }
    return o;
  }

  long long element_order(const GroupElement &g) const
  {
    long long o = quotient_order(g);
    return in_derived(pow(g, o)) && pow(g, o) == identity() ? o : o * p_;
  }

  // Optional Cayley table for repeated work at small orders.
  void build_table(std::uint64_t cap = 1u << 12)
  {
    if (order_ > cap)
      throw InfeasibleError("Cayley table above cap");
    table_.assign(order_ * order_, 0);
    for (std::uint64_t a = 0; a < order_; ++a) {
      GroupElement g = element(a);
      for (std::uint64_t b = 0; b < order_; ++b)
        table_[a * order_ + b] = static_cast<std::uint32_t>(code(mul(g, element(b))));
    }
  }
  bool has_table() const { return !table_.empty(); }
  std::uint64_t mul_code(std::uint64_t a, std::uint64_t b) const
  {
    if (!table_.empty())
      return table_[a * order_ + b];
    return code(mul(element(a), element(b)));
  }

private:
  GroupSpec spec_;
  int p_ = 2;
  std::array<long long, 3> mod_{};
  std::uint64_t order_ = 1;
  std::uint64_t quotient_ = 1;
  std::vector<std::uint32_t> table_;
};

struct SubgroupHandle {
  std::vector<std::uint64_t> elements; // sorted codes
  std::vector<GroupElement> generators;

  std::uint64_t order() const { return elements.size(); }
  bool contains(std::uint64_t c) const { return std::binary_search(elements.begin(), elements.end(), c); }
};

inline SubgroupHandle subgroup_closure(const Group &G, const std::vector<GroupElement> &gens,
                                       std::uint64_t cap = kElementOrderCap)
{
  if (G.order() > cap)
    throw InfeasibleError("subgroup closure above order cap");
  std::vector<std::uint64_t> gc;
  for (const auto &g : gens)
    gc.push_back(G.code(g));
  std::vector<char> seen(G.order(), 0);
  std::vector<std::uint64_t> list{G.code(G.identity())};
  seen[list[0]] = 1;
  for (std::size_t k = 0; k < list.size(); ++k)
    for (std::uint64_t g : gc) {
      std::uint64_t n = G.mul_code(list[k], g);
      if (!seen[n]) {
        seen[n] = 1;
        list.push_back(n);
      }
    }
  std::sort(list.begin(), list.end());
  return {std::move(list), gens};
}

inline bool is_normal(const Group &G, const SubgroupHandle &H)
{
  for (int k = 0; k < 3; ++k) {
    GroupElement a = G.gen(k), ai = G.inv(a);
    for (std::uint64_t c : H.elements)
      if (!H.contains(G.code(G.mul(G.mul(ai, G.element(c)), a))))
        return false;
  }
  return true;
}

inline bool is_abelian(const Group &G, const SubgroupHandle &H)
{
  const auto &gs = H.generators;
  for (std::size_t i = 0; i < gs.size(); ++i)
    for (std::size_t j = i + 1; j < gs.size(); ++j)
      if (!(G.comm(gs[i], gs[j]) == G.identity()))
        return false;
  return true;
}

// ---- consistency ----

inline VerificationReport verify_consistency(const Group &G, std::uint64_t seed = 0,
                                             std::uint64_t samples = 100000)
{
  Stopwatch sw;
  VerificationReport rep;
  rep.subject = "group consistency order=" + std::to_string(G.order());
  rep.space_size = G.order();
  const std::uint64_t n = G.order();
  auto check_triple = [&](std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    GroupElement g = G.element(a), h = G.element(b), k = G.element(c);
    if (!(G.mul(G.mul(g, h), k) == G.mul(g, G.mul(h, k))))
      rep.violation(std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c), "associativity");
  };
  if (n <= 256) {
    for (std::uint64_t a = 0; a < n; ++a)
      for (std::uint64_t b = 0; b < n; ++b)
        for (std::uint64_t c = 0; c < n; ++c)
          check_triple(a, b, c);
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint64_t> pick(0, n - 1);
    for (std::uint64_t s = 0; s < samples; ++s)
      check_triple(pick(rng), pick(rng), pick(rng));
  }
  for (std::uint64_t a = 0; a < n; ++a) {
    GroupElement g = G.element(a);
    if (G.code(g) != a)
      rep.violation(std::to_string(a), "code round trip");
    if (!(G.mul(g, G.inv(g)) == G.identity()) || !(G.mul(G.identity(), g) == g))
      rep.violation(std::to_string(a), "inverse or identity");
  }
  // G' = <x,y,z> from the generator commutators, central, exponent p
  const GroupElement a1 = G.gen(0), a2 = G.gen(1), a3 = G.gen(2);
  if (!(G.comm(a2, a3) == G.central(0)) || !(G.comm(a3, a1) == G.central(1)) ||
      !(G.comm(a1, a2) == G.central(2)))
    rep.violation("-", "generator commutators differ from x, y, z");
  for (int k = 0; k < 3; ++k) {
    GroupElement c = G.central(k);
    if (!(G.pow(c, G.p()) == G.identity()))
      rep.violation("-", "G' does not have exponent p");
    for (int j = 0; j < 3; ++j)
      if (!(G.comm(c, G.gen(j)) == G.identity()))
        rep.violation("-", "G' is not central");
    // p-th powers of generators are central, so Phi(G) <= Z(G)
    GroupElement q = G.pow(G.gen(k), G.p());
    for (int j = 0; j < 3; ++j)
      if (!(G.comm(q, G.gen(j)) == G.identity()))
        rep.violation("-", "Phi(G) is not central");
    // the image of a_k in G/G' has order p^m_k
    if (G.quotient_order(G.gen(k)) != G.modulus(k))
      rep.violation("-", "G/G' has the wrong type");
    GroupElement top = G.pow(G.gen(k), G.modulus(k));
    for (int j = 0; j < 3; ++j)
      if (top.e[j] != G.spec().w(k, j) || !Group::in_derived(top))
        rep.violation("-", "power relation a_k^(p^m_k) differs from row of w");
  }
  rep.elapsed = sw.seconds();
  return rep;
}

// ---- A1-subgroups ----

/// Every non-commuting pair generates an A1-subgroup here (d = 2, |H'| = p).
inline std::vector<SubgroupHandle> enumerate_a1(const Group &G, std::uint64_t cap = kSubgroupOrderCap)
{
  if (G.order() > cap)
    throw InfeasibleError("enumerate_a1: order " + std::to_string(G.order()) + " above cap");
  std::set<std::vector<std::uint64_t>> seen;
  std::vector<SubgroupHandle> out;
  const std::uint64_t n = G.order();
  for (std::uint64_t a = 0; a < n; ++a) {
    GroupElement g = G.element(a);
    if (Group::in_derived(g))
      continue;
    for (std::uint64_t b = a + 1; b < n; ++b) {
      GroupElement h = G.element(b);
      if (G.comm(g, h) == G.identity())
        continue;
      SubgroupHandle H = subgroup_closure(G, {g, h}, cap);
      if (seen.insert(H.elements).second)
        out.push_back(std::move(H));
    }
  }
  return out;
}

namespace detail {

inline int log_p(std::uint64_t n, int p)
{
  int k = 0;
  while (n > 1) {
    n /= p;
    ++k;
  }
  return k;
}

// Rank of <g,h> n G' for a non-commuting pair. With o the order of gG' and
// b0 h = a0 g the first relation mod G', this subgroup is spanned by
// [g,h], g^o and g^-a0 h^b0.
struct PairShape {
  std::uint64_t quotient = 0; // |<g,h>G'/G'|
  int derived_rank = 0;
};

inline PairShape pair_shape(const Group &G, const GroupElement &g, const GroupElement &h)
{
  long long o = G.quotient_order(g);
  auto bar = [&](const GroupElement &u, long long k) {
    std::array<long long, 3> r;
    for (int j = 0; j < 3; ++j)
      r[j] = (u.i[j] * (k % G.modulus(j))) % G.modulus(j);
    return r;
  };
  std::map<std::array<long long, 3>, long long> multiples;
  for (long long a = 0; a < o; ++a)
    multiples.emplace(bar(g, a), a);
  long long b0 = 1, a0 = 0;
  for (;; ++b0) {
    auto it = multiples.find(bar(h, b0));
    if (it != multiples.end()) {
      a0 = it->second;
      break;
    }
  }
  GroupElement c = G.comm(g, h);
  GroupElement v1 = G.pow(g, o);
  GroupElement v2 = G.mul(G.pow(g, -a0), G.pow(h, b0));
  Mat3 M;
  for (int j = 0; j < 3; ++j) {
    M(0, j) = c.e[j];
    M(1, j) = v1.e[j];
    M(2, j) = v2.e[j];
  }
  return {static_cast<std::uint64_t>(o * b0), rank(G.field(), M)};
}

inline int derived_part_rank(const Group &G, const GroupElement &g, const GroupElement &h)
{
  return pair_shape(G, g, h).derived_rank;
}

inline std::uint64_t pair_order_fast(const Group &G, const GroupElement &g, const GroupElement &h)
{
  PairShape s = pair_shape(G, g, h);
  std::uint64_t r = s.quotient;
  for (int k = 0; k < s.derived_rank; ++k)
    r *= G.p();
  return r;
}

} // namespace detail

struct IndexRange {
  int i_min = 0, i_max = 0;
};

/// Exponents of the minimal and maximal index of A1-subgroups, by closing every
/// non-commuting pair.
inline IndexRange a1_index_range(const Group &G, std::uint64_t cap = kSubgroupOrderCap)
{
  if (G.order() > cap)
    throw InfeasibleError("a1_index_range: order above cap");
  const std::uint64_t n = G.order();
  std::uint64_t hmin = n, hmax = 0;
  std::vector<std::uint32_t> stamp(n, 0);
  std::uint32_t cur = 0;
  std::vector<std::uint64_t> list;
  for (std::uint64_t a = 0; a < n; ++a) {
    GroupElement g = G.element(a);
    if (Group::in_derived(g))
      continue;
    for (std::uint64_t b = a + 1; b < n; ++b) {
      GroupElement h = G.element(b);
      if (G.comm(g, h) == G.identity())
        continue;
      ++cur;
      list.assign(1, G.code(G.identity()));
      stamp[list[0]] = cur;
      for (std::size_t k = 0; k < list.size(); ++k)
        for (std::uint64_t gen : {a, b}) {
          std::uint64_t m = G.mul_code(list[k], gen);
          if (stamp[m] != cur) {
            stamp[m] = cur;
            list.push_back(m);
          }
        }
      hmin = std::min<std::uint64_t>(hmin, list.size());
      hmax = std::max<std::uint64_t>(hmax, list.size());
    }
  }
  if (hmax == 0)
    throw DomainError("group is abelian");
  return {detail::log_p(n / hmax, G.p()), detail::log_p(n / hmin, G.p())};
}

/// Same values from coset pairs and the class-two order formula; usable at larger orders.
inline IndexRange a1_index_range_fast(const Group &G, std::uint64_t coset_cap = kCosetCap)
{
  const std::uint64_t q = G.quotient_order();
  if (q > coset_cap)
    throw InfeasibleError("a1_index_range_fast: |G/G'| above cap");
  const int p3 = G.p() * G.p() * G.p();
  std::uint64_t hmin = G.order(), hmax = 0;
  for (std::uint64_t a = 1; a < q; ++a) {
    GroupElement g = G.element(a * p3);
    for (std::uint64_t b = a + 1; b < q; ++b) {
      GroupElement h = G.element(b * p3);
      if (G.comm(g, h) == G.identity())
        continue;
      std::uint64_t o = detail::pair_order_fast(G, g, h);
      hmin = std::min(hmin, o);
      hmax = std::max(hmax, o);
    }
  }
  if (hmax == 0)
    throw DomainError("group is abelian");
  return {detail::log_p(G.order() / hmax, G.p()), detail::log_p(G.order() / hmin, G.p())};
}

struct OracleInvariants {
  int i_min = 0, i_max = 0;
  std::uint64_t a1_count = 0;
};

inline OracleInvariants oracle_invariants(const Group &G, std::uint64_t cap = kSubgroupOrderCap)
{
  IndexRange r = a1_index_range(G, cap);
  return {r.i_min, r.i_max, 0};
}

enum class MetaMode { Full, Necessary };

/// FULL: walks the whole subgroup lattice. NECESSARY: every A1-subgroup contains G'.
inline bool metahamiltonian_oracle(const Group &G, MetaMode mode, std::uint64_t lattice_cap = kLatticeOrderCap,
                                   std::uint64_t coset_cap = kCosetCap)
{
  if (mode == MetaMode::Necessary) {
    const std::uint64_t q = G.quotient_order();
    if (q > coset_cap)
      throw InfeasibleError("metahamiltonian NECESSARY: |G/G'| above cap");
    const int p3 = G.p() * G.p() * G.p();
    // whether G' <= <g,h> depends only on the cosets of g and h
    for (std::uint64_t a = 1; a < q; ++a) {
      GroupElement g = G.element(a * p3);
      for (std::uint64_t b = a + 1; b < q; ++b) {
        GroupElement h = G.element(b * p3);
        if (G.comm(g, h) == G.identity())
          continue;
        if (detail::derived_part_rank(G, g, h) != 3)
          return false;
      }
    }
    return true;
  }

  if (G.order() > lattice_cap)
    throw InfeasibleError("metahamiltonian FULL: order " + std::to_string(G.order()) + " above lattice cap");
  const std::uint64_t n = G.order();
  auto key = [](const SubgroupHandle &H) { return H.elements; };
  std::set<std::vector<std::uint64_t>> seen;
  std::vector<SubgroupHandle> layer{subgroup_closure(G, {}, lattice_cap)};
  seen.insert(key(layer[0]));
  while (!layer.empty()) {
    std::vector<SubgroupHandle> next;
    for (const SubgroupHandle &H : layer) {
      std::vector<char> done(n, 0);
      for (std::uint64_t c : H.elements)
        done[c] = 1;
      for (std::uint64_t c = 0; c < n; ++c) {
        if (done[c])
          continue;
        std::vector<GroupElement> gens = H.generators;
        gens.push_back(G.element(c));
        SubgroupHandle K = subgroup_closure(G, gens, lattice_cap);
        for (std::uint64_t k : K.elements)
          done[k] = 1;
        if (!seen.insert(key(K)).second)
          continue;
        if (!is_abelian(G, K) && !is_normal(G, K))
          return false;
        next.push_back(std::move(K));
      }
    }
    layer = std::move(next);
  }
  return true;
}

/// Number of subgroups, by the same layered walk (used for tests and reports).
inline std::uint64_t count_subgroups(const Group &G, std::uint64_t lattice_cap = kLatticeOrderCap)
{
  if (G.order() > lattice_cap)
    throw InfeasibleError("subgroup lattice above cap");
  const std::uint64_t n = G.order();
  std::set<std::vector<std::uint64_t>> seen;
  std::vector<SubgroupHandle> layer{subgroup_closure(G, {}, lattice_cap)};
  seen.insert(layer[0].elements);
  while (!layer.empty()) {
    std::vector<SubgroupHandle> next;
    for (const SubgroupHandle &H : layer) {
      std::vector<char> done(n, 0);
      for (std::uint64_t c : H.elements)
        done[c] = 1;
      for (std::uint64_t c = 0; c < n; ++c) {
        if (done[c])
          continue;
        std::vector<GroupElement> gens = H.generators;
        gens.push_back(G.element(c));
        SubgroupHandle K = subgroup_closure(G, gens, lattice_cap);
        for (std::uint64_t k : K.elements)
          done[k] = 1;
        if (seen.insert(K.elements).second)
          next.push_back(std::move(K));
      }
    }
    layer = std::move(next);
  }
  return seen.size();
}

// ---- isomorphism ----

namespace detail {

// Images of a1, a2, a3 satisfy the power relations of G(w) in terms of their own commutators.
inline bool relations_hold(const Group &A, const Group &B, const std::array<GroupElement, 3> &b)
{
  const PrimeContext &F = B.field();
  std::array<GroupElement, 3> c = {B.comm(b[1], b[2]), B.comm(b[2], b[0]), B.comm(b[0], b[1])};
  for (int k = 0; k < 3; ++k) {
    GroupElement lhs = B.pow(b[k], A.modulus(k));
    std::array<Fp, 3> rhs{};
    for (int j = 0; j < 3; ++j)
      for (int t = 0; t < 3; ++t)
        rhs[t] = F.add(rhs[t], F.mul(A.spec().w(k, j), c[j].e[t]));
    if (!Group::in_derived(lhs) || lhs.e != rhs)
      return false;
  }
  return true;
}

// Images mod Phi(G) = G'G^p, i.e. the i-part mod p.
inline std::array<Fp, 3> frattini_image(const Group &G, const GroupElement &g)
{
  return {static_cast<Fp>(g.i[0] % G.p()), static_cast<Fp>(g.i[1] % G.p()), static_cast<Fp>(g.i[2] % G.p())};
}

inline bool independent(const PrimeContext &F, const std::vector<std::array<Fp, 3>> &v)
{
  Mat3 M;
  for (std::size_t r = 0; r < v.size(); ++r)
    for (int j = 0; j < 3; ++j)
      M(static_cast<int>(r), j) = v[r][j];
  return rank(F, M) == static_cast<int>(v.size());
}

} // namespace detail

struct IsoResult {
  bool isomorphic = false;
  std::optional<std::array<GroupElement, 3>> images; // of a1, a2, a3 in B
};

/// Searches generator images over coset representatives of B'; powers and commutators
/// only depend on the cosets, so this is exhaustive.
inline IsoResult brute_isomorphic(const Group &A, const Group &B, std::uint64_t cap = 1024)
{
  IsoResult res;
  if (A.p() != B.p() || A.order() != B.order())
    return res;
  if (A.order() > cap)
    throw InfeasibleError("brute_isomorphic: order above cap");
  const PrimeContext &F = B.field();
  const int p3 = B.p() * B.p() * B.p();
  std::array<std::vector<GroupElement>, 3> cand;
  for (std::uint64_t q = 0; q < B.quotient_order(); ++q) {
    GroupElement g = B.element(q * p3);
    for (int k = 0; k < 3; ++k)
      if (B.quotient_order(g) == A.modulus(k) && B.element_order(g) == A.element_order(A.gen(k)))
        cand[k].push_back(g);
  }
  for (const auto &b1 : cand[0]) {
    auto f1 = detail::frattini_image(B, b1);
    for (const auto &b2 : cand[1]) {
      auto f2 = detail::frattini_image(B, b2);
      if (!detail::independent(F, {f1, f2}))
        continue;
      for (const auto &b3 : cand[2]) {
        if (!detail::independent(F, {f1, f2, detail::frattini_image(B, b3)}))
          continue;
        std::array<GroupElement, 3> imgs{b1, b2, b3};
        if (detail::relations_hold(A, B, imgs)) {
          res.isomorphic = true;
          res.images = imgs;
          return res;
        }
      }
    }
  }
  return res;
}

/// Reads w off a generating triple whose images form a basis of G/G' of the right type.
inline CharMatrix extract_char_matrix(const Group &G)
{
  const PrimeContext &F = G.field();
  const int p3 = G.p() * G.p() * G.p();
  std::array<std::vector<GroupElement>, 3> cand;
  for (std::uint64_t q = 0; q < G.quotient_order(); ++q) {
    GroupElement g = G.element(q * p3);
    for (int k = 0; k < 3; ++k)
      if (G.quotient_order(g) == G.modulus(k))
        cand[k].push_back(g);
  }
  for (const auto &b1 : cand[0])
    for (const auto &b2 : cand[1]) {
      auto f1 = detail::frattini_image(G, b1), f2 = detail::frattini_image(G, b2);
      if (!detail::independent(F, {f1, f2}))
        continue;
      for (const auto &b3 : cand[2]) {
        if (!detail::independent(F, {f1, f2, detail::frattini_image(G, b3)}))
          continue;
        std::array<GroupElement, 3> b{b1, b2, b3};
        // the quotient images must generate G/G', not only G/Phi
        std::array<GroupElement, 3> c = {G.comm(b2, b3), G.comm(b3, b1), G.comm(b1, b2)};
        Mat3 C, V;
        for (int k = 0; k < 3; ++k)
          for (int j = 0; j < 3; ++j) {
            C(k, j) = c[k].e[j];
            V(k, j) = G.pow(b[k], G.modulus(k)).e[j];
          }
        if (det(F, C) == 0)
          continue;
        return {G.spec().ctx, G.spec().et, mat_mul(F, V, inverse(F, C))};
      }
    }
  throw Error("extract_char_matrix: no generating triple of the required type");
}

// ---- presentations ----

/// Result of reading a presentation "<a,b,c,... | rel, rel, ...>".
struct Presentation {
  ExponentType et;
  Mat3 w;
  std::vector<std::string> generators;
};

namespace detail {

struct Word;
struct Factor {
  enum Kind { Gen, Comm } kind = Gen;
  int sym = -1; // generator index for Gen
  long long exp = 1;
  std::vector<Word> args; // two words for Comm
};
struct Word {
  std::vector<Factor> factors;
};

class PresentationParser {
public:
  PresentationParser(std::string_view s) : s_(s) {}

  std::vector<std::string> gens;
  std::vector<std::vector<Word>> relations; // each relation is a chain of equal words

  void parse()
  {
    skip();
    expect('<');
    do {
      gens.push_back(ident());
      skip();
    } while (accept(','));
    expect('|');
    if (gens.size() < 3)
      throw ParseError("presentation needs at least three generators");
    do {
      std::vector<Word> chain{word()};
      while (accept('='))
        chain.push_back(word());
      if (chain.size() < 2)
        throw ParseError("relation without '='");
      relations.push_back(std::move(chain));
    } while (accept(',') || accept(';'));
    expect('>');
    skip();
    if (i_ != s_.size())
      throw ParseError("trailing characters after presentation");
  }

private:
  std::string_view s_;
  std::size_t i_ = 0;

  void skip()
  {
    while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\t' || s_[i_] == '\n'))
      ++i_;
  }
  bool accept(char c)
  {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  void expect(char c)
  {
    if (!accept(c))
      throw ParseError(std::string("expected '") + c + "' at offset " + std::to_string(i_));
  }
  std::string ident()
  {
    skip();
    std::size_t st = i_;
    while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
      ++i_;
    if (st == i_ || std::isdigit(static_cast<unsigned char>(s_[st])))
      throw ParseError("expected identifier at offset " + std::to_string(st));
    return std::string(s_.substr(st, i_ - st));
  }
  long long integer()
  {
    skip();
    bool brace = accept('{') || accept('(');
    skip();
    bool neg = false;
    if (i_ < s_.size() && (s_[i_] == '-' || s_[i_] == '+'))
      neg = s_[i_++] == '-';
    std::size_t st = i_;
    long long v = 0;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
      v = v * 10 + (s_[i_++] - '0');
      if (v > 1000000000000LL)
        throw ParseError("exponent too large");
    }
    if (st == i_)
      throw ParseError("expected integer at offset " + std::to_string(st));
    if (brace && !accept('}') && !accept(')'))
      throw ParseError("unbalanced exponent braces");
    return neg ? -v : v;
  }
  Word word()
  {
    Word w;
    while (true) {
      skip();
      if (i_ >= s_.size())
        break;
      char c = s_[i_];
      if (c == '*') {
        ++i_;
        continue;
      }
      if (c == '1' && (i_ + 1 >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[i_ + 1])))) {
        ++i_;
        continue;
      }
      Factor f;
      if (c == '[') {
        ++i_;
        f.kind = Factor::Comm;
        f.args.push_back(word());
        expect(',');
        f.args.push_back(word());
        expect(']');
      } else if (std::isalpha(static_cast<unsigned char>(c))) {
        std::string id = ident();
        auto it = std::find(gens.begin(), gens.end(), id);
        if (it == gens.end())
          throw ParseError("unknown generator '" + id + "'");
        f.sym = static_cast<int>(it - gens.begin());
      } else {
        break;
      }
      if (accept('^'))
        f.exp = integer();
      w.factors.push_back(std::move(f));
    }
    if (w.factors.empty()) {
      // a lone "1" is the empty word; anything else is an error
      if (i_ == 0 || s_[i_ - 1] != '1')
        throw ParseError("expected word at offset " + std::to_string(i_));
    }
    return w;
  }
};

} // namespace detail

inline Presentation parse_presentation(const PrimeContext &F, std::string_view text,
                                       std::optional<ExponentType> et_hint = std::nullopt)
{
  detail::PresentationParser P(text);
  P.parse();
  const int p = F.p();
  const int nsym = static_cast<int>(P.gens.size());

  // m_g from the smallest p-adic valuation of g's exponents, unless given
  std::array<int, 3> m{99, 99, 99};
  std::function<void(const detail::Word &, bool)> scan = [&](const detail::Word &w, bool in_comm) {
    for (const auto &f : w.factors) {
      if (f.kind == detail::Factor::Comm) {
        for (const auto &a : f.args)
          scan(a, true);
      } else if (f.sym < 3 && !in_comm) {
        long long e = f.exp < 0 ? -f.exp : f.exp;
        int v = 0;
        if (e == 0)
          continue;
        while (e % p == 0) {
          e /= p;
          ++v;
        }
        m[f.sym] = std::min(m[f.sym], v);
      }
    }
  };
  for (const auto &chain : P.relations)
    for (const auto &w : chain)
      scan(w, false);
  ExponentType et;
  if (et_hint) {
    et = *et_hint;
  } else {
    for (int k = 0; k < 3; ++k)
      if (m[k] == 99 || m[k] == 0)
        throw ParseError("cannot infer the exponent of generator " + P.gens[k] + "; give it explicitly");
    et = ExponentType(m[0], m[1], m[2]);
  }
  std::array<long long, 3> pm;
  for (int k = 0; k < 3; ++k) {
    pm[k] = 1;
    for (int j = 0; j < et[k]; ++j)
      pm[k] *= p;
  }

  // Words in G' become (coefficients on P_g1..P_g3 and central symbols, constant vector).
  struct Lin {
    std::vector<Fp> coef;
    std::array<Fp, 3> konst{};
  };
  auto abel = [&](const detail::Word &w) {
    std::array<long long, 3> v{};
    for (const auto &f : w.factors) {
      if (f.kind == detail::Factor::Gen && f.sym < 3)
        v[f.sym] += f.exp;
    }
    return v;
  };
  std::function<Lin(const detail::Word &)> lin = [&](const detail::Word &w) {
    Lin L;
    L.coef.assign(nsym, 0);
    for (const auto &f : w.factors) {
      if (f.kind == detail::Factor::Comm) {
        for (const auto &a : f.args)
          for (const auto &g : a.factors)
            if (g.kind == detail::Factor::Comm)
              throw ParseError("nested commutators are not supported");
        auto u = abel(f.args[0]), v = abel(f.args[1]);
        // [a_i, a_j] in the basis x=[a2,a3], y=[a3,a1], z=[a1,a2]
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) {
            if (i == j)
              continue;
            int k = 3 - i - j;
            bool positive = (j == (i + 1) % 3);
            Fp c = F.reduce(u[i] % p * (v[j] % p) * f.exp);
            L.konst[k] = positive ? F.add(L.konst[k], c) : F.sub(L.konst[k], c);
          }
      } else if (f.sym < 3) {
        if (f.exp % pm[f.sym] != 0)
          throw ParseError("factor " + P.gens[f.sym] + "^" + std::to_string(f.exp) +
                           " is not in the derived subgroup");
        L.coef[f.sym] = F.add(L.coef[f.sym], F.reduce(f.exp / pm[f.sym]));
      } else {
        L.coef[f.sym] = F.add(L.coef[f.sym], F.reduce(f.exp));
      }
    }
    return L;
  };

  // rows: sum coef * S = rhs (three right-hand sides, one per coordinate)
  std::vector<std::vector<Fp>> rows;
  for (const auto &chain : P.relations)
    for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
      Lin a = lin(chain[k]), b = lin(chain[k + 1]);
      std::vector<Fp> r(nsym + 3);
      for (int s = 0; s < nsym; ++s)
        r[s] = F.sub(a.coef[s], b.coef[s]);
      for (int j = 0; j < 3; ++j)
        r[nsym + j] = F.sub(b.konst[j], a.konst[j]);
      rows.push_back(std::move(r));
    }
  // Gauss-Jordan
  std::vector<int> pivot_col;
  std::size_t rr = 0;
  for (int c = 0; c < nsym && rr < rows.size(); ++c) {
    std::size_t piv = rr;
    while (piv < rows.size() && rows[piv][c] == 0)
      ++piv;
    if (piv == rows.size())
      continue;
    std::swap(rows[rr], rows[piv]);
    Fp iv = F.inv(rows[rr][c]);
    for (Fp &v : rows[rr])
      v = F.mul(v, iv);
    for (std::size_t r2 = 0; r2 < rows.size(); ++r2) {
      if (r2 == rr || rows[r2][c] == 0)
        continue;
      Fp f = rows[r2][c];
      for (int k = 0; k < nsym + 3; ++k)
        rows[r2][k] = F.sub(rows[r2][k], F.mul(f, rows[rr][k]));
    }
    pivot_col.push_back(c);
    ++rr;
  }
  for (std::size_t r2 = rr; r2 < rows.size(); ++r2)
    for (int j = 0; j < 3; ++j)
      if (rows[r2][nsym + j])
        throw ParseError("presentation relations are inconsistent");
  Presentation out;
  out.et = et;
  out.generators = P.gens;
  for (int g = 0; g < 3; ++g) {
    auto it = std::find(pivot_col.begin(), pivot_col.end(), g);
    if (it == pivot_col.end())
      throw ParseError("presentation does not determine " + P.gens[g] + "^(p^m)");
    const auto &row = rows[it - pivot_col.begin()];
    for (int s = 0; s < nsym; ++s)
      if (s != g && row[s] && std::find(pivot_col.begin(), pivot_col.end(), s) == pivot_col.end())
        throw ParseError("presentation does not determine " + P.gens[g] + "^(p^m)");
    for (int j = 0; j < 3; ++j)
      out.w(g, j) = row[nsym + j];
  }
  return out;
}

inline CharMatrix extract_char_matrix(Ctx ctx, std::string_view presentation,
                                      std::optional<ExponentType> et = std::nullopt)
{
  Presentation P = parse_presentation(*ctx, presentation, et);
  return {std::move(ctx), P.et, P.w};
}

inline Group build_group(const CharMatrix &w, std::uint64_t cap = kElementOrderCap)
{
  return Group({w.ctx, w.et, w.w}, cap);
}

} // namespace pgcm
