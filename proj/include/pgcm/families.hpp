#pragma once

// The labeled families of characteristic matrices and their instantiations.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "iso_action.hpp"

namespace pgcm {

struct FamilyLabel {
  std::string family;
  std::optional<Fp> nu, nu1, nu2, t, r;

  friend bool operator==(const FamilyLabel &, const FamilyLabel &) = default;
};

namespace detail {

// Which primes a family exists for.
enum class Parity { Any, Odd, Even };

struct FamilyDef {
  const char *name;
  CaseTag tag;
  Parity parity;
  // nine tokens, row-major: 0 1 -1 t v v1 v2 r
  const char *pattern;
};

// Table order within each tag follows the published lists.
inline const std::vector<FamilyDef> &family_table()
{
  using enum CaseTag;
  static const std::vector<FamilyDef> table = {
      {"A1", Strict, Parity::Any, "1 0 0 0 v1 0 0 0 v2"},
      {"A2", Strict, Parity::Any, "1 0 0 0 0 1 0 t 0"},
      {"A3", Strict, Parity::Any, "0 0 t 0 1 0 1 0 0"},
      {"A4", Strict, Parity::Any, "0 0 1 1 0 0 0 1 0"},
      {"A5", Strict, Parity::Any, "0 1 0 0 0 1 1 0 0"},
      {"A6", Strict, Parity::Any, "0 t 0 1 0 0 0 0 1"},
      {"B1", Strict, Parity::Any, "1 0 0 0 v 0 0 0 0"},
      {"B2", Strict, Parity::Any, "1 0 0 0 0 1 0 0 0"},
      {"B3", Strict, Parity::Any, "0 0 1 0 1 0 0 0 0"},
      {"B4", Strict, Parity::Any, "0 1 0 0 0 1 0 0 0"},
      {"B5", Strict, Parity::Any, "0 0 1 0 0 0 0 1 0"},
      {"B6", Strict, Parity::Any, "1 0 0 0 0 0 0 0 v"},
      {"B7", Strict, Parity::Any, "1 0 0 0 0 0 0 1 0"},
      {"B8", Strict, Parity::Any, "0 1 0 0 0 0 0 0 1"},
      {"B9", Strict, Parity::Any, "0 0 0 0 1 0 1 0 0"},
      {"B10", Strict, Parity::Any, "0 0 0 0 0 1 1 0 0"},
      {"B11", Strict, Parity::Any, "0 0 0 1 0 0 0 0 1"},
      {"B12", Strict, Parity::Any, "0 0 0 1 0 0 0 1 0"},
      {"B13", Strict, Parity::Any, "0 1 0 0 0 0 1 0 0"},
      {"B14", Strict, Parity::Any, "0 0 t 0 0 0 1 0 0"},
      {"B15", Strict, Parity::Any, "0 0 1 1 0 0 0 0 0"},
      {"B16", Strict, Parity::Any, "0 t 0 1 0 0 0 0 0"},
      {"B17", Strict, Parity::Any, "0 0 0 0 1 0 0 0 v"},
      {"B18", Strict, Parity::Any, "0 0 0 0 0 1 0 t 0"},
      {"C1", Strict, Parity::Any, "1 0 0 0 0 0 0 0 0"},
      {"C2", Strict, Parity::Any, "0 1 0 0 0 0 0 0 0"},
      {"C3", Strict, Parity::Any, "0 0 1 0 0 0 0 0 0"},
      {"C4", Strict, Parity::Any, "0 0 0 1 0 0 0 0 0"},
      {"C5", Strict, Parity::Any, "0 0 0 0 1 0 0 0 0"},
      {"C6", Strict, Parity::Any, "0 0 0 0 0 1 0 0 0"},
      {"C7", Strict, Parity::Any, "0 0 0 0 0 0 0 0 1"},
      {"C8", Strict, Parity::Any, "0 0 0 0 0 0 0 1 0"},
      {"C9", Strict, Parity::Any, "0 0 0 0 0 0 1 0 0"},
      {"C10", Strict, Parity::Any, "0 0 0 0 0 0 0 0 0"},

      {"D1", Top, Parity::Odd, "1 0 0 0 0 1 0 -1 0"},
      {"D2", Top, Parity::Odd, "1 0 0 0 v 1 0 -1 0"},
      {"D3", Top, Parity::Odd, "1 0 0 0 1 0 0 0 v"},
      {"D4", Top, Parity::Odd, "1 0 0 0 1 1 0 -1 r"},
      {"E1", Top, Parity::Odd, "0 0 0 0 0 1 0 -1 0"},
      {"E2", Top, Parity::Odd, "0 0 0 0 1 1 0 -1 0"},
      {"E3", Top, Parity::Odd, "0 0 0 0 1 0 0 0 v"},
      {"E4", Top, Parity::Odd, "0 0 0 0 1 1 0 -1 r"},
      {"D5", Top, Parity::Even, "1 0 0 0 0 1 0 1 0"},
      {"D6", Top, Parity::Even, "1 0 0 0 1 0 0 0 1"},
      {"D7", Top, Parity::Even, "1 0 0 0 1 0 0 1 1"},
      {"E5", Top, Parity::Even, "0 0 0 0 0 1 0 1 0"},
      {"E6", Top, Parity::Even, "0 0 0 0 1 0 0 0 1"},
      {"E7", Top, Parity::Even, "0 0 0 0 1 0 0 1 1"},
      {"D8", Top, Parity::Any, "0 0 1 0 1 0 t 0 0"},
      {"D9", Top, Parity::Any, "0 0 1 1 0 0 0 1 0"},
      {"E8", Top, Parity::Any, "1 0 0 0 0 1 0 0 0"},
      {"E9", Top, Parity::Any, "1 0 0 0 0 0 0 0 v"},
      {"E10", Top, Parity::Any, "0 0 0 0 0 1 1 0 0"},
      {"E11", Top, Parity::Any, "0 0 0 1 0 0 0 0 1"},
      {"E12", Top, Parity::Any, "0 0 1 0 1 0 0 0 0"},
      {"E13", Top, Parity::Any, "0 0 1 0 0 0 0 1 0"},
      {"E14", Top, Parity::Any, "0 0 1 1 0 0 0 0 0"},
      {"E15", Top, Parity::Any, "0 0 1 0 0 0 t 0 0"},
      {"F1", Top, Parity::Any, "1 0 0 0 0 0 0 0 0"},
      {"F2", Top, Parity::Any, "0 0 0 0 0 1 0 0 0"},
      {"F3", Top, Parity::Any, "0 0 0 0 0 0 0 0 1"},
      {"F4", Top, Parity::Any, "0 0 0 1 0 0 0 0 0"},
      {"F5", Top, Parity::Any, "0 0 0 0 0 0 0 0 0"},
      {"F6", Top, Parity::Any, "0 0 1 0 0 0 0 0 0"},

      {"G1", Bottom, Parity::Odd, "0 -1 0 1 0 0 0 0 1"},
      {"G2", Bottom, Parity::Odd, "v -1 0 1 0 0 0 0 1"},
      {"G3", Bottom, Parity::Odd, "1 0 0 0 v 0 0 0 1"},
      {"G4", Bottom, Parity::Odd, "1 -1 0 1 r 0 0 0 1"},
      {"H1", Bottom, Parity::Odd, "0 -1 0 1 0 0 0 0 0"},
      {"H2", Bottom, Parity::Odd, "1 -1 0 1 0 0 0 0 0"},
      {"H3", Bottom, Parity::Odd, "1 0 0 0 v 0 0 0 0"},
      {"H4", Bottom, Parity::Odd, "1 -1 0 1 r 0 0 0 0"},
      {"G5", Bottom, Parity::Even, "0 1 0 1 0 0 0 0 1"},
      {"G6", Bottom, Parity::Even, "1 0 0 0 1 0 0 0 1"},
      {"G7", Bottom, Parity::Even, "1 1 0 0 1 0 0 0 1"},
      {"H5", Bottom, Parity::Even, "0 1 0 1 0 0 0 0 0"},
      {"H6", Bottom, Parity::Even, "1 0 0 0 1 0 0 0 0"},
      {"H7", Bottom, Parity::Even, "1 1 0 0 1 0 0 0 0"},
      {"G8", Bottom, Parity::Any, "1 0 0 0 0 1 0 t 0"},
      {"G9", Bottom, Parity::Any, "0 1 0 0 0 1 1 0 0"},
      {"H8", Bottom, Parity::Any, "0 0 0 1 0 0 0 0 1"},
      {"H9", Bottom, Parity::Any, "0 0 0 0 v 0 0 0 1"},
      {"H10", Bottom, Parity::Any, "0 0 0 1 0 0 0 1 0"},
      {"H11", Bottom, Parity::Any, "0 0 0 0 1 0 1 0 0"},
      {"H12", Bottom, Parity::Any, "1 0 0 0 0 1 0 0 0"},
      {"H13", Bottom, Parity::Any, "0 1 0 0 0 1 0 0 0"},
      {"H14", Bottom, Parity::Any, "0 0 0 0 0 1 1 0 0"},
      {"H15", Bottom, Parity::Any, "0 0 0 0 0 1 0 t 0"},
      {"I1", Bottom, Parity::Any, "0 0 0 0 0 0 0 0 1"},
      {"I2", Bottom, Parity::Any, "0 0 0 1 0 0 0 0 0"},
      {"I3", Bottom, Parity::Any, "0 0 0 0 1 0 0 0 0"},
      {"I4", Bottom, Parity::Any, "0 0 0 0 0 0 1 0 0"},
      {"I5", Bottom, Parity::Any, "0 0 0 0 0 0 0 0 0"},
      {"I6", Bottom, Parity::Any, "0 0 0 0 0 1 0 0 0"},

      {"J1", Equal, Parity::Odd, "1 0 0 0 1 0 0 0 1"},
      {"J2", Equal, Parity::Odd, "1 0 0 0 0 1 0 -1 0"},
      {"J3", Equal, Parity::Odd, "1 0 0 0 v 1 0 -1 0"},
      {"J4", Equal, Parity::Odd, "1 0 0 0 1 1 0 -1 r"},
      {"J5", Equal, Parity::Odd, "0 0 1 0 1 1 1 -1 0"},
      {"K1", Equal, Parity::Odd, "1 0 0 0 v 0 0 0 0"},
      {"K2", Equal, Parity::Odd, "1 0 0 0 0 1 0 0 0"},
      {"K3", Equal, Parity::Odd, "0 0 1 0 0 0 0 1 0"},
      {"K4", Equal, Parity::Odd, "0 0 0 0 0 1 0 -1 0"},
      {"K5", Equal, Parity::Odd, "0 0 0 0 1 1 0 -1 0"},
      {"K6", Equal, Parity::Odd, "0 0 0 0 1 1 0 -1 r"},
      {"L1", Equal, Parity::Odd, "0 0 0 0 0 0 0 0 0"},
      {"L2", Equal, Parity::Odd, "1 0 0 0 0 0 0 0 0"},
      {"L3", Equal, Parity::Odd, "0 0 0 0 0 1 0 0 0"},

      {"M1", P2Special, Parity::Even, "1 0 0 0 0 1 0 1 0"},
      {"M2", P2Special, Parity::Even, "1 0 0 0 1 0 0 0 1"},
      {"M3", P2Special, Parity::Even, "1 0 0 0 1 0 0 1 1"},
      {"M4", P2Special, Parity::Even, "0 0 1 0 1 0 1 0 0"},
      {"M5", P2Special, Parity::Even, "0 0 1 1 0 0 0 1 0"},
      {"M6", P2Special, Parity::Even, "0 0 1 0 1 0 1 1 0"},
      {"M7", P2Special, Parity::Even, "0 1 1 0 1 0 1 1 0"},
      {"N1", P2Special, Parity::Even, "0 0 0 0 0 1 0 1 0"},
      {"N2", P2Special, Parity::Even, "0 0 0 0 1 0 0 0 1"},
      {"N3", P2Special, Parity::Even, "0 0 0 0 1 0 0 1 1"},
      {"N4", P2Special, Parity::Even, "0 0 0 0 1 1 1 1 1"},
      {"N5", P2Special, Parity::Even, "1 0 0 0 0 1 0 0 0"},
      {"N6", P2Special, Parity::Even, "1 0 0 0 0 0 0 0 1"},
      {"N7", P2Special, Parity::Even, "0 0 0 0 0 1 1 0 0"},
      {"N8", P2Special, Parity::Even, "0 0 0 1 0 0 0 0 1"},
      {"N9", P2Special, Parity::Even, "0 0 0 1 0 1 0 0 1"},
      {"N10", P2Special, Parity::Even, "0 0 1 0 0 0 0 1 0"},
      {"N11", P2Special, Parity::Even, "0 0 1 1 0 0 0 0 0"},
      {"N12", P2Special, Parity::Even, "0 0 1 0 0 0 1 0 0"},
      {"N13", P2Special, Parity::Even, "0 0 1 1 0 0 1 0 0"},
      {"O1", P2Special, Parity::Even, "1 0 0 0 0 0 0 0 0"},
      {"O2", P2Special, Parity::Even, "0 0 0 1 0 0 0 0 0"},
      {"O3", P2Special, Parity::Even, "0 0 0 1 0 0 1 0 0"},

      {"P1", Equal, Parity::Even, "1 0 0 0 1 0 0 0 1"},
      {"P2", Equal, Parity::Even, "1 0 0 0 1 0 0 1 1"},
      {"P3", Equal, Parity::Even, "1 1 1 0 1 0 0 0 1"},
      {"P4", Equal, Parity::Even, "1 0 1 0 0 1 0 1 0"},
      {"Q1", Equal, Parity::Even, "1 0 0 0 1 0 0 0 0"},
      {"Q2", Equal, Parity::Even, "0 1 0 1 0 0 0 0 0"},
      {"Q3", Equal, Parity::Even, "1 0 0 1 1 0 0 0 0"},
      {"Q4", Equal, Parity::Even, "0 0 1 0 1 0 0 0 0"},
      {"Q5", Equal, Parity::Even, "0 1 0 0 0 1 0 0 0"},
      {"R1", Equal, Parity::Even, "0 1 0 0 0 0 0 0 0"},
      {"R2", Equal, Parity::Even, "1 0 0 0 0 0 0 0 0"},
      {"R3", Equal, Parity::Even, "0 0 0 0 0 0 0 0 0"},
  };
  return table;
}

inline bool parity_ok(Parity q, const PrimeContext &F)
{
  return q == Parity::Any || (q == Parity::Odd) == F.odd();
}

inline std::vector<std::string_view> tokens(const char *pattern)
{
  std::vector<std::string_view> out;
  std::string_view s(pattern);
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t j = s.find(' ', i);
    if (j == std::string_view::npos)
      j = s.size();
    out.push_back(s.substr(i, j - i));
    i = j + 1;
  }
  return out;
}

struct ParamUse {
  bool nu = false, nu1 = false, nu2 = false, t = false, r = false;
};

inline ParamUse param_use(const FamilyDef &d)
{
  ParamUse u;
  for (std::string_view tok : tokens(d.pattern)) {
    u.nu |= tok == "v";
    u.nu1 |= tok == "v1";
    u.nu2 |= tok == "v2";
    u.t |= tok == "t";
    u.r |= tok == "r";
  }
  return u;
}

} // namespace detail

/// The ten groups of order 2^6 with G' = C_2^3, as presentations.
/// Main generators come first; other symbols are central.
inline const std::array<const char *, 10> &tiny_presentations()
{
  static const std::array<const char *, 10> s = {
      "<a,b,c,d,e,f | a^2=b^2=c^2=d^2=e^2=f^2=1, [b,c]=d, [c,a]=e, [a,b]=f, "
      "[d,a]=[d,b]=[d,c]=[e,a]=[e,b]=[e,c]=[f,a]=[f,b]=[f,c]=1>",
      "<a,b,c,d,e | a^2=b^2=c^4=d^2=e^2=1, [b,c]=d, [c,a]=e, [a,b]=c^2, "
      "[d,a]=[d,b]=[d,c]=[e,a]=[e,b]=[e,c]=1>",
      "<a,b,c,d | a^4=b^4=c^2=d^2=1, [b,c]=d, [c,a]=a^2b^2, [a,b]=b^2, [d,a]=[d,b]=[d,c]=1>",
      "<a,b,c,d | a^4=b^4=c^2=d^2=1, [b,c]=d, [c,a]=a^2b^2, [a,b]=a^2, [d,a]=[d,b]=[d,c]=1>",
      "<a,b,c,d,e | a^4=b^4=c^2=d^2=e^2=1, [b,c]=d, [c,a]=e, [a,b]=a^2=b^2, "
      "[d,a]=[d,b]=[d,c]=[e,a]=[e,b]=[e,c]=1>",
      "<a,b,c,d,e | a^4=b^4=c^4=d^2=e^2=1, [b,c]=d, [c,a]=e, [a,b]=a^2=b^2=c^2, "
      "[d,a]=[d,b]=[d,c]=[e,a]=[e,b]=[e,c]=1>",
      "<a,b,c,d | a^4=b^2=c^4=d^2=1, [b,c]=d, [c,a]=a^2, [a,b]=c^2, [d,a]=[d,b]=[d,c]=1>",
      "<a,b,c,d | a^4=b^4=c^4=d^2=1, [b,c]=d, [c,a]=a^2, [a,b]=b^2=c^2, [d,a]=[d,b]=[d,c]=1>",
      "<a,b,c,d | a^4=b^4=c^4=d^2=1, [b,c]=d, [c,a]=a^2b^2, [a,b]=a^2=c^2, [d,a]=[d,b]=[d,c]=1>",
      "<a,b,c | a^4=b^4=c^4=1, [b,c]=a^2b^2, [c,a]=b^2c^2, [a,b]=c^2, [c^2,a]=[c^2,b]=1>",
  };
  return s;
}

inline bool is_tiny_family(std::string_view name)
{
  if (name.size() < 2 || name[0] != 'S')
    return false;
  int k = 0;
  for (char ch : name.substr(1)) {
    if (ch < '0' || ch > '9')
      return false;
    k = k * 10 + (ch - '0');
  }
  return name[1] != '0' && k >= 1 && k <= 10;
}

inline const detail::FamilyDef *find_family(std::string_view name)
{
  for (const auto &d : detail::family_table())
    if (name == d.name)
      return &d;
  return nullptr;
}

/// Families listed for a tag at this prime, in table order (S-labels excluded).
inline std::vector<const detail::FamilyDef *> families_for(const PrimeContext &F, CaseTag tag)
{
  std::vector<const detail::FamilyDef *> out;
  for (const auto &d : detail::family_table())
    if (d.tag == tag && detail::parity_ok(d.parity, F))
      out.push_back(&d);
  return out;
}

namespace detail {

inline std::string fmt_nu(const PrimeContext &F, Fp v)
{
  return v == 1 ? "1" : (F.odd() && v == F.eta()) ? "eta" : std::to_string(v);
}

} // namespace detail

// Grammar: FAMILY or FAMILY[key=value,...] with keys nu, nu1, nu2, t, r.
inline std::string to_string(const PrimeContext &F, const FamilyLabel &l)
{
  std::vector<std::string> parts;
  if (l.nu1)
    parts.push_back("nu1=" + detail::fmt_nu(F, *l.nu1));
  if (l.nu2)
    parts.push_back("nu2=" + detail::fmt_nu(F, *l.nu2));
  if (l.nu)
    parts.push_back("nu=" + detail::fmt_nu(F, *l.nu));
  if (l.t)
    parts.push_back("t=" + std::to_string(*l.t));
  if (l.r)
    parts.push_back("r=" + std::to_string(*l.r));
  std::string s = l.family;
  if (!parts.empty()) {
    s += '[';
    for (std::size_t i = 0; i < parts.size(); ++i)
      s += (i ? "," : "") + parts[i];
    s += ']';
  }
  return s;
}

/// True when the label mentions eta, so output should print its value.
inline bool uses_eta(const PrimeContext &F, const FamilyLabel &l)
{
  if (!F.odd())
    return false;
  for (const auto &v : {l.nu, l.nu1, l.nu2})
    if (v && *v == F.eta())
      return true;
  return false;
}

inline void validate_label(const PrimeContext &F, CaseTag tag, const FamilyLabel &l)
{
  if (tag == CaseTag::P2Tiny) {
    if (!is_tiny_family(l.family))
      throw DomainError("label " + l.family + " is not one of S1..S10");
    if (l.nu || l.nu1 || l.nu2 || l.t || l.r)
      throw DomainError("S-labels take no parameters");
    return;
  }
  const detail::FamilyDef *d = find_family(l.family);
  if (!d)
    throw DomainError("unknown family " + l.family);
  if (d->tag != tag || !detail::parity_ok(d->parity, F))
    throw DomainError("family " + l.family + " does not occur for " + to_string(tag) +
                      " at p=" + std::to_string(F.p()));
  detail::ParamUse u = detail::param_use(*d);
  auto check_nu = [&](const std::optional<Fp> &v, bool used, const char *key) {
    if (used != v.has_value())
      throw DomainError(std::string("family ") + l.family + (used ? " needs " : " takes no ") + key);
    if (v && !(*v == 1 || (F.odd() && *v == F.eta())))
      throw DomainError(std::string(key) + " must be 1 or eta");
  };
  check_nu(l.nu, u.nu, "nu");
  check_nu(l.nu1, u.nu1, "nu1");
  check_nu(l.nu2, u.nu2, "nu2");
  if (u.t != l.t.has_value())
    throw DomainError("family " + l.family + (u.t ? " needs t" : " takes no t"));
  if (l.t && (*l.t <= 0 || *l.t >= F.p()))
    throw DomainError("t must be in 1..p-1");
  if (u.r != l.r.has_value())
    throw DomainError("family " + l.family + (u.r ? " needs r" : " takes no r"));
  if (l.r && (*l.r < 1 || *l.r > F.p() - 2))
    throw DomainError("r must be in 1..p-2");
}

inline FamilyLabel parse_label(const PrimeContext &F, std::string_view text)
{
  FamilyLabel l;
  std::size_t br = text.find('[');
  l.family = std::string(text.substr(0, br));
  if (l.family.empty())
    throw ParseError("empty family label");
  if (br == std::string_view::npos)
    return l;
  if (text.back() != ']')
    throw ParseError("label parameters must end with ']'");
  std::string_view body = text.substr(br + 1, text.size() - br - 2);
  while (!body.empty()) {
    std::size_t comma = body.find(',');
    std::string_view kv = body.substr(0, comma);
    body = comma == std::string_view::npos ? std::string_view{} : body.substr(comma + 1);
    std::size_t eq = kv.find('=');
    if (eq == std::string_view::npos)
      throw ParseError("label parameter without '='");
    std::string_view key = kv.substr(0, eq), val = kv.substr(eq + 1);
    Fp v;
    if (val == "eta") {
      v = F.eta();
    } else {
      if (val.empty())
        throw ParseError("empty parameter value");
      long long n = 0;
      bool neg = val[0] == '-';
      for (char ch : val.substr(neg ? 1 : 0)) {
        if (ch < '0' || ch > '9')
          throw ParseError("bad parameter value '" + std::string(val) + "'");
        n = n * 10 + (ch - '0');
        if (n > 1000000000LL)
          throw ParseError("parameter value too large");
      }
      v = F.reduce(neg ? -n : n);
    }
    if (key == "nu")
      l.nu = v;
    else if (key == "nu1")
      l.nu1 = v;
    else if (key == "nu2")
      l.nu2 = v;
    else if (key == "t")
      l.t = v;
    else if (key == "r")
      l.r = v;
    else
      throw ParseError("unknown label parameter '" + std::string(key) + "'");
  }
  return l;
}

/// Table matrix with parameters substituted. S-labels are handled by the classifier.
inline Mat3 family_matrix(const PrimeContext &F, const FamilyLabel &l)
{
  const detail::FamilyDef *d = find_family(l.family);
  if (!d)
    throw DomainError("no matrix table entry for " + l.family);
  Mat3 M;
  auto toks = detail::tokens(d->pattern);
  for (int k = 0; k < 9; ++k) {
    std::string_view tok = toks[k];
    Fp v = 0;
    if (tok == "1")
      v = 1;
    else if (tok == "-1")
      v = F.neg(1);
    else if (tok == "v")
      v = l.nu.value();
    else if (tok == "v1")
      v = l.nu1.value();
    else if (tok == "v2")
      v = l.nu2.value();
    else if (tok == "t")
      v = l.t.value();
    else if (tok == "r")
      v = l.r.value();
    M.a[k] = v;
  }
  return M;
}

/// Every instantiation of one family, in parameter order (1 before eta, t and r ascending).
inline std::vector<FamilyLabel> instantiate(const PrimeContext &F, const detail::FamilyDef &d)
{
  detail::ParamUse u = detail::param_use(d);
  std::vector<Fp> nus{1};
  if (F.odd())
    nus.push_back(F.eta());
  std::vector<FamilyLabel> out;
  FamilyLabel base;
  base.family = d.name;
  if (u.nu1) {
    for (Fp a : nus)
      for (Fp b : nus) {
        FamilyLabel l = base;
        l.nu1 = a;
        l.nu2 = b;
        out.push_back(l);
      }
  } else if (u.nu) {
    for (Fp a : nus) {
      FamilyLabel l = base;
      l.nu = a;
      out.push_back(l);
    }
  } else if (u.t) {
    for (Fp t = 1; t < F.p(); ++t) {
      FamilyLabel l = base;
      l.t = t;
      out.push_back(l);
    }
  } else if (u.r) {
    for (Fp r = 1; r <= F.p() - 2; ++r) {
      FamilyLabel l = base;
      l.r = r;
      out.push_back(l);
    }
  } else {
    out.push_back(base);
  }
  return out;
}

inline std::vector<FamilyLabel> enumerate_families(const PrimeContext &F, const ExponentType &et)
{
  CaseTag tag = case_tag(F, et);
  std::vector<FamilyLabel> out;
  if (tag == CaseTag::P2Tiny) {
    for (int k = 1; k <= 10; ++k)
      out.push_back({"S" + std::to_string(k), {}, {}, {}, {}, {}});
    return out;
  }
  for (const detail::FamilyDef *d : families_for(F, tag))
    for (FamilyLabel &l : instantiate(F, *d))
      out.push_back(std::move(l));
  return out;
}

} // namespace pgcm
