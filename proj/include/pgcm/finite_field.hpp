#pragma once

// Prime field arithmetic and quadratic residues.

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pgcm {

// Field elements are plain ints kept in [0, p).
using Fp = int;

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Bad numeric input: non-prime p, division by zero, invalid exponent type.
class DomainError : public Error {
public:
  using Error::Error;
};

// A requested exhaustive computation exceeds its configured cap.
class InfeasibleError : public Error {
public:
  using Error::Error;
};

inline bool is_prime(long n)
{
  if (n < 2)
    return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0)
      return false;
  return true;
}

constexpr int kDefaultPrimeCap = 10000;

class PrimeContext {
public:
  explicit PrimeContext(int p, int cap = kDefaultPrimeCap) : p_(p)
  {
    if (p > cap)
      throw DomainError("p=" + std::to_string(p) + " exceeds cap " + std::to_string(cap));
    if (!is_prime(p))
      throw DomainError(std::to_string(p) + " is not prime");

    inv_.assign(p, 0);
    for (int a = 1; a < p; ++a)
      inv_[a] = pow(a, p - 2);

    sqrt_.assign(p, -1);
    for (int a = p - 1; a >= 0; --a)
      sqrt_[static_cast<int>((1LL * a * a) % p)] = a;

    if (p > 2) {
      for (int a = 2; a < p; ++a) {
        if (sqrt_[a] < 0) {
          eta_ = a;
          break;
        }
      }
    }

    // primitive root and discrete logs, used by torus normalization
    for (int g = 1; g < p; ++g) {
      std::vector<int> lg(p, -1);
      int x = 1, k = 0;
      bool ok = true;
      do {
        if (lg[x] >= 0) {
          ok = false;
          break;
        }
        lg[x] = k++;
        x = static_cast<int>((1LL * x * g) % p);
      } while (x != 1);
      if (ok && k == p - 1) {
        gen_ = g;
        log_ = std::move(lg);
        break;
      }
    }
    exp_.assign(p - 1, 1);
    for (int k = 1; k < p - 1; ++k)
      exp_[k] = mul(exp_[k - 1], gen_);
  }

  int p() const { return p_; }
  bool odd() const { return p_ != 2; }

  bool has_eta() const { return eta_.has_value(); }
  Fp eta() const
  {
    if (!eta_)
      throw DomainError("no quadratic non-residue exists for p=2");
    return *eta_;
  }

  Fp reduce(long long a) const
  {
    long long r = a % p_;
    return static_cast<Fp>(r < 0 ? r + p_ : r);
  }
  Fp add(Fp a, Fp b) const { return a + b >= p_ ? a + b - p_ : a + b; }
  Fp sub(Fp a, Fp b) const { return a >= b ? a - b : a - b + p_; }
  Fp neg(Fp a) const { return a == 0 ? 0 : p_ - a; }
  Fp mul(Fp a, Fp b) const { return static_cast<Fp>((1LL * a * b) % p_); }
  Fp inv(Fp a) const
  {
    if (a % p_ == 0)
      throw DomainError("division by zero in F_" + std::to_string(p_));
    return inv_[a];
  }
  Fp div(Fp a, Fp b) const { return mul(a, inv(b)); }
  Fp pow(Fp a, long long e) const
  {
    long long r = 1, b = a % p_;
    if (e < 0) {
      b = inv(static_cast<Fp>(b));
      e = -e;
    }
    while (e > 0) {
      if (e & 1)
        r = r * b % p_;
      b = b * b % p_;
      e >>= 1;
    }
    return static_cast<Fp>(r);
  }

  // 0 counts as a square; use is_zero to tell it apart.
  bool is_square(Fp a) const { return sqrt_[a] >= 0; }
  static bool is_zero(Fp a) { return a == 0; }
  // Some b with b*b == a, or nullopt.
  std::optional<Fp> sqrt(Fp a) const
  {
    if (sqrt_[a] < 0)
      return std::nullopt;
    return sqrt_[a];
  }
  // Representative of the square class of a != 0: 1 or eta.
  Fp square_class(Fp a) const { return is_square(a) ? 1 : eta(); }

  Fp generator() const { return gen_; }
  // Discrete log base generator(), in [0, p-1).
  int log(Fp a) const { return log_[a]; }
  Fp exp(long long k) const
  {
    long long n = p_ - 1;
    return exp_[static_cast<int>(((k % n) + n) % n)];
  }

private:
  int p_;
  std::optional<Fp> eta_;
  Fp gen_ = 1;
  std::vector<Fp> inv_;
  std::vector<int> sqrt_;
  std::vector<int> log_;
  std::vector<Fp> exp_;
};

using Ctx = std::shared_ptr<const PrimeContext>;

inline Ctx make_context(int p, int cap = kDefaultPrimeCap)
{
  return std::make_shared<const PrimeContext>(p, cap);
}

} // namespace pgcm
