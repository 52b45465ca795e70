#pragma once

// Exact arithmetic on numbers of the form n / 2^e.
//
// Dyadic<BigInt> is the ordinary dyadic rational used for every parameter the
// reduction emits. Dyadic<QuarticInt> extends the numerator ring to
// Z[2^(1/4)], which is what the perfect-distribution family needs once a node
// has three or four parents (alpha^F is then an odd power of a fourth root of
// two). Both share one normalization: the numerator is not divisible by two
// unless the denominator is already 1.

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "bnhard/error.hpp"

namespace bnhard {

using BigInt = mpz_class;

inline bool is_zero(const BigInt& v) { return sgn(v) == 0; }

// Number of trailing zero bits; callers must not pass zero.
inline unsigned two_adic_valuation(const BigInt& v) {
  return static_cast<unsigned>(mpz_scan1(v.get_mpz_t(), 0));
}

inline void shift_left(BigInt& v, unsigned bits) {
  mpz_mul_2exp(v.get_mpz_t(), v.get_mpz_t(), bits);
}

inline void shift_right_exact(BigInt& v, unsigned bits) {
  mpz_tdiv_q_2exp(v.get_mpz_t(), v.get_mpz_t(), bits);
}

// a0 + a1 r + a2 r^2 + a3 r^3 with r = 2^(1/4), so r^4 = 2.
class QuarticInt {
 public:
  QuarticInt() = default;
  QuarticInt(long value) { c_[0] = value; }  // NOLINT(google-explicit-constructor)
  explicit QuarticInt(const BigInt& value) { c_[0] = value; }

  // r^k for k in [0, 4).
  static QuarticInt root_power(int k) {
    QuarticInt out;
    out.c_[static_cast<std::size_t>(k)] = 1;
    return out;
  }

  const BigInt& coefficient(int i) const { return c_[static_cast<std::size_t>(i)]; }

  bool is_zero() const {
    for (const auto& c : c_) {
      if (sgn(c) != 0) return false;
    }
    return true;
  }

  QuarticInt& operator+=(const QuarticInt& o) {
    for (std::size_t i = 0; i < 4; ++i) c_[i] += o.c_[i];
    return *this;
  }
  QuarticInt& operator-=(const QuarticInt& o) {
    for (std::size_t i = 0; i < 4; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  QuarticInt& operator*=(const QuarticInt& o) {
    *this = *this * o;
    return *this;
  }

  friend QuarticInt operator+(QuarticInt a, const QuarticInt& b) { return a += b; }
  friend QuarticInt operator-(QuarticInt a, const QuarticInt& b) { return a -= b; }
  friend QuarticInt operator*(const QuarticInt& a, const QuarticInt& b) {
    QuarticInt out;
    BigInt term;
    for (std::size_t i = 0; i < 4; ++i) {
      if (sgn(a.c_[i]) == 0) continue;
      for (std::size_t j = 0; j < 4; ++j) {
        if (sgn(b.c_[j]) == 0) continue;
        mpz_mul(term.get_mpz_t(), a.c_[i].get_mpz_t(), b.c_[j].get_mpz_t());
        std::size_t k = i + j;
        if (k >= 4) {
          k -= 4;
          term *= 2;
        }
        out.c_[k] += term;
      }
    }
    return out;
  }
  friend bool operator==(const QuarticInt& a, const QuarticInt& b) {
    for (std::size_t i = 0; i < 4; ++i) {
      if (a.c_[i] != b.c_[i]) return false;
    }
    return true;
  }

  friend unsigned two_adic_valuation(const QuarticInt& v) {
    unsigned best = ~0u;
    for (const auto& c : v.c_) {
      if (sgn(c) != 0) best = std::min(best, two_adic_valuation(c));
    }
    return best;
  }
  friend void shift_left(QuarticInt& v, unsigned bits) {
    for (auto& c : v.c_) shift_left(c, bits);
  }
  friend void shift_right_exact(QuarticInt& v, unsigned bits) {
    for (auto& c : v.c_) shift_right_exact(c, bits);
  }
  friend bool is_zero(const QuarticInt& v) { return v.is_zero(); }

  std::string to_string() const {
    std::string out;
    static constexpr std::array<std::string_view, 4> kBasis = {"", "*r", "*r^2", "*r^3"};
    for (std::size_t i = 0; i < 4; ++i) {
      if (sgn(c_[i]) == 0) continue;
      if (!out.empty()) out += " + ";
      out += c_[i].get_str();
      out += kBasis[i];
    }
    return out.empty() ? "0" : out;
  }

 private:
  std::array<BigInt, 4> c_{};
};

// Degree of the radical adjoined by the numerator ring: 2^(k/degree) is
// representable for integer k.
template <class Int>
struct RootDegree;
template <>
struct RootDegree<BigInt> {
  static constexpr long value = 1;
};
template <>
struct RootDegree<QuarticInt> {
  static constexpr long value = 4;
};

template <class Int>
Int root_power(long k);
template <>
inline BigInt root_power<BigInt>(long /*k*/) {
  return BigInt(1);
}
template <>
inline QuarticInt root_power<QuarticInt>(long k) {
  return QuarticInt::root_power(static_cast<int>(k));
}

namespace detail {
// Unqualified so QuarticInt's hidden friend is found by argument lookup.
template <class Int>
bool numerator_is_zero(const Int& v) {
  return is_zero(v);
}
}  // namespace detail

template <class Int>
class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(long value) : num_(value) {}  // NOLINT(google-explicit-constructor)
  Dyadic(Int numerator, unsigned log2_denominator) : num_(std::move(numerator)), exp_(log2_denominator) {
    normalize();
  }

  // 2^(num/den), when the ring can represent it exactly.
  static Dyadic two_to(long num, long den) {
    if (den <= 0) throw InvalidArgument("two_to: denominator must be positive");
    constexpr long degree = RootDegree<Int>::value;
    if ((num * degree) % den != 0) {
      throw InvalidArgument("2^(" + std::to_string(num) + "/" + std::to_string(den) +
                            ") is not representable with a degree-" + std::to_string(degree) +
                            " radical");
    }
    long q = num * degree / den;
    long whole = q >= 0 ? q / degree : -((-q + degree - 1) / degree);
    long rem = q - whole * degree;
    Int n = root_power<Int>(rem);
    if (whole >= 0) {
      shift_left(n, static_cast<unsigned>(whole));
      return Dyadic(std::move(n), 0);
    }
    return Dyadic(std::move(n), static_cast<unsigned>(-whole));
  }

  const Int& numerator() const { return num_; }
  unsigned log2_denominator() const { return exp_; }
  bool is_zero() const { return detail::numerator_is_zero(num_); }

  // Numerator over the denominator 2^log2_den (which must be >= ours).
  Int numerator_at(unsigned log2_den) const {
    if (log2_den < exp_) throw InvalidArgument("numerator_at: target denominator too small");
    Int n = num_;
    shift_left(n, log2_den - exp_);
    return n;
  }

  // Multiply by 2^bits (bits may be negative).
  Dyadic scaled(int bits) const {
    if (bits >= 0) {
      Int n = num_;
      shift_left(n, static_cast<unsigned>(bits));
      return Dyadic(std::move(n), exp_);
    }
    return Dyadic(num_, exp_ + static_cast<unsigned>(-bits));
  }

  Dyadic& operator+=(const Dyadic& o) {
    if (exp_ >= o.exp_) {
      num_ += o.numerator_at(exp_);
    } else {
      shift_left(num_, o.exp_ - exp_);
      num_ += o.num_;
      exp_ = o.exp_;
    }
    normalize();
    return *this;
  }
  Dyadic& operator-=(const Dyadic& o) {
    if (exp_ >= o.exp_) {
      num_ -= o.numerator_at(exp_);
    } else {
      shift_left(num_, o.exp_ - exp_);
      num_ -= o.num_;
      exp_ = o.exp_;
    }
    normalize();
    return *this;
  }
  Dyadic& operator*=(const Dyadic& o) {
    num_ *= o.num_;
    exp_ += o.exp_;
    normalize();
    return *this;
  }

  friend Dyadic operator+(Dyadic a, const Dyadic& b) { return a += b; }
  friend Dyadic operator-(Dyadic a, const Dyadic& b) { return a -= b; }
  friend Dyadic operator*(Dyadic a, const Dyadic& b) { return a *= b; }
  friend bool operator==(const Dyadic& a, const Dyadic& b) { return a.exp_ == b.exp_ && a.num_ == b.num_; }

 private:
  void normalize() {
    if (detail::numerator_is_zero(num_)) {
      num_ = Int(0);
      exp_ = 0;
      return;
    }
    if (exp_ == 0) return;
    unsigned shift = std::min(exp_, two_adic_valuation(num_));
    if (shift > 0) {
      shift_right_exact(num_, shift);
      exp_ -= shift;
    }
  }

  Int num_{};
  unsigned exp_ = 0;
};

using DyadicRational = Dyadic<BigInt>;
using QuarticDyadic = Dyadic<QuarticInt>;

std::strong_ordering operator<=>(const DyadicRational& a, const DyadicRational& b);

// "numerator/denominator", e.g. "127/1024", "0/1", "1/1".
std::string to_string(const DyadicRational& value);
std::string to_string(const QuarticDyadic& value);

// Accepts "n/d" with d a power of two, or a bare integer. Throws InvalidArgument.
DyadicRational parse_dyadic(std::string_view text);

double to_double(const DyadicRational& value);

// log2 of a positive big integer, accurate to double precision.
double log2_of(const BigInt& value);

inline std::ostream& operator<<(std::ostream& os, const DyadicRational& v) { return os << to_string(v); }
inline std::ostream& operator<<(std::ostream& os, const QuarticDyadic& v) { return os << to_string(v); }

}  // namespace bnhard
