#include "bnhard/dyadic.hpp"

#include <cmath>
#include <string>

namespace bnhard {

std::strong_ordering operator<=>(const DyadicRational& a, const DyadicRational& b) {
  unsigned e = std::max(a.log2_denominator(), b.log2_denominator());
  int c = cmp(a.numerator_at(e), b.numerator_at(e));
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string to_string(const DyadicRational& value) {
  BigInt den(1);
  shift_left(den, value.log2_denominator());
  return value.numerator().get_str() + "/" + den.get_str();
}

std::string to_string(const QuarticDyadic& value) {
  return "(" + value.numerator().to_string() + ")/2^" + std::to_string(value.log2_denominator());
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

}  // namespace

DyadicRational parse_dyadic(std::string_view text) {
  auto slash = text.find('/');
  std::string_view num_text = text.substr(0, slash);
  bool negative = !num_text.empty() && num_text.front() == '-';
  if (negative) num_text.remove_prefix(1);
  if (!all_digits(num_text)) throw InvalidArgument("malformed numerator in '" + std::string(text) + "'");
  BigInt num(std::string(num_text), 10);
  if (negative) num = -num;
  if (slash == std::string_view::npos) return DyadicRational(num, 0);

  std::string_view den_text = text.substr(slash + 1);
  if (!all_digits(den_text)) throw InvalidArgument("malformed denominator in '" + std::string(text) + "'");
  BigInt den(std::string(den_text), 10);
  if (sgn(den) <= 0 || mpz_popcount(den.get_mpz_t()) != 1) {
    throw InvalidArgument("denominator of '" + std::string(text) + "' is not a power of two");
  }
  return DyadicRational(num, two_adic_valuation(den));
}

double log2_of(const BigInt& value) {
  long exp = 0;
  double mantissa = mpz_get_d_2exp(&exp, value.get_mpz_t());
  return std::log2(mantissa) + static_cast<double>(exp);
}

double to_double(const DyadicRational& value) {
  long exp = 0;
  double mantissa = mpz_get_d_2exp(&exp, value.numerator().get_mpz_t());
  return std::ldexp(mantissa, static_cast<int>(exp) - static_cast<int>(value.log2_denominator()));
}

}  // namespace bnhard
