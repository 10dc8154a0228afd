#include "tbcover/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace tbcover {

Rational parse_rational(std::string_view text) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    negative = text[i] == '-';
    ++i;
  }
  std::string digits;
  std::string denominator = "1";
  bool seen_digit = false;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
    digits += text[i++];
    seen_digit = true;
  }
  if (i < text.size() && text[i] == '.') {
    ++i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      digits += text[i++];
      denominator += '0';
      seen_digit = true;
    }
  } else if (i < text.size() && text[i] == '/' && seen_digit) {
    ++i;
    denominator.clear();
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      denominator += text[i++];
    }
    if (denominator.empty() || denominator.find_first_not_of('0') == std::string::npos) {
      throw std::invalid_argument("bad rational literal: " + std::string(text));
    }
  }
  if (!seen_digit || i != text.size()) {
    throw std::invalid_argument("bad rational literal: " + std::string(text));
  }
  Rational q{mpz_class(digits), mpz_class(denominator)};
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_decimal_string(const Rational& q) {
  mpz_class den = q.get_den();
  int twos = 0;
  int fives = 0;
  while (den % 2 == 0) {
    den /= 2;
    ++twos;
  }
  while (den % 5 == 0) {
    den /= 5;
    ++fives;
  }
  if (den != 1) return to_string(q);
  const int places = std::max(twos, fives);
  if (places == 0) return q.get_num().get_str();
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(places));
  mpz_class scaled = q.get_num() * scale / q.get_den();
  const bool negative = scaled < 0;
  std::string digits = mpz_class(abs(scaled)).get_str();
  if (digits.size() <= static_cast<std::size_t>(places)) {
    digits.insert(0, static_cast<std::size_t>(places) + 1 - digits.size(), '0');
  }
  digits.insert(digits.size() - static_cast<std::size_t>(places), ".");
  return negative ? "-" + digits : digits;
}

}  // namespace tbcover
