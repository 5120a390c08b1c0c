#include "rangebal/rational.hpp"

namespace rangebal {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char ch : s)
    if (ch < '0' || ch > '9') return false;
  return true;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  const auto bad = [&] { return RationalParseError("not a rational: '" + text + "'"); };
  std::string body = text;
  bool negative = false;
  if (!body.empty() && (body[0] == '-' || body[0] == '+')) {
    negative = body[0] == '-';
    body.erase(0, 1);
  }

  Rational value;
  if (auto slash = body.find('/'); slash != std::string::npos) {
    const std::string num = body.substr(0, slash);
    const std::string den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) throw bad();
    Integer d(den);
    if (d == 0) throw RationalParseError("zero denominator: '" + text + "'");
    value = Rational(Integer(num), d);
  } else if (auto dot = body.find('.'); dot != std::string::npos) {
    const std::string whole = body.substr(0, dot);
    const std::string frac = body.substr(dot + 1);
    if (!all_digits(whole) || !all_digits(frac)) throw bad();
    Integer scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    value = Rational(Integer(whole) * scale + Integer(frac), scale);
  } else {
    if (!all_digits(body)) throw bad();
    value = Rational(Integer(body));
  }
  return negative ? -value : value;
}

std::string rational_str(const Rational& value) {
  if (denominator(value) == 1) return numerator(value).str();
  return numerator(value).str() + "/" + denominator(value).str();
}

Integer floor_int(const Rational& value) {
  Integer q = numerator(value) / denominator(value);
  if (value < 0 && q * denominator(value) != numerator(value)) --q;
  return q;
}

}  // namespace rangebal
