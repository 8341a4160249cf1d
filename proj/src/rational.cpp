#include "smg/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace smg {

namespace {

bool is_integer_text(const std::string& s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '-' || s[i] == '+'))
    ++i;
  if (i == s.size())
    return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i])))
      return false;
  return true;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  std::string num = text.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
  if (!is_integer_text(num) || !is_integer_text(den) || den[0] == '-' || den[0] == '+')
    throw std::invalid_argument("not a rational: '" + text + "'");
  if (num[0] == '+')
    num.erase(0, 1);
  mpz_class n(num, 10), d(den, 10);
  if (d == 0)
    throw std::invalid_argument("zero denominator: '" + text + "'");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1)
    return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::vector<Rational> parse_rational_list(const std::string& text) {
  std::vector<Rational> out;
  std::size_t start = 0;
  while (true) {
    auto comma = text.find(',', start);
    out.push_back(parse_rational(text.substr(start, comma - start)));
    if (comma == std::string::npos)
      break;
    start = comma + 1;
  }
  return out;
}

std::string to_string(const std::vector<Rational>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i)
      s += ',';
    s += to_string(v[i]);
  }
  return s;
}

std::optional<Rational> exact_sqrt(const Rational& q) {
  if (q < 0)
    return std::nullopt;
  mpz_class n = q.get_num(), d = q.get_den();
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
  if (rn * rn != n || rd * rd != d)
    return std::nullopt;
  return Rational(rn, rd);
}

}  // namespace smg
