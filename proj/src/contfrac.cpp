#include "modshift/contfrac.hpp"

#include "modshift/error.hpp"

#include <json.hpp>

#include <string>
#include <utility>

namespace modshift {

namespace {

void check_digits(const std::vector<Integer>& digits) {
  for (const Integer& a : digits) {
    if (sgn(a) <= 0) {
      throw Error("NonPositiveDigit", "continued fraction digit " + a.get_str() + " is not positive");
    }
  }
}

bool in_open_unit_interval(const Rational& x) { return sgn(x) > 0 && x < 1; }

}  // namespace

CFInput CFInput::rational(const Rational& x) {
  if (sgn(x) == 0 || abs(x) >= 1) {
    throw Error("OutOfDomain", "rational input must satisfy 0 < |x| < 1, got " + x.get_str());
  }
  CFInput in;
  in.kind = Kind::rational;
  in.value = x;
  in.value.canonicalize();
  return in;
}

CFInput CFInput::periodic(int sign, std::vector<Integer> preperiod, std::vector<Integer> period) {
  if (sign != 1 && sign != -1) throw Error("OutOfDomain", "sign must be +1 or -1");
  if (period.empty()) throw Error("EmptyPeriod", "eventually periodic input needs a period");
  check_digits(preperiod);
  check_digits(period);
  CFInput in;
  in.kind = Kind::periodic;
  in.sign = sign;
  in.preperiod = std::move(preperiod);
  in.period = std::move(period);
  return in;
}

const Integer& CFInput::periodic_digit(std::size_t k) const {
  if (k <= preperiod.size()) return preperiod[k - 1];
  return period[(k - 1 - preperiod.size()) % period.size()];
}

namespace {

// Integers that overflow a machine word are written as decimal strings.
nlohmann::json integer_to_json(const Integer& a) {
  if (a.fits_slong_p()) return a.get_si();
  return a.get_str();
}

nlohmann::json digits_to_json(const std::vector<Integer>& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Integer& a : v) arr.push_back(integer_to_json(a));
  return arr;
}

}  // namespace

void to_json(nlohmann::json& j, const CFInput& x) {
  if (x.kind == CFInput::Kind::rational) {
    j = nlohmann::json{
        {"rational", {integer_to_json(x.value.get_num()), integer_to_json(x.value.get_den())}}};
    return;
  }
  j = nlohmann::json{
      {"sign", x.sign}, {"preperiod", digits_to_json(x.preperiod)}, {"period", digits_to_json(x.period)}};
}

void from_json(const nlohmann::json& j, CFInput& x) {
  auto to_integer = [](const nlohmann::json& v) {
    if (v.is_string()) return Integer(v.get<std::string>());
    return Integer(v.get<long>());
  };
  if (j.contains("rational")) {
    const auto& pq = j.at("rational");
    if (!pq.is_array() || pq.size() != 2) throw Error("InvalidInput", "\"rational\" must be [p, q]");
    Integer p = to_integer(pq[0]);
    Integer q = to_integer(pq[1]);
    if (q == 0) throw Error("InvalidInput", "zero denominator");
    x = CFInput::rational(Rational(p, q));
    return;
  }
  std::vector<Integer> pre, per;
  for (const auto& v : j.value("preperiod", nlohmann::json::array())) pre.push_back(to_integer(v));
  for (const auto& v : j.at("period")) per.push_back(to_integer(v));
  x = CFInput::periodic(j.value("sign", 1), std::move(pre), std::move(per));
}

GaussStep gauss_step(const Rational& x) {
  if (!in_open_unit_interval(x)) {
    throw Error("OutOfDomain", "Gauss map needs 0 < x < 1, got " + x.get_str());
  }
  Rational inv = 1 / x;
  Integer digit;
  mpz_fdiv_q(digit.get_mpz_t(), inv.get_num_mpz_t(), inv.get_den_mpz_t());
  Rational next = inv - Rational(digit);
  next.canonicalize();
  return {std::move(digit), std::move(next)};
}

Rational twisted_gauss(const Rational& x) {
  if (sgn(x) == 0 || abs(x) >= 1) {
    throw Error("OutOfDomain", "twisted Gauss map needs 0 < |x| < 1, got " + x.get_str());
  }
  Rational g = gauss_step(abs(x)).next;
  return sgn(x) > 0 ? Rational(-g) : g;
}

Expansion expand(const CFInput& x, std::size_t n) {
  Expansion out;
  out.word.digits.reserve(n);
  // -sign(x_1) = sign(x), and signs alternate from there.
  int sign = 0;
  if (x.kind == CFInput::Kind::rational) {
    sign = -sgn(x.value);
    Rational y = abs(x.value);
    for (std::size_t k = 0; k < n; ++k) {
      if (sgn(y) == 0) {
        out.terminated = true;
        break;
      }
      GaussStep step = gauss_step(y);
      out.word.digits.push_back(sign > 0 ? step.digit : Integer(-step.digit));
      y = std::move(step.next);
      sign = -sign;
    }
    return out;
  }
  sign = -x.sign;
  for (std::size_t k = 1; k <= n; ++k) {
    const Integer& a = x.periodic_digit(k);
    out.word.digits.push_back(sign > 0 ? a : Integer(-a));
    sign = -sign;
  }
  return out;
}

SignedWord SymbolSequence::digits() const {
  SignedWord w;
  w.digits.reserve(entries.size());
  for (const auto& entry : entries) w.digits.push_back(entry.digit);
  return w;
}

SymbolSequence decorate(const CosetTable& table, const SignedWord& word, CosetLabel e1) {
  if (e1 >= table.size()) throw Error("InvalidCoset", "coset label out of range");
  SymbolSequence seq;
  seq.entries.reserve(word.size());
  CosetLabel e = e1;
  for (const Integer& k : word.digits) {
    seq.entries.push_back({k, e});
    e = table.tau(k, e);
  }
  return seq;
}

SymbolSequence encode_orbit(const CosetTable& table, const CFInput& x, CosetLabel e1, std::size_t n) {
  Expansion ex = expand(x, n);
  SymbolSequence seq = decorate(table, ex.word, e1);
  seq.terminated = ex.terminated;
  return seq;
}

}  // namespace modshift
