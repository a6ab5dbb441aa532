#include "tlg/arith.hpp"

namespace tlg {

Rat parse_rat(const std::string &s) {
  Rat q;
  if (s.empty() || q.set_str(s, 10) != 0 || q.get_den() == 0)
    fail_validation("not a rational number: '" + s + "'");
  q.canonicalize();
  return q;
}

RatVec to_rat(const IntVec &v) { return RatVec(v.begin(), v.end()); }

IntVec to_int(const RatVec &v) {
  IntVec out;
  out.reserve(v.size());
  for (const Rat &q : v) {
    if (!is_integer(q))
      throw std::logic_error("to_int: non-integral entry " + q.get_str());
    out.push_back(q.get_num());
  }
  return out;
}

Int vec_gcd(const IntVec &v) {
  Int g = 0;
  for (const Int &x : v)
    g = gcd_int(g, x);
  return g;
}

bool is_primitive(const IntVec &v) { return vec_gcd(v) == 1; }

bool is_zero(const IntVec &v) {
  for (const Int &x : v)
    if (x != 0)
      return false;
  return true;
}

bool is_zero(const RatVec &v) {
  for (const Rat &x : v)
    if (x != 0)
      return false;
  return true;
}

Rat dot(const RatVec &a, const RatVec &b) {
  if (a.size() != b.size())
    throw std::invalid_argument("dot: dimension mismatch");
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a[i] * b[i];
  return s;
}

Int dot(const IntVec &a, const IntVec &b) {
  if (a.size() != b.size())
    throw std::invalid_argument("dot: dimension mismatch");
  Int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a[i] * b[i];
  return s;
}

} // namespace tlg
