#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace tlg {

using Int = mpz_class;
using Rat = mpq_class;
using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

/// Error categories map one-to-one onto CLI exit codes.
enum class ErrorKind { Validation = 1, Invariant = 2, Resource = 3 };

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, std::string what) : std::runtime_error(std::move(what)), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail_validation(const std::string &msg) { throw Error(ErrorKind::Validation, msg); }
[[noreturn]] inline void fail_invariant(const std::string &msg) { throw Error(ErrorKind::Invariant, msg); }
[[noreturn]] inline void fail_resource(const std::string &msg) { throw Error(ErrorKind::Resource, msg); }

inline Rat make_rat(long num, long den = 1) {
  Rat q(num, den);
  q.canonicalize();
  return q;
}

inline Int floor_rat(const Rat &q) {
  Int r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline Int ceil_rat(const Rat &q) {
  Int r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

/// Fractional part in [0, 1).
inline Rat frac_rat(const Rat &q) { return q - Rat(floor_rat(q)); }

inline bool is_integer(const Rat &q) { return q.get_den() == 1; }

inline Int gcd_int(const Int &a, const Int &b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Int lcm_int(const Int &a, const Int &b) {
  Int g;
  mpz_lcm(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

/// Always "num/den", also for integers, so that every rational field has one shape.
inline std::string rat_str(const Rat &q) { return q.get_num().get_str() + "/" + q.get_den().get_str(); }

Rat parse_rat(const std::string &s);

RatVec to_rat(const IntVec &v);
/// Requires integral entries.
IntVec to_int(const RatVec &v);
Int vec_gcd(const IntVec &v);
bool is_primitive(const IntVec &v);
bool is_zero(const IntVec &v);
bool is_zero(const RatVec &v);
Rat dot(const RatVec &a, const RatVec &b);
Int dot(const IntVec &a, const IntVec &b);

} // namespace tlg
