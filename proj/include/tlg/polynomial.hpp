#pragma once

#include "tlg/linalg.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace tlg {

using Monomial = std::vector<int>;

/// Weighted graded reverse lexicographic order, optionally preceded by an elimination
/// block: the first `elim` variables are compared by total degree before anything else.
struct MonomialOrder {
  std::vector<long> weights;
  std::size_t elim = 0;

  std::size_t nvars() const { return weights.size(); }
  long weighted_degree(const Monomial &m) const;
  /// Strictly greater.
  bool greater(const Monomial &a, const Monomial &b) const;
};

using OrderPtr = std::shared_ptr<const MonomialOrder>;

/// Multivariate polynomial over ℚ; terms kept sorted in decreasing order.
class Polynomial {
public:
  using Term = std::pair<Monomial, Rat>;

  explicit Polynomial(OrderPtr ord) : ord_(std::move(ord)) {}
  Polynomial(OrderPtr ord, std::vector<Term> terms);
  static Polynomial constant(OrderPtr ord, const Rat &c);
  static Polynomial variable(OrderPtr ord, std::size_t i);
  static Polynomial monomial(OrderPtr ord, Monomial m, const Rat &c = 1);

  const OrderPtr &order() const { return ord_; }
  std::size_t nvars() const { return ord_->nvars(); }
  const std::vector<Term> &terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  const Monomial &lead_monomial() const { return terms_.front().first; }
  const Rat &lead_coefficient() const { return terms_.front().second; }
  Rat coefficient(const Monomial &m) const;

  Polynomial operator+(const Polynomial &o) const;
  Polynomial operator-(const Polynomial &o) const;
  Polynomial operator*(const Polynomial &o) const;
  Polynomial scaled(const Rat &c) const;
  Polynomial times_term(const Monomial &m, const Rat &c) const;
  Polynomial pow(unsigned k) const;
  bool operator==(const Polynomial &o) const { return terms_ == o.terms_; }
  /// Same polynomial under a different order (variables unchanged).
  Polynomial reordered(OrderPtr ord) const;

  std::string to_string(const std::vector<std::string> &names) const;

private:
  OrderPtr ord_;
  std::vector<Term> terms_;
};

bool divides(const Monomial &a, const Monomial &b);
Monomial monomial_lcm(const Monomial &a, const Monomial &b);

/// Remainder of f on division by G (complete reduction).
Polynomial reduce(const Polynomial &f, const std::vector<Polynomial> &G);

/// Reduced Gröbner basis (monic, sorted by increasing leading monomial).
/// Fails with a resource error after `max_reductions` S-polynomial reductions.
std::vector<Polynomial> groebner_basis(std::vector<Polynomial> gens, std::size_t max_reductions = 200000);

/// Standard monomials of a Gröbner basis, or nullopt if the quotient is infinite-dimensional.
std::optional<std::vector<Monomial>> standard_monomials(const std::vector<Polynomial> &gb, std::size_t nvars);

/// Integer weights proportional to positive rational degrees.
std::vector<long> integer_weights(const std::vector<Rat> &degrees);

/// Quotient ℚ[x_1..x_n]/I graded by rational variable degrees, with Gröbner data.
class GradedQuotientRing {
public:
  GradedQuotientRing(std::vector<std::string> names, std::vector<Rat> degrees, std::vector<Polynomial> generators);

  std::size_t nvars() const { return names_.size(); }
  const std::vector<std::string> &names() const { return names_; }
  const std::vector<Rat> &variable_degrees() const { return degrees_; }
  const OrderPtr &order() const { return ord_; }
  const std::vector<Polynomial> &generators() const { return generators_; }
  const std::vector<Polynomial> &groebner() const { return gb_; }

  bool finite() const { return finite_; }
  /// Fails (invariant) when infinite-dimensional.
  std::size_t dim() const;
  const std::vector<Monomial> &basis() const;
  const std::vector<Rat> &basis_degrees() const;
  std::map<Rat, std::size_t> graded_dims() const;

  Polynomial normal_form(const Polynomial &f) const;
  RatVec to_class(const Polynomial &f) const;
  Polynomial from_class(const RatVec &c) const;
  Polynomial variable(std::size_t i) const { return Polynomial::variable(ord_, i); }
  Polynomial one() const { return Polynomial::constant(ord_, 1); }
  RatVec one_class() const { return to_class(one()); }
  RatVec variable_class(std::size_t i) const { return to_class(variable(i)); }
  RatVec multiply(const RatVec &a, const RatVec &b) const;
  /// Column j = class of (basis_j · c).
  RatMatrix multiplication_matrix(const RatVec &c) const;
  /// Degree of a class if homogeneous (nullopt for zero or inhomogeneous classes).
  std::optional<Rat> class_degree(const RatVec &c) const;

private:
  void require_finite() const;

  std::vector<std::string> names_;
  std::vector<Rat> degrees_;
  OrderPtr ord_;
  std::vector<Polynomial> generators_, gb_;
  bool finite_ = false;
  std::vector<Monomial> basis_;
  std::vector<Rat> basis_degrees_;
  std::map<Monomial, std::size_t> index_;
};

} // namespace tlg
