#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sfw/highreal.hpp"

namespace sfw {

// One partial quotient. Terms too large to materialise carry only a lower
// bound on log2 a_k.
struct QuotientTerm {
  bool exact = true;
  mpz_class value;
  double log2_lower = 0.0;
};

class PartialQuotients {
 public:
  enum class Kind { Finite, Periodic, Pow2Growth, PowerGrowth, Euler };

  // a[0] is a_0 (dropped); the stream ends after a.back().
  static PartialQuotients finite(std::vector<mpz_class> a);
  static PartialQuotients constant(const mpz_class& c);
  // a_0, prefix..., then period repeated forever.
  static PartialQuotients periodic(std::vector<mpz_class> prefix, std::vector<mpz_class> period);
  // a_{n+1} = 2^(q_n) once the seed (a_0, a_1, ...) is used up.
  static PartialQuotients pow2_growth(std::vector<mpz_class> seed);
  // a_{n+1} = q_n^exponent + offset once the seed is used up.
  static PartialQuotients power_growth(std::vector<mpz_class> seed, unsigned exponent, long offset);
  // e - 2 = [0; 1, 2, 1, 1, 4, 1, 1, 6, ...]
  static PartialQuotients euler();

  // a_k for k >= 1 given q_{k-1}; nullopt once a finite stream has ended.
  std::optional<QuotientTerm> term(std::size_t k, const mpz_class& q_prev) const;

  Kind kind() const { return kind_; }
  bool is_growth_rule() const { return kind_ == Kind::Pow2Growth || kind_ == Kind::PowerGrowth; }
  const std::vector<mpz_class>& head() const { return head_; }
  const std::vector<mpz_class>& period() const { return period_; }
  unsigned exponent() const { return exponent_; }
  long offset() const { return offset_; }
  std::string describe() const;

  // Terms above this many bits are not materialised.
  std::size_t max_term_bits = std::size_t{1} << 20;

 private:
  Kind kind_ = Kind::Finite;
  std::vector<mpz_class> head_;
  std::vector<mpz_class> period_;
  unsigned exponent_ = 0;
  long offset_ = 0;
};

struct Convergent {
  int n = 0;
  mpz_class p, q;
  Real theta;      // |q_n alpha - p_n|
  Real theta_err;  // absolute error bound on theta
  bool resolved = true;
};

class RotationNumber {
 public:
  struct Limits {
    std::size_t max_convergents = 400;
    std::size_t max_q_bits = std::size_t{1} << 20;
  };

  explicit RotationNumber(PartialQuotients pq, int precision_bits = 256);
  RotationNumber(PartialQuotients pq, int precision_bits, Limits limits);

  int precision_bits() const { return prec_; }
  const PartialQuotients& quotients() const { return pq_; }
  const Limits& limits() const { return limits_; }
  // Number of materialised convergents q_0 .. q_{size-1}.
  std::size_t size() const { return conv_.size(); }
  const Convergent& at(std::size_t n) const;
  const mpz_class& q(std::size_t n) const { return at(n).q; }
  // a_k for k >= 1 as materialised (may be inexact).
  const QuotientTerm& quotient(std::size_t k) const;
  std::size_t quotient_count() const { return terms_.size(); }
  // alpha mod 1, accurate to about 2^-precision_bits.
  const Real& value() const { return conv_.front().theta; }
  bool stream_ended() const { return ended_; }

 private:
  void build();

  PartialQuotients pq_;
  int prec_;
  Limits limits_;
  std::vector<QuotientTerm> terms_;  // terms_[k-1] = a_k
  bool ended_ = false;
  std::vector<Convergent> conv_;
};

std::vector<Convergent> convergents(const RotationNumber& alpha, std::size_t N);

Real circle_norm(const Real& x);

struct NormValue {
  Real value;
  Real error;
};

// Signed representative of m*alpha mod 1 in [-1/2, 1/2] with error bound.
NormValue residue_of_multiple(const RotationNumber& alpha, const mpz_class& m);
// ||m alpha|| via the Ostrowski basis. Throws PrecisionExhausted when the
// error bound is not small against the value.
NormValue norm_of_multiple(const RotationNumber& alpha, const mpz_class& m);

struct GoodReturn {
  mpz_class q;
  mpz_class l;
  int n = -1;
  bool l_bound_ok = false;  // |l| < sqrt(q_{n+1}/q_n)
};

struct GoodReturns {
  mpz_class Q;
  bool full_scan = false;  // false: structured enumeration relying on the factorisation over best returns
  std::vector<GoodReturn> items;
};

// q = l*q_n with the largest n such that q_n divides q.
GoodReturn factor_over_best_returns(const RotationNumber& alpha, const mpz_class& q);

GoodReturns good_returns(const RotationNumber& alpha, const mpz_class& Q);

struct MMember {
  enum class Tag { Zero, BestReturn, Multiple };
  mpz_class m;
  Tag tag = Tag::Zero;
  mpz_class l;
  int n = -1;
  Real norm;
  bool factor_ok = true;       // |l| < sqrt(q_{n+1}/q_n)
  bool square_growth = true;   // best returns: q_{n+1} > q_n^2
};

struct FrequencyClassM {
  mpz_class horizon;
  bool full_scan = false;
  bool truncated = false;  // member cap reached
  std::vector<MMember> members;
};

FrequencyClassM class_M(const RotationNumber& alpha, const mpz_class& horizon,
                        std::size_t member_cap = 100000);

// Tag, factorisation and norm of a class M member.
MMember annotate_member(const RotationNumber& alpha, const mpz_class& m);
// q_{n+1} > q_n^2
bool square_growth_at(const RotationNumber& alpha, std::size_t n);

// Membership test 2 m^2 ||m alpha|| <= 1 with precision separation.
bool in_class_M(const RotationNumber& alpha, const mpz_class& m);

RotationNumber make_liouville_alpha(const PartialQuotients& rule, int precision_bits = 256);

// Scans up to this Q are exhaustive.
inline constexpr long kFullScanLimit = 1L << 22;

}  // namespace sfw
