#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "sfw/diophantine.hpp"
#include "sfw/roof.hpp"

namespace sfw {

struct TransferEntry {
  mpz_class m;
  ExtCoeff c;
  ExtCoeff psi;            // c_m / (e(m alpha) - 1)
  double norm_log2 = 0;    // log2 ||m alpha||
  double ratio_log2 = 0;   // log2 |c_m| / ||m alpha||
  bool in_M = false;
  bool sandwich_ok = true;  // |c|/(2 pi ||m alpha||) <= |psi| <= |c|/(4 ||m alpha||)
};

// Throws PrecisionExhausted when ||m alpha|| is not resolved.
TransferEntry transfer_entry(const RotationNumber& alpha, const mpz_class& m, const ExtCoeff& c);

struct L2Checkpoint {
  mpz_class H;
  double partial = 0;  // sum over 0 < |m| <= H of |psi_m|^2
};

struct TransferCoefficients {
  mpz_class horizon;
  long dense = 0;                    // every m <= dense with a non-negligible bound was computed
  std::vector<TransferEntry> entries;  // sorted by m
  std::vector<L2Checkpoint> checkpoints;
  double remainder_bound = 0;        // bound on the omitted part of sum |psi_m|^2
  bool sandwich_ok = true;
};

// c_0 is excluded. Rule roofs: m <= min(horizon, dense_cap) plus class M members
// up to horizon; table roofs: every tabulated m <= horizon.
TransferCoefficients formal_transfer(const FourierRoof& phi, const RotationNumber& alpha, const mpz_class& horizon,
                                     long dense_cap = 1L << 16);

struct L2Result {
  enum class Kind { Converged, Diverging, Undecided };
  Kind kind = Kind::Undecided;
  double tail_increment = 0;  // partial(H) - partial(sqrt H checkpoint)
  double bound = 0;           // converged: partial(H) + remainder
  mpz_class tail_from;
  double tolerance = 0, divergence_floor = 0;
};
const char* l2_kind_name(L2Result::Kind k);

L2Result l2_conjugacy_test(const TransferCoefficients& t, double tolerance = 1e-6, double divergence_floor = 1e-2);

struct ReducedRoof {
  enum class Stage { M, BestReturnsOnly };
  Stage stage = Stage::M;
  double c0 = 0;
  mpz_class horizon;
  std::vector<TableEntry> kept;
  std::vector<MMember> kept_members;  // annotation of kept[i]
  std::vector<TableEntry> discarded;  // materialised part of xi
  double xi_l2_bound = 0;
  double K3 = 0;
  bool identity = false;  // nothing discarded

  FourierRoof as_roof() const;
};

ReducedRoof reduce_to_M(const FourierRoof& phi, const RotationNumber& alpha, const mpz_class& horizon,
                        long dense_cap = 1L << 16);

// Refuses (PreconditionError) when H1 did not pass or K3 exceeds k3_cap.
ReducedRoof reduce_to_best_returns(const ReducedRoof& r, const FourierRoof& phi, const RotationNumber& alpha,
                                   const H1Report& h1, double k3_cap = 1e6);

struct ResidualCheck {
  double residual = 0;
  double tail_bound = 0;
  double rounding_allowance = 0;
  bool ok = false;
};

// max_j |psi(x_j + alpha) - psi(x_j) - xi(x_j)| with psi truncated at horizon.
ResidualCheck verify_cohomology_residual(const ReducedRoof& reduced, const RotationNumber& alpha, long grid,
                                         long horizon);

struct Thresholds {
  double l2_tol = 1e-6;
  double divergence_floor = 1e-2;
  double ratio_floor = 1e-3;
  double k3_cap = 1e6;
  long hyp_horizon = 64;
  long dense_cap = 1L << 16;
};

enum class Outcome { DiscreteL2Conjugate, WeakMixingSingleFrequency, WeakMixingMultiFrequency, Undecided };
const char* outcome_name(Outcome o);

struct RatioRow {
  mpz_class m;
  int n = -1;          // best-return index when m = q_n
  double ratio_log2 = 0;
  bool square_growth = false;
};

struct RatioBlock {
  int first_rank = 0, last_rank = 0;
  bool complete = false;
  double max_ratio = 0;
  double sum_r2 = 0;
};

struct DichotomyVerdict {
  Outcome outcome = Outcome::Undecided;
  std::string reason;
  mpz_class horizon;
  bool constant_roof = false;
  HypothesisReport hyp;
  L2Result l2;
  std::vector<RatioRow> ratios;  // class M members with c_m != 0
  std::vector<RatioRow> mprime;  // best returns with q_{n+1} > q_n^2, rank order
  std::vector<RatioBlock> blocks;
  std::vector<int> subsequence;  // best-return indices s(n) with ratio >= ratio_floor
  double limsup_C = 0;
  double partial_r2 = 0;
};

DichotomyVerdict classify(const FourierRoof& phi, const RotationNumber& alpha, const mpz_class& horizon,
                          const Thresholds& th = {});

// Best returns q_n <= horizon with q_{n+1} > q_n^2, in index order.
std::vector<int> square_growth_returns(const RotationNumber& alpha, const mpz_class& horizon);

}  // namespace sfw
