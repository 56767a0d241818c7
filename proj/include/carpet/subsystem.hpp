#ifndef CARPET_SUBSYSTEM_HPP
#define CARPET_SUBSYSTEM_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "carpet/baranski.hpp"

namespace carpet {

using Counts = std::vector<long long>;

/// Apportions k seats among cells proportionally to p by the Adams divisor
/// method, seated one at a time: the next seat goes to the cell maximizing
/// p_c / m_c (infinite for m_c = 0 on the support), ties to the lowest index.
/// Cells with p_c = 0 get nothing. Sums to k, gives every support cell a seat
/// and is house-monotone. Throws InputError when k < |support|.
Counts frequency_counts(const Eigen::VectorXd& p, long long k);

/// Length-k words over a level-n alphabet with prescribed letter counts.
struct FrequencyDesign {
  int n = 1;
  long long k = 0;
  Counts counts;
  Eigen::VectorXd p;
  double eps = 0.02;
  bool transposed = false;  // columns are the y coordinate
};

struct GammaCounts {
  double log_gamma = 0.0;        // log #Gamma = log k! - sum log m!
  double log_gamma_tilde = 0.0;  // log #Gamma~ = log k! - sum over columns log M!
};

GammaCounts gamma_counts(std::span<const long long> counts, const WeightedAlphabet& alphabet);

/// Exact #Gamma and #Gamma~ by enumerating all |cells|^k words; small k only.
struct GammaBruteForce {
  std::uint64_t gamma = 0;
  std::uint64_t gamma_tilde = 0;
};
GammaBruteForce gamma_counts_brute_force(std::span<const long long> counts, const WeightedAlphabet& alphabet);

/// sum_c m_c log a(col c), and the b analogue.
double log_a_nk(std::span<const long long> counts, const WeightedAlphabet& alphabet);
double log_b_nk(std::span<const long long> counts, const WeightedAlphabet& alphabet);

/// log #Gamma~ / -log a_nk + (log #Gamma - log #Gamma~) / -log b_nk.
double s_nk(std::span<const long long> counts, const WeightedAlphabet& alphabet);

/// (-log c - sum_log_a) / delta, the real k threshold.
double domination_threshold(double delta, double c, double sum_log_a);

struct DominationResult {
  bool flag = false;  // log b_nk < log c + log a_nk
  double log_a_nk = 0.0;
  double log_b_nk = 0.0;
  double log_c = 0.0;
  double delta = 0.0;      // lambda1(p) - lambda2(p)
  double threshold = 0.0;  // domination_threshold with the alphabet's sum of log a
  long long k_min = 0;     // floor(threshold) + 1
};

/// Throws InputError unless lambda1(p) > lambda2(p).
DominationResult check_domination(std::span<const long long> counts, const Eigen::VectorXd& p,
                                  const WeightedAlphabet& alphabet, double c);

struct DiffusenessCertificate {
  double d1 = 0.0;  // diameter of the union of support column images
  double d2 = 0.0;  // min over multi-cell columns of the union of their row images
  double c = 1.0;
  double beta = 0.0;
};

/// beta = c * min(d1, d2). Throws ValidationError naming the failed
/// hypothesis when the support has fewer than two columns or no column with
/// two cells.
DiffusenessCertificate diffuseness_certificate(const FrequencyDesign& design, const WeightedAlphabet& alphabet,
                                               const CarpetSystem& carpet);

struct LowerDimOptions {
  int n_max = 3;
  long long k_cap = 1000000;
  MaximizeOptions optimizer;
  std::optional<std::size_t> alphabet_cap;
};

/// Every quantity the dominated-subsystem argument consumes, with the
/// inequalities evaluated.
struct SubsystemReport {
  double target = 0.0;
  FrequencyDesign design;
  double t_n = 0.0;          // optimizer value at level n
  bool separated = false;    // separate_lyapunov moved the witness
  GammaCounts gamma;
  double log_a_nk = 0.0;
  double log_b_nk = 0.0;
  double s_nk = 0.0;
  double achieved = 0.0;     // s_nk / (1 + eps)
  DominationResult domination;
  double c = 1.0;
  double max_a_eps = 0.0;    // (max level-n a)^eps
  double max_b_eps = 0.0;
  bool inflation_ok = false;  // both <= c
  double rmax_eps_n = 0.0;    // rmax^(eps n)
  std::optional<DiffusenessCertificate> diffuseness;
  std::string diffuseness_refusal;
};

/// Searches n = 1..n_max and k for a design with s_nk / (1 + eps) > t,
/// domination and the eps-inflation bounds. Throws UnsupportedError when
/// a == b on every cell, ResourceError (naming the achievable t) when no
/// design fits the budget, InputError on t <= 0 or eps <= 0.
SubsystemReport lower_dim_certificate(const CarpetSystem& carpet, double t, double eps,
                                      const LowerDimOptions& opts = {});

struct VerifyResult {
  bool ok = true;
  std::vector<std::string> failures;
};

/// Re-derives every recorded quantity from the carpet and the design and
/// re-checks the inequalities.
VerifyResult verify(const SubsystemReport& report, const CarpetSystem& carpet,
                    std::optional<std::size_t> alphabet_cap = std::nullopt);

}  // namespace carpet

#endif  // CARPET_SUBSYSTEM_HPP
