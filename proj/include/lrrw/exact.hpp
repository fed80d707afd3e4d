// Exact small-horizon layer: the dynamic-programming distribution of
// (S_n, Z_n) and the closed-form moment recursions it is checked against.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "lrrw/model.hpp"
#include "lrrw/sequences.hpp"

namespace lrrw {

/// Default cap on the DP horizon; the state space is O(n^2) and the full
/// evolution O(n^3).
inline constexpr std::int64_t kOracleCap = 500;

/// Exact probability mass over the sufficient statistic (s, z) at a fixed n.
/// Support is the triangle |s| <= z <= n with s == z (mod 2); states are
/// stored densely as (z, j) with j = (s + z)/2 in [0, z].
class ExactDistribution {
public:
    ExactDistribution(std::int64_t n, std::vector<double> mass);

    std::int64_t n() const { return n_; }
    double prob(std::int64_t s, std::int64_t z) const;
    double total_mass() const;

    /// Visits every support point with positive-or-zero stored mass.
    void for_each(const std::function<void(std::int64_t s, std::int64_t z, double mass)>& fn) const;

    static std::size_t index(std::int64_t z, std::int64_t j) {
        return static_cast<std::size_t>(z * (z + 1) / 2 + j);
    }

private:
    std::int64_t n_;
    std::vector<double> mass_;
};

/// Pushes the initial law {(1,1): p, (-1,1): q, (0,0): r} through the
/// transition kernel up to level n. Throws if n exceeds the cap, with
/// guidance to raise it.
ExactDistribution evolve_exact(const ModelParams& params, std::int64_t n,
                               std::int64_t cap = kOracleCap);

struct MomentRecord {
    double es = 0.0;    // E[S_n]
    double es2 = 0.0;   // E[S_n^2]
    double ez = 0.0;    // E[Z_n]
    double var_s = 0.0;
    double em = 0.0;    // E[M_n]
    double em2 = 0.0;   // E[M_n^2]
};

/// Exact weighted sums over the support; M_n = a_n S_n - omega A_n from the
/// tables. Requires tables built with the constants' alpha and gamma.
MomentRecord exact_moments(const ExactDistribution& dist, const SequenceTables& tables,
                           const DerivedConstants& constants);

/// E[S_n] = (beta + omega (A_n - 1)) / a_n.
double closed_form_ES(std::int64_t n, const DerivedConstants& constants,
                      const SequenceTables& tables);

/// E[Z_n] = (p + q + tau (B_n - 1)) / b_n.
double closed_form_EZ(std::int64_t n, const ModelParams& params, const SequenceTables& tables);

/// E[S_n^2] by the scalar recursion E[S_{k+1}^2] = (1 + 2 alpha/k) E[S_k^2] + h_k,
/// h_k = 2 omega E[S_k] + (gamma/k) E[Z_k] + tau, seeded with E[S_1^2] = p + q.
double closed_form_ES2(std::int64_t n, const ModelParams& params,
                       const DerivedConstants& constants, const SequenceTables& tables);

/// Pre-limit closed chain for E[M_n^2] in the superdiffusive regime
/// (alpha > 1/2), using the corrected t2 = gamma r/(1 - gamma).
double closed_form_EM2(std::int64_t n, const ModelParams& params,
                       const DerivedConstants& constants,
                       const SuperdiffusiveConstants& sc, const SequenceTables& tables);

/// Exhaustive conditional-expectation check over every reachable state up
/// to level n_max:
///   E[M_{k+1} | state] = M_k
///   E[xi_{k+1} | state] = 0
///   E[xi_{k+1}^2 | state] = gamma z/k + tau - (alpha s/k + omega)^2
struct MartingaleCheckReport {
    std::int64_t states_checked = 0;
    std::int64_t violations = 0;
    double max_martingale_error = 0.0;
    double max_drift_error = 0.0;
    double max_variance_error = 0.0;
    // first offending state, if any
    WalkState first_violation{};
    double first_expected = 0.0;
    double first_observed = 0.0;
};

MartingaleCheckReport martingale_property_check(const ModelParams& params, std::int64_t n_max,
                                                double tol = 1e-12);

}  // namespace lrrw
