#include "lrrw/exact.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lrrw {

ExactDistribution::ExactDistribution(std::int64_t n, std::vector<double> mass)
    : n_(n), mass_(std::move(mass)) {
    const std::size_t expect = static_cast<std::size_t>((n + 1) * (n + 2) / 2);
    if (mass_.size() != expect) throw std::invalid_argument("ExactDistribution: mass size mismatch");
}

double ExactDistribution::prob(std::int64_t s, std::int64_t z) const {
    if (z < 0 || z > n_ || std::abs(s) > z || (((s ^ z) & 1) != 0)) return 0.0;
    return mass_[index(z, (s + z) / 2)];
}

double ExactDistribution::total_mass() const {
    double sum = 0.0;
    for (double m : mass_) sum += m;
    return sum;
}

void ExactDistribution::for_each(
    const std::function<void(std::int64_t, std::int64_t, double)>& fn) const {
    for (std::int64_t z = 0; z <= n_; ++z)
        for (std::int64_t j = 0; j <= z; ++j) fn(2 * j - z, z, mass_[index(z, j)]);
}

ExactDistribution evolve_exact(const ModelParams& params, std::int64_t n, std::int64_t cap) {
    params.validate();
    if (n < 1) throw std::invalid_argument("evolve_exact: n >= 1 required");
    if (n > cap)
        throw std::invalid_argument("evolve_exact: n = " + std::to_string(n) + " exceeds the cap "
                                    + std::to_string(cap) + "; raise the cap to evolve further");

    auto level_size = [](std::int64_t m) {
        return static_cast<std::size_t>((m + 1) * (m + 2) / 2);
    };
    std::vector<double> cur(level_size(1), 0.0);
    cur[ExactDistribution::index(0, 0)] = params.r;
    cur[ExactDistribution::index(1, 0)] = params.q;  // s = -1
    cur[ExactDistribution::index(1, 1)] = params.p;  // s = +1

    for (std::int64_t m = 1; m < n; ++m) {
        std::vector<double> next(level_size(m + 1), 0.0);
        for (std::int64_t z = 0; z <= m; ++z) {
            for (std::int64_t j = 0; j <= z; ++j) {
                const double mass = cur[ExactDistribution::index(z, j)];
                if (mass == 0.0) continue;
                const std::int64_t s = 2 * j - z;
                const StepKernel k = transition_kernel(params, WalkState{m, s, z});
                // +1: (s+1, z+1) -> j' = (s+1+z+1)/2 = j+1 ; -1: j' = j ; 0: same (z, j)
                next[ExactDistribution::index(z + 1, j + 1)] += mass * k.p_plus;
                next[ExactDistribution::index(z + 1, j)] += mass * k.p_minus;
                next[ExactDistribution::index(z, j)] += mass * k.p_zero;
            }
        }
        cur = std::move(next);
    }
    return ExactDistribution(n, std::move(cur));
}

MomentRecord exact_moments(const ExactDistribution& dist, const SequenceTables& tables,
                           const DerivedConstants& constants) {
    if (tables.alpha != constants.alpha)
        throw std::invalid_argument("exact_moments: tables built with a different alpha");
    if (dist.n() > tables.horizon)
        throw std::invalid_argument("exact_moments: tables horizon below distribution level");
    MomentRecord m;
    const std::int64_t n = dist.n();
    dist.for_each([&](std::int64_t s, std::int64_t z, double mass) {
        const double sd = static_cast<double>(s);
        m.es += mass * sd;
        m.es2 += mass * sd * sd;
        m.ez += mass * static_cast<double>(z);
    });
    const double an = tables.a[static_cast<std::size_t>(n)];
    const double An = tables.A[static_cast<std::size_t>(n)];
    m.var_s = m.es2 - m.es * m.es;
    m.em = an * m.es - constants.omega * An;
    m.em2 = an * an * m.es2 - 2.0 * constants.omega * an * An * m.es
          + constants.omega * constants.omega * An * An;
    return m;
}

double closed_form_ES(std::int64_t n, const DerivedConstants& constants,
                      const SequenceTables& tables) {
    if (n < 1 || n > tables.horizon) throw std::invalid_argument("closed_form_ES: n out of range");
    return (constants.beta + constants.omega * (tables.A[static_cast<std::size_t>(n)] - 1.0))
           / tables.a[static_cast<std::size_t>(n)];
}

double closed_form_EZ(std::int64_t n, const ModelParams& params, const SequenceTables& tables) {
    if (n < 1 || n > tables.horizon) throw std::invalid_argument("closed_form_EZ: n out of range");
    const double tau = (1.0 - params.theta) * (params.p + params.q);
    return (params.p + params.q + tau * (tables.B[static_cast<std::size_t>(n)] - 1.0))
           / tables.b[static_cast<std::size_t>(n)];
}

double closed_form_ES2(std::int64_t n, const ModelParams& params,
                       const DerivedConstants& constants, const SequenceTables& tables) {
    if (n < 1 || n > tables.horizon) throw std::invalid_argument("closed_form_ES2: n out of range");
    double es = constants.beta;
    double ez = params.p + params.q;
    double es2 = params.p + params.q;
    for (std::int64_t k = 1; k < n; ++k) {
        const double kd = static_cast<double>(k);
        const double h = 2.0 * constants.omega * es + constants.gamma / kd * ez + constants.tau;
        es2 = (1.0 + 2.0 * constants.alpha / kd) * es2 + h;
        es = (1.0 + constants.alpha / kd) * es + constants.omega;
        ez = (1.0 + constants.gamma / kd) * ez + constants.tau;
    }
    return es2;
}

double closed_form_EM2(std::int64_t n, const ModelParams& params,
                       const DerivedConstants& constants,
                       const SuperdiffusiveConstants& sc, const SequenceTables& tables) {
    if (n < 1 || n > tables.horizon) throw std::invalid_argument("closed_form_EM2: n out of range");
    const double a = constants.alpha, w = constants.omega, b = constants.beta;
    const double t = constants.tau, g = constants.gamma;
    if (!(a > 0.5)) throw std::invalid_argument("closed_form_EM2: requires alpha > 1/2");
    const double nd = static_cast<double>(n);
    const double an = tables.a[static_cast<std::size_t>(n)];
    const double bn = tables.b[static_cast<std::size_t>(n)];
    // Gamma(n + 2 alpha)/(Gamma(n) Gamma(2 alpha + 1)) = n * gamma_ratio_np1(n, 2a) / Gamma(2a+1)
    const double gr = nd * gamma_ratio_np1(nd, 2.0 * a) / std::tgamma(2.0 * a + 1.0);
    return an * an * gr * sc.nabla
         - t * nd * an * an / ((2.0 * a - 1.0) * (1.0 - g))
         + nd * w * w * an * an / ((2.0 * a - 1.0) * (a - 1.0) * (a - 1.0))
         - g * sc.t2 * an * an / ((2.0 * a - g) * bn)
         + 2.0 * w * (b - w) * a / (1.0 - a)
         - a * a * w * w / ((1.0 - a) * (1.0 - a))
         + sc.t1 * an / (a - 1.0);
}

MartingaleCheckReport martingale_property_check(const ModelParams& params, std::int64_t n_max,
                                                double tol) {
    params.validate();
    if (n_max < 1 || n_max > kOracleCap)
        throw std::invalid_argument("martingale_property_check: n_max must lie in [1, cap]");
    const DerivedConstants dc = derive_constants(params);
    const SequenceTables tables = build_tables(dc.alpha, dc.gamma, n_max + 1);

    MartingaleCheckReport rep;
    auto record = [&](const WalkState& st, double expected, double observed, double& maxslot) {
        const double err = std::abs(observed - expected);
        maxslot = std::max(maxslot, err);
        if (err > tol) {
            if (rep.violations == 0) {
                rep.first_violation = st;
                rep.first_expected = expected;
                rep.first_observed = observed;
            }
            ++rep.violations;
        }
    };

    for (std::int64_t k = 1; k <= n_max; ++k) {
        const double kd = static_cast<double>(k);
        const double ak = tables.a[static_cast<std::size_t>(k)];
        const double ak1 = tables.a[static_cast<std::size_t>(k + 1)];
        const double Ak = tables.A[static_cast<std::size_t>(k)];
        const double Ak1 = tables.A[static_cast<std::size_t>(k + 1)];
        for (std::int64_t z = 0; z <= k; ++z) {
            for (std::int64_t s = -z; s <= z; s += 2) {
                const WalkState st{k, s, z};
                const StepKernel kr = transition_kernel(params, st);
                const double sd = static_cast<double>(s);
                const double drift = kr.p_plus - kr.p_minus;
                const double m_here = ak * sd - dc.omega * Ak;
                const double m_next = ak1 * (sd + drift) - dc.omega * Ak1;
                record(st, m_here, m_next, rep.max_martingale_error);

                const double xi_mean = drift - (dc.alpha * sd / kd + dc.omega);
                record(st, 0.0, xi_mean, rep.max_drift_error);

                const double second = kr.p_plus + kr.p_minus;  // E[X^2 | state]
                const double cond_mean = dc.alpha * sd / kd + dc.omega;
                const double xi_var = second - 2.0 * cond_mean * drift + cond_mean * cond_mean;
                const double formula = dc.gamma * static_cast<double>(z) / kd + dc.tau
                                     - cond_mean * cond_mean;
                record(st, formula, xi_var, rep.max_variance_error);
                ++rep.states_checked;
            }
        }
    }
    return rep;
}

}  // namespace lrrw
