#include "concord/identities.hpp"

#include <cmath>

namespace concord {

namespace {

BigInt big_binomial(int n, int k) {
    if (k < 0 || k > n) return BigInt(0);
    BigInt result(1);
    if (k > n - k) k = n - k;
    for (int i = 1; i <= k; ++i) {
        result *= (n - k + i);
        result /= i;
    }
    return result;
}

// Combined standard error of a signed sum of independent estimates.
struct ErrorAccum {
    double var = 0.0;
    bool any_mc = false;
    bool any_quad = false;

    void add(const EvalResult& r, double scale) {
        if (r.std_error) {
            var += scale * scale * *r.std_error * *r.std_error;
            any_mc = true;
        }
        any_quad = any_quad || r.method == Method::quadrature;
    }
    EvalResult finish(double value) const {
        if (any_mc) return EvalResult::monte_carlo(value, std::sqrt(var));
        if (any_quad) return EvalResult::quadrature(value);
        return EvalResult::exact(value);
    }
};

std::vector<int> subset_coords(std::uint32_t mask) {
    std::vector<int> out;
    for (int i = 0; mask; ++i, mask >>= 1)
        if (mask & 1u) out.push_back(i + 1);
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// gamma*
// ---------------------------------------------------------------------------

const BigInt& GammaStarTable::at_odd(int k) const {
    require(k >= 1 && k % 2 == 1, "gamma*: index must be odd and positive");
    require(k <= max_odd_index(), "gamma*: index beyond table");
    return values[static_cast<std::size_t>((k - 1) / 2)];
}

GammaStarTable gamma_star(int upto_k) {
    require(upto_k >= 1, "gamma_star: need at least one value");
    const int count = (upto_k + 1) / 2;  // gamma*_1 .. gamma*_{2*count-1}
    GammaStarTable table;
    table.values.reserve(static_cast<std::size_t>(count));
    for (int p = 0; p < count; ++p) {
        // binom(2p+1,0) gamma*_{2p+1} + sum_{j<p} binom(2p+1, 2p-2j) gamma*_{2j+1} = 1
        BigInt v(1);
        for (int j = 0; j < p; ++j)
            v -= big_binomial(2 * p + 1, 2 * (p - j)) * table.values[static_cast<std::size_t>(j)];
        table.values.push_back(std::move(v));
    }
    return table;
}

// ---------------------------------------------------------------------------
// Ubeda coefficients
// ---------------------------------------------------------------------------

const Rational& UbedaCoefficients::coeff(int two_k) const {
    require(two_k >= 2 && two_k <= 2 * m && two_k % 2 == 0, "Ubeda coefficient index out of range");
    return a[static_cast<std::size_t>(two_k / 2 - 1)];
}

UbedaCoefficients ubeda_coefficients_solve(const Measure& fam, int order_m) {
    require(order_m >= 1, "ubeda_coefficients_solve: m must be >= 1");
    const int m = order_m;
    TransitionTable table(fam, 2 * m);
    // unknowns x_j = a_{2m+1, 2m-2j}; row p couples x_0..x_p with unit diagonal
    std::vector<Rational> x(static_cast<std::size_t>(m));
    for (int p = 0; p < m; ++p) {
        Rational rhs = table.R(2 * m, 2 * p + 1) / rational_pow2(2 * p + 1);
        for (int j = 0; j < p; ++j) {
            int k = p - j;
            rhs -= Rational(big_binomial(2 * p + 1, 2 * k)) / rational_pow2(2 * k) *
                   table.R(2 * m - 1 - 2 * j, 2 * k) * x[static_cast<std::size_t>(j)];
        }
        x[static_cast<std::size_t>(p)] = rhs;
    }
    UbedaCoefficients out;
    out.family = fam;
    out.m = m;
    out.a.resize(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j)  // x_j = a_{2m+1, 2m-2j} lives at slot (m-j)-1
        out.a[static_cast<std::size_t>(m - j - 1)] = x[static_cast<std::size_t>(j)];
    return out;
}

UbedaCoefficients ubeda_coefficients_closed_form(const Measure& fam, int order_m) {
    require(order_m >= 1, "ubeda_coefficients_closed_form: m must be >= 1");
    const int m = order_m;
    TransitionTable table(fam, 2 * m);
    GammaStarTable gamma = gamma_star(2 * m - 1);
    UbedaCoefficients out;
    out.family = fam;
    out.m = m;
    out.a.resize(static_cast<std::size_t>(m));
    for (int k = 1; k <= m; ++k) {
        int idx = 2 * m + 1 - 2 * k;  // odd, 1..2m-1
        out.a[static_cast<std::size_t>(k - 1)] =
            Rational(gamma.at_odd(idx)) / rational_pow2(idx) * table.R(2 * m, idx);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Identity machinery
// ---------------------------------------------------------------------------

EvalResult reflection_reduction_rhs(const Measure& fam, const Copula& c, int k,
                                    const EstimatorConfig& cfg) {
    const int n = c.dimension();
    require(k >= 1 && k <= n, "reflection_reduction_rhs: k out of range");
    TransitionTable table(fam, n > 1 ? n - 1 : 1);

    double total = 0.0;
    ErrorAccum err;
    std::uint64_t stream = 0;
    for (int d = k; d >= 0; --d) {
        if (n - d < 2) continue;  // kappa_0, kappa_1 are the zero functions
        double coeff = to_double(table.R(n - 1, d));
        double sign = ((k - d) % 2 == 0) ? 1.0 : -1.0;
        if (coeff == 0.0) continue;
        // all subsets D of {1..k} with |D| = d
        for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
            if (std::popcount(mask) != d) continue;
            Copula part = (d == 0) ? c : marginal(c, subset_coords(mask));
            EvalResult kr = kappa(fam, part, cfg.substream(++stream));
            total += sign * coeff * kr.value;
            err.add(kr, sign * coeff);
        }
    }
    return err.finish(total);
}

TransitionCheckPair extended_transition_check(const Measure& fam, const Copula& c, int k,
                                              const EstimatorConfig& cfg) {
    const int n = c.dimension();
    require(k >= 1 && k <= n, "extended_transition_check: k out of range");

    double lhs_total = 0.0;
    ErrorAccum lhs_err;
    std::uint64_t stream = 0;
    for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
        Copula reflected = mask == 0
            ? c
            : apply_symmetry(Symmetry::reflection(n, subset_coords(mask)), c);
        EvalResult kr = kappa(fam, reflected, cfg.substream(++stream));
        lhs_total += kr.value;
        lhs_err.add(kr, 1.0);
    }

    double coeff = big_r(fam, n - 1, k);
    EvalResult rhs;
    if (n - k < 2 || coeff == 0.0) {
        rhs = EvalResult::exact(0.0);
    } else {
        std::vector<int> first_k(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) first_k[static_cast<std::size_t>(i)] = i + 1;
        EvalResult kr = kappa(fam, marginal(c, first_k), cfg.substream(++stream));
        ErrorAccum rhs_err;
        rhs_err.add(kr, coeff);
        rhs = rhs_err.finish(coeff * kr.value);
    }
    return {lhs_err.finish(lhs_total), rhs};
}

EvalResult stepdown_value(const Measure& fam, int k, const Copula& a, const EstimatorConfig& cfg) {
    require(k >= 1, "stepdown_value: k must be >= 1");
    const int n = a.dimension();
    require(n >= 2, "stepdown_value: base copula dimension must be >= 2");
    double coeff = std::pow(0.5, k) * big_r(fam, n + k - 1, k);
    EvalResult kr = kappa(fam, a, cfg);
    ErrorAccum err;
    err.add(kr, coeff);
    return err.finish(coeff * kr.value);
}

EvalResult marginal_concordance_sum(const Measure& fam, const Copula& c, int k,
                                    const EstimatorConfig& cfg) {
    const int n = c.dimension();
    require(k >= 2 && k <= n, "marginal_concordance_sum: k out of range");
    double total = 0.0;
    ErrorAccum err;
    auto marginals = enumerate_marginals(c, k);
    for (std::size_t i = 0; i < marginals.size(); ++i) {
        EvalResult kr = kappa(fam, marginals[i].copula, cfg.substream(i + 1));
        total += kr.value;
        err.add(kr, 1.0);
    }
    return err.finish(total);
}

EvalResult ubeda_identity_rhs(const Measure& fam, const Copula& c, const EstimatorConfig& cfg) {
    const int n = c.dimension();
    require(n >= 3 && n % 2 == 1, "ubeda_identity_rhs: dimension must be odd and >= 3");
    const int m = (n - 1) / 2;
    UbedaCoefficients coeffs = ubeda_coefficients_closed_form(fam, m);
    double total = 0.0;
    ErrorAccum err;
    for (int k = 1; k <= m; ++k) {
        double a = to_double(coeffs.coeff(2 * k));
        if (a == 0.0) continue;
        EvalResult sum = marginal_concordance_sum(fam, c, 2 * k, cfg.substream(static_cast<std::uint64_t>(k) << 32));
        total += a * sum.value;
        err.add(sum, a);
    }
    return err.finish(total);
}

double asymptotic_limit(const Measure& fam, int s) {
    require(s >= 0, "asymptotic_limit: s must be >= 0");
    if (s == 0) return 1.0;
    const double r = fam.kind == MeasureKind::scarsini_extension ? 2.0 : 1.0;
    return std::pow(r - 1.0, s);
}

} // namespace concord
