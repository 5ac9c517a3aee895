#pragma once

#include <vector>

#include "concord/concordance.hpp"

namespace concord {

/// The integer sequence gamma*_1, gamma*_3, ... defined by the triangular
/// binomial system sum_j binom(2p+1, 2p-2j) gamma*_{2j+1} = 1. Solved by
/// exact forward substitution; the first five values are
/// 1, -2, 16, -272, 7936.
struct GammaStarTable {
    std::vector<BigInt> values;  // values[j] = gamma*_{2j+1}

    const BigInt& at_odd(int k) const;  // k odd, 1 <= k <= max_odd_index()
    int max_odd_index() const { return 2 * static_cast<int>(values.size()) - 1; }
};

GammaStarTable gamma_star(int upto_k);

/// Coefficients a_{2m+1,2}, ..., a_{2m+1,2m} expressing kappa_{2m+1}(C)
/// through the concordances of C's even-dimensional marginals.
struct UbedaCoefficients {
    Measure family;
    int m = 1;
    std::vector<Rational> a;  // a[i] = a_{2m+1, 2(i+1)}

    const Rational& coeff(int two_k) const;  // two_k in {2, 4, ..., 2m}
};

/// Solve the defining triangular system by back-substitution from the
/// p = 0 row (1/2) R_{2m,1} = a_{2m+1,2m}.
UbedaCoefficients ubeda_coefficients_solve(const Measure& m, int order_m);

/// The same coefficients through the gamma* closed form
/// a_{2m+1,2k} = gamma*_{2m+1-2k} R_{2m,2m+1-2k} / 2^{2m+1-2k}.
UbedaCoefficients ubeda_coefficients_closed_form(const Measure& m, int order_m);

/// Marginal expansion of kappa_n applied to the copula with its first k
/// coordinates reflected: the alternating sum over d = k..0 of
/// (-1)^{k-d} R_{n-1,d} sum_{|D|=d, D subset {1..k}} kappa_{n-d}(C_D),
/// with kappa_1 = kappa_0 = 0.
EvalResult reflection_reduction_rhs(const Measure& m, const Copula& c, int k,
                                    const EstimatorConfig& cfg);

struct TransitionCheckPair {
    EvalResult lhs;  // sum of kappa_n over all 2^k reflection subsets of {1..k}
    EvalResult rhs;  // R_{n-1,k} kappa_{n-k}(C_{1..k})
};

/// Both sides of the extended transition identity, for the caller to compare.
TransitionCheckPair extended_transition_check(const Measure& m, const Copula& c, int k,
                                              const EstimatorConfig& cfg);

/// Predicted concordance of Pi^k (x) A: (1/2^k) R_{n+k-1,k} kappa_n(A).
EvalResult stepdown_value(const Measure& m, int k, const Copula& a, const EstimatorConfig& cfg);

/// Sum of kappa_k over all k-dimensional marginals of C.
EvalResult marginal_concordance_sum(const Measure& m, const Copula& c, int k,
                                    const EstimatorConfig& cfg);

/// Right-hand side of the odd-dimension marginal identity:
/// sum_k a_{2m+1,2k} * (sum of kappa_{2k} over 2k-marginals). The copula
/// must have odd dimension 2m+1 >= 3.
EvalResult ubeda_identity_rhs(const Measure& m, const Copula& c, const EstimatorConfig& cfg);

/// Limit of kappa_n for a comonotone vector with s coordinates flipped:
/// (r-1)^s where r = lim r_n (1 for the four classic families, 2 for the
/// Scarsini extension). s = 0 gives 1.
double asymptotic_limit(const Measure& m, int s);

} // namespace concord
