#pragma once

#include <optional>
#include <string>
#include <vector>

#include "concord/copula.hpp"
#include "concord/estimation.hpp"
#include "concord/rational.hpp"

namespace concord {

enum class MeasureKind {
    spearman_rho,
    gini_gamma,
    blomqvist_beta,
    kendall_tau,
    scarsini_extension
};

/// One of the four classical multivariate concordance families, or the
/// Scarsini extension that averages a bivariate seed measure over all
/// 2-marginals.
struct Measure {
    MeasureKind kind = MeasureKind::spearman_rho;
    MeasureKind scarsini_base = MeasureKind::blomqvist_beta;

    static Measure spearman() { return {MeasureKind::spearman_rho, MeasureKind::blomqvist_beta}; }
    static Measure gini() { return {MeasureKind::gini_gamma, MeasureKind::blomqvist_beta}; }
    static Measure blomqvist() { return {MeasureKind::blomqvist_beta, MeasureKind::blomqvist_beta}; }
    static Measure kendall() { return {MeasureKind::kendall_tau, MeasureKind::blomqvist_beta}; }
    static Measure scarsini(MeasureKind base = MeasureKind::blomqvist_beta);

    std::string name() const;
};

/// The four Table-style families, in a stable order.
const std::vector<Measure>& classic_measures();

/// Parse a family name: spearman | gini | blomqvist | kendall | scarsini
/// | scarsini:<base>.
Measure parse_measure(const std::string& name);

/// Normalizing constant alpha_n, n >= 2. The Scarsini extension has no
/// alpha and throws.
Rational alpha_exact(const Measure& m, int n);
double alpha(const Measure& m, int n);

/// Transition constant r_n, with the conventions r_0 = r_1 = 0.
Rational transition_constant_exact(const Measure& m, int n);
double transition_constant(const Measure& m, int n);

/// Descending product R_{n,k} = r_n r_{n-1} ... r_{n-k+1}, with
/// R_{n,0} = 1 and R_{n,n} = R_{n,n+1} = 0. Requires 0 <= k <= n+1.
Rational big_r_exact(const Measure& m, int n, int k);
double big_r(const Measure& m, int n, int k);

/// Eagerly built cache of r_n and R_{n,k} for one family.
class TransitionTable {
public:
    TransitionTable(Measure m, int max_n);

    const Measure& measure() const { return measure_; }
    int max_n() const { return max_n_; }
    const Rational& r(int n) const;
    const Rational& R(int n, int k) const;

private:
    Measure measure_;
    int max_n_;
    std::vector<Rational> r_;                // r_[n] = r_n, 0..max_n
    std::vector<std::vector<Rational>> big_; // big_[n][k], k <= n+1
};

/// kappa_n(C) for the requested family. Blomqvist evaluates exactly at
/// the cube center; Spearman and Kendall report the integration method
/// they used; Gini is quadrature-backed; the Scarsini extension averages
/// its seed over all 2-marginals.
EvalResult kappa(const Measure& m, const Copula& c, const EstimatorConfig& cfg);

/// Closed-form kappa_n(E^n(theta)) where one is known; nullopt means
/// "evaluate through kappa" (Gini and the Scarsini extension).
std::optional<double> kappa_exact_en(const Measure& m, int n, double theta);

} // namespace concord
