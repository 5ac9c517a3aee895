#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "concord/copula.hpp"

namespace concord {

/// Governs every stochastic or discretized evaluation. Identical config +
/// identical inputs gives bitwise-identical results, including Monte Carlo
/// paths; the worker count participates in that contract (results are
/// reproducible at any fixed worker count).
struct EstimatorConfig {
    std::uint64_t mc_samples = 1'000'000;
    int grid_resolution = 64;
    int diag_quadrature_points = 2049;
    std::uint64_t seed = 42;
    bool exact_preferred = true;
    int workers = 1;
    double sigma_gate = 5.0;  // sigmas allowed in stochastic equality checks

    void validate() const;
    EstimatorConfig with_seed(std::uint64_t s) const;
    EstimatorConfig with_samples(std::uint64_t n) const;
    /// Derived config for an independent sub-task (distinct RNG stream).
    EstimatorConfig substream(std::uint64_t tag) const;
};

enum class Method { exact, quadrature, monte_carlo };

const char* to_string(Method m);

/// A numeric result plus how it was obtained. std_error is present exactly
/// when the method is monte_carlo.
struct EvalResult {
    double value = 0.0;
    Method method = Method::exact;
    std::optional<double> std_error;

    double sigma_or(double fallback) const { return std_error.value_or(fallback); }
    static EvalResult exact(double v) { return {v, Method::exact, std::nullopt}; }
    static EvalResult quadrature(double v) { return {v, Method::quadrature, std::nullopt}; }
    static EvalResult monte_carlo(double v, double se) { return {v, Method::monte_carlo, se}; }
};

/// i.i.d. draws from the copula's probability measure. Every node kind is
/// supported: independent uniforms (Pi), one repeated uniform (M),
/// rejection against the density bound 1+|theta| (E^n), concatenation
/// (products), the inverse point map (symmetrized nodes), projection
/// (marginals), a Bernoulli branch choice (mixtures), and uniform
/// resampling of the rank points (empirical).
std::vector<UnitPoint> sample(const Copula& c, std::size_t count, std::uint64_t seed);

/// Integral of C + sigma*C over the unit cube (Spearman's measure).
/// Closed-form when exact evaluation is available and preferred,
/// otherwise Monte Carlo with a reported standard error.
EvalResult integrate_lebesgue(const Copula& c, const EstimatorConfig& cfg);

/// Integral of A + B over the unit cube, for a caller-supplied pair.
EvalResult integrate_lebesgue(const Copula& a, const Copula& b, const EstimatorConfig& cfg);

/// Integral of C + sigma*C against the Gini measure: mass 1/2^(n-1) spread
/// uniformly along each of the 2^(n-1) one-dimensional main diagonals.
/// Composite Simpson quadrature per diagonal (odd point count), except for
/// empirical copulas where the piecewise-constant integral is summed
/// exactly.
EvalResult integrate_diagonals(const Copula& c, const EstimatorConfig& cfg);

/// Kendall integral of C with respect to its own measure. Exact for the
/// closed-form families (Pi, M, E^n, products of these, empirical);
/// otherwise the plug-in Monte Carlo mean of C(U) over U ~ C.
EvalResult integrate_self(const Copula& c, const EstimatorConfig& cfg);

/// Rank-transforms each column to pseudo-observations rank/(rows+1)
/// (average ranks on ties) and builds the empirical copula.
Copula empirical_copula(const std::vector<std::vector<double>>& rows, const EstimatorConfig& cfg);

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

/// Numeric CSV reader: comma delimiter, '.' decimal point, optional header
/// row (autodetected). Errors carry the offending row/column.
CsvTable read_csv(const std::string& path);

namespace detail {

/// Exact Lebesgue integral of the expression over the unit cube.
double exact_lebesgue_integral(const Copula& c);

/// Exact Kendall self-integral when a closed form is known.
std::optional<double> exact_self_integral(const Copula& c);

/// Semantics-preserving rewrites used by the exact paths only (marginals
/// of the closed-form families collapse, reflections of E^n flip theta's
/// sign, and so on). Evaluation of user-built expressions never goes
/// through this.
NodePtr canonicalize(const NodePtr& n);

} // namespace detail

} // namespace concord
