#include "concord/concordance.hpp"

#include <cmath>

namespace concord {

namespace {

Rational pow2(int e) { return rational_pow2(e); }

void check_table_family(const Measure& m, const char* what) {
    require(m.kind != MeasureKind::scarsini_extension,
            std::string(what) + ": the Scarsini extension has no such parameter");
}

} // namespace

Measure Measure::scarsini(MeasureKind base) {
    require(base != MeasureKind::scarsini_extension, "scarsini: seed must be a bivariate family");
    return {MeasureKind::scarsini_extension, base};
}

std::string Measure::name() const {
    switch (kind) {
    case MeasureKind::spearman_rho: return "spearman";
    case MeasureKind::gini_gamma: return "gini";
    case MeasureKind::blomqvist_beta: return "blomqvist";
    case MeasureKind::kendall_tau: return "kendall";
    case MeasureKind::scarsini_extension:
        return "scarsini:" + Measure{scarsini_base, scarsini_base}.name();
    }
    return "unknown";
}

const std::vector<Measure>& classic_measures() {
    static const std::vector<Measure> families = {
        Measure::spearman(), Measure::gini(), Measure::blomqvist(), Measure::kendall()};
    return families;
}

Measure parse_measure(const std::string& name) {
    if (name == "spearman" || name == "rho") return Measure::spearman();
    if (name == "gini" || name == "gamma") return Measure::gini();
    if (name == "blomqvist" || name == "beta") return Measure::blomqvist();
    if (name == "kendall" || name == "tau") return Measure::kendall();
    if (name == "scarsini") return Measure::scarsini();
    if (name.rfind("scarsini:", 0) == 0) {
        Measure base = parse_measure(name.substr(9));
        require(base.kind != MeasureKind::scarsini_extension, "scarsini seed must be bivariate");
        return Measure::scarsini(base.kind);
    }
    throw InputError("unknown measure family: '" + name + "'");
}

// ---------------------------------------------------------------------------
// Table constants
// ---------------------------------------------------------------------------

Rational alpha_exact(const Measure& m, int n) {
    check_table_family(m, "alpha");
    require(n >= 2, "alpha: n must be >= 2");
    switch (m.kind) {
    case MeasureKind::spearman_rho:
        return Rational(n + 1) * pow2(n - 1) / (pow2(n) - (n + 1));
    case MeasureKind::gini_gamma:
    case MeasureKind::kendall_tau:
        return pow2(n) / (pow2(n - 1) - 1);
    case MeasureKind::blomqvist_beta:
        return pow2(n - 1) / (pow2(n - 1) - 1);
    default:
        break;
    }
    throw ContractViolation("alpha: unreachable");
}

double alpha(const Measure& m, int n) { return to_double(alpha_exact(m, n)); }

Rational transition_constant_exact(const Measure& m, int n) {
    require(n >= 0, "transition_constant: n must be >= 0");
    if (n <= 1) return Rational(0);
    switch (m.kind) {
    case MeasureKind::spearman_rho:
        return Rational(2) * Rational(n + 2, n + 1) * (pow2(n) - (n + 1)) / (pow2(n + 1) - (n + 2));
    case MeasureKind::gini_gamma:
    case MeasureKind::blomqvist_beta:
    case MeasureKind::kendall_tau:
        return Rational(2) * (pow2(n - 1) - 1) / (pow2(n) - 1);
    case MeasureKind::scarsini_extension:
        // r_{1+p} = 2p/(2+p), rewritten with n = 1+p
        return Rational(2 * (n - 1), n + 1);
    }
    throw ContractViolation("transition_constant: unreachable");
}

double transition_constant(const Measure& m, int n) {
    return to_double(transition_constant_exact(m, n));
}

Rational big_r_exact(const Measure& m, int n, int k) {
    require(n >= 1, "big_r: n must be >= 1");
    require(k >= 0 && k <= n + 1, "big_r: k out of range");
    if (k == 0) return Rational(1);
    if (k >= n) return Rational(0);
    Rational prod(1);
    for (int i = 0; i < k; ++i) prod *= transition_constant_exact(m, n - i);
    return prod;
}

double big_r(const Measure& m, int n, int k) { return to_double(big_r_exact(m, n, k)); }

TransitionTable::TransitionTable(Measure m, int max_n) : measure_(m), max_n_(max_n) {
    require(max_n >= 1, "TransitionTable: max_n must be >= 1");
    r_.reserve(static_cast<std::size_t>(max_n) + 1);
    for (int n = 0; n <= max_n; ++n) r_.push_back(transition_constant_exact(m, n));
    big_.reserve(static_cast<std::size_t>(max_n));
    for (int n = 1; n <= max_n; ++n) {
        std::vector<Rational> row;
        row.reserve(static_cast<std::size_t>(n) + 2);
        for (int k = 0; k <= n + 1; ++k) row.push_back(big_r_exact(m, n, k));
        big_.push_back(std::move(row));
    }
}

const Rational& TransitionTable::r(int n) const {
    require(n >= 0 && n <= max_n_, "TransitionTable::r: n out of range");
    return r_[static_cast<std::size_t>(n)];
}

const Rational& TransitionTable::R(int n, int k) const {
    require(n >= 1 && n <= max_n_, "TransitionTable::R: n out of range");
    require(k >= 0 && k <= n + 1, "TransitionTable::R: k out of range");
    return big_[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(k)];
}

// ---------------------------------------------------------------------------
// kappa evaluation
// ---------------------------------------------------------------------------

namespace {

EvalResult scaled(const EvalResult& in, double alpha_n, double shift) {
    EvalResult out;
    out.value = alpha_n * (in.value - shift);
    out.method = in.method;
    if (in.std_error) out.std_error = alpha_n * *in.std_error;
    return out;
}

EvalResult kappa_scarsini(const Measure& m, const Copula& c, const EstimatorConfig& cfg) {
    Measure base{m.scarsini_base, m.scarsini_base};
    const int n = c.dimension();
    if (n == 2) return kappa(base, c, cfg);
    auto marginals = enumerate_marginals(c, 2);
    double sum = 0.0, var = 0.0;
    bool any_mc = false, any_quad = false;
    for (std::size_t i = 0; i < marginals.size(); ++i) {
        EvalResult part = kappa(base, marginals[i].copula, cfg.substream(i + 1));
        sum += part.value;
        if (part.std_error) {
            var += *part.std_error * *part.std_error;
            any_mc = true;
        }
        any_quad = any_quad || part.method == Method::quadrature;
    }
    const double count = static_cast<double>(marginals.size());
    EvalResult out;
    out.value = sum / count;
    if (any_mc) {
        out.method = Method::monte_carlo;
        out.std_error = std::sqrt(var) / count;
    } else {
        out.method = any_quad ? Method::quadrature : Method::exact;
    }
    return out;
}

} // namespace

EvalResult kappa(const Measure& m, const Copula& c, const EstimatorConfig& cfg) {
    const int n = c.dimension();
    require(n >= 2, "kappa: copula dimension must be >= 2");
    switch (m.kind) {
    case MeasureKind::spearman_rho:
        return scaled(integrate_lebesgue(c, cfg), alpha(m, n), std::pow(0.5, n - 1));
    case MeasureKind::gini_gamma:
        return scaled(integrate_diagonals(c, cfg), alpha(m, n), std::pow(0.5, n - 1));
    case MeasureKind::blomqvist_beta: {
        UnitPoint center(static_cast<std::size_t>(n), 0.5);
        double at_center = c.eval(center) + survival(c, center);
        return EvalResult::exact(alpha(m, n) * (at_center - std::pow(0.5, n - 1)));
    }
    case MeasureKind::kendall_tau:
        return scaled(integrate_self(c, cfg), alpha(m, n), std::pow(0.5, n));
    case MeasureKind::scarsini_extension:
        return kappa_scarsini(m, c, cfg);
    }
    throw ContractViolation("kappa: unreachable");
}

std::optional<double> kappa_exact_en(const Measure& m, int n, double theta) {
    require(n >= 2, "kappa_exact_en: n must be >= 2");
    require(theta >= -1.0 && theta <= 1.0, "kappa_exact_en: theta out of range");
    const double parity = (n % 2 == 0) ? 2.0 : 0.0;
    switch (m.kind) {
    case MeasureKind::spearman_rho:
        return alpha(m, n) * theta * parity / std::pow(6.0, n);
    case MeasureKind::kendall_tau:
        return alpha(m, n) * theta * parity / std::pow(6.0, n);
    case MeasureKind::blomqvist_beta:
        return alpha(m, n) * theta * parity / std::pow(4.0, n);
    case MeasureKind::gini_gamma:
    case MeasureKind::scarsini_extension:
        return std::nullopt;
    }
    return std::nullopt;
}

} // namespace concord
