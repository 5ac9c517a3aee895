#include "concord/estimation.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>
#include <thread>

namespace concord {

namespace {

using detail::Node;
using detail::NodePtr;

using Buf = std::array<double, kDimensionLimit>;

inline double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// ---------------------------------------------------------------------------
// Samplers
// ---------------------------------------------------------------------------

void draw_node(const Node& n, std::mt19937_64& rng, double* out) {
    switch (n.kind) {
    case NodeKind::independence:
        for (int i = 0; i < n.dim; ++i) out[i] = unit_uniform(rng);
        return;
    case NodeKind::comonotone: {
        double u = unit_uniform(rng);
        for (int i = 0; i < n.dim; ++i) out[i] = u;
        return;
    }
    case NodeKind::fgm: {
        // rejection against the constant envelope 1+|theta| (acceptance >= 1/2)
        const double bound = 1.0 + std::abs(n.param);
        while (true) {
            double q = 1.0;
            for (int i = 0; i < n.dim; ++i) {
                out[i] = unit_uniform(rng);
                q *= 1.0 - 2.0 * out[i];
            }
            double density = 1.0 + n.param * q;
            if (unit_uniform(rng) * bound <= density) return;
        }
    }
    case NodeKind::product:
        draw_node(*n.a, rng, out);
        draw_node(*n.b, rng, out + n.a->dim);
        return;
    case NodeKind::symmetrized: {
        // If X ~ C then xi^{-1}(X) ~ xi*C.
        Buf child;
        draw_node(*n.a, rng, child.data());
        const auto& perm = n.sym.perm();
        const std::uint32_t S = n.sym.reflected_mask();
        Buf t;
        for (int i = 0; i < n.dim; ++i)
            t[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = child[static_cast<std::size_t>(i)];
        for (int j = 0; j < n.dim; ++j)
            out[j] = (S & (1u << j)) ? 1.0 - t[static_cast<std::size_t>(j)] : t[static_cast<std::size_t>(j)];
        return;
    }
    case NodeKind::marginal: {
        Buf parent;
        draw_node(*n.a, rng, parent.data());
        int dst = 0;
        std::size_t d = 0;
        for (int i = 0; i < n.a->dim; ++i) {
            if (d < n.dropped.size() && n.dropped[d] == i) {
                ++d;
            } else {
                out[dst++] = parent[static_cast<std::size_t>(i)];
            }
        }
        return;
    }
    case NodeKind::mixture:
        if (unit_uniform(rng) < n.param)
            draw_node(*n.b, rng, out);
        else
            draw_node(*n.a, rng, out);
        return;
    case NodeKind::empirical: {
        const auto& rows = *n.points;
        auto idx = static_cast<std::size_t>(unit_uniform(rng) * static_cast<double>(rows.size()));
        if (idx >= rows.size()) idx = rows.size() - 1;
        const auto& row = rows[idx];
        std::copy(row.begin(), row.end(), out);
        return;
    }
    }
    throw ContractViolation("sample: unknown node kind");
}

// ---------------------------------------------------------------------------
// Exact Lebesgue integration
//
// Every closed-form node admits an exact integral once the integrand is
// tracked as a per-coordinate "slot pattern": each argument slot of a node
// is either a fresh uniform variable, one minus a fresh uniform variable,
// or a constant. Symmetry expansion, marginal pinning and product splits
// all stay inside this algebra, and the leaves reduce to one-dimensional
// moments (min of k independent uniforms truncated at a constant, for M).
// ---------------------------------------------------------------------------

struct Slot {
    enum Kind : std::uint8_t { variable, one_minus_variable, constant };
    Kind kind = variable;
    double c = 0.0;
};

using SlotBuf = std::array<Slot, kDimensionLimit>;

Slot flip_slot(const Slot& s) {
    switch (s.kind) {
    case Slot::variable: return {Slot::one_minus_variable, 0.0};
    case Slot::one_minus_variable: return {Slot::variable, 0.0};
    case Slot::constant: return {Slot::constant, 1.0 - s.c};
    }
    return s;
}

inline double slot_mean(const Slot& s) {
    return s.kind == Slot::constant ? s.c : 0.5;
}

inline double slot_mean_z_one_minus_z(const Slot& s) {
    return s.kind == Slot::constant ? s.c * (1.0 - s.c) : 1.0 / 6.0;
}

double pattern_integral(const Node& n, const Slot* slots) {
    switch (n.kind) {
    case NodeKind::independence: {
        double p = 1.0;
        for (int i = 0; i < n.dim; ++i) p *= slot_mean(slots[i]);
        return p;
    }
    case NodeKind::fgm: {
        double p = 1.0, q = 1.0;
        for (int i = 0; i < n.dim; ++i) {
            p *= slot_mean(slots[i]);
            q *= slot_mean_z_one_minus_z(slots[i]);
        }
        return p + n.param * q;
    }
    case NodeKind::comonotone: {
        // E[min(U_1..U_k, c)] = (1 - (1-c)^(k+1)) / (k+1)
        int k = 0;
        double c = 1.0;
        for (int i = 0; i < n.dim; ++i) {
            if (slots[i].kind == Slot::constant)
                c = std::min(c, slots[i].c);
            else
                ++k;
        }
        if (c <= 0.0) return 0.0;
        return (1.0 - std::pow(1.0 - c, k + 1)) / (k + 1);
    }
    case NodeKind::product:
        return pattern_integral(*n.a, slots) * pattern_integral(*n.b, slots + n.a->dim);
    case NodeKind::mixture:
        return (1.0 - n.param) * pattern_integral(*n.a, slots) +
               n.param * pattern_integral(*n.b, slots);
    case NodeKind::marginal: {
        SlotBuf parent;
        int src = 0;
        std::size_t d = 0;
        for (int i = 0; i < n.a->dim; ++i) {
            if (d < n.dropped.size() && n.dropped[d] == i) {
                parent[static_cast<std::size_t>(i)] = {Slot::constant, 1.0};
                ++d;
            } else {
                parent[static_cast<std::size_t>(i)] = slots[src++];
            }
        }
        return pattern_integral(*n.a, parent.data());
    }
    case NodeKind::symmetrized: {
        const std::uint32_t S = n.sym.reflected_mask();
        const auto& perm = n.sym.perm();
        double total = 0.0;
        std::uint32_t t = S;
        SlotBuf child;
        while (true) {
            for (int j = 0; j < n.dim; ++j) {
                int src = perm[static_cast<std::size_t>(j)];
                std::uint32_t bit = 1u << src;
                if (t & bit)
                    child[static_cast<std::size_t>(j)] = flip_slot(slots[src]);
                else if (S & bit)
                    child[static_cast<std::size_t>(j)] = {Slot::constant, 1.0};
                else
                    child[static_cast<std::size_t>(j)] = slots[src];
            }
            double term = pattern_integral(*n.a, child.data());
            total += (std::popcount(t) & 1) ? -term : term;
            if (t == 0) break;
            t = (t - 1) & S;
        }
        return total;
    }
    case NodeKind::empirical: {
        const auto& rows = *n.points;
        double sum = 0.0;
        for (const auto& r : rows) {
            double w = 1.0;
            for (int i = 0; i < n.dim && w != 0.0; ++i) {
                const Slot& s = slots[i];
                double p = r[static_cast<std::size_t>(i)];
                if (s.kind == Slot::constant)
                    w *= (p <= s.c) ? 1.0 : 0.0;
                else
                    w *= 1.0 - p;  // P(p <= U) = P(p <= 1-U) = 1-p
            }
            sum += w;
        }
        return sum / static_cast<double>(rows.size());
    }
    }
    throw ContractViolation("integrate: unknown node kind");
}

// ---------------------------------------------------------------------------
// Monte Carlo engine: deterministic per-worker substreams, combined in
// worker order, so results are reproducible at any fixed worker count.
// ---------------------------------------------------------------------------

struct McAccum {
    double sum = 0.0;
    double sumsq = 0.0;
    std::uint64_t count = 0;
};

template <typename PerSample>
EvalResult monte_carlo_mean(const EstimatorConfig& cfg, PerSample&& per_sample) {
    cfg.validate();
    const std::uint64_t total = cfg.mc_samples;
    const int workers = cfg.workers;
    std::vector<McAccum> acc(static_cast<std::size_t>(workers));

    auto run_worker = [&](int w) {
        std::uint64_t count = total / static_cast<std::uint64_t>(workers);
        if (static_cast<std::uint64_t>(w) < total % static_cast<std::uint64_t>(workers)) ++count;
        std::mt19937_64 rng(substream_seed(cfg.seed, static_cast<std::uint64_t>(w)));
        McAccum& a = acc[static_cast<std::size_t>(w)];
        for (std::uint64_t i = 0; i < count; ++i) {
            double v = per_sample(rng);
            a.sum += v;
            a.sumsq += v * v;
        }
        a.count = count;
    };

    if (workers == 1) {
        run_worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(run_worker, w);
        for (auto& t : pool) t.join();
    }

    double sum = 0.0, sumsq = 0.0;
    std::uint64_t n = 0;
    for (const auto& a : acc) {
        sum += a.sum;
        sumsq += a.sumsq;
        n += a.count;
    }
    const double mean = sum / static_cast<double>(n);
    double var = 0.0;
    if (n > 1) var = std::max(0.0, (sumsq - sum * sum / static_cast<double>(n)) / static_cast<double>(n - 1));
    return EvalResult::monte_carlo(mean, std::sqrt(var / static_cast<double>(n)));
}

// ---------------------------------------------------------------------------
// Canonicalization (exact paths only)
// ---------------------------------------------------------------------------

NodePtr make_leaf(NodeKind kind, int dim, double param = 0.0) {
    auto node = std::make_shared<Node>();
    node->kind = kind;
    node->dim = dim;
    node->param = param;
    return node;
}

NodePtr make_marginal_node(NodePtr parent, std::vector<int> dropped) {
    auto node = std::make_shared<Node>();
    node->kind = NodeKind::marginal;
    node->dim = parent->dim - static_cast<int>(dropped.size());
    node->a = std::move(parent);
    node->dropped = std::move(dropped);
    return node;
}

NodePtr canonicalize_impl(const NodePtr& n);

// Marginal of a product factor; may shrink to dimension 0 (nullptr).
NodePtr factor_marginal(const NodePtr& f, std::vector<int> dropped) {
    if (dropped.empty()) return f;
    if (static_cast<int>(dropped.size()) == f->dim) return nullptr;
    return canonicalize_impl(make_marginal_node(f, std::move(dropped)));
}

NodePtr canonicalize_marginal(const NodePtr& n) {
    NodePtr child = canonicalize_impl(n->a);
    const std::vector<int>& dropped = n->dropped;
    const int dim = n->dim;

    // a one-dimensional margin of any copula is uniform
    if (dim == 1) return make_leaf(NodeKind::independence, 1);

    switch (child->kind) {
    case NodeKind::independence:
        return make_leaf(NodeKind::independence, dim);
    case NodeKind::fgm:
        // pinning any coordinate to 1 kills the theta term
        return make_leaf(NodeKind::independence, dim);
    case NodeKind::comonotone:
        return make_leaf(NodeKind::comonotone, dim);
    case NodeKind::marginal: {
        // merge into the grandparent's coordinate space
        std::vector<int> kept;
        for (int i = 0; i < child->a->dim; ++i)
            if (!std::binary_search(child->dropped.begin(), child->dropped.end(), i))
                kept.push_back(i);
        std::vector<int> merged = child->dropped;
        for (int d : dropped) merged.push_back(kept[static_cast<std::size_t>(d)]);
        std::sort(merged.begin(), merged.end());
        return canonicalize_impl(make_marginal_node(child->a, std::move(merged)));
    }
    case NodeKind::product: {
        const int split = child->a->dim;
        std::vector<int> da, db;
        for (int d : dropped) {
            if (d < split)
                da.push_back(d);
            else
                db.push_back(d - split);
        }
        NodePtr fa = factor_marginal(child->a, std::move(da));
        NodePtr fb = factor_marginal(child->b, std::move(db));
        if (!fa) return fb;
        if (!fb) return fa;
        auto node = std::make_shared<Node>();
        node->kind = NodeKind::product;
        node->dim = fa->dim + fb->dim;
        node->a = std::move(fa);
        node->b = std::move(fb);
        return canonicalize_impl(node);
    }
    case NodeKind::empirical: {
        std::vector<UnitPoint> projected;
        projected.reserve(child->points->size());
        for (const auto& row : *child->points) {
            UnitPoint r;
            r.reserve(static_cast<std::size_t>(dim));
            std::size_t d = 0;
            for (int i = 0; i < child->dim; ++i) {
                if (d < dropped.size() && dropped[d] == i)
                    ++d;
                else
                    r.push_back(row[static_cast<std::size_t>(i)]);
            }
            projected.push_back(std::move(r));
        }
        auto node = std::make_shared<Node>();
        node->kind = NodeKind::empirical;
        node->dim = dim;
        node->points = std::make_shared<const std::vector<UnitPoint>>(std::move(projected));
        return node;
    }
    default:
        if (child == n->a) return n;
        return make_marginal_node(child, dropped);
    }
}

NodePtr canonicalize_symmetrized(const NodePtr& n) {
    NodePtr child = canonicalize_impl(n->a);
    const Symmetry& xi = n->sym;

    if (child->kind == NodeKind::symmetrized) {
        // xi*(eta*C) = (eta o xi)* C
        auto node = std::make_shared<Node>();
        node->kind = NodeKind::symmetrized;
        node->dim = n->dim;
        node->sym = compose(child->sym, xi);
        node->a = child->a;
        return canonicalize_impl(node);
    }
    if (xi.is_identity()) return child;
    switch (child->kind) {
    case NodeKind::independence:
        return child;  // independence is invariant under the whole group
    case NodeKind::fgm: {
        // exchangeable, and each flip negates theta
        double theta = (xi.length() % 2 == 0) ? child->param : -child->param;
        return make_leaf(NodeKind::fgm, child->dim, theta);
    }
    case NodeKind::comonotone:
        if (xi.is_pure_permutation()) return child;
        if (xi.length() == child->dim) return child;  // full reflection of M is M
        break;
    default:
        break;
    }
    if (child == n->a) return n;
    auto node = std::make_shared<Node>();
    node->kind = NodeKind::symmetrized;
    node->dim = n->dim;
    node->sym = xi;
    node->a = std::move(child);
    return node;
}

NodePtr canonicalize_impl(const NodePtr& n) {
    switch (n->kind) {
    case NodeKind::independence:
    case NodeKind::comonotone:
    case NodeKind::fgm:
    case NodeKind::empirical:
        return n;
    case NodeKind::product: {
        NodePtr a = canonicalize_impl(n->a);
        NodePtr b = canonicalize_impl(n->b);
        if (a->kind == NodeKind::independence && b->kind == NodeKind::independence)
            return make_leaf(NodeKind::independence, a->dim + b->dim);
        if (a == n->a && b == n->b) return n;
        auto node = std::make_shared<Node>();
        node->kind = NodeKind::product;
        node->dim = n->dim;
        node->a = std::move(a);
        node->b = std::move(b);
        return node;
    }
    case NodeKind::mixture: {
        if (n->param == 0.0) return canonicalize_impl(n->a);
        if (n->param == 1.0) return canonicalize_impl(n->b);
        NodePtr a = canonicalize_impl(n->a);
        NodePtr b = canonicalize_impl(n->b);
        if (a == n->a && b == n->b) return n;
        auto node = std::make_shared<Node>();
        node->kind = NodeKind::mixture;
        node->dim = n->dim;
        node->param = n->param;
        node->a = std::move(a);
        node->b = std::move(b);
        return node;
    }
    case NodeKind::marginal:
        return canonicalize_marginal(n);
    case NodeKind::symmetrized:
        return canonicalize_symmetrized(n);
    }
    return n;
}

NodePtr full_reflection_node(const NodePtr& base) {
    auto node = std::make_shared<Node>();
    node->kind = NodeKind::symmetrized;
    node->dim = base->dim;
    node->sym = Symmetry::full_reflection(base->dim);
    node->a = base;
    return node;
}

double exact_integral_node(const NodePtr& n) {
    SlotBuf slots;
    for (int i = 0; i < n->dim; ++i) slots[static_cast<std::size_t>(i)] = {Slot::variable, 0.0};
    return pattern_integral(*n, slots.data());
}

// Kendall self-integrals with closed forms. Operates on canonical nodes.
constexpr std::size_t kEmpiricalSelfIntegralLimit = 20000;

std::optional<double> self_integral_node(const NodePtr& n) {
    switch (n->kind) {
    case NodeKind::independence:
        return std::pow(0.5, n->dim);
    case NodeKind::comonotone:
        return 0.5;  // E[U] along the diagonal support
    case NodeKind::fgm: {
        double six = std::pow(1.0 / 6.0, n->dim);
        double alt = (n->dim % 2 == 0) ? six : -six;
        return std::pow(0.5, n->dim) + n->param * (six + alt);
    }
    case NodeKind::product: {
        auto ia = self_integral_node(n->a);
        auto ib = self_integral_node(n->b);
        if (ia && ib) return *ia * *ib;
        return std::nullopt;
    }
    case NodeKind::empirical: {
        const auto& rows = *n->points;
        if (rows.size() > kEmpiricalSelfIntegralLimit) return std::nullopt;
        double sum = 0.0;
        for (const auto& r : rows) sum += detail::eval_node(*n, r.data());
        return sum / static_cast<double>(rows.size());
    }
    default:
        return std::nullopt;
    }
}

// ---------------------------------------------------------------------------
// Gini diagonals
// ---------------------------------------------------------------------------

// Exact integral of C + sigma*C along all main diagonals of an empirical
// copula: along a diagonal each rank point is covered for t in a closed
// interval, so the integral is a sum of interval lengths.
double empirical_diagonal_integral(const Node& n) {
    const auto& rows = *n.points;
    const int dim = n.dim;
    const double inv_n = 1.0 / static_cast<double>(rows.size());
    double total = 0.0;
    const std::uint32_t diag_count = 1u << (dim - 1);
    for (std::uint32_t m = 0; m < diag_count; ++m) {
        const std::uint32_t v = m << 1;  // coordinate i runs as 1-t iff bit i set; bit 0 clear
        double acc = 0.0;
        for (const auto& p : rows) {
            // C term: p covered iff max(p_i : straight) <= t <= min(1-p_i : flipped)
            double lo = 0.0, hi = 1.0;
            double slo = 0.0, shi = 1.0;  // sigma*C term
            for (int i = 0; i < dim; ++i) {
                double pi = p[static_cast<std::size_t>(i)];
                if (v & (1u << i)) {
                    hi = std::min(hi, 1.0 - pi);
                    shi = std::min(shi, pi);
                } else {
                    lo = std::max(lo, pi);
                    slo = std::max(slo, 1.0 - pi);
                }
            }
            acc += std::max(0.0, hi - lo) + std::max(0.0, shi - slo);
        }
        total += acc * inv_n;
    }
    return total / static_cast<double>(diag_count);
}

double simpson_unit_interval(int points, const std::function<double(double)>& f) {
    int m = points;
    if (m < 3) m = 3;
    if (m % 2 == 0) ++m;
    const double h = 1.0 / static_cast<double>(m - 1);
    double acc = f(0.0) + f(1.0);
    for (int j = 1; j < m - 1; ++j) {
        double w = (j % 2 == 1) ? 4.0 : 2.0;
        acc += w * f(static_cast<double>(j) * h);
    }
    return acc * h / 3.0;
}

} // namespace

// ---------------------------------------------------------------------------
// Config / result plumbing
// ---------------------------------------------------------------------------

void EstimatorConfig::validate() const {
    require(mc_samples >= 1, "EstimatorConfig: mc_samples must be positive");
    require(grid_resolution >= 2, "EstimatorConfig: grid_resolution must be >= 2");
    require(diag_quadrature_points >= 3, "EstimatorConfig: diag_quadrature_points must be >= 3");
    require(workers >= 1 && workers <= 256, "EstimatorConfig: workers out of range");
    require(sigma_gate > 0.0, "EstimatorConfig: sigma_gate must be positive");
}

EstimatorConfig EstimatorConfig::with_seed(std::uint64_t s) const {
    EstimatorConfig c = *this;
    c.seed = s;
    return c;
}

EstimatorConfig EstimatorConfig::with_samples(std::uint64_t n) const {
    EstimatorConfig c = *this;
    c.mc_samples = n;
    return c;
}

EstimatorConfig EstimatorConfig::substream(std::uint64_t tag) const {
    EstimatorConfig c = *this;
    c.seed = substream_seed(seed, splitmix64(tag ^ 0xa5a5a5a5a5a5a5a5ULL));
    return c;
}

const char* to_string(Method m) {
    switch (m) {
    case Method::exact: return "exact";
    case Method::quadrature: return "quadrature";
    case Method::monte_carlo: return "monte-carlo";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// Public operations
// ---------------------------------------------------------------------------

std::vector<UnitPoint> sample(const Copula& c, std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<UnitPoint> out;
    out.reserve(count);
    Buf buf;
    for (std::size_t i = 0; i < count; ++i) {
        draw_node(c.node(), rng, buf.data());
        out.emplace_back(buf.begin(), buf.begin() + c.dimension());
    }
    return out;
}

EvalResult integrate_lebesgue(const Copula& c, const EstimatorConfig& cfg) {
    cfg.validate();
    if (cfg.exact_preferred) {
        NodePtr canon = detail::canonicalize(c.ptr());
        double base = exact_integral_node(canon);
        double reflected = exact_integral_node(detail::canonicalize(full_reflection_node(canon)));
        return EvalResult::exact(base + reflected);
    }
    const Node& base = c.node();
    Copula reflected = apply_symmetry(Symmetry::full_reflection(c.dimension()), c);
    const Node& refl = reflected.node();
    const int dim = c.dimension();
    return monte_carlo_mean(cfg, [&base, &refl, dim](std::mt19937_64& rng) {
        Buf x;
        for (int i = 0; i < dim; ++i) x[static_cast<std::size_t>(i)] = unit_uniform(rng);
        return detail::eval_node(base, x.data()) + detail::eval_node(refl, x.data());
    });
}

EvalResult integrate_lebesgue(const Copula& a, const Copula& b, const EstimatorConfig& cfg) {
    cfg.validate();
    require(a.dimension() == b.dimension(), "integrate_lebesgue: dimension mismatch");
    if (cfg.exact_preferred) {
        return EvalResult::exact(exact_integral_node(detail::canonicalize(a.ptr())) +
                                 exact_integral_node(detail::canonicalize(b.ptr())));
    }
    const Node& na = a.node();
    const Node& nb = b.node();
    const int dim = a.dimension();
    return monte_carlo_mean(cfg, [&na, &nb, dim](std::mt19937_64& rng) {
        Buf x;
        for (int i = 0; i < dim; ++i) x[static_cast<std::size_t>(i)] = unit_uniform(rng);
        return detail::eval_node(na, x.data()) + detail::eval_node(nb, x.data());
    });
}

EvalResult integrate_diagonals(const Copula& c, const EstimatorConfig& cfg) {
    cfg.validate();
    const int dim = c.dimension();
    NodePtr canon = detail::canonicalize(c.ptr());
    if (canon->kind == NodeKind::empirical)
        return EvalResult::exact(empirical_diagonal_integral(*canon));

    NodePtr refl = detail::canonicalize(full_reflection_node(canon));
    const std::uint32_t diag_count = 1u << (dim - 1);
    double total = 0.0;
    Buf p;
    for (std::uint32_t m = 0; m < diag_count; ++m) {
        const std::uint32_t v = m << 1;
        auto g = [&](double t) {
            for (int i = 0; i < dim; ++i)
                p[static_cast<std::size_t>(i)] = (v & (1u << i)) ? 1.0 - t : t;
            return detail::eval_node(*canon, p.data()) + detail::eval_node(*refl, p.data());
        };
        total += simpson_unit_interval(cfg.diag_quadrature_points, g);
    }
    return EvalResult::quadrature(total / static_cast<double>(diag_count));
}

EvalResult integrate_self(const Copula& c, const EstimatorConfig& cfg) {
    cfg.validate();
    if (cfg.exact_preferred) {
        if (auto exact = self_integral_node(detail::canonicalize(c.ptr())))
            return EvalResult::exact(*exact);
    }
    const Node& node = c.node();
    const int dim = c.dimension();
    return monte_carlo_mean(cfg, [&node, dim](std::mt19937_64& rng) {
        Buf x;
        draw_node(node, rng, x.data());
        (void)dim;
        return detail::eval_node(node, x.data());
    });
}

Copula empirical_copula(const std::vector<std::vector<double>>& rows, const EstimatorConfig& cfg) {
    cfg.validate();
    if (rows.size() < 2) throw InputError("empirical_copula: need at least 2 rows");
    const std::size_t cols = rows.front().size();
    if (cols < 2) throw InputError("empirical_copula: need at least 2 columns");
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols)
            throw InputError("empirical_copula: row " + std::to_string(r + 1) + " has inconsistent width");
        for (std::size_t c = 0; c < cols; ++c)
            if (!std::isfinite(rows[r][c]))
                throw InputError("empirical_copula: non-finite value at row " + std::to_string(r + 1) +
                                 ", column " + std::to_string(c + 1));
    }

    const std::size_t n = rows.size();
    std::vector<UnitPoint> pseudo(n, UnitPoint(cols));
    std::vector<std::size_t> order(n);
    for (std::size_t c = 0; c < cols; ++c) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t i, std::size_t j) { return rows[i][c] < rows[j][c]; });
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && rows[order[j + 1]][c] == rows[order[i]][c]) ++j;
            double avg_rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
            for (std::size_t k = i; k <= j; ++k)
                pseudo[order[k]][c] = avg_rank / static_cast<double>(n + 1);
            i = j + 1;
        }
    }
    return Copula::empirical(std::move(pseudo));
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open CSV file: " + path);

    auto split = [](const std::string& line) {
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            std::size_t comma = line.find(',', start);
            std::string field = line.substr(start, comma == std::string::npos ? comma : comma - start);
            while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.erase(field.begin());
            while (!field.empty() &&
                   (field.back() == ' ' || field.back() == '\t' || field.back() == '\r'))
                field.pop_back();
            fields.push_back(std::move(field));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        return fields;
    };
    auto parse_number = [](const std::string& s, double& out) {
        const char* begin = s.data();
        const char* end = begin + s.size();
        auto [ptr, ec] = std::from_chars(begin, end, out);
        return ec == std::errc{} && ptr == end && !s.empty();
    };

    CsvTable table;
    std::string line;
    std::size_t lineno = 0;
    bool saw_first = false;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto fields = split(line);
        if (!saw_first) {
            saw_first = true;
            width = fields.size();
            std::vector<double> row(fields.size());
            bool all_numeric = true;
            for (std::size_t i = 0; i < fields.size(); ++i)
                all_numeric = all_numeric && parse_number(fields[i], row[i]);
            if (all_numeric) {
                for (std::size_t i = 0; i < fields.size(); ++i)
                    table.columns.push_back("col" + std::to_string(i + 1));
                table.rows.push_back(std::move(row));
            } else {
                table.columns = fields;
            }
            continue;
        }
        if (fields.size() != width)
            throw InputError("CSV row " + std::to_string(lineno) + ": expected " + std::to_string(width) +
                             " fields, found " + std::to_string(fields.size()));
        std::vector<double> row(fields.size());
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (!parse_number(fields[i], row[i]))
                throw InputError("CSV row " + std::to_string(lineno) + ", column " + std::to_string(i + 1) +
                                 ": not a number: '" + fields[i] + "'");
            if (!std::isfinite(row[i]))
                throw InputError("CSV row " + std::to_string(lineno) + ", column " + std::to_string(i + 1) +
                                 ": non-finite value");
        }
        table.rows.push_back(std::move(row));
    }
    if (table.rows.empty()) throw InputError("CSV file has no data rows: " + path);
    return table;
}

namespace detail {

double exact_lebesgue_integral(const Copula& c) {
    return exact_integral_node(canonicalize(c.ptr()));
}

std::optional<double> exact_self_integral(const Copula& c) {
    return self_integral_node(canonicalize(c.ptr()));
}

NodePtr canonicalize(const NodePtr& n) { return canonicalize_impl(n); }

} // namespace detail

} // namespace concord
