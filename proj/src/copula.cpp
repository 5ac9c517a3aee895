#include "concord/copula.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numeric>

namespace concord {

namespace {

void check_dim(int n, const char* what) {
    require(n >= 1, std::string(what) + ": dimension must be positive");
    require(n <= max_dimension(),
            std::string(what) + ": dimension " + std::to_string(n) +
                " exceeds the cap " + std::to_string(max_dimension()));
}

std::uint32_t mask_from_coords(int dim, const std::vector<int>& coords, const char* what) {
    std::uint32_t mask = 0;
    for (int c : coords) {
        require(c >= 1 && c <= dim, std::string(what) + ": coordinate out of range");
        std::uint32_t bit = 1u << (c - 1);
        require((mask & bit) == 0, std::string(what) + ": duplicate coordinate");
        mask |= bit;
    }
    return mask;
}

using Buf = std::array<double, kDimensionLimit>;

} // namespace

// ---------------------------------------------------------------------------
// Symmetry
// ---------------------------------------------------------------------------

Symmetry Symmetry::identity(int dim) {
    check_dim(dim, "Symmetry");
    std::vector<int> p(static_cast<std::size_t>(dim));
    std::iota(p.begin(), p.end(), 0);
    return Symmetry(std::move(p), 0);
}

Symmetry Symmetry::elementary_reflection(int dim, int coord) {
    return reflection(dim, {coord});
}

Symmetry Symmetry::reflection(int dim, const std::vector<int>& coords) {
    Symmetry s = identity(dim);
    s.reflected_ = mask_from_coords(dim, coords, "Symmetry::reflection");
    return s;
}

Symmetry Symmetry::full_reflection(int dim) {
    Symmetry s = identity(dim);
    s.reflected_ = (dim == 32) ? ~0u : ((1u << dim) - 1u);
    return s;
}

Symmetry Symmetry::permutation(const std::vector<int>& images) {
    int dim = static_cast<int>(images.size());
    check_dim(dim, "Symmetry::permutation");
    std::vector<bool> seen(static_cast<std::size_t>(dim), false);
    std::vector<int> p;
    p.reserve(images.size());
    for (int v : images) {
        require(v >= 1 && v <= dim, "Symmetry::permutation: image out of range");
        require(!seen[static_cast<std::size_t>(v - 1)], "Symmetry::permutation: repeated image");
        seen[static_cast<std::size_t>(v - 1)] = true;
        p.push_back(v - 1);
    }
    return Symmetry(std::move(p), 0);
}

Symmetry Symmetry::make(const std::vector<int>& images, const std::vector<int>& reflected) {
    Symmetry s = permutation(images);
    s.reflected_ = mask_from_coords(s.dimension(), reflected, "Symmetry::make");
    return s;
}

int Symmetry::length() const { return std::popcount(reflected_); }

bool Symmetry::is_identity() const {
    if (reflected_ != 0) return false;
    for (int i = 0; i < dimension(); ++i)
        if (perm_[static_cast<std::size_t>(i)] != i) return false;
    return true;
}

std::vector<int> Symmetry::reflected_coords() const {
    std::vector<int> out;
    for (int j = 0; j < dimension(); ++j)
        if (reflected_ & (1u << j)) out.push_back(j + 1);
    return out;
}

UnitPoint Symmetry::operator()(std::span<const double> x) const {
    require(static_cast<int>(x.size()) == dimension(), "Symmetry: point dimension mismatch");
    UnitPoint u(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        int j = perm_[i];
        double v = x[static_cast<std::size_t>(j)];
        u[i] = (reflected_ & (1u << j)) ? 1.0 - v : v;
    }
    return u;
}

UnitPoint Symmetry::inverse(std::span<const double> x) const {
    require(static_cast<int>(x.size()) == dimension(), "Symmetry: point dimension mismatch");
    UnitPoint t(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        t[static_cast<std::size_t>(perm_[i])] = x[i];
    for (std::size_t j = 0; j < t.size(); ++j)
        if (reflected_ & (1u << j)) t[j] = 1.0 - t[j];
    return t;
}

Symmetry compose(const Symmetry& f, const Symmetry& g) {
    require(f.dimension() == g.dimension(), "compose: dimension mismatch");
    int n = f.dimension();
    // f = P_k F_S, g = P_l F_T  =>  f o g = P_m F_{l(S) xor T},  m_i = l_{k_i}.
    std::vector<int> m(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        m[static_cast<std::size_t>(i)] = g.perm_[static_cast<std::size_t>(f.perm_[static_cast<std::size_t>(i)])];
    std::uint32_t pushed = 0;
    for (int j = 0; j < n; ++j)
        if (f.reflected_ & (1u << j)) pushed |= 1u << g.perm_[static_cast<std::size_t>(j)];
    return Symmetry(std::move(m), pushed ^ g.reflected_);
}

// ---------------------------------------------------------------------------
// Node evaluation
// ---------------------------------------------------------------------------

namespace detail {

double eval_node(const Node& n, const double* x) {
    switch (n.kind) {
    case NodeKind::independence: {
        double p = 1.0;
        for (int i = 0; i < n.dim; ++i) p *= x[i];
        return p;
    }
    case NodeKind::comonotone: {
        double m = x[0];
        for (int i = 1; i < n.dim; ++i) m = std::min(m, x[i]);
        return m;
    }
    case NodeKind::fgm: {
        double p = 1.0, q = 1.0;
        for (int i = 0; i < n.dim; ++i) {
            p *= x[i];
            q *= x[i] * (1.0 - x[i]);
        }
        return p + n.param * q;
    }
    case NodeKind::product:
        return eval_node(*n.a, x) * eval_node(*n.b, x + n.a->dim);
    case NodeKind::mixture:
        return (1.0 - n.param) * eval_node(*n.a, x) + n.param * eval_node(*n.b, x);
    case NodeKind::marginal: {
        Buf y;
        int src = 0;
        const int parent_dim = n.a->dim;
        std::size_t d = 0;
        for (int i = 0; i < parent_dim; ++i) {
            if (d < n.dropped.size() && n.dropped[d] == i) {
                y[static_cast<std::size_t>(i)] = 1.0;
                ++d;
            } else {
                y[static_cast<std::size_t>(i)] = x[src++];
            }
        }
        return eval_node(*n.a, y.data());
    }
    case NodeKind::symmetrized: {
        // (xi* C)(x) with xi = P_k F_S: sum over subsets T of S of
        // (-1)^|T| C(w) where w_j = z_{k_j} and z_i = 1-x_i on T, 1 on S\T,
        // x_i elsewhere.
        const Symmetry& xi = n.sym;
        const std::uint32_t S = xi.reflected_mask();
        const auto& perm = xi.perm();
        Buf z, w;
        for (int i = 0; i < n.dim; ++i)
            z[static_cast<std::size_t>(i)] = (S & (1u << i)) ? 1.0 : x[i];
        double total = 0.0;
        std::uint32_t t = S;
        while (true) {
            for (int i = 0; i < n.dim; ++i) {
                if (t & (1u << i)) z[static_cast<std::size_t>(i)] = 1.0 - x[i];
            }
            for (int j = 0; j < n.dim; ++j)
                w[static_cast<std::size_t>(j)] = z[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])];
            double term = eval_node(*n.a, w.data());
            total += (std::popcount(t) & 1) ? -term : term;
            for (int i = 0; i < n.dim; ++i) {
                if (t & (1u << i)) z[static_cast<std::size_t>(i)] = 1.0;
            }
            if (t == 0) break;
            t = (t - 1) & S;
        }
        return total;
    }
    case NodeKind::empirical: {
        const auto& rows = *n.points;
        std::size_t count = 0;
        for (const auto& r : rows) {
            bool dominated = true;
            for (int i = 0; i < n.dim; ++i) {
                if (r[static_cast<std::size_t>(i)] > x[i]) {
                    dominated = false;
                    break;
                }
            }
            count += dominated ? 1u : 0u;
        }
        return static_cast<double>(count) / static_cast<double>(rows.size());
    }
    }
    throw ContractViolation("eval: unknown node kind");
}

} // namespace detail

// ---------------------------------------------------------------------------
// Constructors
// ---------------------------------------------------------------------------

Copula Copula::independence(int n) {
    check_dim(n, "independence");
    auto node = std::make_shared<detail::Node>();
    node->kind = NodeKind::independence;
    node->dim = n;
    return Copula(std::move(node));
}

Copula Copula::comonotone(int n) {
    check_dim(n, "comonotone");
    require(n >= 2, "comonotone: dimension must be >= 2");
    auto node = std::make_shared<detail::Node>();
    node->kind = NodeKind::comonotone;
    node->dim = n;
    return Copula(std::move(node));
}

Copula Copula::fgm(int n, double theta) {
    check_dim(n, "fgm");
    require(n >= 2, "fgm: dimension must be >= 2");
    require(theta >= -1.0 && theta <= 1.0, "fgm: theta must lie in [-1,1]");
    auto node = std::make_shared<detail::Node>();
    node->kind = NodeKind::fgm;
    node->dim = n;
    node->param = theta;
    return Copula(std::move(node));
}

Copula Copula::mixture(double w, const Copula& a, const Copula& b) {
    require(w >= 0.0 && w <= 1.0, "mixture: weight must lie in [0,1]");
    require(a.dimension() == b.dimension(), "mixture: dimension mismatch");
    auto node = std::make_shared<detail::Node>();
    node->kind = NodeKind::mixture;
    node->dim = a.dimension();
    node->param = w;
    node->a = a.ptr();
    node->b = b.ptr();
    return Copula(std::move(node));
}

Copula Copula::empirical(std::vector<UnitPoint> pseudo_observations) {
    require(!pseudo_observations.empty(), "empirical: no observations");
    int n = static_cast<int>(pseudo_observations.front().size());
    check_dim(n, "empirical");
    require(n >= 2, "empirical: dimension must be >= 2");
    for (const auto& row : pseudo_observations) {
        require(static_cast<int>(row.size()) == n, "empirical: ragged observation matrix");
        for (double v : row)
            require(v >= 0.0 && v <= 1.0, "empirical: pseudo-observation outside [0,1]");
    }
    auto node = std::make_shared<detail::Node>();
    node->kind = NodeKind::empirical;
    node->dim = n;
    node->points = std::make_shared<const std::vector<UnitPoint>>(std::move(pseudo_observations));
    return Copula(std::move(node));
}

double Copula::eval(std::span<const double> x) const {
    require(static_cast<int>(x.size()) == dimension(), "eval: point dimension mismatch");
    for (double v : x)
        require(v >= 0.0 && v <= 1.0, "eval: coordinate outside [0,1]");
    return detail::eval_node(*node_, x.data());
}

// ---------------------------------------------------------------------------
// Structural operations
// ---------------------------------------------------------------------------

Copula product(const Copula& a, const Copula& b) {
    int n = a.dimension() + b.dimension();
    check_dim(n, "product");
    require(n >= 2, "product: combined dimension must be >= 2");
    auto node = std::make_shared<detail::Node>();
    node->kind = NodeKind::product;
    node->dim = n;
    node->a = a.ptr();
    node->b = b.ptr();
    return Copula::from_node(std::move(node));
}

Copula apply_symmetry(const Symmetry& xi, const Copula& c) {
    require(xi.dimension() == c.dimension(), "apply_symmetry: dimension mismatch");
    auto node = std::make_shared<detail::Node>();
    node->kind = NodeKind::symmetrized;
    node->dim = c.dimension();
    node->sym = xi;
    node->a = c.ptr();
    return Copula::from_node(std::move(node));
}

Copula marginal(const Copula& c, const std::vector<int>& dropped) {
    const int n = c.dimension();
    std::uint32_t mask = mask_from_coords(n, dropped, "marginal");
    int k = std::popcount(mask);
    require(n - k >= 2, "marginal: fewer than 2 coordinates would remain");
    auto node = std::make_shared<detail::Node>();
    node->kind = NodeKind::marginal;
    node->dim = n - k;
    node->a = c.ptr();
    for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) node->dropped.push_back(i);
    return Copula::from_node(std::move(node));
}

std::vector<TaggedMarginal> enumerate_marginals(const Copula& c, int k) {
    const int n = c.dimension();
    require(k >= 2 && k <= n, "enumerate_marginals: k out of range");
    std::vector<TaggedMarginal> out;
    out.reserve(binomial(n, k));
    std::vector<int> retained(static_cast<std::size_t>(k));
    std::iota(retained.begin(), retained.end(), 1);
    while (true) {
        std::vector<int> dropped;
        dropped.reserve(static_cast<std::size_t>(n - k));
        std::size_t r = 0;
        for (int i = 1; i <= n; ++i) {
            if (r < retained.size() && retained[r] == i)
                ++r;
            else
                dropped.push_back(i);
        }
        out.push_back({retained, dropped.empty() ? c : marginal(c, dropped)});
        // next k-combination of {1..n} in lexicographic order
        int i = k - 1;
        while (i >= 0 && retained[static_cast<std::size_t>(i)] == n - (k - 1 - i)) --i;
        if (i < 0) break;
        ++retained[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j)
            retained[static_cast<std::size_t>(j)] = retained[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

double survival(const Copula& c, std::span<const double> x) {
    const int n = c.dimension();
    require(static_cast<int>(x.size()) == n, "survival: point dimension mismatch");
    for (double v : x)
        require(v >= 0.0 && v <= 1.0, "survival: coordinate outside [0,1]");
    Copula reflected = apply_symmetry(Symmetry::full_reflection(n), c);
    UnitPoint y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = 1.0 - x[i];
    return detail::eval_node(reflected.node(), y.data());
}

double survival(const Copula& c, std::initializer_list<double> x) {
    return survival(c, std::span<const double>(x.begin(), x.size()));
}

bool dominates_on_grid(const Copula& a, const Copula& b, int resolution) {
    require(a.dimension() == b.dimension(), "dominates_on_grid: dimension mismatch");
    require(resolution >= 2, "dominates_on_grid: resolution must be >= 2");
    const int n = a.dimension();
    const double slack = 1e-12;
    Copula ra = apply_symmetry(Symmetry::full_reflection(n), a);
    Copula rb = apply_symmetry(Symmetry::full_reflection(n), b);

    UnitPoint x(static_cast<std::size_t>(n), 0.0);
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    while (true) {
        for (int i = 0; i < n; ++i)
            x[static_cast<std::size_t>(i)] =
                static_cast<double>(idx[static_cast<std::size_t>(i)]) / (resolution - 1);
        if (detail::eval_node(a.node(), x.data()) > detail::eval_node(b.node(), x.data()) + slack)
            return false;
        if (detail::eval_node(ra.node(), x.data()) > detail::eval_node(rb.node(), x.data()) + slack)
            return false;
        int i = 0;
        while (i < n && ++idx[static_cast<std::size_t>(i)] == resolution) {
            idx[static_cast<std::size_t>(i)] = 0;
            ++i;
        }
        if (i == n) break;
    }
    return true;
}

} // namespace concord
