#pragma once

#include <cstdint>
#include <initializer_list>
#include <memory>
#include <span>
#include <vector>

#include "concord/common.hpp"

namespace concord {

/// A point of the unit cube. Length must match the dimension of any
/// copula it is evaluated against; every coordinate lies in [0,1].
using UnitPoint = std::vector<double>;

// ---------------------------------------------------------------------------
// Symmetry of the unit cube
// ---------------------------------------------------------------------------

/// A symmetry of I^n: a coordinate permutation composed with coordinate
/// flips x_i -> 1-x_i. Stored in the canonical factored form
/// "flip the coordinates in `reflected`, then permute", so the map is
///
///     xi(x)_i = x_{k_i}       if k_i not reflected
///             = 1 - x_{k_i}   if k_i reflected
///
/// where k is the permutation (0-based internally, 1-based in the API).
/// The length of a symmetry is the number of reflected coordinates.
class Symmetry {
public:
    static Symmetry identity(int dim);
    /// Flip a single coordinate (1-based).
    static Symmetry elementary_reflection(int dim, int coord);
    /// Flip a set of coordinates (1-based, duplicates rejected).
    static Symmetry reflection(int dim, const std::vector<int>& coords);
    /// Flip every coordinate.
    static Symmetry full_reflection(int dim);
    /// Pure permutation: images[i-1] is the coordinate read into slot i,
    /// i.e. the map x -> (x_{images[1]}, ..., x_{images[n]}), 1-based.
    static Symmetry permutation(const std::vector<int>& images);
    static Symmetry make(const std::vector<int>& images, const std::vector<int>& reflected);

    int dimension() const { return static_cast<int>(perm_.size()); }
    int length() const;
    bool is_identity() const;
    bool is_pure_permutation() const { return reflected_ == 0; }
    std::uint32_t reflected_mask() const { return reflected_; }
    const std::vector<int>& perm() const { return perm_; }
    /// Reflected coordinates, 1-based, sorted.
    std::vector<int> reflected_coords() const;

    /// Apply the map to a point of I^n.
    UnitPoint operator()(std::span<const double> x) const;
    /// Apply the inverse map (used by the copula samplers).
    UnitPoint inverse(std::span<const double> x) const;

    friend bool operator==(const Symmetry& a, const Symmetry& b) {
        return a.perm_ == b.perm_ && a.reflected_ == b.reflected_;
    }

private:
    Symmetry(std::vector<int> perm0, std::uint32_t reflected)
        : perm_(std::move(perm0)), reflected_(reflected) {}

    std::vector<int> perm_;    // 0-based: slot i reads input coordinate perm_[i]
    std::uint32_t reflected_;  // bit j: input coordinate j+1 is flipped

    friend Symmetry compose(const Symmetry& f, const Symmetry& g);
};

/// Composition of maps, f after g: compose(f, g)(x) = f(g(x)).
/// Note the action on copulas is contravariant: (fg)* = g* f*.
Symmetry compose(const Symmetry& f, const Symmetry& g);

// ---------------------------------------------------------------------------
// Copula expressions
// ---------------------------------------------------------------------------

enum class NodeKind {
    independence,  // product of coordinates
    comonotone,    // min of coordinates (upper Frechet bound)
    fgm,           // perturbed independence: prod x_i + theta * prod x_i (1-x_i)
    product,       // (p+q)-copula A(x) B(y)
    symmetrized,   // xi* C, evaluated by subset inclusion-exclusion
    marginal,      // C with a set of coordinates pinned to 1
    mixture,       // (1-w) A + w B
    empirical      // normalized dominated-count of rank points
};

namespace detail {

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    NodeKind kind;
    int dim = 0;
    double param = 0.0;              // fgm theta, mixture weight
    Symmetry sym = Symmetry::identity(1);
    std::vector<int> dropped;        // marginal: 0-based, sorted
    NodePtr a, b;
    std::shared_ptr<const std::vector<UnitPoint>> points;  // empirical rows
};

double eval_node(const Node& n, const double* x);

} // namespace detail

/// Immutable copula expression. Evaluation is pure; instances are cheap
/// handles (shared pointers) and safe to share across threads.
class Copula {
public:
    /// Pi^n, n >= 1 (the 1-dimensional case exists only to feed products).
    static Copula independence(int n);
    /// M^n, n >= 2.
    static Copula comonotone(int n);
    /// The perturbed-independence family E^n(theta): the n-variate FGM
    /// copula carrying only the top-order term. n >= 2, theta in [-1,1];
    /// its density 1 + theta * prod(1-2x_i) is nonnegative on the cube.
    static Copula fgm(int n, double theta);
    static Copula mixture(double w, const Copula& a, const Copula& b);
    /// Empirical copula over pseudo-observations in (0,1)^n.
    static Copula empirical(std::vector<UnitPoint> pseudo_observations);

    int dimension() const { return node_->dim; }
    NodeKind kind() const { return node_->kind; }

    /// C(x). Throws on dimension mismatch or coordinates outside [0,1].
    double eval(std::span<const double> x) const;
    double eval(std::initializer_list<double> x) const {
        return eval(std::span<const double>(x.begin(), x.size()));
    }
    double operator()(std::span<const double> x) const { return eval(x); }

    const detail::Node& node() const { return *node_; }
    const detail::NodePtr& ptr() const { return node_; }
    static Copula from_node(detail::NodePtr n) { return Copula(std::move(n)); }

private:
    explicit Copula(detail::NodePtr n) : node_(std::move(n)) {}
    detail::NodePtr node_;
};

/// The (p+q)-copula (A x B)(x, y) = A(x) B(y); either factor may be Pi^1.
Copula product(const Copula& a, const Copula& b);

/// xi* C. Evaluation permutes coordinates and expands the reflected set S
/// by inclusion-exclusion over its 2^|S| subsets: flipping one coordinate
/// replaces C(..., x_i, ...) with C(..., 1, ...) - C(..., 1-x_i, ...).
Copula apply_symmetry(const Symmetry& xi, const Copula& c);

/// The marginal obtained by pinning the `dropped` coordinates (1-based)
/// to 1. Indices name the coordinates removed, not the ones kept.
Copula marginal(const Copula& c, const std::vector<int>& dropped);

struct TaggedMarginal {
    std::vector<int> retained;  // 1-based, sorted
    Copula copula;
};

/// All k-dimensional marginals, in lexicographic order of retained indices.
std::vector<TaggedMarginal> enumerate_marginals(const Copula& c, int k);

/// Survival function: P(X_1 > x_1, ..., X_n > x_n), computed as
/// (sigma* C)(1-x_1, ..., 1-x_n) for the full reflection sigma.
double survival(const Copula& c, std::span<const double> x);
double survival(const Copula& c, std::initializer_list<double> x);

/// Grid check of the concordance order A < B, i.e. A <= B and
/// sigma*A <= sigma*B on the uniform grid with `resolution` points per
/// axis (endpoints included). Necessary-condition check only: a true
/// result certifies nothing off the grid.
bool dominates_on_grid(const Copula& a, const Copula& b, int resolution);

} // namespace concord
