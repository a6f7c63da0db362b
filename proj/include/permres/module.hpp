#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "permres/matrix.hpp"
#include "permres/prime_field.hpp"

namespace permres {

inline Vec unit_vec(std::size_t n, std::size_t i) {
    Vec v(n, 0);
    v[i] = 1;
    return v;
}

/// Multiset of Jordan block sizes of the T-action, each in [1, p],
/// stored sorted descending. Classifies a module up to isomorphism.
class Invariants {
public:
    static Invariants of(PrimeField field, std::vector<std::uint32_t> parts) {
        for (std::uint32_t x : parts)
            if (x < 1 || x > field.p())
                throw std::invalid_argument("invariant out of [1, p]");
        std::sort(parts.begin(), parts.end(), std::greater<>());
        return Invariants(field, std::move(parts));
    }

    const PrimeField& field() const noexcept { return field_; }
    std::uint64_t p() const noexcept { return field_.p(); }
    const std::vector<std::uint32_t>& parts() const noexcept { return parts_; }

    std::size_t dim() const noexcept {
        std::size_t d = 0;
        for (std::uint32_t x : parts_) d += x;
        return d;
    }

    friend bool operator==(const Invariants& a, const Invariants& b) {
        return a.field_ == b.field_ && a.parts_ == b.parts_;
    }

private:
    Invariants(PrimeField field, std::vector<std::uint32_t> parts)
        : field_(field), parts_(std::move(parts)) {}

    PrimeField field_;
    std::vector<std::uint32_t> parts_;
};

/// A k[T]/T^p-module: the dimension together with the nilpotent matrix
/// by which T acts. Elements are coordinate vectors (Vec) of length dim.
class Module {
public:
    Module(PrimeField field, Matrix action) : field_(field), action_(std::move(action)) {
        if (action_.rows() != action_.cols())
            throw std::invalid_argument("module action must be square");
        if (!(action_.field() == field_))
            throw std::invalid_argument("module action field mismatch");
    }

    const PrimeField& field() const noexcept { return field_; }
    std::uint64_t p() const noexcept { return field_.p(); }
    std::size_t dim() const noexcept { return action_.rows(); }
    const Matrix& action() const noexcept { return action_; }

    /// T must be nilpotent of exponent at most p (all blocks of size <= p).
    bool is_valid() const {
        std::size_t e = std::min<std::size_t>(p(), dim());
        return action_.pow(e).is_zero();
    }

    friend bool operator==(const Module& a, const Module& b) {
        return a.field_ == b.field_ && a.action_ == b.action_;
    }

private:
    PrimeField field_;
    Matrix action_;
};

/// Canonical model: block-diagonal action, blocks in the invariant order,
/// each block of size x acting as e_1 -> e_2 -> ... -> e_x -> 0
/// (generator first, last basis vector killed).
inline Module module_from_invariants(const Invariants& inv) {
    std::size_t d = inv.dim();
    Matrix n(inv.field(), d, d);
    std::size_t off = 0;
    for (std::uint32_t x : inv.parts()) {
        for (std::uint32_t j = 0; j + 1 < x; ++j) n.set(off + j + 1, off + j, 1);
        off += x;
    }
    return Module(inv.field(), std::move(n));
}

/// Depth of an element in the radical filtration M >= TM >= T^2 M >= ...
/// The zero element has infinite depth.
class Depth {
public:
    static Depth infinity() { return Depth(kInfinity); }
    static Depth of(unsigned i) {
        if (i == kInfinity) throw std::invalid_argument("depth overflow");
        return Depth(i);
    }

    bool is_infinite() const noexcept { return v_ == kInfinity; }
    unsigned value() const {
        if (is_infinite()) throw std::logic_error("value() of infinite depth");
        return v_;
    }

    friend bool operator==(const Depth& a, const Depth& b) noexcept { return a.v_ == b.v_; }
    friend bool operator==(const Depth& a, unsigned b) noexcept { return a.v_ == b; }

private:
    explicit Depth(unsigned v) : v_(v) {}
    static constexpr unsigned kInfinity = ~0u;
    unsigned v_;
};

/// Precomputed powers of the action and echelon bases of their column
/// spaces. One-time cost per module; makes repeated depth / index /
/// summand queries cheap. Immutable after construction.
class FiltrationCache {
public:
    explicit FiltrationCache(Module m) : mod_(std::move(m)) {
        const PrimeField& f = mod_.field();
        std::size_t d = mod_.dim();
        std::size_t cap = std::min<std::size_t>(mod_.p(), d);
        Matrix pw = Matrix::identity(f, d);
        for (std::size_t i = 0;; ++i) {
            powers_.push_back(pw);
            EchelonSpan span(f, d);
            for (std::size_t j = 0; j < d; ++j) span.insert(pw.column(j));
            images_.push_back(std::move(span));
            if (pw.is_zero()) break;
            if (i >= cap)
                throw std::domain_error("action is not nilpotent of exponent at most p");
            pw = pw * mod_.action();
        }
    }

    const Module& module() const noexcept { return mod_; }

    /// Index i of the last stored power; N^i = 0 and N^{i-1} != 0.
    std::size_t nilpotency_exponent() const noexcept { return powers_.size() - 1; }

    const Matrix& power(std::size_t i) const {
        return powers_[std::min(i, powers_.size() - 1)];
    }

    std::size_t image_rank(std::size_t i) const {
        return i < images_.size() ? images_[i].rank() : 0;
    }

    Depth depth(const Vec& v) const {
        if (v.size() != mod_.dim()) throw std::invalid_argument("element length mismatch");
        if (is_zero_vec(v)) return Depth::infinity();
        for (std::size_t i = images_.size(); i-- > 0;)
            if (images_[i].contains(v)) return Depth::of(i);
        throw std::logic_error("depth: unreachable");
    }

    unsigned index(const Vec& v) const {
        if (v.size() != mod_.dim()) throw std::invalid_argument("element length mismatch");
        Vec w = v;
        unsigned i = 0;
        while (!is_zero_vec(w)) {
            w = mod_.action() * w;
            ++i;
            if (i > powers_.size()) throw std::logic_error("index: action not nilpotent");
        }
        return i;
    }

    bool generates_summand(const Vec& v) const {
        unsigned alpha = index(v);
        if (alpha == 0)
            throw std::invalid_argument("the zero element generates no summand");
        return depth(power(alpha - 1) * v) == alpha - 1;
    }

private:
    Module mod_;
    std::vector<Matrix> powers_;
    std::vector<EchelonSpan> images_;
};

/// Jordan block sizes from the rank profile of the powers of the action:
/// the multiplicity of x is rank(N^{x-1}) - 2 rank(N^x) + rank(N^{x+1}).
inline Invariants decompose(const Module& m) {
    FiltrationCache cache(m);  // throws if N^p != 0
    std::vector<std::uint32_t> parts;
    std::size_t max_part = std::min<std::size_t>(m.p(), m.dim());
    for (std::size_t x = max_part; x >= 1; --x) {
        std::size_t mult =
            cache.image_rank(x - 1) + cache.image_rank(x + 1) - 2 * cache.image_rank(x);
        for (std::size_t i = 0; i < mult; ++i)
            parts.push_back(static_cast<std::uint32_t>(x));
    }
    Invariants inv = Invariants::of(m.field(), std::move(parts));
    if (inv.dim() != m.dim()) throw std::logic_error("rank profile inconsistent");
    return inv;
}

/// Maximal i <= p with m in T^i M, found by feasibility of N^i x = m
/// from the top down; infinite for m = 0.
inline Depth radical_depth(const Module& m, const Vec& elem) {
    if (elem.size() != m.dim()) throw std::invalid_argument("element length mismatch");
    if (is_zero_vec(elem)) return Depth::infinity();
    std::vector<Matrix> powers;
    std::size_t cap = std::min<std::size_t>(m.p(), m.dim());
    Matrix pw = Matrix::identity(m.field(), m.dim());
    for (std::size_t i = 0; i <= cap; ++i) {
        powers.push_back(pw);
        if (pw.is_zero()) break;
        pw = pw * m.action();
    }
    for (std::size_t i = powers.size(); i-- > 0;)
        if (powers[i].solve(elem).has_value()) return Depth::of(i);
    throw std::logic_error("depth: unreachable");
}

/// Minimal i >= 0 with N^i m = 0; zero exactly for m = 0.
inline unsigned nilpotency_index(const Module& m, const Vec& elem) {
    if (elem.size() != m.dim()) throw std::invalid_argument("element length mismatch");
    Vec w = elem;
    unsigned i = 0;
    while (!is_zero_vec(w)) {
        w = m.action() * w;
        ++i;
        if (i > m.dim()) throw std::logic_error("index: action not nilpotent");
    }
    return i;
}

/// Criterion for a nonzero m of index a to generate a direct summand:
/// depth(T^{a-1} m) = a - 1. The two equivalent formulations (projection
/// exists; depth(T^i m) = i for all i < a) are exercised in the tests.
inline bool generates_direct_summand(const Module& m, const Vec& elem) {
    unsigned alpha = nilpotency_index(m, elem);
    if (alpha == 0) throw std::invalid_argument("the zero element generates no summand");
    Vec w = elem;
    for (unsigned i = 0; i + 1 < alpha; ++i) w = m.action() * w;
    return radical_depth(m, w) == alpha - 1;
}

namespace detail {
inline bool parts_are_permutation(const std::vector<std::uint32_t>& parts, std::uint64_t p) {
    return std::all_of(parts.begin(), parts.end(),
                       [p](std::uint32_t x) { return x == 1 || x == p; });
}
}  // namespace detail

/// Cheaper direct-summand test valid on permutation modules only:
/// either depth(Tm) = 1, or m has depth 0 and index 1.
inline bool generates_direct_summand_perm(const Module& perm, const Vec& elem) {
    if (!detail::parts_are_permutation(decompose(perm).parts(), perm.p()))
        throw std::invalid_argument("not a permutation module");
    if (is_zero_vec(elem)) throw std::invalid_argument("the zero element generates no summand");
    if (radical_depth(perm, perm.action() * elem) == 1) return true;
    return radical_depth(perm, elem) == 0 && nilpotency_index(perm, elem) == 1;
}

/// Polynomial in k[T]/T^alpha; coefficients lambda_0 .. lambda_{alpha-1}.
struct TruncatedPoly {
    PrimeField field;
    std::vector<std::uint64_t> coeff;  // size = truncation order, >= 1

    std::size_t order() const noexcept { return coeff.size(); }
};

inline TruncatedPoly truncated_mul(const TruncatedPoly& a, const TruncatedPoly& b) {
    std::size_t order = std::min(a.order(), b.order());
    TruncatedPoly r{a.field, std::vector<std::uint64_t>(order, 0)};
    for (std::size_t i = 0; i < order; ++i)
        for (std::size_t j = 0; i + j < order; ++j)
            r.coeff[i + j] = a.field.add(r.coeff[i + j], a.field.mul(a.coeff[i], b.coeff[j]));
    return r;
}

/// Inverse of f in k[T]/T^alpha, seeded with g_0 = 1/lambda_0 and solved
/// coefficient by coefficient. Requires a unit constant term.
inline TruncatedPoly truncated_inverse(const TruncatedPoly& f) {
    if (f.order() < 1) throw std::invalid_argument("truncation order must be >= 1");
    if (f.coeff[0] == 0) throw std::domain_error("constant term is zero, not invertible");
    const PrimeField& k = f.field;
    std::uint64_t lead_inv = k.inv(f.coeff[0]);
    TruncatedPoly g{k, std::vector<std::uint64_t>(f.order(), 0)};
    g.coeff[0] = lead_inv;
    for (std::size_t i = 1; i < f.order(); ++i) {
        std::uint64_t acc = 0;
        for (std::size_t j = 0; j < i; ++j) acc = k.add(acc, k.mul(g.coeff[j], f.coeff[i - j]));
        g.coeff[i] = k.neg(k.mul(lead_inv, acc));
    }
    return g;
}

/// A linear map commuting with the two T-actions. Construction checks
/// the intertwining identity exactly.
class EquivariantMap {
public:
    EquivariantMap(Module source, Module target, Matrix map)
        : source_(std::move(source)), target_(std::move(target)), map_(std::move(map)) {
        if (!(source_.field() == target_.field()))
            throw std::invalid_argument("equivariant map: field mismatch");
        if (map_.rows() != target_.dim() || map_.cols() != source_.dim())
            throw std::invalid_argument("equivariant map: shape mismatch");
        if (!(map_ * source_.action() == target_.action() * map_))
            throw std::invalid_argument("map does not commute with the T-action");
    }

    const Module& source() const noexcept { return source_; }
    const Module& target() const noexcept { return target_; }
    const Matrix& matrix() const noexcept { return map_; }

    Vec apply(const Vec& v) const { return map_ * v; }
    bool is_surjective() const { return map_.rank() == target_.dim(); }
    bool is_injective() const { return map_.rank() == source_.dim(); }

private:
    Module source_, target_;
    Matrix map_;
};

inline EquivariantMap compose(const EquivariantMap& f, const EquivariantMap& g) {
    if (!(f.source() == g.target()))
        throw std::invalid_argument("compose: middle modules differ");
    return EquivariantMap(g.source(), f.target(), f.matrix() * g.matrix());
}

/// An equivariant isomorphism from the canonical model onto the module:
/// action * basis = basis * canonical_action. Columns are the Jordan
/// chains v, Nv, ..., N^{h-1}v, blocks in descending height order.
struct JordanBasis {
    Invariants invariants;
    Matrix basis;
};

inline JordanBasis jordan_basis(const Module& m) {
    const PrimeField& f = m.field();
    std::size_t d = m.dim();
    FiltrationCache cache(m);  // validates nilpotency
    std::size_t t = cache.nilpotency_exponent();

    // kernel bases of N^j
    std::vector<std::vector<Vec>> kernels(t + 1);
    for (std::size_t j = 1; j <= t; ++j) kernels[j] = cache.power(j).kernel_basis();

    // Chain starters, found top height down. At stage j the span of
    // ker N^{j-1} plus the pushed-down higher chains is extended to all
    // of ker N^j by fresh starters of height j.
    std::vector<std::pair<Vec, std::size_t>> starters;
    for (std::size_t j = t; j >= 1; --j) {
        EchelonSpan span(f, d);
        for (const Vec& v : kernels[j - 1]) span.insert(v);
        for (const auto& [u, h] : starters) {
            if (!span.insert(cache.power(h - j) * u))
                throw std::logic_error("jordan chains collapsed");
        }
        for (const Vec& v : kernels[j]) {
            if (span.insert(v)) starters.emplace_back(v, j);
        }
    }

    std::vector<std::uint32_t> parts;
    std::vector<Vec> columns;
    for (const auto& [u, h] : starters) {
        parts.push_back(static_cast<std::uint32_t>(h));
        Vec w = u;
        for (std::size_t j = 0; j < h; ++j) {
            columns.push_back(w);
            w = m.action() * w;
        }
    }
    Invariants inv = Invariants::of(f, std::move(parts));
    Matrix basis = matrix_from_columns(f, d, columns);
    if (basis.rank() != d) throw std::logic_error("jordan basis is singular");
    Module canonical = module_from_invariants(inv);
    if (!(m.action() * basis == basis * canonical.action()))
        throw std::logic_error("jordan basis does not conjugate to canonical form");
    return JordanBasis{std::move(inv), std::move(basis)};
}

/// Equivariant projection of M onto the cyclic submodule generated by m,
/// fixing m; exists exactly when m generates a direct summand.
inline std::optional<EquivariantMap> summand_projection(const Module& m, const Vec& elem) {
    unsigned alpha = nilpotency_index(m, elem);
    if (alpha == 0) throw std::invalid_argument("the zero element generates no summand");
    if (!generates_direct_summand(m, elem)) return std::nullopt;

    const PrimeField& k = m.field();
    JordanBasis jb = jordan_basis(m);
    Matrix basis_inv = jb.basis.inverse().value();
    Vec coords = basis_inv * elem;

    // Locate a chain of height >= alpha on which the coefficient
    // polynomial of m has unit constant term.
    const auto& parts = jb.invariants.parts();
    std::size_t off = 0, chain_off = 0, chain_len = 0;
    bool found = false;
    for (std::uint32_t h : parts) {
        if (h >= alpha && coords[off] != 0) {
            chain_off = off;
            chain_len = h;
            found = true;
            break;
        }
        off += h;
    }
    if (!found) throw std::logic_error("no unit component despite summand criterion");

    TruncatedPoly poly{k, std::vector<std::uint64_t>(alpha, 0)};
    for (std::size_t j = 0; j < alpha; ++j) poly.coeff[j] = coords[chain_off + j];
    TruncatedPoly inv = truncated_inverse(poly);

    // g(T) m, then the projection v -> f_v(T) g(T) m through that chain.
    Vec gm(m.dim(), 0);
    Vec w = elem;
    for (std::size_t j = 0; j < alpha; ++j) {
        for (std::size_t i = 0; i < m.dim(); ++i)
            gm[i] = k.add(gm[i], k.mul(inv.coeff[j], w[i]));
        w = m.action() * w;
    }
    std::vector<Vec> g_cols;
    Vec img = gm;
    for (std::size_t j = 0; j < chain_len; ++j) {
        g_cols.push_back(img);
        img = m.action() * img;
    }
    Matrix lift = matrix_from_columns(k, m.dim(), g_cols);
    Matrix select(k, chain_len, m.dim());
    for (std::size_t i = 0; i < chain_len; ++i)
        for (std::size_t j = 0; j < m.dim(); ++j) select.set(i, j, basis_inv(chain_off + i, j));
    Matrix proj = lift * select;

    if (!(proj * proj == proj)) throw std::logic_error("projection is not idempotent");
    if (!(proj * elem == elem)) throw std::logic_error("projection does not fix m");
    return EquivariantMap(m, m, std::move(proj));
}

namespace detail {
inline void require_canonical(const Module& m, const std::vector<std::uint32_t>& parts) {
    Invariants inv = Invariants::of(m.field(), parts);
    if (!(module_from_invariants(inv) == m))
        throw std::invalid_argument("module is not in canonical block form");
}
}  // namespace detail

/// Map out of a canonical-form module determined by the images of its
/// block generators; images[i] must be annihilated by T^{part_i}.
inline EquivariantMap map_from_generator_images(const Module& domain, const Module& target,
                                                const std::vector<Vec>& images) {
    std::vector<std::uint32_t> parts = decompose(domain).parts();
    detail::require_canonical(domain, parts);
    if (images.size() != parts.size())
        throw std::invalid_argument("one generator image per block required");
    std::vector<Vec> columns;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        Vec w = images[i];
        if (w.size() != target.dim()) throw std::invalid_argument("image length mismatch");
        for (std::uint32_t j = 0; j < parts[i]; ++j) {
            columns.push_back(w);
            w = target.action() * w;
        }
        if (!is_zero_vec(w))
            throw std::invalid_argument("generator image is not annihilated by T^part");
    }
    return EquivariantMap(domain, target, matrix_from_columns(target.field(), target.dim(), columns));
}

/// Basis of the equivariant maps between two canonical cyclic modules.
/// The j-th map sends the generator to T^{max(0, b-a) + j} times the
/// target generator; there are min(a, b) of them.
inline std::vector<EquivariantMap> hom_basis(const Module& a, const Module& b) {
    std::vector<std::uint32_t> pa = decompose(a).parts(), pb = decompose(b).parts();
    if (pa.size() != 1 || pb.size() != 1)
        throw std::invalid_argument("hom_basis expects cyclic modules");
    detail::require_canonical(a, pa);
    detail::require_canonical(b, pb);
    std::uint32_t da = pa[0], db = pb[0];
    std::uint32_t shift = db > da ? db - da : 0;
    std::vector<EquivariantMap> maps;
    for (std::uint32_t j = 0; j < std::min(da, db); ++j) {
        Vec img = unit_vec(db, 0);
        for (std::uint32_t s = 0; s < shift + j; ++s) img = b.action() * img;
        maps.push_back(map_from_generator_images(a, b, {img}));
    }
    return maps;
}

/// Blockwise basis of Hom(A, B) for canonical modules, assembled from the
/// cyclic formula block against block.
inline std::vector<EquivariantMap> hom_basis_sum(const Module& a, const Module& b) {
    std::vector<std::uint32_t> pa = decompose(a).parts(), pb = decompose(b).parts();
    detail::require_canonical(a, pa);
    detail::require_canonical(b, pb);
    const PrimeField& k = a.field();
    std::vector<EquivariantMap> maps;
    std::size_t a_off = 0;
    for (std::uint32_t ai : pa) {
        Module ca = module_from_invariants(Invariants::of(k, {ai}));
        std::size_t b_off = 0;
        for (std::uint32_t bj : pb) {
            Module cb = module_from_invariants(Invariants::of(k, {bj}));
            for (const EquivariantMap& cyc : hom_basis(ca, cb)) {
                Matrix full(k, b.dim(), a.dim());
                full.paste(b_off, a_off, cyc.matrix());
                maps.emplace_back(a, b, std::move(full));
            }
            b_off += bj;
        }
        a_off += ai;
    }
    return maps;
}

namespace detail {
/// Kernel of an equivariant map as a module: the ambient action restricted
/// to kernel coordinates, plus the basis matrix embedding them back.
inline std::pair<Module, Matrix> kernel_module(const EquivariantMap& f) {
    const Module& src = f.source();
    const PrimeField& k = src.field();
    std::vector<Vec> cols = f.matrix().kernel_basis();
    Matrix basis = matrix_from_columns(k, src.dim(), cols);
    Matrix action(k, cols.size(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        auto x = basis.solve(src.action() * cols[j]);
        if (!x.has_value()) throw std::logic_error("kernel is not T-stable");
        for (std::size_t i = 0; i < cols.size(); ++i) action.set(i, j, (*x)[i]);
    }
    return {Module(k, std::move(action)), std::move(basis)};
}
}  // namespace detail

/// Kernel of an equivariant map, re-expressed in canonical form together
/// with its inclusion into the source.
inline std::pair<Module, EquivariantMap> canonical_kernel(const EquivariantMap& f) {
    auto [raw, basis] = detail::kernel_module(f);
    JordanBasis jb = jordan_basis(raw);
    Module canonical = module_from_invariants(jb.invariants);
    EquivariantMap inclusion(canonical, f.source(), basis * jb.basis);
    return {std::move(canonical), std::move(inclusion)};
}

/// Every invariant multiset of total dimension <= max_dim (including the
/// empty one), i.e. all isomorphism classes up to that dimension.
inline std::vector<Invariants> all_invariant_multisets(PrimeField field, std::size_t max_dim) {
    std::vector<Invariants> out;
    std::vector<std::uint32_t> current;
    std::uint32_t max_part = static_cast<std::uint32_t>(std::min<std::uint64_t>(field.p(), max_dim));
    std::function<void(std::uint32_t, std::size_t)> rec = [&](std::uint32_t largest,
                                                              std::size_t remaining) {
        out.push_back(Invariants::of(field, current));
        for (std::uint32_t x = std::min<std::uint32_t>(largest, remaining); x >= 1; --x) {
            current.push_back(x);
            rec(x, remaining - x);
            current.pop_back();
        }
    };
    rec(max_part, max_dim);
    return out;
}

inline Module direct_sum(const Module& a, const Module& b) {
    if (!(a.field() == b.field())) throw std::invalid_argument("direct sum: field mismatch");
    return Module(a.field(), block_diag(a.field(), {a.action(), b.action()}));
}

/// Diagonal action on the tensor product: with g = 1 + T on each factor,
/// T acts as g (x) g - 1 = N (x) 1 + 1 (x) N' + N (x) N'.
inline Module tensor_product(const Module& a, const Module& b) {
    if (!(a.field() == b.field())) throw std::invalid_argument("tensor: field mismatch");
    const PrimeField& k = a.field();
    Matrix ia = Matrix::identity(k, a.dim()), ib = Matrix::identity(k, b.dim());
    Matrix n = kron(a.action(), ib) + kron(ia, b.action()) + kron(a.action(), b.action());
    return Module(k, std::move(n));
}

}  // namespace permres
