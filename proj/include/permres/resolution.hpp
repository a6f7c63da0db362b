#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "permres/distance.hpp"
#include "permres/module.hpp"

namespace permres {

/// For C_p the indecomposable permutation modules are exactly the trivial
/// and the free module, so a module is permutation iff every invariant
/// is 1 or p.
inline bool is_permutation_module(const Module& m) {
    return detail::parts_are_permutation(decompose(m).parts(), m.p());
}

/// One record per invariant x of the covered module: the chosen
/// predecessor x' with x = p + eps - x'. Invariants in {1, p} need no
/// cover step and carry (x, 0, 0).
struct TraceEntry {
    std::uint32_t part;
    std::uint32_t eps;
    std::uint32_t predecessor;

    friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

/// A short exact sequence 0 -> K -> P -> M -> 0 with P a permutation
/// module and K of strictly smaller distance. M and K are stored as
/// canonical models.
struct CoverStep {
    Module module;             // M, canonical model of the covered module
    Module cover;              // P, canonical permutation module
    EquivariantMap surjection; // f : P -> M
    Module kernel;             // K, canonical model
    EquivariantMap inclusion;  // g : K -> P
    std::vector<TraceEntry> trace;
};

/// The cover from the constructive resolution step. Each invariant x
/// gets the cyclic cover M_x if x is 1 or p; otherwise it gets M_p
/// (generator -> block generator), plus an extra M_1 hitting T^{x-1}
/// times the generator when the predecessor of x has eps = 1. The kernel
/// then realizes exactly the predecessor invariants.
inline CoverStep cover_step(const Module& input) {
    Invariants inv = decompose(input);
    Module m = module_from_invariants(inv);
    const PrimeField& k = m.field();
    std::uint64_t p = k.p();

    std::vector<std::size_t> offsets;
    {
        std::size_t off = 0;
        for (std::uint32_t x : inv.parts()) {
            offsets.push_back(off);
            off += x;
        }
    }

    std::vector<std::uint32_t> cover_parts;
    std::vector<Vec> images;
    std::vector<TraceEntry> trace;
    std::vector<std::uint32_t> expected_kernel;

    // free blocks of the cover, one per invariant >= 2
    for (std::size_t i = 0; i < inv.parts().size(); ++i) {
        std::uint32_t x = inv.parts()[i];
        if (x < 2) continue;
        cover_parts.push_back(static_cast<std::uint32_t>(p));
        images.push_back(unit_vec(m.dim(), offsets[i]));
    }
    // trivial blocks: one per invariant 1, one per eps = 1 step
    for (std::size_t i = 0; i < inv.parts().size(); ++i) {
        std::uint32_t x = inv.parts()[i];
        if (x == 1) {
            cover_parts.push_back(1);
            images.push_back(unit_vec(m.dim(), offsets[i]));
            trace.push_back({1, 0, 0});
        } else if (x == p) {
            trace.push_back({x, 0, 0});
        } else {
            ChainStep step = chain_predecessor(p, x);
            expected_kernel.push_back(step.value);
            trace.push_back({x, step.eps, step.value});
            if (step.eps == 1) {
                cover_parts.push_back(1);
                images.push_back(unit_vec(m.dim(), offsets[i] + x - 1));
            }
        }
    }

    Module cover = module_from_invariants(Invariants::of(k, cover_parts));
    EquivariantMap f = map_from_generator_images(cover, m, images);
    if (!f.is_surjective()) throw std::logic_error("cover map is not surjective");

    auto [kernel, inclusion] = canonical_kernel(f);
    if (!(decompose(kernel) == Invariants::of(k, expected_kernel)))
        throw std::logic_error("kernel invariants disagree with the predecessors");
    if (!inclusion.is_injective()) throw std::logic_error("kernel inclusion not injective");
    if (!(f.matrix() * inclusion.matrix()).is_zero())
        throw std::logic_error("cover does not kill its kernel");

    return CoverStep{std::move(m), std::move(cover), std::move(f),
                     std::move(kernel), std::move(inclusion), std::move(trace)};
}

/// Exact complex 0 -> P_s -> ... -> P_0 -> M -> 0 with every P_i a
/// permutation module. differentials[i] is the matrix of P_{i+1} -> P_i.
struct PermResolution {
    Module target;
    std::vector<Module> terms;          // P_0 .. P_s
    std::vector<Matrix> differentials;  // size length()
    Matrix augmentation;                // P_0 -> target
    std::vector<TraceEntry> trace;

    std::size_t length() const noexcept { return terms.size() - 1; }
};

inline bool is_exact(const CoverStep& step) {
    return step.surjection.is_surjective() && step.inclusion.is_injective() &&
           (step.surjection.matrix() * step.inclusion.matrix()).is_zero() &&
           step.inclusion.matrix().rank() ==
               step.cover.dim() - step.surjection.matrix().rank();
}

/// Exactness by pure rank arithmetic: consecutive composites vanish, the
/// augmentation surjects, and at every term the incoming rank equals
/// dim minus the outgoing rank.
inline bool is_exact(const PermResolution& r) {
    if (r.terms.empty()) throw std::invalid_argument("resolution needs at least P_0");
    if (r.differentials.size() + 1 != r.terms.size())
        throw std::invalid_argument("differential count mismatch");
    if (r.augmentation.rows() != r.target.dim() ||
        r.augmentation.cols() != r.terms[0].dim())
        throw std::invalid_argument("augmentation shape mismatch");
    for (std::size_t i = 0; i < r.differentials.size(); ++i) {
        if (r.differentials[i].rows() != r.terms[i].dim() ||
            r.differentials[i].cols() != r.terms[i + 1].dim())
            throw std::invalid_argument("differential shape mismatch");
    }

    if (!r.differentials.empty() && !(r.augmentation * r.differentials[0]).is_zero())
        return false;
    for (std::size_t i = 0; i + 1 < r.differentials.size(); ++i)
        if (!(r.differentials[i] * r.differentials[i + 1]).is_zero()) return false;

    if (r.augmentation.rank() != r.target.dim()) return false;
    for (std::size_t i = 0; i < r.terms.size(); ++i) {
        std::size_t out_rank = i == 0 ? r.augmentation.rank() : r.differentials[i - 1].rank();
        std::size_t in_rank = i < r.differentials.size() ? r.differentials[i].rank() : 0;
        if (in_rank != r.terms[i].dim() - out_rank) return false;
    }
    return true;
}

/// Iterate cover steps on successive kernels and splice the short exact
/// sequences into one resolution. The resulting length equals the
/// distance of the module; the step counter enforces the p - 2 bound.
inline PermResolution build_resolution(const Module& target) {
    Invariants inv = decompose(target);
    JordanBasis jb = jordan_basis(target);  // canonical model -> target
    std::uint64_t p = target.p();
    unsigned expected = module_distance_over(p, inv.parts());

    Module current = module_from_invariants(inv);
    if (is_permutation_module(current)) {
        PermResolution r{target, {current}, {}, jb.basis, {}};
        return r;
    }

    std::vector<CoverStep> steps;
    std::vector<TraceEntry> trace;
    unsigned bound = p >= 3 ? static_cast<unsigned>(p - 2) : 1u;
    for (;;) {
        steps.push_back(cover_step(current));
        if (steps.size() > bound)
            throw std::logic_error("resolution exceeded the p - 2 length bound");
        const CoverStep& step = steps.back();
        trace.insert(trace.end(), step.trace.begin(), step.trace.end());
        if (is_permutation_module(step.kernel)) break;
        current = step.kernel;
    }

    std::size_t n = steps.size();
    std::vector<Module> terms;
    std::vector<Matrix> diffs;
    for (std::size_t i = 0; i < n; ++i) terms.push_back(steps[i].cover);
    terms.push_back(steps[n - 1].kernel);
    for (std::size_t i = 0; i + 1 < n; ++i)
        diffs.push_back(steps[i].inclusion.matrix() * steps[i + 1].surjection.matrix());
    diffs.push_back(steps[n - 1].inclusion.matrix());

    Matrix augmentation = jb.basis * steps[0].surjection.matrix();
    PermResolution r{target, std::move(terms), std::move(diffs), std::move(augmentation),
                     std::move(trace)};
    if (r.length() != expected)
        throw std::logic_error("resolution length disagrees with the distance");
    return r;
}

/// Degreewise direct sum, padding the shorter resolution with zero terms.
inline PermResolution direct_sum_resolution(const PermResolution& a, const PermResolution& b) {
    const PrimeField& k = a.target.field();
    if (!(k == b.target.field())) throw std::invalid_argument("direct sum: field mismatch");
    Module zero(k, Matrix(k, 0, 0));
    auto term = [&](const PermResolution& r, std::size_t i) {
        return i < r.terms.size() ? r.terms[i] : zero;
    };
    auto diff = [&](const PermResolution& r, std::size_t i) {
        // matrix of P_{i+1} -> P_i, degenerating to empty shapes off the end
        if (i < r.differentials.size()) return r.differentials[i];
        return Matrix(k, term(r, i).dim(), term(r, i + 1).dim());
    };

    std::size_t len = std::max(a.length(), b.length());
    PermResolution r{direct_sum(a.target, b.target), {}, {}, Matrix(k, 0, 0), {}};
    for (std::size_t i = 0; i <= len; ++i)
        r.terms.push_back(direct_sum(term(a, i), term(b, i)));
    for (std::size_t i = 0; i < len; ++i)
        r.differentials.push_back(block_diag(k, {diff(a, i), diff(b, i)}));
    r.augmentation = block_diag(k, {a.augmentation, b.augmentation});
    r.trace = a.trace;
    r.trace.insert(r.trace.end(), b.trace.begin(), b.trace.end());
    return r;
}

/// Total complex of the degreewise tensor product. The second factor's
/// differential is signed by (-1)^i so that consecutive composites
/// vanish; over a field the result is again exact.
inline PermResolution tensor_resolution(const PermResolution& a, const PermResolution& b) {
    const PrimeField& k = a.target.field();
    if (!(k == b.target.field())) throw std::invalid_argument("tensor: field mismatch");
    std::size_t sa = a.length(), sb = b.length();

    struct Component {
        std::size_t i, j, offset, dim;
    };
    auto components = [&](std::size_t n) {
        std::vector<Component> out;
        std::size_t off = 0;
        for (std::size_t i = 0; i <= std::min(n, sa); ++i) {
            if (n - i > sb) continue;
            std::size_t j = n - i;
            std::size_t d = a.terms[i].dim() * b.terms[j].dim();
            out.push_back({i, j, off, d});
            off += d;
        }
        return out;
    };

    PermResolution r{tensor_product(a.target, b.target), {}, {}, Matrix(k, 0, 0), {}};
    for (std::size_t n = 0; n <= sa + sb; ++n) {
        Module total(k, Matrix(k, 0, 0));
        for (const Component& c : components(n))
            total = direct_sum(total, tensor_product(a.terms[c.i], b.terms[c.j]));
        r.terms.push_back(std::move(total));
    }

    for (std::size_t n = 1; n <= sa + sb; ++n) {
        auto rows = components(n - 1);
        auto cols = components(n);
        Matrix d(k, r.terms[n - 1].dim(), r.terms[n].dim());
        for (const Component& c : cols) {
            if (c.i >= 1) {
                Matrix block = kron(a.differentials[c.i - 1],
                                    Matrix::identity(k, b.terms[c.j].dim()));
                for (const Component& t : rows)
                    if (t.i == c.i - 1 && t.j == c.j) d.paste(t.offset, c.offset, block);
            }
            if (c.j >= 1) {
                std::uint64_t sign = c.i % 2 == 0 ? 1 : k.reduce(-1);
                Matrix block = kron(Matrix::identity(k, a.terms[c.i].dim()),
                                    b.differentials[c.j - 1])
                                   .scaled(sign);
                for (const Component& t : rows)
                    if (t.i == c.i && t.j == c.j - 1) d.paste(t.offset, c.offset, block);
            }
        }
        r.differentials.push_back(std::move(d));
    }

    r.augmentation = kron(a.augmentation, b.augmentation);
    return r;
}

}  // namespace permres
