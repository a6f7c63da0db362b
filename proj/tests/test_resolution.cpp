#include <catch2/catch_amalgamated.hpp>

#include <array>

#include "permres/resolution.hpp"
#include "test_util.hpp"

using namespace permres;
using permres::testing::random_invertible;
using permres::testing::uniform_below;

namespace {

Module canonical(std::uint64_t p, std::vector<std::uint32_t> parts) {
    PrimeField f(p);
    return module_from_invariants(Invariants::of(f, std::move(parts)));
}

Module conjugated(std::mt19937_64& rng, const Module& m) {
    Matrix s = random_invertible(rng, m.field(), m.dim());
    return Module(m.field(), s * m.action() * s.inverse().value());
}

std::vector<std::size_t> term_dims(const PermResolution& r) {
    std::vector<std::size_t> dims;
    for (const Module& t : r.terms) dims.push_back(t.dim());
    return dims;
}

}  // namespace

TEST_CASE("permutation recognition") {
    CHECK(is_permutation_module(direct_sum(canonical(3, {1}), canonical(3, {3}))));
    CHECK_FALSE(is_permutation_module(canonical(3, {2})));
    CHECK(is_permutation_module(canonical(2, {2})));  // at p = 2 everything is
    CHECK(is_permutation_module(canonical(2, {2, 1, 2})));
    PrimeField f(5);
    CHECK(is_permutation_module(Module(f, Matrix(f, 0, 0))));
}

TEST_CASE("cover step at p = 3") {
    CoverStep step = cover_step(canonical(3, {2}));
    CHECK(decompose(step.cover).parts() == std::vector<std::uint32_t>{3});
    CHECK(decompose(step.kernel).parts() == std::vector<std::uint32_t>{1});
    CHECK(step.trace == std::vector<TraceEntry>{{2, 0, 1}});
    CHECK(is_exact(step));
}

TEST_CASE("cover step at p = 5 needs the extra trivial block") {
    CoverStep step = cover_step(canonical(5, {2}));
    CHECK(decompose(step.cover).parts() == std::vector<std::uint32_t>{5, 1});
    CHECK(decompose(step.kernel).parts() == std::vector<std::uint32_t>{4});
    CHECK(step.trace == std::vector<TraceEntry>{{2, 1, 4}});
    CHECK(is_exact(step));
}

TEST_CASE("cover step on a free module") {
    for (std::uint64_t p : {2ull, 3ull, 5ull}) {
        CoverStep step = cover_step(canonical(p, {static_cast<std::uint32_t>(p)}));
        CHECK(decompose(step.cover).parts() ==
              std::vector<std::uint32_t>{static_cast<std::uint32_t>(p)});
        CHECK(step.kernel.dim() == 0);
        CHECK(step.trace == std::vector<TraceEntry>{{static_cast<std::uint32_t>(p), 0, 0}});
        CHECK(is_exact(step));
    }
}

TEST_CASE("cover step drops the distance by exactly one") {
    for (std::uint64_t p : {3ull, 5ull, 7ull}) {
        PrimeField f(p);
        for (const Invariants& inv : all_invariant_multisets(f, 6)) {
            if (inv.parts().empty()) continue;
            bool all_inner = std::all_of(inv.parts().begin(), inv.parts().end(),
                                         [&](std::uint32_t x) { return x != 1 && x != p; });
            if (!all_inner) continue;
            CoverStep step = cover_step(module_from_invariants(inv));
            CHECK(module_distance_over(p, decompose(step.kernel).parts()) ==
                  module_distance_over(p, inv.parts()) - 1);
        }
    }
}

TEST_CASE("resolution of M_2 at p = 3") {
    PermResolution r = build_resolution(canonical(3, {2}));
    CHECK(r.length() == 1);
    CHECK(decompose(r.terms[0]).parts() == std::vector<std::uint32_t>{3});
    CHECK(decompose(r.terms[1]).parts() == std::vector<std::uint32_t>{1});
    CHECK(is_exact(r));
    CHECK(r.trace == std::vector<TraceEntry>{{2, 0, 1}});
}

TEST_CASE("resolution of a permutation module has length zero") {
    Module m = direct_sum(canonical(5, {5}), canonical(5, {1}));
    PermResolution r = build_resolution(m);
    CHECK(r.length() == 0);
    CHECK(is_exact(r));

    PrimeField f(3);
    Module zero(f, Matrix(f, 0, 0));
    PermResolution rz = build_resolution(zero);
    CHECK(rz.length() == 0);
    CHECK(is_exact(rz));
}

TEST_CASE("resolution of M_3 at p = 5") {
    PermResolution r = build_resolution(canonical(5, {3}));
    CHECK(r.length() == 3);
    CHECK(term_dims(r) == std::vector<std::size_t>{5, 6, 5, 1});
    // Euler characteristic: 5 - 6 + 5 - 1 = 3 = dim M_3
    CHECK(is_exact(r));
    for (const Module& t : r.terms) CHECK(is_permutation_module(t));
    CHECK(r.trace == std::vector<TraceEntry>{{3, 0, 2}, {2, 1, 4}, {4, 0, 1}});
}

TEST_CASE("resolution length equals the distance everywhere small") {
    for (std::uint64_t p : {2ull, 3ull, 5ull}) {
        PrimeField f(p);
        for (const Invariants& inv : all_invariant_multisets(f, 5)) {
            PermResolution r = build_resolution(module_from_invariants(inv));
            CHECK(r.length() == module_distance_over(p, inv.parts()));
            CHECK(is_exact(r));
            for (const Module& t : r.terms) CHECK(is_permutation_module(t));
        }
    }
}

TEST_CASE("resolution of random conjugated modules stays exact") {
    std::mt19937_64 rng(13579);
    int built = 0;
    while (built < 50) {
        std::uint64_t p = std::vector<std::uint64_t>{2, 3, 5, 7}[uniform_below(rng, 4)];
        PrimeField f(p);
        auto multisets = all_invariant_multisets(f, 10);
        const Invariants& inv = multisets[uniform_below(rng, multisets.size())];
        if (inv.dim() == 0) continue;
        Module m = conjugated(rng, module_from_invariants(inv));
        PermResolution r = build_resolution(m);
        CHECK(r.target == m);
        CHECK(is_exact(r));
        CHECK(r.length() == module_distance_over(p, inv.parts()));
        ++built;
    }
}

TEST_CASE("exactness check rejects a broken complex") {
    PermResolution r = build_resolution(canonical(3, {2}));
    REQUIRE(is_exact(r));
    // zero out the top differential: the kernel is no longer covered
    r.differentials.back() = Matrix(r.target.field(), r.terms[0].dim(), r.terms[1].dim());
    CHECK_FALSE(is_exact(r));
}

TEST_CASE("identity complex is exact, zero augmentation is not") {
    Module m = canonical(5, {3, 2});
    PermResolution idc{m, {m}, {}, Matrix::identity(m.field(), m.dim()), {}};
    CHECK(is_exact(idc));
    PermResolution broken{m, {m}, {}, Matrix(m.field(), m.dim(), m.dim()), {}};
    CHECK_FALSE(is_exact(broken));
}

TEST_CASE("degreewise sum of resolutions") {
    std::mt19937_64 rng(2468);
    for (std::uint64_t p : {3ull, 5ull}) {
        PrimeField f(p);
        auto multisets = all_invariant_multisets(f, 4);
        for (int trial = 0; trial < 20; ++trial) {
            const Invariants& ia = multisets[uniform_below(rng, multisets.size())];
            const Invariants& ib = multisets[uniform_below(rng, multisets.size())];
            PermResolution ra = build_resolution(module_from_invariants(ia));
            PermResolution rb = build_resolution(module_from_invariants(ib));
            PermResolution sum = direct_sum_resolution(ra, rb);
            CHECK(sum.length() == std::max(ra.length(), rb.length()));
            CHECK(is_exact(sum));
            CHECK(decompose(sum.target) ==
                  decompose(direct_sum(module_from_invariants(ia),
                                       module_from_invariants(ib))));
            for (const Module& t : sum.terms) CHECK(is_permutation_module(t));
        }
    }
}

TEST_CASE("tensor total complex resolves the tensor product") {
    for (auto [p, xa, xb] : std::vector<std::array<std::uint32_t, 3>>{
             {3, 2, 2}, {5, 2, 3}, {5, 4, 4}, {5, 3, 3}, {7, 2, 5}}) {
        PermResolution ra = build_resolution(canonical(p, {xa}));
        PermResolution rb = build_resolution(canonical(p, {xb}));
        PermResolution t = tensor_resolution(ra, rb);
        CHECK(t.length() == ra.length() + rb.length());
        CHECK(is_exact(t));
        for (const Module& term : t.terms) CHECK(is_permutation_module(term));
        CHECK(t.target == tensor_product(ra.target, rb.target));
        // the tensor target usually has much smaller distance than the
        // total-complex length, which is only an upper bound
        CHECK(module_distance_over(p, decompose(t.target).parts()) <= t.length());
    }
}
