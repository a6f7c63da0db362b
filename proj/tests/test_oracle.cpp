#include <catch2/catch_amalgamated.hpp>

#include "permres/oracle.hpp"
#include "permres/resolution.hpp"
#include "test_util.hpp"

using namespace permres;

namespace {

Invariants inv(std::uint64_t p, std::vector<std::uint32_t> parts) {
    return Invariants::of(PrimeField(p), std::move(parts));
}

Module canonical(std::uint64_t p, std::vector<std::uint32_t> parts) {
    return module_from_invariants(inv(p, std::move(parts)));
}

}  // namespace

TEST_CASE("split-through-summand witnesses") {
    Module m3 = canonical(3, {3});
    EquivariantMap identity(m3, m3, Matrix::identity(m3.field(), 3));
    CHECK(has_split_through_summand(identity));

    // projection of M_3 + M_1 onto its trivial factor
    Module pm = direct_sum(m3, canonical(3, {1}));
    Module m1 = canonical(3, {1});
    Matrix proj(m1.field(), 1, 4);
    proj.set(0, 3, 1);
    CHECK(has_split_through_summand(EquivariantMap(pm, m1, proj)));

    // the constructive cover M_3 ->> M_2 at p = 3 does not split through
    CoverStep step = cover_step(canonical(3, {2}));
    CHECK_FALSE(has_split_through_summand(step.surjection));

    CHECK_THROWS_AS(has_split_through_summand(identity, 5), BudgetExhausted);
}

TEST_CASE("cover steps satisfy the non-split hypotheses") {
    // applies to modules whose invariants all lie strictly between 1 and
    // p, i.e. with no permutation summand to carry over identically
    for (auto [p, parts] : std::vector<std::pair<std::uint64_t, std::vector<std::uint32_t>>>{
             {3, {2}}, {3, {2, 2}}, {3, {2, 2, 2}}, {5, {2}}, {5, {3}}, {5, {4}}, {7, {4}}}) {
        CoverStep step = cover_step(canonical(p, parts));
        CHECK_FALSE(has_split_through_summand(step.surjection));
        CHECK_FALSE(has_split_through_summand(step.inclusion));
    }
}

TEST_CASE("covers of permutation summands do split through them") {
    // an invariant 1 or p is covered identically, and the witness scan
    // must detect that isomorphic pass-through
    CoverStep step = cover_step(canonical(3, {2, 1}));
    CHECK(has_split_through_summand(step.surjection));
    CHECK_FALSE(has_split_through_summand(step.inclusion));  // kernel misses it
}

TEST_CASE("brute-force minimal lengths, pinned") {
    auto length = [](std::uint64_t p, std::vector<std::uint32_t> parts) {
        BrutePpdimResult r = brute_ppdim(inv(p, std::move(parts)));
        REQUIRE(r.length.has_value());
        return *r.length;
    };
    CHECK(length(3, {2}) == 1);
    CHECK(length(3, {1}) == 0);
    CHECK(length(3, {3}) == 0);
    CHECK(length(5, {4}) == 1);
    CHECK(length(5, {2}) == 2);
    CHECK(length(5, {3}) == 3);

    CHECK(brute_ppdim(inv(5, {1, 5})).certified_unconditionally);
    CHECK(brute_ppdim(inv(5, {4})).certified_unconditionally);
    CHECK_FALSE(brute_ppdim(inv(5, {2})).certified_unconditionally);
}

TEST_CASE("budget exhaustion is reported, not guessed") {
    SearchBudget tiny;
    tiny.max_candidates = 3;
    BrutePpdimResult r = brute_ppdim(inv(5, {3}), tiny);
    CHECK_FALSE(r.length.has_value());

    SearchBudget shallow;
    shallow.max_depth = 1;
    BrutePpdimResult r2 = brute_ppdim(inv(5, {3}), shallow);
    CHECK_FALSE(r2.length.has_value());

    // a permutation module costs nothing regardless of the budget
    CHECK(brute_ppdim(inv(5, {5, 1}), tiny).length == 0u);
}

TEST_CASE("search agrees with the distance formula at p = 3") {
    PrimeField f(3);
    for (const Invariants& target : all_invariant_multisets(f, 4)) {
        BrutePpdimResult r = brute_ppdim(target);
        REQUIRE(r.length.has_value());
        CHECK(*r.length == module_distance_over(3, target.parts()));
        CHECK(*r.length <= build_resolution(module_from_invariants(target)).length());
    }
}

TEST_CASE("search respects direct sums at p = 3") {
    PrimeField f(3);
    auto all = all_invariant_multisets(f, 3);
    for (const Invariants& a : all) {
        for (const Invariants& b : all) {
            std::vector<std::uint32_t> merged = a.parts();
            merged.insert(merged.end(), b.parts().begin(), b.parts().end());
            BrutePpdimResult ra = brute_ppdim(a);
            BrutePpdimResult rb = brute_ppdim(b);
            BrutePpdimResult rsum = brute_ppdim(Invariants::of(f, merged));
            REQUIRE(rsum.length.has_value());
            CHECK(*rsum.length == std::max(*ra.length, *rb.length));
        }
    }
}

TEST_CASE("tensor distance is strictly subadditive at p = 5") {
    Module m3 = canonical(5, {3});
    Invariants t = decompose(tensor_product(m3, m3));
    CHECK(t.parts() == std::vector<std::uint32_t>{5, 3, 1});
    unsigned dist = module_distance_over(5, t.parts());
    CHECK(dist == 3);
    CHECK(dist < 2 * module_distance_over(5, std::vector<std::uint32_t>{3}));
}

TEST_CASE("random filtered SES trials hold the kernel-distance bound") {
    KernelDistanceReport report = kernel_distance_trials(3, 50, 20240810, 6);
    CHECK(report.accepted == 50);
    CHECK(report.violations == 0);
    CHECK(report.attempts >= 50);
    for (const SesTrialRecord& rec : report.records) {
        CHECK(rec.inequality_ok);
        CHECK(rec.refinement_ok);
        for (auto [c, cp] : rec.matched) {
            CHECK((cp == 3 - c || cp == 3 - c + 1));
        }
    }
}

TEST_CASE("trials are deterministic and job-count independent") {
    KernelDistanceReport a = kernel_distance_trials(3, 12, 99, 6, 1);
    KernelDistanceReport b = kernel_distance_trials(3, 12, 99, 6, 3);
    REQUIRE(a.records.size() == b.records.size());
    CHECK(a.attempts == b.attempts);
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].target_parts == b.records[i].target_parts);
        CHECK(a.records[i].cover_parts == b.records[i].cover_parts);
        CHECK(a.records[i].kernel_parts == b.records[i].kernel_parts);
    }
    KernelDistanceReport c = kernel_distance_trials(3, 12, 100, 6, 1);
    bool identical = true;
    for (std::size_t i = 0; i < a.records.size() && i < c.records.size(); ++i)
        if (a.records[i].kernel_parts != c.records[i].kernel_parts) identical = false;
    CHECK_FALSE(identical);  // different seed, different stream
}

TEST_CASE("trials run at p = 2 and p = 5") {
    for (std::uint64_t p : {2ull, 5ull}) {
        KernelDistanceReport report = kernel_distance_trials(p, 10, 7, 6);
        CHECK(report.accepted == 10);
        CHECK(report.violations == 0);
    }
}
