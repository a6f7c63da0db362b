// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion pins its own expected values and, where stated,
// its runtime budget.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "permres/permres.hpp"

using namespace permres;

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
    std::uint64_t limit = ~0ull - ~0ull % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

Module cyclic(std::uint64_t p, std::uint32_t x) {
    return module_from_invariants(Invariants::of(PrimeField(p), {x}));
}

struct Criterion {
    std::string name;
    double budget_seconds;  // 0 = no stated budget
    std::function<bool(std::ostream&)> run;
};

// 1. the group-level dimension is p - 2 (0 at p = 2)
bool group_dimension(std::ostream& log) {
    bool ok = true;
    for (std::uint64_t p : {3ull, 5ull, 7ull, 11ull, 13ull}) {
        if (group_permutation_dimension(p) != p - 2) {
            log << " p=" << p << " gave " << group_permutation_dimension(p);
            ok = false;
        }
    }
    if (group_permutation_dimension(2) != 0) {
        log << " p=2 gave " << group_permutation_dimension(2);
        ok = false;
    }
    return ok;
}

// 2. constructive resolutions: exact, permutation terms, length = distance
bool constructive_resolutions(std::ostream& log) {
    bool ok = true;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull}) {
        for (std::uint32_t x = 1; x <= p; ++x) {
            PermResolution r = build_resolution(cyclic(p, x));
            bool terms_ok = true;
            for (const Module& t : r.terms) terms_ok = terms_ok && is_permutation_module(t);
            if (!is_exact(r) || !terms_ok || r.length() != p_distance(p, x)) {
                log << " failed at p=" << p << " x=" << x;
                ok = false;
            }
        }
    }
    return ok;
}

// 3. brute-force minimality agrees with the distance formula
bool minimality_search(std::ostream& log) {
    SuiteResult p3 = verify_min_length_formula(3, 6, /*cyclic_only=*/false);
    SuiteResult p5 = verify_min_length_formula(5, 5, /*cyclic_only=*/true);
    for (const SuiteResult* r : {&p3, &p5})
        for (const std::string& note : r->notes) log << " " << note;
    return p3.ok() && p5.ok();
}

// 4. p = 2 is permutation everywhere; p = 3 pins ppdim(M_2) = 1
bool small_prime_examples(std::ostream& log) {
    bool ok = true;
    PrimeField f2(2);
    for (const Invariants& inv : all_invariant_multisets(f2, 6)) {
        unsigned distance = module_distance_over(2, inv.parts());
        unsigned built = static_cast<unsigned>(
            build_resolution(module_from_invariants(inv)).length());
        BrutePpdimResult searched = brute_ppdim(inv);
        if (distance != 0 || built != 0 || searched.length != 0u) {
            log << " nonzero at p=2 " << detail::parts_str(inv.parts());
            ok = false;
        }
    }
    Invariants m2 = Invariants::of(PrimeField(3), {2});
    if (module_distance_over(3, m2.parts()) != 1 ||
        build_resolution(module_from_invariants(m2)).length() != 1 ||
        brute_ppdim(m2).length != 1u) {
        log << " ppdim(M_2) at p=3 is not 1";
        ok = false;
    }
    return ok;
}

// 5. the three direct-summand criteria agree, exhaustively
bool summand_criteria(std::ostream& log) {
    bool ok = true;
    for (std::uint64_t p : {2ull, 3ull, 5ull}) {
        SuiteResult r = verify_summand_criteria(p, 5);
        if (!r.ok()) {
            log << " p=" << p << ": " << r.failures << " disagreements";
            ok = false;
        }
    }
    return ok;
}

// 6. the permutation-module criterion matches the general one
bool perm_criterion(std::ostream& log) {
    bool ok = true;
    for (std::uint64_t p : {2ull, 3ull, 5ull}) {
        SuiteResult r = verify_perm_criterion(p, 6);
        if (!r.ok()) {
            log << " p=" << p << ": " << r.failures << " disagreements";
            ok = false;
        }
    }
    return ok;
}

// 7. filtered random short exact sequences: kernel distance drops by at
// most one, and inner invariants see a predecessor in the kernel
bool kernel_distance(std::ostream& log) {
    bool ok = true;
    for (std::uint64_t p : {2ull, 3ull, 5ull}) {
        SuiteResult r = verify_kernel_distance(p, 1000, 20260810, 6);
        if (!r.ok() || r.cases != 1000) {
            log << " p=" << p << ": " << r.failures << " failures, " << r.cases << " trials";
            ok = false;
        }
    }
    return ok;
}

// 8. distance is exactly max on sums, subadditive on tensors, and the
// tensor bound is strict at p >= 5
bool sums_and_tensors(std::ostream& log) {
    bool ok = true;
    std::mt19937_64 rng(424242);
    for (std::uint64_t p : {3ull, 5ull, 7ull}) {
        PrimeField f(p);
        std::vector<Invariants> pool = all_invariant_multisets(f, 5);
        for (int trial = 0; trial < 200; ++trial) {
            const Invariants& a = pool[uniform_below(rng, pool.size())];
            const Invariants& b = pool[uniform_below(rng, pool.size())];
            Module ma = module_from_invariants(a), mb = module_from_invariants(b);
            unsigned da = module_distance_over(p, a.parts());
            unsigned db = module_distance_over(p, b.parts());
            unsigned dsum = module_distance_over(p, decompose(direct_sum(ma, mb)).parts());
            unsigned dtensor =
                module_distance_over(p, decompose(tensor_product(ma, mb)).parts());
            if (dsum != std::max(da, db)) {
                log << " sum mismatch at p=" << p;
                ok = false;
            }
            if (dtensor > da + db) {
                log << " tensor bound broken at p=" << p;
                ok = false;
            }
        }
    }
    // explicit strict witnesses
    unsigned w5 = module_distance_over(
        5, decompose(tensor_product(cyclic(5, 3), cyclic(5, 3))).parts());
    if (!(w5 < 2 * p_distance(5, 3))) {
        log << " no strict witness at p=5 (" << w5 << ")";
        ok = false;
    }
    unsigned w7 = module_distance_over(
        7, decompose(tensor_product(cyclic(7, 4), cyclic(7, 4))).parts());
    if (!(w7 < 2 * p_distance(7, 4))) {
        log << " no strict witness at p=7 (" << w7 << ")";
        ok = false;
    }
    return ok;
}

// 9. the distance recursion matches its closed form for all primes <= 97
bool closed_form(std::ostream& log) {
    bool ok = true;
    for (std::uint64_t p = 2; p <= 97; ++p) {
        if (!is_prime(p)) continue;
        DistanceTable t = DistanceTable::compute(p);
        for (std::uint64_t x = 2; x + 1 <= p; ++x) {
            unsigned expected = 2 * x <= p - 1 ? 2 * (x - 1) : 2 * (p - x) - 1;
            if (t.at(x) != expected) {
                log << " mismatch at p=" << p << " x=" << x;
                ok = false;
            }
        }
    }
    return ok;
}

}  // namespace

int main() {
    std::vector<Criterion> criteria{
        {"group permutation dimension is p-2 (0 at p=2)", 1.0, group_dimension},
        {"constructive resolutions: exact, permutation terms, length = distance", 10.0,
         constructive_resolutions},
        {"search minimality matches the formula (p=3 full, p=5 cyclic)", 600.0,
         minimality_search},
        {"p=2 modules are permutation; ppdim(M_2)=1 at p=3", 0.0, small_prime_examples},
        {"direct-summand criteria agree exhaustively (p=2,3,5, dim<=5)", 0.0,
         summand_criteria},
        {"permutation-module criterion agrees (p=2,3,5, dim<=6)", 0.0, perm_criterion},
        {"filtered SES trials: kernel distance bound (1000 per p=2,3,5)", 300.0,
         kernel_distance},
        {"sum distance is max, tensor subadditive with strict witnesses", 0.0,
         sums_and_tensors},
        {"closed form of the distance for all primes <= 97", 0.0, closed_form},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const Criterion& c = criteria[i];
        std::ostringstream log;
        auto start = Clock::now();
        bool ok = false;
        try {
            ok = c.run(log);
        } catch (const std::exception& e) {
            log << " exception: " << e.what();
        }
        double seconds = std::chrono::duration<double>(Clock::now() - start).count();
        bool within_budget = c.budget_seconds == 0.0 || seconds <= c.budget_seconds;
        bool pass = ok && within_budget;
        std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << i + 1 << ": " << c.name;
        if (!ok) std::cout << " --" << log.str();
        if (!within_budget)
            std::cout << " -- exceeded " << c.budget_seconds << " s budget";
        std::cout << " (" << seconds << " s)" << std::endl;
        if (!pass) ++failures;
    }
    std::cout << "acceptance: " << criteria.size() - failures << "/" << criteria.size()
              << " criteria passed" << std::endl;
    return failures;
}
