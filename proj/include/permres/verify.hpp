#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "permres/oracle.hpp"
#include "permres/resolution.hpp"

namespace permres {

/// Outcome of one verification suite at one prime.
struct SuiteResult {
    std::string suite;
    std::uint64_t p = 0;
    std::uint64_t cases = 0;
    std::uint64_t failures = 0;
    std::vector<std::string> notes;  // first few failure descriptions

    bool ok() const noexcept { return failures == 0; }
};

namespace detail {

inline std::string parts_str(const std::vector<std::uint32_t>& parts) {
    std::ostringstream out;
    out << "[";
    for (std::size_t i = 0; i < parts.size(); ++i) out << (i ? "," : "") << parts[i];
    out << "]";
    return out.str();
}

inline void note_failure(SuiteResult& r, std::string msg) {
    ++r.failures;
    if (r.notes.size() < 20) r.notes.push_back(std::move(msg));
}

inline bool full_depth_criterion(const Module& m, const Vec& elem) {
    unsigned alpha = nilpotency_index(m, elem);
    Vec w = elem;
    for (unsigned i = 0; i < alpha; ++i) {
        if (!(radical_depth(m, w) == i)) return false;
        w = m.action() * w;
    }
    return true;
}

}  // namespace detail

/// Exhaustive pairwise agreement of the three direct-summand criteria
/// (projection exists / full depth profile / top depth) over every
/// nonzero element of every canonical module of dimension <= dim_cap.
inline SuiteResult verify_summand_criteria(std::uint64_t p, unsigned dim_cap) {
    SuiteResult r{"lemma34", p, 0, 0, {}};
    PrimeField field(p);
    for (const Invariants& inv : all_invariant_multisets(field, dim_cap)) {
        if (inv.dim() == 0) continue;
        Module m = module_from_invariants(inv);
        Vec v(m.dim(), 0);
        while (next_vec(v, p)) {
            ++r.cases;
            bool projection = summand_projection(m, v).has_value();
            bool full_depth = detail::full_depth_criterion(m, v);
            bool top_depth = generates_direct_summand(m, v);
            if (projection != full_depth || full_depth != top_depth)
                detail::note_failure(r, "criteria disagree on " + detail::parts_str(inv.parts()));
        }
    }
    return r;
}

/// The cheap permutation-module summand criterion against the general one,
/// exhaustive over permutation modules of dimension <= dim_cap.
inline SuiteResult verify_perm_criterion(std::uint64_t p, unsigned dim_cap) {
    SuiteResult r{"lemma35", p, 0, 0, {}};
    PrimeField field(p);
    for (const Invariants& inv : all_invariant_multisets(field, dim_cap)) {
        if (inv.dim() == 0) continue;
        if (!detail::parts_are_permutation(inv.parts(), p)) continue;
        Module m = module_from_invariants(inv);
        Vec v(m.dim(), 0);
        while (next_vec(v, p)) {
            ++r.cases;
            if (generates_direct_summand_perm(m, v) != generates_direct_summand(m, v))
                detail::note_failure(r, "criteria disagree on " + detail::parts_str(inv.parts()));
        }
    }
    return r;
}

/// Random filtered short exact sequences: the kernel distance may drop by
/// at most one, and inner invariants must see a predecessor in the kernel.
inline SuiteResult verify_kernel_distance(std::uint64_t p, unsigned trials, std::uint64_t seed,
                                          unsigned dim_cap, unsigned jobs = 1) {
    SuiteResult r{"prop37", p, 0, 0, {}};
    KernelDistanceReport report = kernel_distance_trials(p, trials, seed, dim_cap, jobs);
    r.cases = report.accepted;
    if (report.accepted < report.requested)
        detail::note_failure(r, "only " + std::to_string(report.accepted) + " of " +
                                    std::to_string(report.requested) + " trial slots filled");
    for (const SesTrialRecord& rec : report.records) {
        if (rec.inequality_ok && rec.refinement_ok) continue;
        detail::note_failure(r, "violation: M=" + detail::parts_str(rec.target_parts) +
                                    " P=" + detail::parts_str(rec.cover_parts) +
                                    " K=" + detail::parts_str(rec.kernel_parts));
    }
    return r;
}

/// The brute-force minimal resolution length against the distance formula,
/// either over all invariant multisets up to dim_cap or over the cyclic
/// modules only.
inline SuiteResult verify_min_length_formula(std::uint64_t p, unsigned dim_cap, bool cyclic_only,
                                             const SearchBudget& budget = {}) {
    SuiteResult r{"thm38", p, 0, 0, {}};
    PrimeField field(p);
    std::vector<Invariants> targets;
    if (cyclic_only) {
        for (std::uint32_t x = 1; x <= p; ++x)
            targets.push_back(Invariants::of(field, {x}));
    } else {
        targets = all_invariant_multisets(field, dim_cap);
    }
    for (const Invariants& inv : targets) {
        ++r.cases;
        BrutePpdimResult found = brute_ppdim(inv, budget);
        if (!found.length.has_value()) {
            detail::note_failure(r, "budget exhausted on " + detail::parts_str(inv.parts()));
            continue;
        }
        unsigned expected = module_distance_over(p, inv.parts());
        if (*found.length != expected)
            detail::note_failure(r, "mismatch on " + detail::parts_str(inv.parts()) + ": search " +
                                        std::to_string(*found.length) + ", formula " +
                                        std::to_string(expected));
    }
    return r;
}

}  // namespace permres
