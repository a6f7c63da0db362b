#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "permres/module.hpp"
#include "permres/oracle.hpp"
#include "permres/resolution.hpp"
#include "permres/verify.hpp"

namespace permres {

using Json = nlohmann::ordered_json;

inline Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Json module_to_json(const Module& m) {
    return Json{{"p", m.p()}, {"matrix", matrix_to_json(m.action())}};
}

inline Json invariants_to_json(const Invariants& inv) {
    return Json{{"p", inv.p()}, {"invariants", inv.parts()}};
}

/// Module JSON: {"p": P, "matrix": [[...]]} with integer entries reduced
/// mod p, or {"p": P, "invariants": [x, ...]}.
inline Module module_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("p") || !j["p"].is_number_integer())
        throw std::invalid_argument("module JSON needs an integer field \"p\"");
    PrimeField field(j["p"].get<std::uint64_t>());  // rejects non-primes

    if (j.contains("invariants")) {
        if (!j["invariants"].is_array())
            throw std::invalid_argument("\"invariants\" must be an array");
        std::vector<std::uint32_t> parts;
        for (const Json& x : j["invariants"]) {
            if (!x.is_number_integer() || x.get<long long>() < 1)
                throw std::invalid_argument("invariant out of [1, p]");
            parts.push_back(x.get<std::uint32_t>());
        }
        return module_from_invariants(Invariants::of(field, std::move(parts)));
    }

    if (j.contains("matrix")) {
        const Json& rows = j["matrix"];
        if (!rows.is_array()) throw std::invalid_argument("\"matrix\" must be an array of rows");
        std::vector<std::vector<long long>> entries;
        for (const Json& row : rows) {
            if (!row.is_array() || row.size() != rows.size())
                throw std::invalid_argument("matrix must be square");
            entries.emplace_back();
            for (const Json& x : row) {
                if (!x.is_number_integer())
                    throw std::invalid_argument("matrix entries must be integers");
                entries.back().push_back(x.get<long long>());
            }
        }
        Module m(field, Matrix::from_rows(field, entries));
        if (!m.is_valid())
            throw std::invalid_argument(
                "not a k[T]/T^p module: the action is not nilpotent of exponent <= p");
        return m;
    }

    throw std::invalid_argument("module JSON needs either \"invariants\" or \"matrix\"");
}

/// Resolution JSON. terms[i] lists the invariants of P_i; differentials[i]
/// is the matrix of P_{i+1} -> P_i; shapes are implied by the terms.
inline Json resolution_to_json(const PermResolution& r,
                               std::optional<bool> checked = std::nullopt) {
    Json terms = Json::array();
    for (const Module& t : r.terms) terms.push_back(decompose(t).parts());
    Json diffs = Json::array();
    for (const Matrix& d : r.differentials) diffs.push_back(matrix_to_json(d));
    Json trace = Json::array();
    for (const TraceEntry& e : r.trace)
        trace.push_back(Json::array({e.part, e.eps, e.predecessor}));
    Json out{{"p", r.target.p()},
             {"length", r.length()},
             {"terms", std::move(terms)},
             {"differentials", std::move(diffs)},
             {"augmentation", matrix_to_json(r.augmentation)},
             {"trace", std::move(trace)}};
    if (checked.has_value()) out["check"] = *checked;
    return out;
}

inline Json search_report_to_json(const Invariants& target, unsigned distance,
                                  const BrutePpdimResult& result) {
    Json out{{"p", target.p()},
             {"invariants", target.parts()},
             {"distance", distance}};
    if (result.length.has_value()) {
        out["brute_ppdim"] = *result.length;
        out["certainty"] =
            result.certified_unconditionally ? "certified" : "certified_within_budget";
        out["agree"] = *result.length == distance;
    } else {
        out["brute_ppdim"] = nullptr;
        out["certainty"] = "budget_exhausted";
        out["agree"] = false;
    }
    out["candidates_examined"] = result.candidates_examined;
    out["nodes_expanded"] = result.nodes_expanded;
    return out;
}

inline Json ses_report_to_json(const KernelDistanceReport& report) {
    Json records = Json::array();
    for (const SesTrialRecord& rec : report.records) {
        Json pairs = Json::array();
        for (auto [c, cp] : rec.matched) pairs.push_back(Json::array({c, cp}));
        records.push_back(Json{{"M", rec.target_parts},
                               {"P", rec.cover_parts},
                               {"K", rec.kernel_parts},
                               {"matched", std::move(pairs)},
                               {"inequality_ok", rec.inequality_ok},
                               {"refinement_ok", rec.refinement_ok}});
    }
    return Json{{"p", report.p},
                {"seed", report.seed},
                {"requested", report.requested},
                {"attempts", report.attempts},
                {"accepted", report.accepted},
                {"violations", report.violations},
                // the witness predicate behind the filter: some cyclic
                // summand generator mapping index-preservingly onto a
                // summand generator
                {"split_witness", "cyclic summand generator carried isomorphically"},
                {"records", std::move(records)}};
}

inline Json suite_result_to_json(const SuiteResult& r) {
    return Json{{"suite", r.suite}, {"p", r.p},       {"cases", r.cases},
                {"failures", r.failures}, {"ok", r.ok()}, {"notes", r.notes}};
}

}  // namespace permres
