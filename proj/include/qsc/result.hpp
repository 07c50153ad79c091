#pragma once

#include "qsc/registry.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace qsc {

enum class Status { pass, fail, skipped, obstruction };

inline std::string_view to_string(Status s) {
    switch (s) {
        case Status::pass: return "pass";
        case Status::fail: return "fail";
        case Status::skipped: return "skipped";
        case Status::obstruction: return "obstruction";
    }
    return "?";
}

inline std::optional<Status> parse_status(std::string_view s) {
    for (Status v : {Status::pass, Status::fail, Status::skipped, Status::obstruction})
        if (to_string(v) == s) return v;
    return std::nullopt;
}

/// Combined verdict of independent checks: any failure wins, then any
/// obstruction, then skips; otherwise pass.
inline Status combine(Status a, Status b) {
    auto rank = [](Status s) {
        switch (s) {
            case Status::fail: return 3;
            case Status::obstruction: return 2;
            case Status::skipped: return 1;
            case Status::pass: return 0;
        }
        return 0;
    };
    return rank(a) >= rank(b) ? a : b;
}

/// How the valuation field of a result is to be read.
enum class ValuationKind { none, exact, at_least, infinite };

inline std::string_view to_string(ValuationKind v) {
    switch (v) {
        case ValuationKind::none: return "none";
        case ValuationKind::exact: return "exact";
        case ValuationKind::at_least: return "at_least";
        case ValuationKind::infinite: return "infinite";
    }
    return "?";
}

/// One independent check of a parametric case, e.g. the specialisation a = q^n.
struct LegResult {
    std::string name;
    Status status = Status::pass;
    std::string witness;
    std::string detail;

    friend bool operator==(const LegResult&, const LegResult&) = default;
};

struct CaseResult {
    std::string id;
    Family family = Family::symbolic;
    StatementKind kind = StatementKind::theorem;
    bool observe = false;
    std::optional<std::int64_t> n;
    std::optional<std::int64_t> d;
    std::optional<std::int64_t> p;
    std::string strategy;
    Status status = Status::pass;
    std::string witness;  // nonzero remainder on fail, empty otherwise
    std::string detail;
    std::vector<LegResult> legs;
    ValuationKind valuation_kind = ValuationKind::none;
    std::int64_t valuation = 0;
    std::optional<std::int64_t> threshold;
    std::optional<double> residual;
    std::vector<std::string> notes;
    double elapsed_ms = 0;

    /// Failures that count against the run: conjectures are only observed.
    bool counts_as_failure() const {
        return !observe && (status == Status::fail || status == Status::obstruction);
    }

    auto sort_key() const { return std::make_tuple(id, n.value_or(-1), d.value_or(-1), p.value_or(-1)); }

    /// Equality ignoring timing.
    bool same_outcome(const CaseResult& o) const {
        return id == o.id && family == o.family && kind == o.kind && observe == o.observe && n == o.n && d == o.d &&
               p == o.p && strategy == o.strategy && status == o.status && witness == o.witness &&
               detail == o.detail && legs == o.legs && valuation_kind == o.valuation_kind &&
               valuation == o.valuation && threshold == o.threshold && residual == o.residual && notes == o.notes;
    }
};

/// A result skeleton carrying the case identity and parameters.
inline CaseResult make_result(const CaseDefinition& c, std::optional<std::int64_t> n = std::nullopt,
                              std::optional<std::int64_t> d = std::nullopt,
                              std::optional<std::int64_t> p = std::nullopt) {
    CaseResult r;
    r.id = c.id;
    r.family = c.family;
    r.kind = c.kind;
    r.observe = c.observe();
    r.n = n;
    r.d = d;
    r.p = p;
    if (!c.notes.empty()) r.notes.push_back(c.notes);
    return r;
}

}  // namespace qsc
