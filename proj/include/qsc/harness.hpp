#pragma once

// Scheduling, parallel execution, reporting and result caching.

#include "qsc/analytic.hpp"
#include "qsc/engine.hpp"
#include "qsc/padic.hpp"
#include "qsc/registry.hpp"
#include "qsc/result.hpp"
#include "qsc/version.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace qsc {

/// Invalid run configuration or unusable input; maps to exit status 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string sha256_hex(std::string_view data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

/// A parsed registry together with the hash of its source text.
struct LoadedRegistry {
    Registry registry;
    std::string hash;
};

inline LoadedRegistry load_registry_text(std::string_view text) {
    try {
        return {parse_registry(text), sha256_hex(text)};
    } catch (const std::exception& e) {
        throw ConfigError(std::string("registry: ") + e.what());
    }
}

inline LoadedRegistry load_registry_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read registry '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return load_registry_text(ss.str());
}

// ---------------------------------------------------------------------------
// Catalog

inline std::string kind_label(const CaseDefinition& c) {
    return c.observe() ? "conjecture-observe" : std::string(to_string(c.kind));
}

inline std::string case_target(const CaseDefinition& c) {
    switch (c.family) {
        case Family::symbolic: {
            const auto& s = c.symbolic();
            if (s.method == Method::pair) return s.pair_lhs + " vs " + s.pair_rhs + " mod " + s.modulus.describe();
            return "mod " + s.modulus.describe();
        }
        case Family::padic: return "v_p >= " + std::to_string(c.padic().threshold);
        case Family::analytic: {
            switch (c.analytic().check) {
                case AnalyticCheck::q_identity: return "numeric q-series identity";
                case AnalyticCheck::pi_formula: return "partial sums against a Gamma value";
                case AnalyticCheck::rahman: return "numeric identity on a random grid";
                case AnalyticCheck::gamma_limit: return "q-Gamma limit";
            }
        }
    }
    return "";
}

/// One line per case: id, kind, family, condition, modulus or target, anchor.
inline std::vector<std::string> list_cases(const Registry& reg) {
    std::vector<std::string> out;
    for (const auto& c : reg.cases()) {
        std::string cond = c.condition.clauses.empty() ? "always" : c.condition.describe();
        out.push_back(c.id + "  [" + kind_label(c) + ", " + std::string(to_string(c.family)) + "]  when " + cond +
                      "  " + case_target(c) + "  -- " + c.anchor);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Configuration and scheduling

enum class VerbScope { all, exact, analytic };

struct RunConfig {
    std::vector<std::string> cases;  // empty: every case in scope
    VerbScope scope = VerbScope::all;
    std::optional<std::vector<std::int64_t>> n_values;
    std::optional<std::vector<std::int64_t>> d_values;
    std::optional<std::vector<std::int64_t>> primes;
    int jobs = 1;
    double tol = 0;  // > 0 overrides analytic tolerances
    bool timing = true;
    std::optional<std::string> cache_path;
    std::size_t audit_size = 10;
    std::optional<std::uint64_t> audit_seed;  // random when unset

    void validate() const {
        if (jobs < 1) throw ConfigError("worker count must be at least 1");
        for (const auto* v : {&n_values, &d_values, &primes})
            if (*v && (*v)->empty()) throw ConfigError("parameter ranges must be nonempty");
        if (tol < 0) throw ConfigError("tolerance must be positive");
    }
};

// "5,7,9" or "3..29" or a mix such as "3..9,13".
inline std::vector<std::int64_t> parse_int_list(const std::string& text) {
    std::vector<std::int64_t> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (item.empty()) throw ConfigError("empty item in list '" + text + "'");
        try {
            std::size_t dots = item.find("..");
            if (dots == std::string::npos) {
                out.push_back(std::stoll(item));
            } else {
                std::int64_t a = std::stoll(item.substr(0, dots)), b = std::stoll(item.substr(dots + 2));
                if (a > b) throw ConfigError("empty range '" + item + "'");
                for (std::int64_t v = a; v <= b; ++v) out.push_back(v);
            }
        } catch (const std::logic_error&) {
            throw ConfigError("malformed integer list '" + text + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

struct Job {
    const CaseDefinition* def = nullptr;
    std::optional<std::int64_t> n, d, p;
};

inline bool in_scope(Family f, VerbScope s) {
    switch (s) {
        case VerbScope::all: return true;
        case VerbScope::exact: return f != Family::analytic;
        case VerbScope::analytic: return f == Family::analytic;
    }
    return false;
}

inline std::vector<std::int64_t> sorted_unique(std::vector<std::int64_t> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

/// Every (case, params) combination selected by the configuration, once each.
inline std::vector<Job> schedule(const Registry& reg, const RunConfig& cfg) {
    std::vector<const CaseDefinition*> selected;
    if (cfg.cases.empty()) {
        for (const auto& c : reg.cases())
            if (in_scope(c.family, cfg.scope)) selected.push_back(&c);
    } else {
        std::set<std::string> seen;
        for (const auto& id : cfg.cases) {
            const CaseDefinition* c = reg.find(id);
            if (!c) throw ConfigError("unknown case id '" + id + "'");
            if (!in_scope(c->family, cfg.scope))
                throw ConfigError("case '" + id + "' is " + std::string(to_string(c->family)) +
                                  " and not handled by this verb");
            if (seen.insert(id).second) selected.push_back(c);
        }
    }
    std::vector<Job> jobs;
    for (const auto* c : selected) {
        switch (c->family) {
            case Family::symbolic: {
                auto ns = sorted_unique(cfg.n_values.value_or(c->defaults.n));
                std::vector<std::optional<std::int64_t>> ds;
                if (c->defaults.d.empty()) {
                    ds.push_back(std::nullopt);
                } else {
                    for (auto d : sorted_unique(cfg.d_values.value_or(c->defaults.d))) ds.push_back(d);
                }
                for (auto n : ns)
                    for (auto d : ds) jobs.push_back({c, n, d, std::nullopt});
                break;
            }
            case Family::padic:
                for (auto p : sorted_unique(cfg.primes.value_or(c->defaults.p)))
                    jobs.push_back({c, std::nullopt, std::nullopt, p});
                break;
            case Family::analytic: jobs.push_back({c, std::nullopt, std::nullopt, std::nullopt}); break;
        }
    }
    return jobs;
}

inline CaseResult execute(const Registry& reg, const Job& job, double tol) {
    const auto& c = *job.def;
    switch (c.family) {
        case Family::symbolic: return verify_symbolic(reg, c, *job.n, job.d);
        case Family::padic: return verify_padic_case(c, *job.p);
        case Family::analytic: return verify_analytic(c, tol);
    }
    throw std::logic_error("unhandled family");
}

// ---------------------------------------------------------------------------
// Serialisation

using ojson = nlohmann::ordered_json;

inline std::string witness_digest(const std::string& w) { return w.empty() ? "" : sha256_hex(w).substr(0, 16); }

template <class E, std::size_t N>
E parse_enum(const std::string& s, const E (&values)[N], const char* what) {
    for (E v : values)
        if (to_string(v) == s) return v;
    throw std::runtime_error(std::string("unknown ") + what + " '" + s + "'");
}

inline ojson result_to_json(const CaseResult& r, bool timing) {
    ojson j;
    j["id"] = r.id;
    j["family"] = to_string(r.family);
    j["kind"] = to_string(r.kind);
    j["observe"] = r.observe;
    ojson params = ojson::object();
    if (r.n) params["n"] = *r.n;
    if (r.d) params["d"] = *r.d;
    if (r.p) params["p"] = *r.p;
    j["params"] = params;
    j["strategy"] = r.strategy;
    j["status"] = to_string(r.status);
    j["detail"] = r.detail;
    j["witness"] = r.witness;
    j["witness_digest"] = witness_digest(r.witness);
    ojson legs = ojson::array();
    for (const auto& l : r.legs)
        legs.push_back({{"name", l.name}, {"status", to_string(l.status)}, {"witness", l.witness}, {"detail", l.detail}});
    j["legs"] = legs;
    if (r.valuation_kind != ValuationKind::none) {
        ojson v;
        v["kind"] = to_string(r.valuation_kind);
        if (r.valuation_kind != ValuationKind::infinite) v["value"] = r.valuation;
        j["valuation"] = v;
    }
    if (r.threshold) j["threshold"] = *r.threshold;
    if (r.residual) j["residual"] = *r.residual;
    j["notes"] = r.notes;
    if (timing) j["elapsed_ms"] = r.elapsed_ms;
    return j;
}

inline CaseResult result_from_json(const nlohmann::json& j) {
    static const Family families[] = {Family::symbolic, Family::padic, Family::analytic};
    static const StatementKind kinds[] = {StatementKind::theorem, StatementKind::lemma, StatementKind::corollary,
                                          StatementKind::conjecture};
    static const Status statuses[] = {Status::pass, Status::fail, Status::skipped, Status::obstruction};
    static const ValuationKind vkinds[] = {ValuationKind::exact, ValuationKind::at_least, ValuationKind::infinite};
    CaseResult r;
    r.id = j.at("id").get<std::string>();
    r.family = parse_enum(j.at("family").get<std::string>(), families, "family");
    r.kind = parse_enum(j.at("kind").get<std::string>(), kinds, "statement kind");
    r.observe = j.at("observe").get<bool>();
    const auto& params = j.at("params");
    if (params.contains("n")) r.n = params["n"].get<std::int64_t>();
    if (params.contains("d")) r.d = params["d"].get<std::int64_t>();
    if (params.contains("p")) r.p = params["p"].get<std::int64_t>();
    r.strategy = j.at("strategy").get<std::string>();
    r.status = parse_enum(j.at("status").get<std::string>(), statuses, "status");
    r.detail = j.at("detail").get<std::string>();
    r.witness = j.at("witness").get<std::string>();
    for (const auto& l : j.at("legs"))
        r.legs.push_back({l.at("name").get<std::string>(), parse_enum(l.at("status").get<std::string>(), statuses, "status"),
                          l.at("witness").get<std::string>(), l.at("detail").get<std::string>()});
    if (j.contains("valuation")) {
        const auto& v = j["valuation"];
        r.valuation_kind = parse_enum(v.at("kind").get<std::string>(), vkinds, "valuation kind");
        if (v.contains("value")) r.valuation = v["value"].get<std::int64_t>();
    }
    if (j.contains("threshold")) r.threshold = j["threshold"].get<std::int64_t>();
    if (j.contains("residual")) r.residual = j["residual"].get<double>();
    r.notes = j.at("notes").get<std::vector<std::string>>();
    if (j.contains("elapsed_ms")) r.elapsed_ms = j["elapsed_ms"].get<double>();
    return r;
}

// ---------------------------------------------------------------------------
// Report

struct Summary {
    std::size_t total = 0, pass = 0, fail = 0, obstruction = 0, skipped = 0;
    std::size_t observed = 0;  // results of conjecture cases
    std::vector<std::string> observed_failures;
    std::vector<std::string> failures;  // theorem-kind fail or obstruction

    friend bool operator==(const Summary&, const Summary&) = default;
};

inline std::string result_label(const CaseResult& r) {
    std::string s = r.id;
    if (r.n) s += " n=" + std::to_string(*r.n);
    if (r.d) s += " d=" + std::to_string(*r.d);
    if (r.p) s += " p=" + std::to_string(*r.p);
    return s;
}

inline Summary summarize(const std::vector<CaseResult>& results) {
    Summary s;
    for (const auto& r : results) {
        ++s.total;
        switch (r.status) {
            case Status::pass: ++s.pass; break;
            case Status::fail: ++s.fail; break;
            case Status::obstruction: ++s.obstruction; break;
            case Status::skipped: ++s.skipped; break;
        }
        if (r.observe) ++s.observed;
        bool bad = r.status == Status::fail || r.status == Status::obstruction;
        if (bad && r.observe) s.observed_failures.push_back(result_label(r) + " (" + std::string(to_string(r.status)) + ")");
        if (r.counts_as_failure()) s.failures.push_back(result_label(r) + " (" + std::string(to_string(r.status)) + ")");
    }
    return s;
}

/// Outcome of re-verifying cached results.
struct CacheAudit {
    std::size_t hits = 0;
    std::size_t checked = 0;
    std::vector<std::string> mismatches;
};

struct Report {
    std::string version{kVersion};
    std::string registry_hash;
    std::vector<CaseResult> results;
    Summary summary;
    CacheAudit audit;  // not serialised

    void finalize() {
        std::stable_sort(results.begin(), results.end(),
                         [](const CaseResult& a, const CaseResult& b) { return a.sort_key() < b.sort_key(); });
        summary = summarize(results);
    }

    /// 0 when no theorem-kind result failed, 1 otherwise.
    int exit_code() const { return summary.failures.empty() ? 0 : 1; }
};

inline ojson report_to_json(const Report& rep, bool timing = true) {
    ojson j;
    j["tool"] = "qsc";
    j["version"] = rep.version;
    j["registry_hash"] = rep.registry_hash;
    const auto& s = rep.summary;
    j["summary"] = {{"total", s.total},
                    {"pass", s.pass},
                    {"fail", s.fail},
                    {"obstruction", s.obstruction},
                    {"skipped", s.skipped},
                    {"observed", s.observed},
                    {"observed_failures", s.observed_failures},
                    {"failures", s.failures}};
    ojson results = ojson::array();
    for (const auto& r : rep.results) results.push_back(result_to_json(r, timing));
    j["results"] = results;
    return j;
}

inline Report report_from_json(const nlohmann::json& j) {
    Report rep;
    rep.version = j.at("version").get<std::string>();
    rep.registry_hash = j.at("registry_hash").get<std::string>();
    for (const auto& r : j.at("results")) rep.results.push_back(result_from_json(r));
    rep.finalize();
    const auto& s = j.at("summary");
    if (s.at("total").get<std::size_t>() != rep.summary.total || s.at("pass").get<std::size_t>() != rep.summary.pass ||
        s.at("fail").get<std::size_t>() != rep.summary.fail ||
        s.at("obstruction").get<std::size_t>() != rep.summary.obstruction ||
        s.at("skipped").get<std::size_t>() != rep.summary.skipped)
        throw std::runtime_error("report summary does not match its results");
    return rep;
}

inline std::string report_text(const Report& rep) {
    struct Row {
        std::size_t pass = 0, fail = 0, obstruction = 0, skipped = 0;
        bool observe = false;
    };
    std::vector<std::pair<std::string, Row>> rows;
    for (const auto& r : rep.results) {
        if (rows.empty() || rows.back().first != r.id) rows.push_back({r.id, {}});
        Row& row = rows.back().second;
        row.observe = r.observe;
        switch (r.status) {
            case Status::pass: ++row.pass; break;
            case Status::fail: ++row.fail; break;
            case Status::obstruction: ++row.obstruction; break;
            case Status::skipped: ++row.skipped; break;
        }
    }
    std::ostringstream out;
    out << "qsc " << rep.version << "  registry " << rep.registry_hash.substr(0, 12) << "\n";
    char line[160];
    std::snprintf(line, sizeof line, "%-14s %6s %6s %6s %6s  %s\n", "case", "pass", "fail", "obstr", "skip", "mode");
    out << line;
    for (const auto& [id, row] : rows) {
        std::snprintf(line, sizeof line, "%-14s %6zu %6zu %6zu %6zu  %s\n", id.c_str(), row.pass, row.fail,
                      row.obstruction, row.skipped, row.observe ? "observe" : "check");
        out << line;
    }
    const auto& s = rep.summary;
    out << "total " << s.total << ": " << s.pass << " pass, " << s.fail << " fail, " << s.obstruction
        << " obstruction, " << s.skipped << " skipped, " << s.observed << " observed\n";
    if (!s.observed_failures.empty()) {
        out << "observed conjecture failures:\n";
        for (const auto& f : s.observed_failures) out << "  " << f << "\n";
    }
    if (!s.failures.empty()) {
        out << "failures:\n";
        for (const auto& f : s.failures) out << "  " << f << "\n";
    }
    return out.str();
}

enum class ReportFormat { json, text };

inline std::string render_report(const Report& rep, ReportFormat format, bool timing) {
    return format == ReportFormat::json ? report_to_json(rep, timing).dump(2) + "\n" : report_text(rep);
}

inline void emit_report(const Report& rep, const std::string& path, ReportFormat format, bool timing) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write report '" + path + "'");
    out << render_report(rep, format, timing);
    if (!out) throw ConfigError("failed writing report '" + path + "'");
}

// ---------------------------------------------------------------------------
// Result cache: one JSON object per line, keyed by case, params and registry hash.

inline std::string cache_key(const Job& job, double tol) {
    std::string k = job.def->id;
    if (job.n) k += "|n=" + std::to_string(*job.n);
    if (job.d) k += "|d=" + std::to_string(*job.d);
    if (job.p) k += "|p=" + std::to_string(*job.p);
    if (job.def->family == Family::analytic && tol > 0) k += "|tol=" + format_double(tol, 17);
    return k;
}

class ResultCache {
public:
    ResultCache(std::string path, std::string registry_hash) : path_(std::move(path)), hash_(std::move(registry_hash)) {
        std::ifstream in(path_);
        if (!in) return;
        std::string line;
        bool stale = false;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            try {
                auto j = nlohmann::json::parse(line);
                if (j.at("registry").get<std::string>() != hash_) {
                    stale = true;
                    continue;
                }
                entries_[j.at("key").get<std::string>()] = result_from_json(j.at("result"));
            } catch (const std::exception&) {
                stale = true;
            }
        }
        in.close();
        if (stale) rewrite();
    }

    const CaseResult* find(const std::string& key) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? nullptr : &it->second;
    }

    void append(const std::string& key, const CaseResult& r) {
        entries_[key] = r;
        std::ofstream out(path_, std::ios::app);
        if (!out) throw ConfigError("cannot write cache '" + path_ + "'");
        out << line(key, r) << "\n";
    }

    std::size_t size() const { return entries_.size(); }

private:
    std::string line(const std::string& key, const CaseResult& r) const {
        ojson j;
        j["key"] = key;
        j["registry"] = hash_;
        j["result"] = result_to_json(r, true);
        return j.dump();
    }

    void rewrite() {
        std::ofstream out(path_, std::ios::trunc);
        if (!out) throw ConfigError("cannot write cache '" + path_ + "'");
        for (const auto& [k, r] : entries_) out << line(k, r) << "\n";
    }

    std::string path_;
    std::string hash_;
    std::map<std::string, CaseResult> entries_;
};

// ---------------------------------------------------------------------------

/// Runs jobs on up to `workers` threads; results[i] belongs to jobs[i].
inline std::vector<CaseResult> run_jobs(const Registry& reg, const std::vector<Job>& jobs, int workers, double tol) {
    std::vector<CaseResult> results(jobs.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            try {
                auto t0 = std::chrono::steady_clock::now();
                results[i] = execute(reg, jobs[i], tol);
                results[i].elapsed_ms =
                    std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), jobs.size());
    std::vector<std::thread> pool;
    for (std::size_t i = 1; i < n; ++i) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (error) {
        try {
            std::rethrow_exception(error);
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError(e.what());
        }
    }
    return results;
}

inline Report run(const LoadedRegistry& loaded, const RunConfig& cfg) {
    cfg.validate();
    const Registry& reg = loaded.registry;
    auto jobs = schedule(reg, cfg);

    Report rep;
    rep.registry_hash = loaded.hash;
    std::optional<ResultCache> cache;
    if (cfg.cache_path) cache.emplace(*cfg.cache_path, loaded.hash);

    std::vector<CaseResult> results(jobs.size());
    std::vector<std::size_t> todo, hits;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const CaseResult* hit = cache ? cache->find(cache_key(jobs[i], cfg.tol)) : nullptr;
        if (hit) {
            results[i] = *hit;
            hits.push_back(i);
        } else {
            todo.push_back(i);
        }
    }

    // recompute a random sample of the cached results alongside the fresh ones
    std::vector<std::size_t> audit = hits;
    {
        std::mt19937_64 rng(cfg.audit_seed ? *cfg.audit_seed : std::random_device{}());
        std::shuffle(audit.begin(), audit.end(), rng);
        if (audit.size() > cfg.audit_size) audit.resize(cfg.audit_size);
        std::sort(audit.begin(), audit.end());
    }
    std::vector<Job> batch;
    for (auto i : todo) batch.push_back(jobs[i]);
    for (auto i : audit) batch.push_back(jobs[i]);
    auto fresh = run_jobs(reg, batch, cfg.jobs, cfg.tol);

    for (std::size_t k = 0; k < todo.size(); ++k) {
        results[todo[k]] = fresh[k];
        if (cache) cache->append(cache_key(jobs[todo[k]], cfg.tol), fresh[k]);
    }
    rep.audit.hits = hits.size();
    for (std::size_t k = 0; k < audit.size(); ++k) {
        const auto i = audit[k];
        const CaseResult& recomputed = fresh[todo.size() + k];
        ++rep.audit.checked;
        if (!results[i].same_outcome(recomputed)) {
            rep.audit.mismatches.push_back(result_label(recomputed));
            results[i] = recomputed;
            cache->append(cache_key(jobs[i], cfg.tol), recomputed);
        }
    }

    rep.results = std::move(results);
    rep.finalize();
    return rep;
}

}  // namespace qsc
