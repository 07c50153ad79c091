#pragma once

// Declarative case registry.
//
// Every verifiable statement is one JSON record. Expressions are strings in
// the small arithmetic language of expr.hpp over the variables n, d, k and p.

#include "qsc/expr.hpp"
#include "qsc/rational.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qsc {

class RegistryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class StatementKind { theorem, lemma, corollary, conjecture };
enum class Family { symbolic, padic, analytic };
enum class Method { congruence, parametric, pair };
enum class Role { numerator, denominator };
enum class ParamKind { none, a, inv_a };

inline std::string_view to_string(StatementKind k);
inline std::string_view to_string(Family f);
inline std::string_view to_string(Method m);

/// One clause of an applicability condition, e.g. n = d+1 (mod 2d) or n >= 3.
struct Clause {
    std::string var;
    std::optional<Expr> modulus;
    std::vector<Expr> residues;
    std::optional<Expr> min;
    std::optional<Expr> max;
    bool prime = false;

    bool holds(const Bindings& b) const;
    std::string describe() const;
};

struct Condition {
    std::vector<Clause> clauses;

    bool holds(const Bindings& b) const {
        for (const auto& c : clauses)
            if (!c.holds(b)) return false;
        return true;
    }
    /// The first clause that fails, for skip reasons.
    std::optional<std::string> violated(const Bindings& b) const {
        for (const auto& c : clauses)
            if (!c.holds(b)) return c.describe();
        return std::nullopt;
    }
    std::string describe() const;
};

/// (x q^base; q^step)_k raised to +-power, with x one of 1, a, 1/a.
struct PochFactorSpec {
    Expr base;
    Expr step;
    Expr power;
    Role role = Role::numerator;
    ParamKind param = ParamKind::none;
};

/// [m k + r] * prod of Pochhammer factors * q^{e(k)}.
struct SummandSpec {
    Expr prefactor_m;
    Expr prefactor_r;
    std::vector<PochFactorSpec> factors;
    Expr q_exponent;

    bool parametric() const {
        for (const auto& f : factors)
            if (f.param != ParamKind::none) return true;
        return false;
    }
};

enum class ClosedFormKind { pochhammer_ratio, zero };

struct FinitePochSpec {
    Expr base;
    Expr step;
    Expr length;
    Role role = Role::numerator;
};

struct ClosedFormBranch {
    Condition when;
    ClosedFormKind kind = ClosedFormKind::zero;
    int sign = 1;
    std::vector<FinitePochSpec> factors;
    bool n_multiplier = false;
    Expr q_shift;
    std::string note;
};

enum class ModulusFactorKind { cyclotomic, q_integer, one_minus_a_qn, a_minus_qn };

struct ModulusFactor {
    ModulusFactorKind kind = ModulusFactorKind::cyclotomic;
    std::int64_t power = 1;

    bool parametric() const {
        return kind == ModulusFactorKind::one_minus_a_qn || kind == ModulusFactorKind::a_minus_qn;
    }
};

struct ModulusSpec {
    std::vector<ModulusFactor> factors;

    bool parametric() const {
        for (const auto& f : factors)
            if (f.parametric()) return true;
        return false;
    }
    std::string describe() const;
};

/// sign * prod_i (q^{num_i}; q^step)_inf / prod_j (q^{den_j}; q^step)_inf.
struct ProductSpec {
    Expr step;
    int sign = 1;
    std::vector<Expr> num;
    std::vector<Expr> den;
};

struct SymbolicCase {
    Method method = Method::congruence;
    Expr bound;
    SummandSpec summand;
    std::vector<ClosedFormBranch> closed_form;
    ModulusSpec modulus;
    std::optional<ProductSpec> specialized_product;
    std::string pair_lhs;
    std::string pair_rhs;
};

/// prefactor(k) * ratio^k * prod (x)_k^{+-power}, all over Q.
struct ClassicalSummand {
    Expr prefactor;
    Rational ratio{1};
    struct Factor {
        Rational x;
        std::int64_t power = 1;
        Role role = Role::numerator;
    };
    std::vector<Factor> factors;
};

enum class PadicValueKind { series, pochhammer_ratio, gamma_quotient, zero };

struct PadicValueSpec {
    Condition when;
    PadicValueKind kind = PadicValueKind::zero;
    int sign = 1;
    std::int64_t p_power = 0;
    // series
    Expr bound;
    ClassicalSummand summand;
    // pochhammer_ratio: prod (x)_{length}^{+-1}
    struct RatioFactor {
        Rational x;
        Expr length;
        Role role = Role::numerator;
    };
    std::vector<RatioFactor> ratio;
    // gamma_quotient
    std::vector<Rational> gamma_num;
    std::vector<Rational> gamma_den;
};

struct PadicCase {
    PadicValueSpec lhs;
    std::vector<PadicValueSpec> rhs;
    std::int64_t threshold = 1;
};

enum class AnalyticCheck { q_identity, pi_formula, rahman, gamma_limit };

struct AnalyticCase {
    AnalyticCheck check = AnalyticCheck::q_identity;
    SummandSpec summand;             // q_identity
    ProductSpec product;             // q_identity
    ClassicalSummand series;         // pi_formula
    Expr target;                     // pi_formula
    std::vector<double> q_values;    // q_identity, gamma_limit, rahman range
    std::vector<Rational> x_values;  // gamma_limit
    std::int64_t terms = 0;          // pi_formula partial sum length
    std::int64_t grid = 0;           // rahman
    std::uint64_t seed = 0;          // rahman
    double tol = 1e-10;
};

/// Parameter values scheduled when a run does not override them.
struct ParamDefaults {
    std::vector<std::int64_t> n;
    std::vector<std::int64_t> d;
    std::vector<std::int64_t> p;
};

struct CaseDefinition {
    std::string id;
    StatementKind kind = StatementKind::theorem;
    Family family = Family::symbolic;
    std::string anchor;
    std::string notes;
    Condition condition;
    ParamDefaults defaults;
    std::variant<SymbolicCase, PadicCase, AnalyticCase> body;

    bool observe() const { return kind == StatementKind::conjecture; }
    const SymbolicCase& symbolic() const { return std::get<SymbolicCase>(body); }
    const PadicCase& padic() const { return std::get<PadicCase>(body); }
    const AnalyticCase& analytic() const { return std::get<AnalyticCase>(body); }
};

class Registry {
public:
    Registry() = default;
    explicit Registry(std::vector<CaseDefinition> cases);

    const std::vector<CaseDefinition>& cases() const { return cases_; }
    const CaseDefinition* find(std::string_view id) const;
    const CaseDefinition& at(std::string_view id) const;

private:
    std::vector<CaseDefinition> cases_;
    std::map<std::string, std::size_t, std::less<>> index_;
};

inline Registry parse_registry(std::string_view json_text);
inline Registry parse_registry(const nlohmann::json& doc);
inline Registry parse_registry(const char* json_text) { return parse_registry(std::string_view(json_text)); }
inline Registry parse_registry(const std::string& json_text) { return parse_registry(std::string_view(json_text)); }

/// Largest k for which summand exponents are checked for integrality.
inline constexpr std::int64_t kExponentCheckRange = 40;

// ---------------------------------------------------------------------------

inline std::string_view to_string(StatementKind k) {
    switch (k) {
        case StatementKind::theorem: return "theorem";
        case StatementKind::lemma: return "lemma";
        case StatementKind::corollary: return "corollary";
        case StatementKind::conjecture: return "conjecture";
    }
    return "?";
}

inline std::string_view to_string(Family f) {
    switch (f) {
        case Family::symbolic: return "symbolic";
        case Family::padic: return "padic";
        case Family::analytic: return "analytic";
    }
    return "?";
}

inline std::string_view to_string(Method m) {
    switch (m) {
        case Method::congruence: return "congruence";
        case Method::parametric: return "parametric";
        case Method::pair: return "pair";
    }
    return "?";
}

namespace detail {

inline bool is_prime(std::int64_t v) {
    if (v < 2) return false;
    for (std::int64_t f = 2; f * f <= v; ++f)
        if (v % f == 0) return false;
    return true;
}

inline Rational floor_mod(const Rational& a, const Rational& m) {
    // both integral here
    BigInt r = a.get_num() % m.get_num();
    if (r < 0) r += abs(m.get_num());
    return Rational(r);
}

}  // namespace detail

inline bool Clause::holds(const Bindings& b) const {
    auto it = b.find(var);
    if (it == b.end()) return false;
    const Rational& v = it->second;
    if (prime && (!is_integer(v) || !v.get_num().fits_slong_p() || !detail::is_prime(v.get_num().get_si())))
        return false;
    if (min && v < min->eval(b)) return false;
    if (max && v > max->eval(b)) return false;
    if (modulus) {
        Rational m = modulus->eval(b);
        if (!is_integer(v) || !is_integer(m) || sgn(m) == 0) return false;
        Rational r = detail::floor_mod(v, m);
        bool any = false;
        for (const auto& e : residues) {
            Rational want = e.eval(b);
            if (!is_integer(want)) continue;
            if (detail::floor_mod(want, m) == r) {
                any = true;
                break;
            }
        }
        if (!any) return false;
    }
    return true;
}

inline std::string Clause::describe() const {
    std::string out;
    auto add = [&](const std::string& s) {
        if (!out.empty()) out += ", ";
        out += s;
    };
    if (prime) add(var + " prime");
    if (modulus) {
        std::string rs;
        for (std::size_t i = 0; i < residues.size(); ++i) rs += (i ? "|" : "") + residues[i].text();
        add(var + " = " + rs + " (mod " + modulus->text() + ")");
    }
    if (min) add(var + " >= " + min->text());
    if (max) add(var + " <= " + max->text());
    return out;
}

inline std::string Condition::describe() const {
    std::string out;
    for (const auto& c : clauses) {
        if (!out.empty()) out += ", ";
        out += c.describe();
    }
    return out.empty() ? "always" : out;
}

inline std::string ModulusSpec::describe() const {
    std::string out;
    for (const auto& f : factors) {
        switch (f.kind) {
            case ModulusFactorKind::cyclotomic:
                out += f.power == 1 ? "Phi_n" : "Phi_n^" + std::to_string(f.power);
                break;
            case ModulusFactorKind::q_integer: out += "[n]"; break;
            case ModulusFactorKind::one_minus_a_qn: out += "(1-a q^n)"; break;
            case ModulusFactorKind::a_minus_qn: out += "(a-q^n)"; break;
        }
        out += " ";
    }
    if (!out.empty()) out.pop_back();
    return out;
}

inline Registry::Registry(std::vector<CaseDefinition> cases) : cases_(std::move(cases)) {
    for (std::size_t i = 0; i < cases_.size(); ++i) {
        if (!index_.emplace(cases_[i].id, i).second) throw RegistryError("duplicate case id '" + cases_[i].id + "'");
    }
}

inline const CaseDefinition* Registry::find(std::string_view id) const {
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &cases_[it->second];
}

inline const CaseDefinition& Registry::at(std::string_view id) const {
    const auto* c = find(id);
    if (!c) throw RegistryError("unknown case id '" + std::string(id) + "'");
    return *c;
}

namespace detail {

using nlohmann::json;

class RegistryReader {
public:
    explicit RegistryReader(std::string where) : where_(std::move(where)) {}

    [[noreturn]] void fail(const std::string& msg) const { throw RegistryError(where_ + ": " + msg); }

    const json& field(const json& obj, const char* key) const {
        if (!obj.is_object()) fail("expected an object");
        auto it = obj.find(key);
        if (it == obj.end()) fail(std::string("missing field '") + key + "'");
        return *it;
    }

    std::string string_field(const json& obj, const char* key, std::string fallback = {}) const {
        auto it = obj.find(key);
        if (it == obj.end()) return fallback;
        if (!it->is_string()) fail(std::string("field '") + key + "' must be a string");
        return it->get<std::string>();
    }

    Expr expr(const json& v, std::initializer_list<std::string_view> allowed) const {
        std::string text;
        if (v.is_string()) {
            text = v.get<std::string>();
        } else if (v.is_number_integer()) {
            text = std::to_string(v.get<std::int64_t>());
        } else {
            fail("expected an expression string or integer");
        }
        Expr e;
        try {
            e = Expr::parse(text);
        } catch (const ExprError& err) {
            fail("bad expression '" + text + "': " + err.what());
        }
        for (const auto& id : e.identifiers()) {
            bool ok = false;
            for (auto a : allowed) ok = ok || id == a;
            if (!ok) fail("expression '" + text + "' uses unknown variable '" + id + "'");
        }
        return e;
    }

    Expr expr_field(const json& obj, const char* key, std::initializer_list<std::string_view> allowed) const {
        return expr(field(obj, key), allowed);
    }

    Rational rational(const json& v) const {
        try {
            if (v.is_number_integer()) return Rational(v.get<long>());
            if (v.is_string()) return Expr::parse(v.get<std::string>()).eval({});
        } catch (const std::exception& e) {
            fail(std::string("bad rational: ") + e.what());
        }
        fail("expected a rational constant");
    }

    Role role(const json& obj) const {
        std::string r = string_field(obj, "role", "num");
        if (r == "num") return Role::numerator;
        if (r == "den") return Role::denominator;
        fail("role must be 'num' or 'den'");
    }

    int sign(const json& obj) const {
        auto it = obj.find("sign");
        if (it == obj.end()) return 1;
        if (!it->is_number_integer() || (it->get<int>() != 1 && it->get<int>() != -1)) fail("sign must be 1 or -1");
        return it->get<int>();
    }

    Condition condition(const json& v) const {
        Condition c;
        if (v.is_null()) return c;
        if (!v.is_array()) fail("condition must be an array of clauses");
        for (const auto& cl : v) {
            Clause clause;
            clause.var = string_field(cl, "var");
            if (clause.var != "n" && clause.var != "d" && clause.var != "p") fail("condition variable must be n, d or p");
            auto names = {std::string_view("n"), std::string_view("d"), std::string_view("p")};
            if (cl.contains("mod")) {
                clause.modulus = expr(cl["mod"], names);
                const auto& rs = field(cl, "residues");
                if (!rs.is_array() || rs.empty()) fail("'residues' must be a nonempty array");
                for (const auto& r : rs) clause.residues.push_back(expr(r, names));
            }
            if (cl.contains("min")) clause.min = expr(cl["min"], names);
            if (cl.contains("max")) clause.max = expr(cl["max"], names);
            if (cl.contains("prime")) clause.prime = cl["prime"].get<bool>();
            c.clauses.push_back(std::move(clause));
        }
        return c;
    }

    std::vector<std::int64_t> int_list(const json& obj, const char* key) const {
        std::vector<std::int64_t> out;
        auto it = obj.find(key);
        if (it == obj.end()) return out;
        if (!it->is_array()) fail(std::string("'") + key + "' must be an array");
        for (const auto& v : *it) {
            if (!v.is_number_integer()) fail(std::string("'") + key + "' entries must be integers");
            out.push_back(v.get<std::int64_t>());
        }
        return out;
    }

    SummandSpec summand(const json& v) const {
        SummandSpec s;
        const auto& pre = field(v, "prefactor");
        s.prefactor_m = expr_field(pre, "m", {"n", "d"});
        s.prefactor_r = expr_field(pre, "r", {"n", "d"});
        for (const auto& f : field(v, "factors")) {
            PochFactorSpec pf;
            pf.base = expr_field(f, "base", {"n", "d"});
            pf.step = expr_field(f, "step", {"n", "d"});
            pf.power = f.contains("power") ? expr(f["power"], {"n", "d"}) : Expr::constant(1);
            pf.role = role(f);
            std::string param = string_field(f, "param", "none");
            if (param == "none") {
                pf.param = ParamKind::none;
            } else if (param == "a") {
                pf.param = ParamKind::a;
            } else if (param == "inv_a") {
                pf.param = ParamKind::inv_a;
            } else {
                fail("param must be none, a or inv_a");
            }
            s.factors.push_back(std::move(pf));
        }
        s.q_exponent = expr_field(v, "q_exponent", {"n", "d", "k"});
        return s;
    }

    std::vector<ClosedFormBranch> closed_form(const json& v) const {
        std::vector<ClosedFormBranch> out;
        if (!v.is_array() || v.empty()) fail("'closed_form' must be a nonempty array of branches");
        for (const auto& b : v) {
            ClosedFormBranch br;
            br.when = condition(b.contains("when") ? b["when"] : json());
            std::string kind = string_field(b, "kind");
            br.note = string_field(b, "note");
            if (kind == "zero") {
                br.kind = ClosedFormKind::zero;
            } else if (kind == "pochhammer_ratio") {
                br.kind = ClosedFormKind::pochhammer_ratio;
                br.sign = sign(b);
                if (b.contains("factors")) {
                    for (const auto& f : b["factors"]) {
                        FinitePochSpec fp;
                        fp.base = expr_field(f, "base", {"n", "d"});
                        fp.step = expr_field(f, "step", {"n", "d"});
                        fp.length = expr_field(f, "length", {"n", "d"});
                        fp.role = role(f);
                        br.factors.push_back(std::move(fp));
                    }
                }
                br.n_multiplier = b.value("n_multiplier", false);
                br.q_shift = b.contains("q_shift") ? expr(b["q_shift"], {"n", "d"}) : Expr::constant(0);
            } else {
                fail("closed form kind must be 'pochhammer_ratio' or 'zero'");
            }
            out.push_back(std::move(br));
        }
        return out;
    }

    ModulusSpec modulus(const json& v) const {
        ModulusSpec m;
        if (!v.is_array() || v.empty()) fail("'modulus' must be a nonempty array");
        for (const auto& f : v) {
            ModulusFactor mf;
            std::string type = string_field(f, "type");
            if (type == "cyclotomic") {
                mf.kind = ModulusFactorKind::cyclotomic;
                mf.power = f.value("power", std::int64_t{1});
                if (mf.power < 1) fail("cyclotomic power must be positive");
            } else if (type == "q_integer") {
                mf.kind = ModulusFactorKind::q_integer;
            } else if (type == "parametric") {
                std::string form = string_field(f, "form");
                if (form == "1-aq^n") {
                    mf.kind = ModulusFactorKind::one_minus_a_qn;
                } else if (form == "a-q^n") {
                    mf.kind = ModulusFactorKind::a_minus_qn;
                } else {
                    fail("parametric modulus form must be '1-aq^n' or 'a-q^n'");
                }
            } else {
                fail("unknown modulus factor type '" + type + "'");
            }
            m.factors.push_back(mf);
        }
        return m;
    }

    ProductSpec product(const json& v) const {
        ProductSpec p;
        p.step = expr_field(v, "step", {"n", "d"});
        p.sign = sign(v);
        for (const auto& e : field(v, "num")) p.num.push_back(expr(e, {"n", "d"}));
        for (const auto& e : field(v, "den")) p.den.push_back(expr(e, {"n", "d"}));
        return p;
    }

    ClassicalSummand classical(const json& v) const {
        ClassicalSummand s;
        s.prefactor = expr_field(v, "prefactor", {"k"});
        if (v.contains("ratio")) s.ratio = rational(v["ratio"]);
        for (const auto& f : field(v, "factors")) {
            ClassicalSummand::Factor cf;
            cf.x = rational(field(f, "x"));
            cf.power = f.value("power", std::int64_t{1});
            if (cf.power < 1) fail("factor power must be positive");
            cf.role = role(f);
            s.factors.push_back(cf);
        }
        return s;
    }

    PadicValueSpec padic_value(const json& v) const {
        PadicValueSpec s;
        s.when = condition(v.contains("when") ? v["when"] : json());
        std::string kind = string_field(v, "kind");
        s.sign = sign(v);
        s.p_power = v.value("p_power", std::int64_t{0});
        if (kind == "series") {
            s.kind = PadicValueKind::series;
            s.bound = expr_field(v, "bound", {"p"});
            s.summand = classical(field(v, "summand"));
        } else if (kind == "pochhammer_ratio") {
            s.kind = PadicValueKind::pochhammer_ratio;
            for (const auto& f : field(v, "factors")) {
                PadicValueSpec::RatioFactor rf;
                rf.x = rational(field(f, "x"));
                rf.length = expr_field(f, "length", {"p"});
                rf.role = role(f);
                s.ratio.push_back(std::move(rf));
            }
        } else if (kind == "gamma_quotient") {
            s.kind = PadicValueKind::gamma_quotient;
            for (const auto& x : field(v, "num")) s.gamma_num.push_back(rational(x));
            if (v.contains("den"))
                for (const auto& x : v["den"]) s.gamma_den.push_back(rational(x));
        } else if (kind == "zero") {
            s.kind = PadicValueKind::zero;
        } else {
            fail("unknown p-adic value kind '" + kind + "'");
        }
        return s;
    }

    std::string where_;
};

inline void check_exponent_integrality(const RegistryReader& r, const SummandSpec& s, const ParamDefaults& defaults) {
    std::vector<std::int64_t> ds = defaults.d.empty() ? std::vector<std::int64_t>{0} : defaults.d;
    std::vector<std::int64_t> ns = defaults.n.empty() ? std::vector<std::int64_t>{0} : defaults.n;
    for (auto d : ds) {
        for (auto n : ns) {
            Bindings b{{"d", Rational(static_cast<long>(d))}, {"n", Rational(static_cast<long>(n))}};
            for (std::int64_t k = 0; k <= kExponentCheckRange; ++k) {
                b["k"] = Rational(static_cast<long>(k));
                Rational e = s.q_exponent.eval(b);
                if (!is_integer(e))
                    r.fail("q-exponent '" + s.q_exponent.text() + "' is not an integer at k=" + std::to_string(k) +
                           ", d=" + std::to_string(d));
            }
        }
    }
}

inline CaseDefinition read_case(const json& v) {
    RegistryReader r("registry");
    CaseDefinition c;
    c.id = r.string_field(v, "id");
    if (c.id.empty()) r.fail("case without id");
    r = RegistryReader("case '" + c.id + "'");

    std::string kind = r.string_field(v, "kind", "theorem");
    if (kind == "theorem") {
        c.kind = StatementKind::theorem;
    } else if (kind == "lemma") {
        c.kind = StatementKind::lemma;
    } else if (kind == "corollary") {
        c.kind = StatementKind::corollary;
    } else if (kind == "conjecture") {
        c.kind = StatementKind::conjecture;
    } else {
        r.fail("unknown kind '" + kind + "'");
    }
    c.anchor = r.string_field(v, "anchor");
    c.notes = r.string_field(v, "notes");
    c.condition = r.condition(v.contains("condition") ? v["condition"] : json());
    if (v.contains("params")) {
        const auto& p = v["params"];
        c.defaults.n = r.int_list(p, "n");
        c.defaults.d = r.int_list(p, "d");
        c.defaults.p = r.int_list(p, "p");
    }

    std::string family = r.string_field(v, "family", "symbolic");
    if (family == "symbolic") {
        c.family = Family::symbolic;
        SymbolicCase s;
        std::string method = r.string_field(v, "method", "congruence");
        if (method == "congruence") {
            s.method = Method::congruence;
        } else if (method == "parametric") {
            s.method = Method::parametric;
        } else if (method == "pair") {
            s.method = Method::pair;
        } else {
            r.fail("unknown method '" + method + "'");
        }
        s.modulus = r.modulus(r.field(v, "modulus"));
        if (s.method == Method::pair) {
            const auto& pr = r.field(v, "pair");
            s.pair_lhs = r.string_field(pr, "lhs");
            s.pair_rhs = r.string_field(pr, "rhs");
            if (s.pair_lhs.empty() || s.pair_rhs.empty()) r.fail("pair needs 'lhs' and 'rhs' case ids");
        } else {
            s.bound = r.expr_field(v, "bound", {"n", "d"});
            s.summand = r.summand(r.field(v, "summand"));
            s.closed_form = r.closed_form(r.field(v, "closed_form"));
            check_exponent_integrality(r, s.summand, c.defaults);
        }
        if (v.contains("specialized_product")) s.specialized_product = r.product(v["specialized_product"]);
        if (s.method == Method::parametric) {
            if (!s.summand.parametric()) r.fail("parametric case without parametric factors");
        } else {
            if (s.modulus.parametric()) r.fail("parametric modulus factor in a non-parametric case");
            if (s.summand.parametric()) r.fail("parametric factors require method 'parametric'");
        }
        c.body = std::move(s);
    } else if (family == "padic") {
        c.family = Family::padic;
        PadicCase p;
        p.lhs = r.padic_value(r.field(v, "lhs"));
        const auto& rhs = r.field(v, "rhs");
        if (!rhs.is_array() || rhs.empty()) r.fail("'rhs' must be a nonempty array of branches");
        for (const auto& b : rhs) p.rhs.push_back(r.padic_value(b));
        p.threshold = v.value("threshold", std::int64_t{1});
        if (p.threshold < 1) r.fail("threshold must be positive");
        c.body = std::move(p);
    } else if (family == "analytic") {
        c.family = Family::analytic;
        AnalyticCase a;
        std::string check = r.string_field(v, "check");
        if (v.contains("tol")) a.tol = v["tol"].get<double>();
        if (v.contains("q_values")) a.q_values = v["q_values"].get<std::vector<double>>();
        if (check == "q_identity") {
            a.check = AnalyticCheck::q_identity;
            a.summand = r.summand(r.field(v, "summand"));
            a.product = r.product(r.field(v, "product"));
        } else if (check == "pi_formula") {
            a.check = AnalyticCheck::pi_formula;
            a.series = r.classical(r.field(v, "summand"));
            a.target = r.expr_field(v, "target", {"pi"});
            a.terms = v.value("terms", std::int64_t{60});
        } else if (check == "rahman") {
            a.check = AnalyticCheck::rahman;
            a.grid = v.value("grid", std::int64_t{20});
            a.seed = v.value("seed", std::uint64_t{1});
        } else if (check == "gamma_limit") {
            a.check = AnalyticCheck::gamma_limit;
            for (const auto& x : r.field(v, "x")) a.x_values.push_back(r.rational(x));
        } else {
            r.fail("unknown analytic check '" + check + "'");
        }
        if (!(a.tol > 0)) r.fail("tol must be positive");
        c.body = std::move(a);
    } else {
        r.fail("unknown family '" + family + "'");
    }
    return c;
}

}  // namespace detail

inline Registry parse_registry(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("cases") || !doc["cases"].is_array())
        throw RegistryError("registry must be an object with a 'cases' array");
    std::vector<CaseDefinition> cases;
    for (const auto& c : doc["cases"]) cases.push_back(detail::read_case(c));
    Registry reg(std::move(cases));
    for (const auto& c : reg.cases()) {
        if (c.family != Family::symbolic || c.symbolic().method != Method::pair) continue;
        for (const auto* ref : {&c.symbolic().pair_lhs, &c.symbolic().pair_rhs}) {
            const auto* target = reg.find(*ref);
            if (!target) throw RegistryError("case '" + c.id + "': pair references unknown case '" + *ref + "'");
            if (target->family != Family::symbolic || target->symbolic().method != Method::congruence)
                throw RegistryError("case '" + c.id + "': pair member '" + *ref + "' must be a congruence case");
        }
    }
    return reg;
}

inline Registry parse_registry(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw RegistryError(std::string("registry is not valid JSON: ") + e.what());
    }
    return parse_registry(doc);
}

}  // namespace qsc
