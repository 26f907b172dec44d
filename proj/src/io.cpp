#include "sik/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace sik {

SchemaError::SchemaError(std::string field, const std::string& message)
    : std::invalid_argument((field.empty() ? std::string("<root>") : field) + ": " + message),
      field_(std::move(field)) {}

namespace {

std::string sub(const std::string& field, const std::string& key) {
    return field.empty() ? key : field + "." + key;
}

std::string at(const std::string& field, std::size_t k) { return field + "[" + std::to_string(k) + "]"; }

const json& require(const json& obj, const std::string& field, const std::string& key) {
    auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(sub(field, key), "missing required field");
    return *it;
}

void require_object(const json& j, const std::string& field) {
    if (!j.is_object()) throw SchemaError(field, "expected an object");
}

void reject_unknown(const json& obj, const std::string& field, const std::set<std::string>& known) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!known.count(it.key())) throw SchemaError(sub(field, it.key()), "unknown field");
}

int small_int_from_json(const json& j, const std::string& field) {
    Int v = int_from_json(j, field);
    if (!v.fits_sint_p()) throw SchemaError(field, "value out of range");
    return static_cast<int>(v.get_si());
}

int count_from_json(const json& j, const std::string& field) {
    int v = small_int_from_json(j, field);
    if (v < 0) throw SchemaError(field, "count must be >= 0");
    return v;
}

json angles_to_json(const std::vector<Angle>& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(scalar_to_json(x.turn));
    return a;
}

std::vector<Angle> angles_from_json(const json& j, const std::string& field) {
    if (!j.is_array()) throw SchemaError(field, "expected an array of angles");
    std::vector<Angle> out;
    for (std::size_t k = 0; k < j.size(); ++k) out.push_back({scalar_from_json(j[k], at(field, k))});
    return out;
}

json opt_int(const std::optional<Int>& v) { return v ? int_to_json(*v) : json(nullptr); }

const std::set<std::string> decomposition_keys{
    "name", "i1", "p_minus", "p_zero", "p_plus", "q_minus", "q_zero", "q_plus",
    "rot_rational", "rot_irrational", "n2_nontrivial_rational", "n2_nontrivial_irrational",
    "n2_trivial_rational", "n2_trivial_irrational", "h_plus", "h_minus"};

}  // namespace

json int_to_json(const Int& v) {
    if (v.fits_slong_p()) return json(static_cast<std::int64_t>(v.get_si()));
    return json(v.get_str());
}

Int int_from_json(const json& j, const std::string& field) {
    if (j.is_number_integer()) {
        if (j.is_number_unsigned()) return Int(std::to_string(j.get<std::uint64_t>()));
        return Int(std::to_string(j.get<std::int64_t>()));
    }
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        Int v;
        std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
        if (s.size() == start || s.find_first_not_of("0123456789", start) != std::string::npos ||
            v.set_str(s[0] == '+' ? s.substr(1) : s, 10) != 0)
            throw SchemaError(field, "'" + s + "' is not an integer");
        return v;
    }
    throw SchemaError(field, "expected an integer");
}

json rational_to_json(const Rational& q) {
    return json::array({int_to_json(q.get_num()), int_to_json(q.get_den())});
}

Rational rational_from_json(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2) throw SchemaError(field, "expected a rational [num, den]");
    Int num = int_from_json(j[0], at(field, 0));
    Int den = int_from_json(j[1], at(field, 1));
    if (den == 0) throw SchemaError(at(field, 1), "zero denominator");
    return make_rational(num, den);
}

json scalar_to_json(const ExactScalar& x) {
    if (x.is_rational()) return rational_to_json(x.rational_part());
    json j = json::object();
    j["a"] = rational_to_json(x.rational_part());
    j["b"] = rational_to_json(x.surd_coefficient());
    j["d"] = int_to_json(x.radicand());
    return j;
}

ExactScalar scalar_from_json(const json& j, const std::string& field) {
    if (j.is_array()) return ExactScalar(rational_from_json(j, field));
    if (!j.is_object()) throw SchemaError(field, "expected a rational [num, den] or a surd {a, b, d}");
    reject_unknown(j, field, {"a", "b", "d"});
    Rational a = rational_from_json(require(j, field, "a"), sub(field, "a"));
    Rational b = rational_from_json(require(j, field, "b"), sub(field, "b"));
    Int d = int_from_json(require(j, field, "d"), sub(field, "d"));
    if (b == 0) throw SchemaError(sub(field, "b"), "surd coefficient must be nonzero");
    try {
        return ExactScalar::surd(a, b, d);
    } catch (const std::invalid_argument& e) {
        throw SchemaError(sub(field, "d"), e.what());
    }
}

json decomposition_to_json(const Decomposition& d) {
    json j = json::object();
    j["name"] = d.name;
    j["i1"] = int_to_json(d.i1);
    j["p_minus"] = d.p_minus;
    j["p_zero"] = d.p_zero;
    j["p_plus"] = d.p_plus;
    j["q_minus"] = d.q_minus;
    j["q_zero"] = d.q_zero;
    j["q_plus"] = d.q_plus;
    j["rot_rational"] = angles_to_json(d.rot_rational);
    j["rot_irrational"] = angles_to_json(d.rot_irrational);
    j["n2_nontrivial_rational"] = angles_to_json(d.n2_nontrivial_rational);
    j["n2_nontrivial_irrational"] = angles_to_json(d.n2_nontrivial_irrational);
    j["n2_trivial_rational"] = angles_to_json(d.n2_trivial_rational);
    j["n2_trivial_irrational"] = angles_to_json(d.n2_trivial_irrational);
    j["h_plus"] = d.h_plus;
    j["h_minus"] = d.h_minus;
    return j;
}

Decomposition decomposition_from_json(const json& j, const std::string& field) {
    require_object(j, field);
    reject_unknown(j, field, decomposition_keys);
    Decomposition d;
    if (auto it = j.find("name"); it != j.end()) {
        if (!it->is_string()) throw SchemaError(sub(field, "name"), "expected a string");
        d.name = it->get<std::string>();
    }
    d.i1 = int_from_json(require(j, field, "i1"), sub(field, "i1"));
    auto count = [&](const char* key) { return count_from_json(require(j, field, key), sub(field, key)); };
    auto angles = [&](const char* key) { return angles_from_json(require(j, field, key), sub(field, key)); };
    d.p_minus = count("p_minus");
    d.p_zero = count("p_zero");
    d.p_plus = count("p_plus");
    d.q_minus = count("q_minus");
    d.q_zero = count("q_zero");
    d.q_plus = count("q_plus");
    d.rot_rational = angles("rot_rational");
    d.rot_irrational = angles("rot_irrational");
    d.n2_nontrivial_rational = angles("n2_nontrivial_rational");
    d.n2_nontrivial_irrational = angles("n2_nontrivial_irrational");
    d.n2_trivial_rational = angles("n2_trivial_rational");
    d.n2_trivial_irrational = angles("n2_trivial_irrational");
    d.h_plus = count("h_plus");
    d.h_minus = count("h_minus");
    return d;
}

json system_to_json(const GeodesicSystem& s) {
    json j = json::object();
    j["n"] = s.n;
    if (s.regime) j["regime"] = s.regime->name();
    j["geodesics"] = json::array();
    for (const auto& d : s.geodesics) j["geodesics"].push_back(decomposition_to_json(d));
    if (s.axiom_j0) j["axiom_j0"] = json{{"index", *s.axiom_j0}};
    return j;
}

GeodesicSystem system_from_json(const json& j) {
    require_object(j, "");
    reject_unknown(j, "", {"n", "regime", "geodesics", "axiom_j0"});
    GeodesicSystem s;
    s.n = small_int_from_json(require(j, "", "n"), "n");
    if (s.n < 2) throw SchemaError("n", "sphere dimension must be >= 2");
    if (auto it = j.find("regime"); it != j.end()) {
        if (!it->is_string()) throw SchemaError("regime", "expected \"main\" or \"weak\"");
        try {
            s.regime = parse_regime(it->get<std::string>(), s.n);
        } catch (const std::invalid_argument& e) {
            throw SchemaError("regime", e.what());
        }
    }
    const auto& g = require(j, "", "geodesics");
    if (!g.is_array() || g.empty()) throw SchemaError("geodesics", "expected a non-empty array");
    for (std::size_t k = 0; k < g.size(); ++k) {
        const std::string f = at("geodesics", k);
        auto d = decomposition_from_json(g[k], f);
        if (d.name.empty()) d.name = "c" + std::to_string(k + 1);
        auto res = validate(d, s.n);
        for (const auto& issue : res.issues)
            if (issue.severity == Severity::error) throw SchemaError(sub(f, issue.field), issue.message);
        s.geodesics.push_back(std::move(d));
    }
    if (auto it = j.find("axiom_j0"); it != j.end()) {
        require_object(*it, "axiom_j0");
        reject_unknown(*it, "axiom_j0", {"index"});
        int k = small_int_from_json(require(*it, "axiom_j0", "index"), "axiom_j0.index");
        if (k < 0 || static_cast<std::size_t>(k) >= s.geodesics.size())
            throw SchemaError("axiom_j0.index", "no geodesic with index " + std::to_string(k));
        s.axiom_j0 = static_cast<std::size_t>(k);
    }
    try {
        validate_system(s);
    } catch (const PreconditionError& e) {
        throw SchemaError(s.axiom_j0 ? "axiom_j0" : "geodesics", e.what());
    }
    return s;
}

json tuple_to_json(const JumpTuple& t) {
    json j = json::object();
    j["N"] = int_to_json(t.N);
    j["m"] = json::array();
    for (const auto& m : t.m) j["m"].push_back(int_to_json(m));
    j["chi"] = t.chi;
    j["bar_M"] = int_to_json(t.bar_M);
    j["epsilon"] = rational_to_json(t.epsilon);
    j["M0"] = int_to_json(t.M0);
    return j;
}

JumpTuple tuple_from_json(const json& j, const std::string& field) {
    require_object(j, field);
    reject_unknown(j, field, {"schema", "N", "m", "chi", "bar_M", "epsilon", "M0"});
    JumpTuple t;
    t.N = int_from_json(require(j, field, "N"), sub(field, "N"));
    const auto& m = require(j, field, "m");
    const auto& chi = require(j, field, "chi");
    if (!m.is_array() || m.empty()) throw SchemaError(sub(field, "m"), "expected a non-empty array");
    if (!chi.is_array()) throw SchemaError(sub(field, "chi"), "expected an array");
    if (chi.size() != m.size()) throw SchemaError(sub(field, "chi"), "length differs from m");
    for (std::size_t k = 0; k < m.size(); ++k) t.m.push_back(int_from_json(m[k], at(sub(field, "m"), k)));
    for (std::size_t k = 0; k < chi.size(); ++k)
        t.chi.push_back(small_int_from_json(chi[k], at(sub(field, "chi"), k)));
    t.bar_M = int_from_json(require(j, field, "bar_M"), sub(field, "bar_M"));
    t.epsilon = rational_from_json(require(j, field, "epsilon"), sub(field, "epsilon"));
    t.M0 = int_from_json(require(j, field, "M0"), sub(field, "M0"));
    return t;
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
            if (text[k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw SchemaError("", path.string() + ":" + std::to_string(line) + ":" + std::to_string(col) +
                                  ": invalid JSON");
    }
}

GeodesicSystem parse_config(const std::filesystem::path& path) { return system_from_json(read_json_file(path)); }

json to_json(const SolveStats& s) {
    return json{{"scanned", int_to_json(s.scanned)},
                {"fraction_matches", int_to_json(s.fraction_matches)},
                {"too_small", int_to_json(s.too_small)},
                {"verify_rejections", int_to_json(s.verify_rejections)},
                {"emitted", int_to_json(s.emitted)}};
}

json to_json(const VerifyReport& r) {
    json v = json::array();
    for (const auto& x : r.violations)
        v.push_back(json{{"identity", x.identity}, {"k", x.k}, {"m", opt_int(x.m)}, {"lhs", x.lhs}, {"rhs", x.rhs}});
    return json{{"ok", r.ok()}, {"violations", v}};
}

json to_json(const GateResult& r) {
    json f = json::array();
    for (const auto& x : r.failures)
        f.push_back(json{{"m", opt_int(x.m)}, {"lhs", x.lhs}, {"rhs", x.rhs}, {"message", x.message}});
    return json{{"ok", r.ok()}, {"checked_up_to", int_to_json(r.checked_up_to)}, {"failures", f}};
}

json to_json(const MorseReport& r) {
    json rows = json::array();
    for (const auto& x : r.rows)
        rows.push_back(json{{"q", int_to_json(x.q)},
                            {"morse", int_to_json(x.morse)},
                            {"betti", x.betti},
                            {"morse_alternating", int_to_json(x.morse_alternating)},
                            {"betti_alternating", int_to_json(x.betti_alternating)},
                            {"pointwise_ok", x.pointwise_ok},
                            {"alternating_ok", x.alternating_ok}});
    json j{{"ok", r.ok()}, {"rows", rows}, {"first_violation", nullptr}};
    if (r.first_violation)
        j["first_violation"] = json{{"q", int_to_json(r.first_violation->q)},
                                    {"kind", r.first_violation->alternating ? "alternating" : "pointwise"},
                                    {"lhs", int_to_json(r.first_violation->lhs)},
                                    {"rhs", int_to_json(r.first_violation->rhs)}};
    return j;
}

json to_json(const Lemma42Report& r) {
    json checks = json::array();
    for (const auto& c : r.checks) checks.push_back(json{{"name", c.name}, {"ok", c.ok}, {"lhs", c.lhs}, {"rhs", c.rhs}});
    return json{{"ok", r.ok()},
                {"top_first", int_to_json(r.top_first)},
                {"top_second", int_to_json(r.top_second)},
                {"bound_first", int_to_json(r.bound_first)},
                {"bound_second", int_to_json(r.bound_second)},
                {"slack_first", int_to_json(r.slack_first)},
                {"checks", checks}};
}

json to_json(const AuditReport& r) {
    json j = json::object();
    j["verdict"] = verdict_name(r.verdict);
    j["step"] = r.step;
    j["explanation"] = r.explanation;
    j["blocking_degree"] = opt_int(r.blocking_degree);
    j["tuple"] = tuple_to_json(r.tuple);
    j["window_G1"] = json::array({int_to_json(r.g1_lo), int_to_json(r.g1_hi)});
    j["window_G2"] = json::array({int_to_json(r.g2_lo), int_to_json(r.g2_hi)});
    j["degree_range"] = json::array({int_to_json(r.degree_lo), int_to_json(r.degree_hi)});
    json cands = json::array();
    for (const auto& c : r.candidates)
        cands.push_back(json{{"geodesic", c.pair.geodesic},
                             {"m", int_to_json(c.pair.m)},
                             {"offset", int_to_json(c.offset)},
                             {"low", int_to_json(c.support.low())},
                             {"high", int_to_json(c.support.high())}});
    j["candidates"] = cands;
    json assigns = json::array();
    for (const auto& a : r.assignments)
        assigns.push_back(json{{"i", int_to_json(a.i)},
                               {"degree", int_to_json(a.degree)},
                               {"geodesic", a.pair.geodesic},
                               {"m", int_to_json(a.pair.m)},
                               {"pattern", pattern_name(a.pattern)}});
    j["assignments"] = assigns;
    json morse = json::object();
    for (const auto& [q, v] : r.witness_morse) morse[q.get_str()] = int_to_json(v);
    j["witness_morse"] = morse;
    j["pivot_max_morse"] = r.pivot_max_morse ? int_to_json(*r.pivot_max_morse) : json("unbounded");
    j["pivot_betti"] = r.pivot_betti;
    j["assignments_enumerated"] = r.assignments_enumerated;
    j["enumeration_capped"] = r.enumeration_capped;
    j["first_window_center_only"] = r.first_window_center_only;
    j["second_window_mirror_only"] = r.second_window_mirror_only;
    j["axiom_consistent"] = r.axiom_consistent;
    j["trace"] = r.trace;
    return j;
}

json to_json(const CensusReport& r) {
    return json{{"count", r.count},
                {"bound", r.bound},
                {"forced", r.forced},
                {"impossible", r.impossible},
                {"assignment_found", r.assignment_found}};
}

json to_json(const WeakCountReport& r) {
    json a = json::object();
    for (const auto& [q, j] : r.assignment) a[q.get_str()] = j;
    return json{{"lower_bound", int_to_json(r.lower_bound)},
                {"consistent", r.consistent},
                {"assignment", a},
                {"blocking", r.blocking},
                {"trace", r.trace}};
}

}  // namespace sik
