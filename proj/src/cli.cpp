#include "sik/cli.hpp"

#include "sik/io.hpp"

#include <CLI11.hpp>

#include <sstream>

namespace sik {

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_violation = 2;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

json envelope(const std::string& command) {
    json j = json::object();
    j["schema"] = schema_version;
    j["command"] = command;
    return j;
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

Rational parse_fraction(const std::string& text, const std::string& flag) {
    try {
        return parse_rational(text);
    } catch (const std::exception&) {
        throw UsageError(flag + ": '" + text + "' is not a rational number");
    }
}

// Loads the config, attaching and cross-checking the regime flags.
GeodesicSystem load_system(const std::string& path, const std::string& regime, int n_flag) {
    auto sys = parse_config(path);
    if (n_flag != 0 && n_flag != sys.n)
        throw UsageError("--n " + std::to_string(n_flag) + " differs from n = " + std::to_string(sys.n) +
                         " in " + path);
    if (!regime.empty()) {
        auto r = parse_regime(regime, sys.n);
        if (sys.regime && !(*sys.regime == r))
            throw UsageError("--regime " + regime + " differs from the regime in " + path);
        sys.regime = r;
    }
    return sys;
}

const Decomposition& find_geodesic(const GeodesicSystem& sys, const std::string& name) {
    if (name.empty()) {
        if (sys.geodesics.size() == 1) return sys.geodesics.front();
        throw UsageError("--name is required when the config lists several geodesics");
    }
    for (const auto& d : sys.geodesics)
        if (d.name == name) return d;
    throw UsageError("no geodesic named '" + name + "'");
}

struct Common {
    std::string config;
    std::string regime;
    int n = 0;
    std::string format = "json";
};

void add_regime(CLI::App* app, Common& c) {
    app->add_option("--regime", c.regime, "Pinching regime")->check(CLI::IsMember({"main", "weak"}));
    app->add_option("--n", c.n, "Sphere dimension, checked against the config");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Index iteration, common index jumps and closed geodesic audits"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("sik 1.0 (") + schema_version + ")");

    // iterate
    Common it;
    std::string it_name;
    long it_m_max = 0;
    auto* iterate = app.add_subcommand("iterate", "Index and nullity of iterates");
    iterate->add_option("--config", it.config, "System JSON")->required()->check(CLI::ExistingFile);
    iterate->add_option("--name", it_name, "Geodesic name");
    iterate->add_option("--m-max", it_m_max, "Last iterate")->required()->check(CLI::Range(1L, 1L << 30));
    iterate->add_option("--format", it.format)->check(CLI::IsMember({"json", "tsv"}));

    // splitting
    Common sp;
    std::string sp_name, sp_turn;
    auto* split = app.add_subcommand("splitting", "Splitting numbers at 1 and at the eigen-turns");
    split->add_option("--config", sp.config, "System JSON")->required()->check(CLI::ExistingFile);
    split->add_option("--name", sp_name, "Geodesic name");
    split->add_option("--turn", sp_turn, "Evaluate only at exp(2 pi i turn), turn = p/q in [0,1)");

    // cijt
    Common cj;
    long cj_bar_m = 0;
    std::string cj_m0 = "1", cj_eps, cj_delta, cj_limit, cj_tuple;
    std::size_t cj_max = 0;
    auto* cijt = app.add_subcommand("cijt", "Common index jump tuples");
    cijt->require_subcommand(1);
    auto* solve_cmd = cijt->add_subcommand("solve", "Enumerate verified tuples");
    solve_cmd->add_option("--config", cj.config)->required()->check(CLI::ExistingFile);
    solve_cmd->add_option("--bar-m", cj_bar_m)->required()->check(CLI::PositiveNumber);
    solve_cmd->add_option("--m0", cj_m0, "N must be a multiple of this");
    solve_cmd->add_option("--epsilon", cj_eps)->required();
    solve_cmd->add_option("--delta", cj_delta, "Near-resonance threshold (defaults to epsilon)");
    solve_cmd->add_option("--n-limit", cj_limit)->required();
    solve_cmd->add_option("--max-tuples", cj_max, "Stop after this many tuples (0 = all)");
    add_regime(solve_cmd, cj);
    auto* verify_cmd = cijt->add_subcommand("verify", "Check a tuple exactly");
    verify_cmd->add_option("--config", cj.config)->required()->check(CLI::ExistingFile);
    verify_cmd->add_option("--tuple", cj_tuple)->required()->check(CLI::ExistingFile);
    verify_cmd->add_option("--bar-m", cj_bar_m)->required()->check(CLI::PositiveNumber);
    verify_cmd->add_option("--delta", cj_delta);
    add_regime(verify_cmd, cj);

    // betti
    int bt_n = 0;
    long bt_q_max = 0;
    std::string bt_format = "json";
    auto* betti_cmd = app.add_subcommand("betti", "Betti numbers of the loop space pair");
    betti_cmd->add_option("--n", bt_n)->required()->check(CLI::Range(3, 1 << 20));
    betti_cmd->add_option("--q-max", bt_q_max)->required()->check(CLI::Range(0L, 1L << 24));
    betti_cmd->add_option("--format", bt_format)->check(CLI::IsMember({"json", "tsv"}));

    // morse-check
    int mc_n = 0;
    std::string mc_file, mc_lo, mc_hi;
    auto* morse_cmd = app.add_subcommand("morse-check", "Morse inequalities against the Betti numbers");
    morse_cmd->add_option("--n", mc_n)->required()->check(CLI::Range(3, 1 << 20));
    morse_cmd->add_option("--morse", mc_file, "JSON object degree -> count")->required()->check(CLI::ExistingFile);
    morse_cmd->add_option("--q-lo", mc_lo)->required();
    morse_cmd->add_option("--q-hi", mc_hi)->required();

    // audit
    Common au;
    long au_bar_m = 3;
    std::string au_eps, au_limit, au_m0, au_tuple;
    std::size_t au_cap = 10'000;
    auto* audit_cmd = app.add_subcommand("audit", "Window audit of a finite geodesic system");
    audit_cmd->add_option("--config", au.config)->required()->check(CLI::ExistingFile);
    add_regime(audit_cmd, au);
    audit_cmd->add_option("--bar-m", au_bar_m)->required();
    audit_cmd->add_option("--epsilon", au_eps, "Required unless --tuple is given");
    audit_cmd->add_option("--n-limit", au_limit, "Search bound for the tuple");
    audit_cmd->add_option("--m0", au_m0, "Tuple search step (defaults to n-1)");
    audit_cmd->add_option("--tuple", au_tuple, "Use this tuple instead of searching")->check(CLI::ExistingFile);
    audit_cmd->add_option("--cap", au_cap, "Assignment enumeration cap");
    audit_cmd->add_option("--format", au.format)->check(CLI::IsMember({"json", "text"}));

    // weak-count
    Common wk;
    auto* weak_cmd = app.add_subcommand("weak-count", "Counting argument in the weak regime");
    weak_cmd->add_option("--config", wk.config)->required()->check(CLI::ExistingFile);
    add_regime(weak_cmd, wk);
    weak_cmd->add_option("--format", wk.format)->check(CLI::IsMember({"json", "text"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*iterate) {
            auto sys = load_system(it.config, "", 0);
            const auto& d = find_geodesic(sys, it_name);
            if (it.format == "tsv") {
                out << "m\tindex\tnullity\n";
                for (long m = 1; m <= it_m_max; ++m) out << m << "\t" << index(d, m) << "\t" << nullity(d, m) << "\n";
                return exit_ok;
            }
            json j = envelope("iterate");
            j["name"] = d.name;
            j["average_index"] = scalar_to_json(average_index(d));
            json rows = json::array();
            for (long m = 1; m <= it_m_max; ++m)
                rows.push_back(json{{"m", m}, {"index", int_to_json(index(d, m))}, {"nullity", int_to_json(nullity(d, m))}});
            j["rows"] = rows;
            emit(out, j);
            return exit_ok;
        }

        if (*split) {
            auto sys = load_system(sp.config, "", 0);
            const auto& d = find_geodesic(sys, sp_name);
            std::vector<ExactScalar> turns;
            if (!sp_turn.empty()) {
                auto t = parse_fraction(sp_turn, "--turn");
                if (t < 0 || t >= 1) throw UsageError("--turn must lie in [0,1)");
                turns.push_back(ExactScalar(t));
            } else {
                turns.push_back(ExactScalar(0));
                for (auto& t : eigen_turns(d)) turns.push_back(t);
            }
            json j = envelope("splitting");
            j["name"] = d.name;
            json rows = json::array();
            for (const auto& t : turns) {
                auto s = splitting(d, UnitPoint::at(t));
                rows.push_back(json{{"turn", scalar_to_json(t)}, {"s_plus", s.s_plus}, {"s_minus", s.s_minus}});
            }
            j["rows"] = rows;
            j["s_plus_one"] = s_plus_one(d);
            j["s_minus_total"] = big_c(d);
            emit(out, j);
            return exit_ok;
        }

        if (*solve_cmd) {
            auto sys = load_system(cj.config, cj.regime, cj.n);
            SolveOptions opt;
            opt.bar_m = cj_bar_m;
            opt.M0 = Int(cj_m0);
            opt.epsilon = parse_fraction(cj_eps, "--epsilon");
            if (!cj_delta.empty()) opt.delta = parse_fraction(cj_delta, "--delta");
            opt.n_limit = Int(cj_limit);
            opt.regime = sys.regime;
            SolveStats stats;
            auto tuples = solve_all(sys.geodesics, opt, cj_max == 0 ? std::numeric_limits<std::size_t>::max() : cj_max,
                                    &stats);
            json j = envelope("cijt solve");
            j["range"] = json{{"M0", int_to_json(opt.M0)}, {"n_limit", int_to_json(opt.n_limit)}};
            j["tuples"] = json::array();
            for (const auto& t : tuples) j["tuples"].push_back(tuple_to_json(t));
            j["stats"] = to_json(stats);
            if (tuples.empty())
                j["note"] = "no tuple with N a multiple of " + opt.M0.get_str() + " up to " + opt.n_limit.get_str();
            emit(out, j);
            return exit_ok;
        }

        if (*verify_cmd) {
            auto sys = load_system(cj.config, cj.regime, cj.n);
            auto t = tuple_from_json(read_json_file(cj_tuple));
            VerifyOptions vo;
            if (!cj_delta.empty()) vo.delta = parse_fraction(cj_delta, "--delta");
            vo.regime = sys.regime;
            auto rep = verify(t, sys.geodesics, cj_bar_m, vo);
            json j = envelope("cijt verify");
            j["tuple"] = tuple_to_json(t);
            j["report"] = to_json(rep);
            emit(out, j);
            return rep.ok() ? exit_ok : exit_violation;
        }

        if (*betti_cmd) {
            if (bt_format == "tsv") {
                out << "q\tbetti\n";
                for (long q = 0; q <= bt_q_max; ++q) out << q << "\t" << betti(bt_n, q) << "\n";
                return exit_ok;
            }
            json j = envelope("betti");
            j["n"] = bt_n;
            json rows = json::array();
            for (long q = 0; q <= bt_q_max; ++q) rows.push_back(json{{"q", q}, {"betti", betti(bt_n, q)}});
            j["rows"] = rows;
            emit(out, j);
            return exit_ok;
        }

        if (*morse_cmd) {
            auto raw = read_json_file(mc_file);
            if (!raw.is_object()) throw SchemaError("", "expected an object mapping degrees to counts");
            std::map<Int, Int> morse;
            for (auto e = raw.begin(); e != raw.end(); ++e)
                morse[int_from_json(json(e.key()), e.key())] = int_from_json(e.value(), e.key());
            auto rep = morse_check(morse, mc_n, Int(mc_lo), Int(mc_hi));
            json j = envelope("morse-check");
            j["n"] = mc_n;
            j["report"] = to_json(rep);
            emit(out, j);
            return rep.ok() ? exit_ok : exit_violation;
        }

        if (*audit_cmd) {
            auto sys = load_system(au.config, au.regime, au.n);
            if (!sys.regime) throw UsageError("audit needs --regime");
            if (au_bar_m < 3) throw UsageError("--bar-m must be >= 3 for the audit");
            AuditOptions ao;
            ao.bar_m = au_bar_m;
            ao.assignment_cap = au_cap;
            std::optional<JumpTuple> tuple;
            SolveStats stats;
            if (!au_tuple.empty()) {
                tuple = tuple_from_json(read_json_file(au_tuple));
                if (!au_eps.empty() && tuple->epsilon != parse_fraction(au_eps, "--epsilon"))
                    throw UsageError("--epsilon differs from the tuple's epsilon");
            } else {
                if (au_limit.empty()) throw UsageError("audit needs --n-limit or --tuple");
                if (au_eps.empty()) throw UsageError("audit needs --epsilon to search for a tuple");
                const Rational eps = parse_fraction(au_eps, "--epsilon");
                require_gated(sys);
                SolveOptions opt;
                opt.bar_m = au_bar_m;
                opt.M0 = au_m0.empty() ? Int(sys.n - 1) : Int(au_m0);
                opt.epsilon = eps;
                opt.n_limit = Int(au_limit);
                opt.regime = sys.regime;
                auto found = solve_all(sys.geodesics, opt, 1, &stats);
                if (!found.empty()) tuple = found.front();
            }
            json j = envelope("audit");
            if (!tuple) {
                j["verdict"] = "inconclusive";
                j["note"] = "no verified tuple up to --n-limit";
                j["stats"] = to_json(stats);
                emit(out, j);
                return exit_ok;
            }
            auto rep = window_assign(sys, *tuple, ao);
            json body = to_json(rep);
            for (auto e = body.begin(); e != body.end(); ++e) j[e.key()] = e.value();
            json mirrors = json::array();
            for (std::size_t k = 0; k < sys.geodesics.size(); ++k)
                mirrors.push_back(to_json(lemma42_check(sys.geodesics[k], tuple->N, tuple->m[k], sys.n)));
            j["mirror_checks"] = mirrors;
            if (sys.regime->kind == PinchingRegime::Kind::main) j["census"] = to_json(hyperbolic_census(sys, *tuple, ao));
            if (au.format == "text") {
                for (const auto& line : rep.trace) out << line << "\n";
            } else {
                emit(out, j);
            }
            return rep.verdict == AuditReport::Verdict::contradiction ? exit_violation : exit_ok;
        }

        if (*weak_cmd) {
            auto sys = load_system(wk.config, wk.regime, wk.n);
            if (!sys.regime) throw UsageError("weak-count needs --regime weak");
            auto rep = weak_regime_count(sys);
            if (wk.format == "text") {
                for (const auto& line : rep.trace) out << line << "\n";
            } else {
                json j = envelope("weak-count");
                json body = to_json(rep);
                for (auto e = body.begin(); e != body.end(); ++e) j[e.key()] = e.value();
                emit(out, j);
            }
            return rep.consistent ? exit_ok : exit_violation;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}

}  // namespace sik
