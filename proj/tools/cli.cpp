#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>

#include "ffgeom/error.hpp"
#include "ffgeom/hermitian.hpp"
#include "ffgeom/incidence.hpp"
#include "ffgeom/io.hpp"
#include "ffgeom/kakeya.hpp"
#include "ffgeom/nikodym.hpp"
#include "ffgeom/parallel.hpp"
#include "ffgeom/poly.hpp"
#include "ffgeom/suite.hpp"

namespace ffgeom::cli {

namespace {

using json = nlohmann::ordered_json;
using geom::AffineSpace;
using geom::PointSet;
using gf::Field;

class Assertions {
public:
    void check(const std::string& name, bool ok) {
        rows_.push_back({{"check", name}, {"status", ok ? "pass" : "fail"}});
        ok_ = ok_ && ok;
    }
    bool ok() const { return ok_; }
    const json& rows() const { return rows_; }

private:
    json rows_ = json::array();
    bool ok_ = true;
};

using Action = std::function<json(Assertions&)>;

struct Command {
    CLI::App* app;
    std::string path;
    std::string claim;
    Action action;
};

std::string scalar_text(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

std::string csv_cell(const json& v) {
    std::string s = scalar_text(v);
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
    return quoted + "\"";
}

void emit(std::ostream& out, const std::string& format, const json& doc) {
    if (format == "json") {
        out << doc.dump(2) << '\n';
        return;
    }
    const json& result = doc.contains("result") ? doc["result"] : doc;
    if (format == "csv") {
        if (result.contains("records") && result["records"].is_array() && !result["records"].empty() &&
            result["records"][0].is_object()) {
            const auto& recs = result["records"];
            bool first = true;
            for (auto it = recs[0].begin(); it != recs[0].end(); ++it) {
                out << (first ? "" : ",") << it.key();
                first = false;
            }
            out << '\n';
            for (const auto& r : recs) {
                first = true;
                for (auto it = recs[0].begin(); it != recs[0].end(); ++it) {
                    out << (first ? "" : ",") << (r.contains(it.key()) ? csv_cell(r[it.key()]) : "");
                    first = false;
                }
                out << '\n';
            }
            return;
        }
        out << "key,value\n";
        for (auto it = result.begin(); it != result.end(); ++it) out << it.key() << ',' << csv_cell(it.value()) << '\n';
        return;
    }
    if (result.size() == 1 && result.contains("value")) {
        out << scalar_text(result["value"]) << '\n';
        return;
    }
    for (auto it = result.begin(); it != result.end(); ++it) {
        const auto& v = it.value();
        if (v.is_array() && !v.empty() && v[0].is_object()) {
            out << it.key() << ":\n";
            for (const auto& row : v) {
                out << " ";
                for (auto f = row.begin(); f != row.end(); ++f)
                    if (!f.value().is_structured()) out << ' ' << f.key() << '=' << scalar_text(f.value());
                out << '\n';
            }
            continue;
        }
        out << it.key() << ": " << scalar_text(v) << '\n';
    }
    if (doc.contains("assertions"))
        for (const auto& a : doc["assertions"]) out << "[" << a["status"].get<std::string>() << "] " << a["check"].get<std::string>() << '\n';
}

PointSet load_points(const std::string& path) {
    std::istringstream in(io::read_file(path));
    return io::read_points(in);
}

geom::LineFamily load_lines(const std::string& path) {
    std::istringstream in(io::read_file(path));
    return io::read_lines(in);
}

json point_json(const Field& f, const geom::Point& p, unsigned n) {
    json a = json::array();
    for (unsigned i = 0; i < n; ++i) a.push_back(io::format_element(f, p[i]));
    return a;
}

json line_json(const AffineSpace& space, const geom::Line& l) {
    return {{"base", point_json(space.field(), space.point(l.base), space.n())},
            {"dir", point_json(space.field(), space.point(l.dir), space.n())}};
}

// Injects `--key value` for keys of a key=value file that are not already on the command line.
std::vector<std::string> apply_config_overlay(std::vector<std::string> args) {
    std::string path;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    if (path.empty()) return rest;
    std::istringstream in(io::read_file(path));
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                throw Error(Errc::parse_error, "config line without '=': " + line);
            continue;
        }
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (key.empty()) throw Error(Errc::parse_error, "config line with empty key");
        const std::string flag = "--" + key;
        bool present = false;
        for (const auto& a : rest) present = present || a == flag || a.rfind(flag + "=", 0) == 0;
        if (present) continue;
        rest.push_back(flag);
        if (value != "true") rest.push_back(value);
    }
    return rest;
}

json config_echo(const CLI::App& app) {
    json cfg = json::object();
    for (const CLI::Option* opt : app.get_options()) {
        const std::string name = opt->get_single_name();
        if (name == "help" || name.empty()) continue;
        if (opt->count() > 0) {
            const auto& res = opt->results();
            if (res.size() == 1) {
                cfg[name] = res[0];
            } else {
                cfg[name] = res;
            }
        } else if (!opt->get_default_str().empty()) {
            cfg[name] = opt->get_default_str();
        }
    }
    return cfg;
}

struct Registry {
    std::vector<Command> commands;
    void add(CLI::App* app, std::string path, std::string claim, Action action) {
        commands.push_back({app, std::move(path), std::move(claim), std::move(action)});
    }
};

// ---------------------------------------------------------------------------

struct KakeyaOpts {
    std::uint32_t q = 0;
    std::string construction = "qr";
    std::string in, out, witness, report, alpha = "1/5";
    unsigned u = 1;
    std::uint64_t seed = 0;
    std::uint32_t m = 2, retry_cap = 1000;
    bool force = false;
};

void add_kakeya(CLI::App& root, Registry& reg, KakeyaOpts& o) {
    auto* k = root.add_subcommand("kakeya", "Kakeya sets and the multiplicity bounds")->require_subcommand(1);

    auto* build = k->add_subcommand("build", "Build a Kakeya set");
    build->add_option("--q", o.q, "Odd field order")->required();
    build->add_option("--construction", o.construction, "Construction")->check(CLI::IsMember({"qr"}))->capture_default_str();
    build->add_option("--out", o.out, "Write the point set here");
    reg.add(build, "kakeya build", "kakeya-construction", [&o](Assertions& a) {
        const AffineSpace space(Field::of_order(o.q), 3);
        const auto set = kakeya::build_quadratic_residue_set(space);
        const auto check = kakeya::verify_kakeya(space, set);
        const auto bound = kakeya::integer_multiplicity_bound(o.q, 3, 2);
        const auto size = static_cast<std::int64_t>(set.size());
        a.check("verified Kakeya", check.is_kakeya);
        a.check("size <= q((q+1)/2)^2 + q^2", size <= kakeya::quadratic_residue_size_bound(o.q));
        a.check("size >= integer multiplicity bound", size >= bound);
        if (!o.out.empty()) {
            std::ostringstream s;
            io::write_points(s, space.field(), set);
            io::write_file(o.out, s.str());
        }
        return json{{"q", o.q}, {"size", size}, {"ratio", static_cast<double>(size) / (std::pow(o.q, 3))},
                    {"size_bound", kakeya::quadratic_residue_size_bound(o.q)},
                    {"size_formula", kakeya::quadratic_residue_size_exact(o.q)}, {"integer_bound", bound}};
    });

    auto* verify = k->add_subcommand("verify", "Check a point set for a line in every direction");
    verify->add_option("--in", o.in, "Point set file")->required();
    verify->add_option("--witness", o.witness, "Write the witness lines here");
    reg.add(verify, "kakeya verify", "kakeya-verification", [&o](Assertions& a) {
        const auto set = load_points(o.in);
        if (set.n() != 3) throw Error(Errc::out_of_range, "Kakeya verification expects a set in AG(3,q)");
        const AffineSpace space(Field::of_order(set.q()), 3);
        const auto check = kakeya::verify_kakeya(space, set);
        a.check("every direction covered", check.is_kakeya);
        json missing = json::array();
        for (auto d : check.missing) missing.push_back(point_json(space.field(), space.point(d), 3));
        json r{{"q", set.q()}, {"size", set.size()}, {"is_kakeya", check.is_kakeya}, {"missing_directions", missing}};
        if (check.is_kakeya) {
            const auto bound = kakeya::integer_multiplicity_bound(set.q(), 3, 2);
            a.check("size >= integer multiplicity bound", static_cast<std::int64_t>(set.size()) >= bound);
            r["integer_bound"] = bound;
            if (!o.witness.empty()) {
                std::ostringstream s;
                io::write_lines(s, space, geom::LineFamily(space, check.witness.lines));
                io::write_file(o.witness, s.str());
            }
        }
        return r;
    });

    auto* pipe = k->add_subcommand("pipeline", "Run the fractional multiplicity argument");
    pipe->add_option("--q", o.q, "Odd field order")->required();
    pipe->add_option("--u", o.u, "Base multiplicity (1 or 2)")->capture_default_str();
    pipe->add_option("--alpha", o.alpha, "Sampling fraction (rational)")->capture_default_str();
    pipe->add_option("--seed", o.seed, "Seed")->required();
    pipe->add_option("--construction", o.construction, "qr or witness-union")
        ->check(CLI::IsMember({"qr", "witness-union"}))->capture_default_str();
    pipe->add_flag("--force", o.force, "Skip the counting regime test");
    pipe->add_option("--retry-cap", o.retry_cap, "Sampling attempts")->capture_default_str();
    pipe->add_option("--report", o.report, "Also write the report here");
    reg.add(pipe, "kakeya pipeline", "fractional-multiplicity", [&o](Assertions& a) {
        kakeya::FractionalParams p{o.q, o.u, parse_rational(o.alpha)};
        p.validate();
        const AffineSpace space(Field::of_order(o.q), 3);
        const auto qr = kakeya::build_quadratic_residue_set(space);
        const auto check = kakeya::verify_kakeya(space, qr);
        const auto set = o.construction == "qr" ? qr : kakeya::witness_union(space, check.witness);
        const auto rep = kakeya::fractional_pipeline(space, set, check.witness, p, o.seed, {o.retry_cap, o.force});
        a.check("pipeline reached a terminal stage", true);
        json r{{"q", o.q}, {"u", o.u}, {"alpha", to_string(p.alpha)}, {"m", rep.m_approx},
               {"max_total_degree", rep.max_total_degree}, {"monomials", rep.monomials}, {"regime_rhs", rep.regime_rhs},
               {"set_size", rep.set_size}, {"subset_size", rep.subset_size}, {"sample_attempts", rep.sample_attempts},
               {"constraints", rep.constraints}, {"degree", rep.degree}, {"stage", kakeya::stage_name(rep.stage)},
               {"detail", rep.detail}};
        if (rep.shortfall) r["shortfall"] = {{"line", line_json(space, rep.shortfall->line)},
                                             {"imposed_zeros", rep.shortfall->guaranteed_zeros},
                                             {"restriction_degree", rep.shortfall->restriction_degree}};
        return r;
    });

    auto* opt = k->add_subcommand("optimize", "Best fractional multiplicity coefficient");
    reg.add(opt, "kakeya optimize", "fractional-optimum", [](Assertions& a) {
        const auto best = kakeya::optimize_fractional_bound();
        const Rational at2 = kakeya::leading_term_Nq3(Rational(2)) / Rational(4);
        a.check("optimum exceeds 5/24", best.coefficient > 5.0 / 24);
        a.check("coefficient at m=2 is 5/24", at2 == Rational(5, 24));
        return json{{"m_star", best.m_star}, {"coefficient", best.coefficient}, {"branch", best.branch},
                    {"coefficient_at_1.84", kakeya::fractional_coefficient_u1(1.84)}, {"coefficient_at_2", to_string(at2)}};
    });

    auto* bound = k->add_subcommand("bound", "Integer multiplicity lower bound");
    bound->add_option("--q", o.q, "Field order")->required();
    bound->add_option("--m", o.m, "Multiplicity")->capture_default_str();
    reg.add(bound, "kakeya bound", "integer-multiplicity-bound", [&o](Assertions&) {
        return json{{"value", kakeya::integer_multiplicity_bound(o.q, 3, o.m)}};
    });
}

// ---------------------------------------------------------------------------

struct NikodymOpts {
    std::string in, extract, out, generator = "uniform-random", alpha = "1/2", fraction = "0.62";
    std::uint32_t q = 0, trials = 1, cap = 0;
    std::uint64_t seed = 0, lines = 0;
    double alarm = 0.9;
};

void add_nikodym(CLI::App& root, Registry& reg, NikodymOpts& o) {
    auto* n = root.add_subcommand("nikodym", "Nikodym sets and unions of lines")->require_subcommand(1);

    auto* verify = n->add_subcommand("verify", "Check the Nikodym property and extract a witness");
    verify->add_option("--in", o.in, "Point set file")->required();
    verify->add_option("--extract-witness", o.extract, "Write the complement assignment as JSON");
    reg.add(verify, "nikodym verify", "nikodym-verification", [&o](Assertions& a) {
        const auto set = load_points(o.in);
        const AffineSpace space(Field::of_order(set.q()), set.n());
        const auto check = nikodym::verify_nikodym(space, set);
        a.check("every point has a qualifying line", check.is_nikodym);
        json failing = json::array();
        for (auto p : check.failing) failing.push_back(point_json(space.field(), space.point(p), space.n()));
        json r{{"q", set.q()}, {"n", set.n()}, {"size", set.size()}, {"complement", set.universe() - set.size()},
               {"is_nikodym", check.is_nikodym}, {"failing_points", failing}};
        if (check.witness) {
            const auto lines = nikodym::assignment_lines(space, *check.witness);
            const auto stats = incidence::count_incidences(space, set, lines);
            a.check("witness incidences equal (q-1)|complement|",
                    stats.incidences == std::uint64_t{set.q() - 1} * check.witness->assignment.size());
            if (!o.extract.empty()) {
                json w{{"q", set.q()}, {"n", set.n()}, {"assignment", json::array()}};
                for (const auto& [p, l] : check.witness->assignment)
                    w["assignment"].push_back({{"point", point_json(space.field(), space.point(p), space.n())}, {"line", line_json(space, l)}});
                io::write_file(o.extract, w.dump(2) + "\n");
            }
        }
        return r;
    });

    auto* conic = n->add_subcommand("conic-family", "Lines inside planes chosen from a conic dual");
    conic->add_option("--q", o.q, "Field order")->required();
    conic->add_option("--fraction", o.fraction, "Fraction of q used as the plane count")->capture_default_str();
    conic->add_option("--out", o.out, "Write the line family here");
    reg.add(conic, "nikodym conic-family", "union-of-lines-construction", [&o](Assertions& a) {
        const AffineSpace space(Field::of_order(o.q), 3);
        const auto fam = nikodym::build_conic_dual_line_family(space, parse_rational(o.fraction));
        const auto& r = fam.report;
        a.check("no line in three planes", r.max_line_coincidence <= 2);
        a.check("lines >= np q(q+1) - C(np,2)", static_cast<std::int64_t>(r.lines) >= r.lines_lower_bound);
        a.check("points <= np q^2 - (q-1) C(np,2)", static_cast<std::int64_t>(r.covered) <= r.points_expression);
        a.check("points = 1 + np(q^2-1) - (q-1) C(np,2)", static_cast<std::int64_t>(r.covered) == r.points_exact);
        if (!o.out.empty()) {
            std::ostringstream s;
            io::write_lines(s, space, fam.lines);
            io::write_file(o.out, s.str());
        }
        return json{{"q", r.q}, {"planes", r.planes}, {"lines", r.lines}, {"lines_lower_bound", r.lines_lower_bound},
                    {"covered", r.covered}, {"points_expression", r.points_expression}, {"points_exact", r.points_exact},
                    {"max_line_coincidence", r.max_line_coincidence}, {"max_plane_occupancy", r.max_plane_occupancy},
                    {"ratio", r.ratio}};
    });

    auto* thr = n->add_subcommand("threshold", "Limit threshold for the complement fraction");
    reg.add(thr, "nikodym threshold", "nikodym-threshold", [](Assertions& a) {
        const double root = nikodym::golden_ratio_threshold();
        a.check("root^2 + root - 1 = 0 within 1e-10", std::abs(root * root + root - 1) < 1e-10);
        a.check("0.63 violates the limit inequality", !nikodym::limit_inequality_holds(0.63));
        a.check("0.5 satisfies the limit inequality", nikodym::limit_inequality_holds(0.5));
        std::ostringstream s;
        s.precision(12);
        s << root;
        return json{{"root", s.str()}};
    });

    auto* harness = n->add_subcommand("harness", "Explore unions of lines under a plane cap");
    harness->add_option("--generator", o.generator, "uniform-random | plane-capped-random | hermitian | hermitian-tangent | conic-dual")
        ->check(CLI::IsMember({"uniform-random", "plane-capped-random", "hermitian", "hermitian-tangent", "conic-dual"}))
        ->capture_default_str();
    harness->add_option("--q", o.q, "Field order")->required();
    harness->add_option("--trials", o.trials, "Trials")->capture_default_str();
    harness->add_option("--seed", o.seed, "Seed")->required();
    harness->add_option("--lines", o.lines, "Line count for random generators")->capture_default_str();
    harness->add_option("--cap", o.cap, "Most lines per plane (0: floor(q^1.5 / 2))")->capture_default_str();
    harness->add_option("--alpha", o.alpha, "Point fraction for the tangent generator")->capture_default_str();
    harness->add_option("--fraction", o.fraction, "Plane fraction for the conic generator")->capture_default_str();
    harness->add_option("--alarm", o.alarm, "Flag records with covered/q^3 below this")->capture_default_str();
    harness->add_option("--out", o.out, "JSON-lines output");
    reg.add(harness, "nikodym harness", "union-of-lines-conjecture", [&o](Assertions&) {
        nikodym::HarnessConfig cfg;
        cfg.generator = o.generator == "hermitian" ? "hermitian-tangent" : o.generator;
        cfg.q = o.q;
        cfg.trials = o.trials;
        cfg.seed = o.seed;
        cfg.line_count = o.lines;
        cfg.cap = o.cap;
        cfg.alpha = parse_rational(o.alpha);
        cfg.fraction = parse_rational(o.fraction);
        cfg.alarm_ratio = o.alarm;
        const auto records = nikodym::conjecture_harness(cfg);
        json rows = json::array();
        std::string lines;
        std::uint64_t alarms = 0;
        for (const auto& r : records) {
            json row{{"q", r.q}, {"generator", r.generator}, {"seed", r.seed}, {"trial", r.trial}, {"lines", r.lines},
                     {"maxPlaneOccupancy", r.max_plane_occupancy}, {"cap", r.cap}, {"capRespected", r.cap_respected},
                     {"covered", r.covered}, {"ratio", r.ratio}, {"alarm", r.alarm}};
            alarms += r.alarm;
            lines += row.dump() + "\n";
            rows.push_back(std::move(row));
        }
        if (!o.out.empty()) io::write_file(o.out, lines);
        return json{{"trials", records.size()}, {"alarms", alarms}, {"records", rows}};
    });

    auto* ub = n->add_subcommand("union-bound", "Measured union size against the mixing bound");
    ub->add_option("--in", o.in, "Line family file")->required();
    ub->add_option("--fraction", o.fraction, "Required lines as a fraction of q^3")->capture_default_str();
    reg.add(ub, "nikodym union-bound", "union-of-lines-bound", [&o](Assertions& a) {
        const auto lines = load_lines(o.in);
        const AffineSpace space(Field::of_order(lines.q()), lines.n());
        const auto r = nikodym::union_lower_bound_check(space, lines, parse_rational(o.fraction));
        a.check("measured >= implied lower bound", r.measured_at_least_implied);
        return json{{"q", r.q}, {"lines", r.lines}, {"covered", r.covered}, {"incidences", r.incidences},
                    {"implied_lower", r.implied_lower}, {"bound_at_measured", r.bound_at_measured}};
    });

    auto* comp = n->add_subcommand("complement", "Complement size against the mixing bound");
    comp->add_option("--in", o.in, "Point set file")->required();
    reg.add(comp, "nikodym complement", "nikodym-complement-bound", [&o](Assertions& a) {
        const auto set = load_points(o.in);
        const AffineSpace space(Field::of_order(set.q()), set.n());
        const auto r = nikodym::nikodym_complement_bound_check(space, set);
        a.check("witness incidences equal (q-1)|complement|", r.incidences_exact);
        a.check("incidences within the exact mixing bound", r.mixing_admits);
        a.check("mixing discrepancy inequality", r.discrepancy.holds);
        return json{{"q", r.q}, {"complement", r.complement}, {"ratio", r.ratio}, {"threshold", r.threshold},
                    {"incidences", r.incidences}, {"mixing_bound", r.mixing_bound}};
    });
}

// ---------------------------------------------------------------------------

struct HermitianOpts {
    std::uint32_t p = 2;
    unsigned n = 3;
    bool random = false;
    std::uint64_t seed = 0;
    std::string alpha = "1/2", out;
};

void add_hermitian(CLI::App& root, Registry& reg, HermitianOpts& o) {
    auto* h = root.add_subcommand("hermitian", "Hermitian varieties over GF(p^2)")->require_subcommand(1);

    auto* build = h->add_subcommand("build", "Enumerate a Hermitian variety");
    build->add_option("--p", o.p, "Prime; the field is GF(p^2)")->required();
    build->add_option("--n", o.n, "Projective dimension (1..3)")->capture_default_str();
    build->add_flag("--random", o.random, "Use a random Hermitian matrix instead of the identity");
    build->add_option("--seed", o.seed, "Seed for --random");
    reg.add(build, "hermitian build", "hermitian-counts", [&o](Assertions& a) {
        const auto f = Field::make(o.p, 2);
        hermitian::HermitianMatrix m = hermitian::HermitianMatrix::identity(o.n);
        if (o.random) {
            Rng rng(o.seed, 0x4d);
            m = hermitian::HermitianMatrix::random(f, o.n, rng);
        }
        const hermitian::HermitianVariety v(f, m);
        const auto q = static_cast<std::int64_t>(f.q());
        const auto expected = v.rank() == 0 ? static_cast<std::int64_t>(v.space().num_points())
                                            : hermitian::degenerate_count(static_cast<int>(o.n), q, static_cast<int>(v.rank()));
        a.check("point count matches the closed form", static_cast<std::int64_t>(v.points().size()) == expected);
        json matrix = json::array();
        for (unsigned i = 0; i <= o.n; ++i) {
            json row = json::array();
            for (unsigned j = 0; j <= o.n; ++j) row.push_back(io::format_element(f, m.h[i][j]));
            matrix.push_back(row);
        }
        return json{{"q", q}, {"n", o.n}, {"matrix", matrix}, {"rank", v.rank()}, {"points", v.points().size()},
                    {"expected", expected}, {"singular_points", v.singular_points().size()}};
    });

    auto* fam = h->add_subcommand("tangent-family", "Tangent lines at a random fraction of the surface points");
    fam->add_option("--p", o.p, "Prime; the field is GF(p^2)")->required();
    fam->add_option("--alpha", o.alpha, "Point fraction (rational)")->capture_default_str();
    fam->add_option("--seed", o.seed, "Seed")->required();
    fam->add_option("--out", o.out, "Write the affine lines here");
    reg.add(fam, "hermitian tangent-family", "tangent-line-family", [&o](Assertions& a) {
        const auto f = Field::make(o.p, 2);
        const hermitian::HermitianVariety v(f, hermitian::HermitianMatrix::identity(3));
        const auto fam = hermitian::build_tangent_line_family(v, parse_rational(o.alpha), o.seed);
        const auto& r = fam.report;
        a.check("|L| = (q - sqrt q)|P|", r.lines == (f.q() - f.p()) * r.chosen_points);
        a.check("lines distinct", r.lines_distinct);
        a.check("each line meets the variety once", r.lines_meet_variety_once);
        a.check("variety points outside P uncovered", r.outside_points_uncovered);
        if (!o.out.empty()) {
            std::ostringstream s;
            io::write_lines(s, AffineSpace(f, 3), fam.affine);
            io::write_file(o.out, s.str());
        }
        return json{{"q", f.q()}, {"variety_points", r.variety_points}, {"chosen_points", r.chosen_points},
                    {"lines", r.lines}, {"projective_covered", r.projective_covered},
                    {"outside_points", r.variety_points_outside_p}, {"affine_lines", r.affine_lines},
                    {"affine_covered", r.affine_covered}, {"max_plane_occupancy", r.max_plane_occupancy},
                    {"occupancy_reference", r.occupancy_reference}};
    });
}

// ---------------------------------------------------------------------------

struct IncidenceOpts {
    std::uint32_t q = 0, seeds = 1;
    std::uint64_t np = 0, nl = 0, seed = 0;
    std::int64_t incidences = -1;
    std::string points, lines, k = "2", gen = "random";
    bool no_numeric = false;
};

void add_incidence(CLI::App& root, Registry& reg, IncidenceOpts& o) {
    auto* inc = root.add_subcommand("incidence", "Point-line incidences in AG(3,q)")->require_subcommand(1);

    auto* spec = inc->add_subcommand("spectrum", "Singular values of the incidence matrix");
    spec->add_option("--q", o.q, "Field order")->required();
    spec->add_flag("--no-numeric", o.no_numeric, "Skip the numeric eigenvalue check");
    reg.add(spec, "incidence spectrum", "incidence-spectrum", [&o](Assertions& a) {
        const bool numeric = !o.no_numeric && o.q <= 9;
        const auto s = incidence::incidence_spectrum(o.q, numeric);
        json r{{"q", o.q}, {"sigma1", s.sigma1}, {"sigma2", s.sigma2}, {"lambda", s.lambda},
               {"point_degree", s.point_degree}, {"line_degree", s.line_degree}, {"numeric", s.numeric_checked}};
        if (s.numeric_checked) {
            a.check("numeric singular values within 1e-8", s.max_deviation < 1e-8);
            r["numeric_sigma1"] = s.numeric_sigma1;
            r["numeric_sigma2"] = s.numeric_sigma2;
            r["max_deviation"] = s.max_deviation;
        }
        return r;
    });

    auto* bound = inc->add_subcommand("bound", "Mixing upper bound on incidences");
    bound->add_option("--q", o.q, "Field order")->required();
    bound->add_option("--np", o.np, "Number of points")->required();
    bound->add_option("--nl", o.nl, "Number of lines")->required();
    bound->add_option("--incidences", o.incidences, "Test this incidence count against the bound");
    reg.add(bound, "incidence bound", "mixing-incidence-bound", [&o](Assertions& a) {
        const auto b = incidence::mixing_incidence_bound(o.np, o.nl, o.q);
        json r{{"q", o.q}, {"np", o.np}, {"nl", o.nl}, {"bound", b.bound}, {"asymptotic_form", b.asymptotic_form}};
        if (o.incidences >= 0) {
            const bool ok = incidence::mixing_bound_admits(static_cast<std::uint64_t>(o.incidences), o.np, o.nl, o.q);
            a.check("incidences within the bound", ok);
            r["admits"] = ok;
        }
        return r;
    });

    auto* check = inc->add_subcommand("check", "Count incidences and test the mixing inequality");
    check->add_option("--points", o.points, "Point set file")->required();
    check->add_option("--lines", o.lines, "Line family file")->required();
    reg.add(check, "incidence check", "mixing-lemma", [&o](Assertions& a) {
        const auto p = load_points(o.points);
        const auto l = load_lines(o.lines);
        if (p.q() != l.q() || p.n() != l.n()) throw Error(Errc::mismatched_field, "point and line files disagree on q or n");
        const AffineSpace space(Field::of_order(p.q()), p.n());
        const auto r = incidence::mixing_discrepancy_check(space, p, l);
        a.check("mixing inequality", r.holds);
        return json{{"q", p.q()}, {"points", r.stats.points}, {"lines", r.stats.lines}, {"incidences", r.stats.incidences},
                    {"lhs", r.lhs}, {"rhs", r.rhs}};
    });

    auto cover = [&o, &reg](CLI::App* sub, bool planes) {
        sub->add_option("--q", o.q, "Field order")->required();
        sub->add_option("--k", o.k, "Members as a multiple of q (rational)")->capture_default_str();
        sub->add_option("--gen", o.gen, "Generator")->capture_default_str();
        sub->add_option("--seeds", o.seeds, "Number of draws")->capture_default_str();
        sub->add_option("--seed", o.seed, "Base seed")->required();
        const std::string path = planes ? "incidence planes-cover" : "incidence lines-cover";
        reg.add(sub, path, "cover-fraction", [&o, planes](Assertions& a) {
            const AffineSpace space(Field::of_order(o.q), planes ? 3 : 2);
            const auto count = static_cast<std::size_t>(ceil_of(parse_rational(o.k) * static_cast<std::int64_t>(o.q)));
            json rows = json::array();
            std::uint32_t failed = 0;
            for (std::uint32_t i = 0; i < o.seeds; ++i) {
                Rng rng(o.seed, i);
                incidence::CoverReport r;
                if (planes) {
                    r = incidence::cover_fraction_check(space, incidence::make_planes(space, o.gen, count, rng));
                } else if (o.gen == "random") {
                    r = incidence::cover_fraction_check(space, incidence::random_lines(space, count, rng));
                } else if (o.gen == "point-pencil") {
                    r = incidence::cover_fraction_check(space, incidence::point_pencil_lines(space, count, 0, rng));
                } else if (o.gen == "parallel") {
                    r = incidence::cover_fraction_check(space, incidence::parallel_class_lines(space, count));
                } else {
                    throw Error(Errc::parse_error, "unknown line generator '" + o.gen + "'");
                }
                failed += !r.holds;
                rows.push_back({{"draw", i}, {"count", r.count}, {"covered", r.covered}, {"bound", to_double(r.bound)}, {"holds", r.holds}});
            }
            a.check("every draw meets the covering bound", failed == 0);
            return json{{"q", o.q}, {"k", o.k}, {"generator", o.gen}, {"records", rows}};
        });
    };
    cover(inc->add_subcommand("planes-cover", "Points covered by kq planes of AG(3,q)"), true);
    cover(inc->add_subcommand("lines-cover", "Points covered by kq lines of AG(2,q)"), false);
}

// ---------------------------------------------------------------------------

struct PolyOpts {
    unsigned n = 3;
    std::uint32_t q = 0, m1 = 1, m2 = 0;
    std::string m = "1", s1, s2, in, out, at;
};

poly::BasisPtr basis_of(const PolyOpts& o) {
    return poly::MonomialBasis::capped(Field::of_order(o.q), o.n, parse_rational(o.m));
}

PointSet optional_points(const std::string& path, std::uint32_t q, unsigned n) {
    if (path.empty()) return PointSet(q, n);
    auto s = load_points(path);
    if (s.q() != q || s.n() != n) throw Error(Errc::mismatched_field, path + " does not match --q/--n");
    return s;
}

void add_poly(CLI::App& root, Registry& reg, PolyOpts& o) {
    auto* p = root.add_subcommand("poly", "Degree-capped polynomials")->require_subcommand(1);

    auto* count = p->add_subcommand("count", "Monomials with degree < q per variable and total < mq");
    count->add_option("--n", o.n, "Variables")->required();
    count->add_option("--q", o.q, "Field order")->required();
    count->add_option("--m", o.m, "Multiplicity parameter (rational)")->required();
    reg.add(count, "poly count", "monomial-count", [&o](Assertions&) {
        if (o.q < 2) throw Error(Errc::out_of_range, "q must be at least 2");
        return json{{"value", poly::count_capped_monomials(o.n, o.q, parse_rational(o.m))}};
    });

    auto common = [&o](CLI::App* sub) {
        sub->add_option("--q", o.q, "Field order")->required();
        sub->add_option("--n", o.n, "Variables (2 or 3)")->capture_default_str();
        sub->add_option("--m", o.m, "Basis: total degree < m q")->capture_default_str();
    };

    auto* interp = p->add_subcommand("interpolate", "Nonzero polynomial vanishing to given orders");
    common(interp);
    interp->add_option("--s1", o.s1, "First point set")->required();
    interp->add_option("--m1", o.m1, "Order on the first set")->capture_default_str();
    interp->add_option("--s2", o.s2, "Second point set");
    interp->add_option("--m2", o.m2, "Order on the second set")->capture_default_str();
    interp->add_option("--out", o.out, "Write the polynomial here");
    reg.add(interp, "poly interpolate", "interpolation", [&o](Assertions& a) {
        const auto basis = basis_of(o);
        const auto s1 = optional_points(o.s1, o.q, o.n), s2 = optional_points(o.s2, o.q, o.n);
        const auto g = poly::interpolate_vanishing(s1, o.m1, s2, o.m2, basis);
        a.check("interpolant is nonzero", !g.is_zero());
        std::ostringstream s;
        io::write_poly(s, g);
        if (!o.out.empty()) io::write_file(o.out, s.str());
        return json{{"basis", basis->size()}, {"degree", g.degree()}, {"terms", std::count_if(g.coeffs().begin(), g.coeffs().end(), [](gf::Elem c) { return c != 0; })}};
    });

    auto* verify = p->add_subcommand("verify", "Check a polynomial against multiplicity constraints");
    common(verify);
    verify->add_option("--in", o.in, "Polynomial file")->required();
    verify->add_option("--s1", o.s1, "First point set")->required();
    verify->add_option("--m1", o.m1, "Order on the first set")->capture_default_str();
    verify->add_option("--s2", o.s2, "Second point set");
    verify->add_option("--m2", o.m2, "Order on the second set")->capture_default_str();
    reg.add(verify, "poly verify", "interpolation", [&o](Assertions& a) {
        const auto basis = basis_of(o);
        std::istringstream in(io::read_file(o.in));
        const auto g = io::read_poly(in, basis);
        const AffineSpace space(basis->field(), o.n);
        std::uint64_t bad = 0;
        for (const auto& [path, mult] : {std::pair{o.s1, o.m1}, std::pair{o.s2, o.m2}})
            for (auto x : optional_points(path, o.q, o.n).members()) bad += poly::multiplicity_at(g, space.point(x)) < mult;
        a.check("polynomial is nonzero", !g.is_zero());
        a.check("every constraint met", bad == 0);
        return json{{"degree", g.degree()}, {"violations", bad}};
    });

    auto* mult = p->add_subcommand("multiplicity", "Multiplicity of a polynomial at a point");
    common(mult);
    mult->add_option("--in", o.in, "Polynomial file")->required();
    mult->add_option("--at", o.at, "Coordinates, space separated")->required();
    reg.add(mult, "poly multiplicity", "multiplicity", [&o](Assertions& a) {
        const auto basis = basis_of(o);
        std::istringstream in(io::read_file(o.in));
        const auto g = io::read_poly(in, basis);
        std::istringstream coords(o.at);
        geom::Point x{0, 0, 0};
        std::string tok;
        for (unsigned i = 0; i < o.n; ++i) {
            if (!(coords >> tok)) throw Error(Errc::parse_error, "--at needs " + std::to_string(o.n) + " coordinates");
            x[i] = io::parse_element(basis->field(), tok);
        }
        const auto by_shift = poly::multiplicity_at(g, x), by_hasse = poly::multiplicity_via_hasse(g, x);
        a.check("shift and Hasse derivatives agree", by_shift == by_hasse);
        const json v = by_shift == poly::infinite_multiplicity ? json("inf") : json(by_shift);
        return json{{"value", v}};
    });
}

// ---------------------------------------------------------------------------

struct SuiteOpts {
    std::uint32_t max_q = 13;
    std::uint64_t seed = 0;
    std::string report;
};

void add_suite(CLI::App& root, Registry& reg, SuiteOpts& o) {
    auto* s = root.add_subcommand("suite", "Run the acceptance battery");
    s->add_option("--max-q", o.max_q, "Skip field orders above this")->capture_default_str();
    s->add_option("--seed", o.seed, "Seed")->required();
    s->add_option("--report", o.report, "Write the JSON report here (timings go to <report>.timing.json)");
    reg.add(s, "suite", "acceptance", [&o](Assertions& a) {
        const suite::SuiteConfig cfg{o.seed, o.max_q};
        const auto results = suite::run_suite(cfg);
        const auto doc = suite::to_json(cfg, results);
        if (!o.report.empty()) {
            io::write_file(o.report, doc.dump(2) + "\n");
            io::write_file(o.report + ".timing.json", suite::timings_json(results).dump(2) + "\n");
        }
        json rows = json::array();
        for (const auto& r : results) {
            a.check(std::to_string(r.id) + " " + r.name, r.passed);
            rows.push_back({{"id", r.id}, {"name", r.name}, {"claim", r.claim}, {"status", r.passed ? "pass" : "fail"}});
        }
        return json{{"records", rows}};
    });
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Finite-field Kakeya and Nikodym geometry laboratory", "ffgeom"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string format = "text";
    unsigned workers = 1;
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}))->capture_default_str();
    app.add_option("--workers", workers, "Worker threads")->envname("FFGEOM_WORKERS")->capture_default_str();
    app.add_option("--config", "key=value file; command-line flags win");

    Registry reg;
    KakeyaOpts ko;
    NikodymOpts no;
    HermitianOpts ho;
    IncidenceOpts io_opts;
    PolyOpts po;
    SuiteOpts so;
    add_kakeya(app, reg, ko);
    add_nikodym(app, reg, no);
    add_hermitian(app, reg, ho);
    add_incidence(app, reg, io_opts);
    add_poly(app, reg, po);
    add_suite(app, reg, so);

    std::vector<std::string> args;
    try {
        args = apply_config_overlay(raw_args);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_config;
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return exit_ok;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        err << app.help();
        return exit_config;
    }
    set_workers(workers);

    const Command* cmd = nullptr;
    for (const auto& c : reg.commands)
        if (c.app->parsed()) cmd = &c;
    if (!cmd) {
        err << app.help();
        return exit_config;
    }

    json doc;
    doc["schema"] = 1;
    doc["command"] = cmd->path;
    doc["claim"] = cmd->claim;
    doc["config"] = config_echo(*cmd->app);
    Assertions asserts;
    const auto start = std::chrono::steady_clock::now();
    try {
        doc["result"] = cmd->action(asserts);
    } catch (const Error& e) {
        err << "error [" << errc_name(e.code()) << "]: " << e.what() << '\n';
        if (e.code() == Errc::internal) return exit_assertion;
        return exit_config;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_config;
    }
    doc["assertions"] = asserts.rows();
    doc["passed"] = asserts.ok();
    emit(out, format, doc);
    if (cmd->path == "kakeya pipeline" && !ko.report.empty()) {
        io::write_file(ko.report, doc.dump(2) + "\n");
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        io::write_file(ko.report + ".timing.json", json{{"seconds", secs}}.dump() + "\n");
    }
    if (!asserts.ok()) {
        for (const auto& r : asserts.rows())
            if (r["status"] == "fail") err << "assertion failed: " << r["check"].get<std::string>() << '\n';
        return exit_assertion;
    }
    return exit_ok;
}

}  // namespace ffgeom::cli
