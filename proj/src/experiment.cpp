#include "tlw/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "tlw/duality.hpp"
#include "tlw/maximal.hpp"
#include "tlw/phitransform.hpp"

namespace tlw {

namespace fs = std::filesystem;

// ---------------------------------------------------------------- config

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"ap-audit", "duality", "maximal", "phitransform", "seqnorms",
                                                   "xclass"};
    return names;
}

namespace {

void check_keys(const Json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
            throw ConfigError(path.empty() ? key : path + "." + key, "unknown field");
    }
}

int get_int(const Json& obj, const std::string& path, const char* key, int fallback) {
    if (!obj.contains(key)) return fallback;
    const Json& v = obj[key];
    if (!v.is_number_integer()) throw ConfigError(path + "." + key, "expected an integer");
    return v.get<int>();
}

double get_number(const Json& obj, const std::string& path, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const Json& v = obj[key];
    if (!v.is_number()) throw ConfigError(path + "." + key, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(path + "." + key, "expected a finite number");
    return x;
}

}  // namespace

ExperimentConfig parse_config(const Json& doc, const fs::path& base_dir) {
    ExperimentConfig cfg;
    cfg.base_dir = base_dir;
    cfg.source = doc;
    check_keys(doc, "", {"grid", "weight", "suite", "trials", "seed", "tolerances"});

    if (doc.contains("grid")) {
        const Json& g = doc["grid"];
        check_keys(g, "grid", {"n", "L", "J", "k_min", "k_max"});
        cfg.grid.n = get_int(g, "grid", "n", cfg.grid.n);
        cfg.grid.L = get_int(g, "grid", "L", cfg.grid.L);
        cfg.grid.J = get_int(g, "grid", "J", cfg.grid.J);
        cfg.grid.k_min = get_int(g, "grid", "k_min", cfg.grid.k_min);
        cfg.grid.k_max = get_int(g, "grid", "k_max", cfg.grid.k_max);
    }
    try {
        Grid(cfg.grid.n, cfg.grid.L, cfg.grid.J, cfg.grid.k_min, cfg.grid.k_max);
    } catch (const RangeError& e) {
        throw ConfigError("grid", e.what());
    }

    if (doc.contains("weight")) {
        const Json& w = doc["weight"];
        check_keys(w, "weight", {"kind", "s", "alpha", "file", "p", "alpha1", "alpha2", "sigma1", "sigma2"});
        if (w.contains("kind")) {
            if (!w["kind"].is_string()) throw ConfigError("weight.kind", "expected a string");
            cfg.weight.kind = w["kind"].get<std::string>();
        }
        if (cfg.weight.kind != "exp2" && cfg.weight.kind != "power" && cfg.weight.kind != "grid")
            throw ConfigError("weight.kind", "must be one of exp2, power, grid");
        cfg.weight.s = get_number(w, "weight", "s", 0.0);
        cfg.weight.alpha = get_number(w, "weight", "alpha", 0.0);
        if (cfg.weight.kind == "grid") {
            if (!w.contains("file") || !w["file"].is_string())
                throw ConfigError("weight.file", "required string for kind grid");
            cfg.weight.file = w["file"].get<std::string>();
        } else if (w.contains("file")) {
            throw ConfigError("weight.file", "only valid for kind grid");
        }
        WeightMeta& m = cfg.weight.meta;
        m.p = get_number(w, "weight", "p", 2.0);
        m.alpha1 = get_number(w, "weight", "alpha1", cfg.weight.s);
        m.alpha2 = get_number(w, "weight", "alpha2", cfg.weight.s);
        m.sigma1 = get_number(w, "weight", "sigma1", 2.0);
        m.sigma2 = get_number(w, "weight", "sigma2", std::max(2.0, m.p));
        if (!(m.p >= 1.0)) throw ConfigError("weight.p", "must be >= 1");
        if (!(m.sigma1 > 0.0)) throw ConfigError("weight.sigma1", "must be positive");
        if (!(m.sigma2 > 0.0)) throw ConfigError("weight.sigma2", "must be positive");
    } else {
        cfg.weight.meta = WeightMeta{2.0, 0.0, 0.0, 2.0, 2.0};
    }

    std::set<std::string> suites;
    if (doc.contains("suite")) {
        const Json& s = doc["suite"];
        std::vector<std::string> items;
        if (s.is_string()) {
            items.push_back(s.get<std::string>());
        } else if (s.is_array()) {
            for (std::size_t i = 0; i < s.size(); ++i) {
                if (!s[i].is_string()) throw ConfigError("suite[" + std::to_string(i) + "]", "expected a string");
                items.push_back(s[i].get<std::string>());
            }
        } else {
            throw ConfigError("suite", "expected a string or an array of strings");
        }
        for (const auto& item : items) {
            if (item == "all") {
                suites.insert(suite_names().begin(), suite_names().end());
            } else if (std::find(suite_names().begin(), suite_names().end(), item) != suite_names().end()) {
                suites.insert(item);
            } else {
                throw ConfigError("suite", "unknown suite '" + item + "'");
            }
        }
    } else {
        suites.insert(suite_names().begin(), suite_names().end());
    }
    cfg.suites.assign(suites.begin(), suites.end());

    cfg.trials = get_int(doc, "", "trials", cfg.trials);
    if (cfg.trials < 1) throw ConfigError("trials", "must be >= 1");
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned()) throw ConfigError("seed", "expected a nonnegative integer");
        cfg.seed = doc["seed"].get<std::uint64_t>();
    }

    if (doc.contains("tolerances")) {
        const Json& t = doc["tolerances"];
        check_keys(t, "tolerances",
                   {"identity", "refinement", "growth", "hoelder", "extremal", "roundtrip", "filter_support",
                    "filter_identity"});
        Tolerances& tol = cfg.tolerances;
        const std::pair<const char*, double*> fields[] = {
            {"identity", &tol.identity},     {"refinement", &tol.refinement},
            {"growth", &tol.growth},         {"hoelder", &tol.hoelder},
            {"extremal", &tol.extremal},     {"roundtrip", &tol.roundtrip},
            {"filter_support", &tol.filter_support}, {"filter_identity", &tol.filter_identity}};
        for (const auto& [key, slot] : fields) {
            *slot = get_number(t, "tolerances", key, *slot);
            if (!(*slot > 0.0)) throw ConfigError(std::string("tolerances.") + key, "must be positive");
        }
    }
    return cfg;
}

ExperimentConfig load_config(const fs::path& path) {
    Json doc;
    try {
        doc = Json::parse(read_text(path));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("", std::string("invalid JSON: ") + e.what());
    }
    return parse_config(doc, path.parent_path());
}

WeightSequence make_weights(const ExperimentConfig& cfg, std::optional<int> J) {
    const GridSpec& g = cfg.grid;
    const Grid grid(g.n, g.L, J.value_or(g.J), g.k_min, g.k_max);
    const WeightSpec& ws = cfg.weight;
    if (ws.kind == "exp2") return WeightSequence::exp2(grid, ws.s, ws.meta);
    if (ws.kind == "power") return WeightSequence::power(grid, ws.s, ws.alpha, ws.meta);
    if (J && *J != g.J) throw UnsupportedError("weights from a file exist at one resolution only");
    const fs::path file = fs::path(ws.file).is_absolute() ? fs::path(ws.file) : cfg.base_dir / ws.file;
    WeightSequence w = read_weights(file);
    if (!(w.grid() == grid)) throw ConfigError("weight.file", "grid of the weights file differs from the config grid");
    if (!w.covers(g.k_min) || !w.covers(g.k_max))
        throw ConfigError("weight.file", "weights file does not cover the configured levels");
    WeightSequence out = w.slice(g.k_min, g.k_max);
    out.set_meta(ws.meta);
    return out;
}

// ---------------------------------------------------------------- reports

std::string to_string(Status s) {
    switch (s) {
        case Status::Pass: return "pass";
        case Status::Fail: return "fail";
        case Status::Measured: return "measured";
        case Status::Skip: return "skip";
    }
    return "skip";
}

std::string to_string(Severity s) { return s == Severity::Hard ? "hard" : "soft"; }

namespace {

Status status_from(const std::string& s) {
    if (s == "pass") return Status::Pass;
    if (s == "fail") return Status::Fail;
    if (s == "measured") return Status::Measured;
    if (s == "skip") return Status::Skip;
    throw IoError("unknown check status '" + s + "'");
}

}  // namespace

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string config_hash(const ExperimentConfig& cfg) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(cfg.source.dump())));
    return buf;
}

Json to_json(const Report& r) {
    Json j;
    j["version"] = r.version;
    j["config_hash"] = r.config_hash;
    j["seed"] = r.seed;
    j["grid"] = r.grid;
    j["weight"] = r.weight;
    Json suites = Json::array();
    for (const auto& s : r.suites) {
        Json checks = Json::array();
        for (const auto& c : s.checks) {
            Json cj;
            cj["name"] = c.name;
            cj["status"] = to_string(c.status);
            cj["severity"] = to_string(c.severity);
            cj["value"] = c.value ? Json(*c.value) : Json(nullptr);
            cj["tolerance"] = c.tolerance ? Json(*c.tolerance) : Json(nullptr);
            cj["levels"] = c.levels;
            cj["witness"] = c.witness;
            cj["reason"] = c.reason;
            checks.push_back(std::move(cj));
        }
        suites.push_back(Json{{"name", s.name}, {"checks", std::move(checks)}});
    }
    j["suites"] = std::move(suites);
    return j;
}

Report report_from_json(const Json& j) {
    try {
        Report r;
        r.version = j.at("version").get<std::string>();
        r.config_hash = j.at("config_hash").get<std::string>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.grid = j.at("grid");
        r.weight = j.at("weight");
        for (const auto& sj : j.at("suites")) {
            SuiteResult s;
            s.name = sj.at("name").get<std::string>();
            for (const auto& cj : sj.at("checks")) {
                CheckResult c;
                c.name = cj.at("name").get<std::string>();
                c.status = status_from(cj.at("status").get<std::string>());
                c.severity = cj.at("severity").get<std::string>() == "soft" ? Severity::Soft : Severity::Hard;
                if (!cj.at("value").is_null()) c.value = cj["value"].get<double>();
                if (!cj.at("tolerance").is_null()) c.tolerance = cj["tolerance"].get<double>();
                c.levels = cj.at("levels").get<std::vector<int>>();
                c.witness = cj.at("witness");
                c.reason = cj.at("reason").get<std::string>();
                s.checks.push_back(std::move(c));
            }
            r.suites.push_back(std::move(s));
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("malformed report: ") + e.what());
    }
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string csv_number(const std::optional<double>& v) {
    if (!v) return "";
    return Json(*v).dump();
}

std::string csv_number(const Json& j, const char* key) {
    return j.contains(key) && j[key].is_number() ? j[key].dump() : "";
}

}  // namespace

std::string to_csv(const Report& r) {
    std::ostringstream os;
    os << "suite,check,status,severity,value,tolerance,J,weight_kind,weight_s,weight_alpha,reason\n";
    const std::string kind = r.weight.contains("kind") ? r.weight["kind"].get<std::string>() : "";
    for (const auto& s : r.suites)
        for (const auto& c : s.checks) {
            std::string levels;
            for (std::size_t i = 0; i < c.levels.size(); ++i) levels += (i ? ";" : "") + std::to_string(c.levels[i]);
            os << csv_field(s.name) << ',' << csv_field(c.name) << ',' << to_string(c.status) << ','
               << to_string(c.severity) << ',' << csv_number(c.value) << ',' << csv_number(c.tolerance) << ','
               << levels << ',' << csv_field(kind) << ',' << csv_number(r.weight, "s") << ','
               << csv_number(r.weight, "alpha") << ',' << csv_field(c.reason) << '\n';
        }
    return os.str();
}

bool has_hard_failure(const Report& r) {
    for (const auto& s : r.suites)
        for (const auto& c : s.checks)
            if (c.status == Status::Fail && c.severity == Severity::Hard) return true;
    return false;
}

bool has_soft_failure(const Report& r) {
    for (const auto& s : r.suites)
        for (const auto& c : s.checks)
            if (c.status == Status::Fail && c.severity == Severity::Soft) return true;
    return false;
}

int exit_status(const Report& r, bool strict) {
    return has_hard_failure(r) || (strict && has_soft_failure(r)) ? 1 : 0;
}

// ---------------------------------------------------------------- suites

namespace {

struct Context {
    const ExperimentConfig& cfg;
    std::string suite;
    WeightSequence w;
    std::optional<WeightSequence> w_fine;
    std::string fine_reason;
    std::uint64_t seed;
    std::vector<CheckResult> checks;

    const Grid& grid() const { return w.grid(); }
    int J() const { return cfg.grid.J; }
    const Tolerances& tol() const { return cfg.tolerances; }
    int trials() const { return cfg.trials; }

    std::uint64_t seed_for(const std::string& check) const { return splitmix64(seed ^ fnv1a(check)); }

    CheckResult& bound(const std::string& name, bool ok, double value, std::optional<double> tolerance,
                       Severity sev = Severity::Hard) {
        CheckResult c;
        c.name = name;
        c.status = ok ? Status::Pass : Status::Fail;
        c.severity = sev;
        c.value = value;
        c.tolerance = tolerance;
        c.levels = {J()};
        checks.push_back(std::move(c));
        return checks.back();
    }

    CheckResult& measured(const std::string& name, double value) {
        CheckResult c;
        c.name = name;
        c.status = Status::Measured;
        c.severity = Severity::Soft;
        c.value = value;
        c.levels = {J()};
        checks.push_back(std::move(c));
        return checks.back();
    }

    void skip(const std::string& name, const std::string& reason) {
        CheckResult c;
        c.name = name;
        c.status = Status::Skip;
        c.reason = reason;
        checks.push_back(std::move(c));
    }

    // Runs a check body; coarse resolutions and unsupported cases become skips.
    void guard(const std::string& name, const std::function<void()>& body) {
        try {
            body();
        } catch (const ResolutionError& e) {
            skip(name, e.what());
        } catch (const UnsupportedError& e) {
            skip(name, e.what());
        } catch (const Error& e) {
            CheckResult c;
            c.name = name;
            c.status = Status::Fail;
            c.reason = e.what();
            checks.push_back(std::move(c));
        }
    }

    // Records the constant at J and its drift at J + 1 as a soft check.
    void refined(const std::string& name, const std::function<double(const WeightSequence&)>& measure,
                 const std::function<void(CheckResult&)>& annotate = {}) {
        guard(name, [&] {
            const double v = measure(w);
            CheckResult& m = measured(name, v);
            if (annotate) annotate(m);
            if (!w_fine) {
                skip(name + "-refinement", fine_reason);
                return;
            }
            const double vf = measure(*w_fine);
            const double drift = v == 0.0 ? (vf == 0.0 ? 0.0 : kInfinity) : std::abs(vf / v - 1.0);
            CheckResult& c = bound(name + "-refinement", drift <= tol().refinement, drift, tol().refinement,
                                   Severity::Soft);
            c.levels = {J(), J() + 1};
            c.witness = Json{{"at_J", v}, {"at_J_plus_1", vf}};
        });
    }
};

Json cube_json(const DyadicCube& q) { return Json{{"level", q.level}, {"index", {q.index[0], q.index[1]}}}; }

// The scalar weight audited by the Muckenhoupt and scalar maximal checks.
GridFunction scalar_weight(const WeightSequence& w) {
    if (w.exp2_base()) return *w.exp2_base();
    if (w.exp2_exponent()) return GridFunction(w.grid(), 1.0);
    return w.at(w.k_min());
}

// Nonnegative function constant on the cubes of `level`, independent of J.
GridFunction piecewise_random(const Grid& grid, int level, Rng& rng) {
    std::vector<double> per_cube(static_cast<std::size_t>(grid.cube_count(level)));
    for (double& v : per_cube) v = rng.log_uniform(1e-2, 1.0) * (rng.uniform() < 0.25 ? 0.0 : 1.0);
    GridFunction f(grid);
    for (Index c = 0; c < f.size(); ++c) f[c] = per_cube[static_cast<std::size_t>(grid.cube_of_cell(c, level))];
    return f;
}

CoeffField random_field(const WeightSequence& w, Rng& rng) {
    return CoeffField::random(w.grid(), w.k_min(), w.k_max(), rng, true);
}

double rel_dev(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// ---- ap-audit

void suite_ap_audit(Context& ctx) {
    const GridFunction gamma = scalar_weight(ctx.w);
    const Grid& grid = ctx.grid();

    ctx.guard("duality-identity", [&] {
        double worst = 0.0;
        Json witness;
        for (double p : {1.5, 2.0, 3.0})
            for (int k = grid.coarsest_level(); k <= grid.finest_level(); ++k)
                for (const DyadicCube& q : cubes_at_level(grid, k)) {
                    const auto [a, b] = ap_duality_identity(gamma, p, q);
                    const double d = rel_dev(a, b);
                    if (d > worst || witness.is_null()) {
                        worst = std::max(worst, d);
                        witness = Json{{"p", p}, {"cube", cube_json(q)}, {"a", a}, {"b", b}};
                    }
                }
        ctx.bound("duality-identity", worst <= ctx.tol().identity, worst, ctx.tol().identity).witness = witness;
    });

    for (double p : {1.0, 2.0}) {
        const std::string tag = p == 1.0 ? "p1" : "p2";
        ctx.refined("ap-constant-" + tag, [&](const WeightSequence& w) {
            return ap_constant(scalar_weight(w), p, dyadic_family(w.grid())).constant;
        });
    }

    ctx.guard("shifted-family-dominates", [&] {
        const double d = ap_constant(gamma, 2.0, dyadic_family(grid)).constant;
        const ApReport s = ap_constant(gamma, 2.0, shifted_family(grid, grid.coarsest_level(), grid.finest_level()));
        auto& c = ctx.bound("shifted-family-dominates", s.constant >= d, s.constant / d, 1.0);
        c.witness = Json{{"dyadic", d}, {"shifted", s.constant}, {"argmax_level", s.argmax.level},
                         {"argmax_dyadic", s.argmax.dyadic}};
    });

    ctx.guard("subset-property", [&] {
        Rng rng(ctx.seed_for("subset-property"));
        double worst = 0.0;
        Json witness;
        for (int t = 0; t < ctx.trials(); ++t) {
            const int k = grid.coarsest_level() + static_cast<int>(rng.below(grid.finest_level() - grid.coarsest_level() + 1));
            const DyadicCube q = grid.cube_at(k, static_cast<Index>(rng.below(grid.cube_count(k))));
            std::vector<Index> cells;
            for_each_cell(grid, q, [&](Index c) {
                if (rng.uniform() < 0.5) cells.push_back(c);
            });
            if (cells.empty()) for_each_cell(grid, q, [&](Index c) { if (cells.empty()) cells.push_back(c); });
            for (double p : {1.0, 1.5, 2.0, 3.0}) {
                const SubsetMeans sm = subset_means(gamma, p, q, cells);
                const double C = ap_cube_value(gamma, p, q);
                const double r = sm.lhs / (C * sm.mean_e);
                if (r > worst) {
                    worst = r;
                    witness = Json{{"p", p}, {"cube", cube_json(q)}, {"subset_cells", cells.size()}};
                }
            }
        }
        const double tol = 1.0 + ctx.tol().identity;
        ctx.bound("subset-property", worst <= tol, worst, tol).witness = witness;
    });

    ctx.guard("doubling-exponent", [&] {
        const DyadicCube domain{grid.coarsest_level(), {0, 0}};
        const DoublingFit fit = fit_subset_exponent(gamma, domain);
        ctx.measured("doubling-exponent", fit.delta).witness =
            Json{{"constant", fit.constant}, {"samples", fit.samples}};
    });
}

// ---- xclass

void suite_xclass(Context& ctx) {
    const WeightMeta& m = ctx.w.meta();
    const double tol = ctx.tol().growth;
    ctx.guard("declared-class", [&] {
        const XClassReport r = verify_x_class(ctx.w, m.alpha1, m.alpha2, m.sigma1, m.sigma2, m.p, tol);
        const Severity sev = r.used_closed_form ? Severity::Hard : Severity::Soft;
        auto& c = ctx.bound("declared-class", r.holds1 && r.holds2, std::max(r.growth1, r.growth2), tol, sev);
        c.witness = Json{{"c1", r.c1}, {"c2", r.c2}, {"growth1", r.growth1}, {"growth2", r.growth2},
                         {"closed_form", r.used_closed_form}};

        const bool plain = ctx.w.exp2_exponent() && !ctx.w.exp2_base() && m.alpha1 == *ctx.w.exp2_exponent() &&
                           m.alpha2 == *ctx.w.exp2_exponent();
        if (plain) {
            const double dev = std::max(std::abs(r.c1 - 1.0), std::abs(r.c2 - 1.0));
            ctx.bound("unit-constants", dev <= ctx.tol().identity, dev, ctx.tol().identity).witness =
                Json{{"c1", r.c1}, {"c2", r.c2}};
        } else {
            ctx.skip("unit-constants", "only for t_k = 2^{ks} declared with alpha1 = alpha2 = s");
        }

        try {
            const bool ok = alpha_consistency(r, m.alpha1, m.alpha2, m.sigma1, m.sigma2, m.p);
            ctx.bound("alpha-order", ok, m.alpha2 - m.alpha1, -2.0 * tol);
        } catch (const PreconditionError& e) {
            ctx.skip("alpha-order", e.what());
        }
    });

    ctx.guard("rejects-alpha1-plus-one", [&] {
        const XClassReport r = verify_x_class(ctx.w, m.alpha1 + 1.0, m.alpha2, m.sigma1, m.sigma2, m.p, tol);
        const Severity sev = r.used_closed_form ? Severity::Hard : Severity::Soft;
        auto& c = ctx.bound("rejects-alpha1-plus-one", !r.holds1, r.growth1, tol, sev);
        c.witness = Json{{"k", r.witness1.k}, {"j", r.witness1.j}, {"cube", cube_json(r.witness1.cube)},
                         {"value", r.witness1.value}, {"profile", r.profile1}};
    });
}

// ---- maximal

void suite_maximal(Context& ctx) {
    const Grid& grid = ctx.grid();
    const int base = ctx.J();
    const MaximalConfig cfg = MaximalConfig::full(grid);

    ctx.guard("pointwise-domination", [&] {
        Rng rng(ctx.seed_for("pointwise-domination"));
        Index bad = 0;
        for (int t = 0; t < ctx.trials(); ++t) {
            const GridFunction f = piecewise_random(grid, base, rng);
            const GridFunction mf = maximal(f, cfg);
            for (Index c = 0; c < f.size(); ++c) bad += mf[c] < std::abs(f[c]);
        }
        ctx.bound("pointwise-domination", bad == 0, static_cast<double>(bad), 0.0);
    });

    ctx.guard("monotonicity", [&] {
        Rng rng(ctx.seed_for("monotonicity"));
        Index bad = 0;
        for (int t = 0; t < ctx.trials(); ++t) {
            const GridFunction f = piecewise_random(grid, base, rng);
            GridFunction g = piecewise_random(grid, base, rng);
            for (Index c = 0; c < g.size(); ++c) g[c] += f[c];
            const GridFunction mf = maximal(f, cfg), mg = maximal(g, cfg);
            for (Index c = 0; c < f.size(); ++c) bad += mf[c] > mg[c];
        }
        ctx.bound("monotonicity", bad == 0, static_cast<double>(bad), 0.0);
    });

    ctx.guard("scaling", [&] {
        Rng rng(ctx.seed_for("scaling"));
        double exact = 0.0, general = 0.0;
        for (int t = 0; t < ctx.trials(); ++t) {
            const GridFunction f = piecewise_random(grid, base, rng);
            const GridFunction mf = maximal(f, cfg);
            for (double c : {0.25, 8.0, 3.7}) {
                GridFunction g = f;
                for (double& v : g.values()) v *= c;
                const GridFunction mg = maximal(g, cfg);
                double& slot = c == 3.7 ? general : exact;
                for (Index i = 0; i < f.size(); ++i) slot = std::max(slot, rel_dev(mg[i], c * mf[i]));
            }
        }
        ctx.bound("scaling-power-of-two", exact == 0.0, exact, 0.0);
        ctx.bound("scaling-general", general <= ctx.tol().identity, general, ctx.tol().identity);
    });

    const double p = 2.0;
    ctx.refined("scalar-ratio", [&](const WeightSequence& w) {
        Rng rng(ctx.seed_for("scalar-ratio"));
        const GridFunction t = scalar_weight(w);
        double worst = 0.0;
        for (int i = 0; i < ctx.trials(); ++i) {
            const auto r = scalar_maximal_ratio(piecewise_random(w.grid(), base, rng), t, p,
                                                MaximalConfig::full(w.grid()));
            if (r) worst = std::max(worst, *r);
        }
        return worst;
    });

    ctx.refined("fs-ratio", [&](const WeightSequence& w) {
        Rng rng(ctx.seed_for("fs-ratio"));
        double worst = 0.0;
        for (int i = 0; i < ctx.trials(); ++i) {
            std::vector<GridFunction> fs;
            for (int k = w.k_min(); k <= w.k_max(); ++k) fs.push_back(piecewise_random(w.grid(), base, rng));
            const FSRatioReport r = fs_ratio(fs, w, p, 2.0, MaximalConfig::full(w.grid()));
            if (r.ratio) worst = std::max(worst, *r.ratio);
        }
        return worst;
    });

    ctx.guard("shifted-decay", [&] {
        if (!ctx.w.exp2_exponent()) {
            ctx.skip("shifted-decay", "closed-form decay needs t_k = 2^{ks} base");
            return;
        }
        const double s = *ctx.w.exp2_exponent();
        Rng rng(ctx.seed_for("shifted-decay"));
        double worst = 0.0;
        for (int i = 0; i < ctx.trials(); ++i) {
            const GridFunction f = piecewise_random(grid, base, rng);
            for (int j = ctx.w.k_min(); j <= ctx.w.k_max(); ++j) {
                const auto ref = shifted_maximal_ratio(f, ctx.w, j, j, p, cfg);
                if (!ref) continue;
                for (int k = ctx.w.k_min(); k <= j; ++k) {
                    const auto r = shifted_maximal_ratio(f, ctx.w, k, j, p, cfg);
                    worst = std::max(worst, rel_dev(*r / *ref, std::exp2(s * (k - j))));
                }
            }
        }
        ctx.bound("shifted-decay", worst <= ctx.tol().identity, worst, ctx.tol().identity);
    });
}

// ---- seqnorms

void suite_seqnorms(Context& ctx) {
    const double q = 2.0;
    const Grid& grid = ctx.grid();

    ctx.guard("cubeavg-identity", [&] {
        Rng rng(ctx.seed_for("cubeavg-identity"));
        double worst = 0.0;
        for (int t = 0; t < ctx.trials(); ++t) {
            const CoeffField lambda = random_field(ctx.w, rng);
            worst = std::max(worst, rel_dev(f_inf_norm(lambda, ctx.w, q), f_inf_norm_cubeavg(lambda, ctx.w, q)));
        }
        ctx.bound("cubeavg-identity", worst <= ctx.tol().identity, worst, ctx.tol().identity);
    });

    ctx.guard("homogeneity", [&] {
        Rng rng(ctx.seed_for("homogeneity"));
        double worst = 0.0;
        for (int t = 0; t < ctx.trials(); ++t) {
            CoeffField lambda = random_field(ctx.w, rng);
            const double a = f_inf_norm(lambda, ctx.w, q);
            const Complex c(rng.normal(), rng.normal());
            lambda *= c;
            worst = std::max(worst, rel_dev(f_inf_norm(lambda, ctx.w, q), std::abs(c) * a));
        }
        ctx.bound("homogeneity", worst <= ctx.tol().identity, worst, ctx.tol().identity);
    });

    ctx.guard("chebyshev-median", [&] {
        Rng rng(ctx.seed_for("chebyshev-median"));
        const double factor = std::pow(4.0, 1.0 / q);
        double worst = 0.0;
        int cubes = 0;
        for (int t = 0; t < ctx.trials(); ++t) {
            const CoeffField lambda = random_field(ctx.w, rng);
            const double bound = factor * f_inf_norm(lambda, ctx.w, q);
            for (int k = grid.coarsest_level(); k <= ctx.w.k_max(); ++k) {
                if (grid.cells_per_cube(k) < 4) break;
                for (const DyadicCube& P : cubes_at_level(grid, k)) {
                    worst = std::max(worst, m_p(lambda, ctx.w, q, P) / bound);
                    ++cubes;
                }
            }
        }
        if (cubes == 0) throw ResolutionError("no cube with at least 4 cells");
        ctx.bound("chebyshev-median", worst <= 1.0, worst, 1.0).witness = Json{{"cubes", cubes}};
    });

    ctx.refined("median-lower-constant", [&](const WeightSequence& w) {
        Rng rng(ctx.seed_for("median-lower-constant"));
        double worst = 0.0;
        for (int t = 0; t < ctx.trials(); ++t) {
            const CoeffField lambda = random_field(w, rng);
            const GridFunction m = m_fun(lambda, w, q);
            const double sup = *std::max_element(m.values().begin(), m.values().end());
            if (sup > 0.0) worst = std::max(worst, f_inf_norm(lambda, w, q) / sup);
        }
        return worst;
    });

    const int depth = std::min(grid.dimension() == 1 ? 3 : 2, grid.finest_level() - ctx.w.k_max());
    for (double eps : {0.5, 0.75}) {
        const std::string tag = eps == 0.5 ? "eps50" : "eps75";
        ctx.guard("restricted-below-full-" + tag, [&] {
            if (depth < 1) throw ResolutionError("finest coefficient level leaves no room for subcubes");
            Rng rng(ctx.seed_for("restricted-" + tag));
            double worst = 0.0;
            for (int t = 0; t < ctx.trials(); ++t) {
                const CoeffField lambda = random_field(ctx.w, rng);
                const RestrictionSets e =
                    RestrictionSets::random(grid, ctx.w.k_min(), ctx.w.k_max(), eps, depth, rng.next());
                const double full = f_inf_norm(lambda, ctx.w, q);
                worst = std::max(worst, restricted_norm(lambda, ctx.w, q, e) / full);
            }
            ctx.bound("restricted-below-full-" + tag, worst <= 1.0, worst, 1.0);
        });
        ctx.refined("restricted-reverse-" + tag, [&](const WeightSequence& w) {
            const int d = std::min(w.grid().dimension() == 1 ? 3 : 2, w.grid().finest_level() - w.k_max());
            if (depth < 1 || d < depth) throw ResolutionError("finest coefficient level leaves no room for subcubes");
            Rng rng(ctx.seed_for("restricted-reverse-" + tag));
            double worst = 0.0;
            for (int t = 0; t < ctx.trials(); ++t) {
                const CoeffField lambda = random_field(w, rng);
                const RestrictionSets e =
                    RestrictionSets::random(w.grid(), w.k_min(), w.k_max(), eps, depth, rng.next());
                const double r = restricted_norm(lambda, w, q, e);
                if (r > 0.0) worst = std::max(worst, f_inf_norm(lambda, w, q) / r);
            }
            return worst;
        });
    }

    ctx.guard("lambda-star-domination", [&] {
        Rng rng(ctx.seed_for("lambda-star-domination"));
        Index bad = 0;
        double worst_ratio = kInfinity;
        for (int t = 0; t < ctx.trials(); ++t) {
            const CoeffField lambda = random_field(ctx.w, rng);
            for (double d : {2.0 * grid.dimension() + 1.0, 2.0 * grid.dimension() + 2.0}) {
                const CoeffField star = lambda_star(lambda, q, d);
                for (int k = lambda.k_min(); k <= lambda.k_max(); ++k) {
                    const auto a = lambda.level(k), b = star.level(k);
                    for (std::size_t i = 0; i < a.size(); ++i) bad += b[i].real() < std::abs(a[i]);
                }
                const auto [ns, nl] = lambda_star_equivalence(lambda, ctx.w, q, d, 0);
                worst_ratio = std::min(worst_ratio, ns / nl);
            }
        }
        ctx.bound("lambda-star-domination", bad == 0, static_cast<double>(bad), 0.0);
        ctx.bound("lambda-star-norm-ratio", worst_ratio >= 1.0, worst_ratio, 1.0);
    });

    for (int extra : {1, 2}) {
        const double d = 2.0 * grid.dimension() + extra;
        ctx.refined("lambda-star-upper-d" + std::to_string(static_cast<int>(d)), [&](const WeightSequence& w) {
            Rng rng(ctx.seed_for("lambda-star-upper"));
            double worst = 0.0;
            for (int t = 0; t < ctx.trials(); ++t) {
                const CoeffField lambda = random_field(w, rng);
                const auto [ns, nl] = lambda_star_equivalence(lambda, w, q, d, 0);
                worst = std::max(worst, ns / nl);
            }
            return worst;
        });
    }
}

// ---- duality

void suite_duality(Context& ctx) {
    const double tol = ctx.tol().hoelder;
    for (const auto& [p, q] : std::vector<std::pair<double, double>>{{1.0, 2.0}, {2.0, 2.0}, {1.5, 3.0}}) {
        char name[48];
        std::snprintf(name, sizeof name, "hoelder-p%g-q%g", p, q);
        ctx.guard(name, [&] {
            Rng rng(ctx.seed_for(name));
            double worst = kInfinity;
            for (int t = 0; t < ctx.trials(); ++t) {
                const CoeffField s = random_field(ctx.w, rng);
                const CoeffField lambda = random_field(ctx.w, rng);
                const DualityReport r =
                    p == 1.0 ? hoelder_check_1q(s, lambda, ctx.w, q) : hoelder_check_pq(s, lambda, ctx.w, p, q);
                const double scale = r.factor * r.lhs_norm * r.rhs_norm;
                worst = std::min(worst, scale > 0.0 ? r.slack / scale : 0.0);
            }
            ctx.bound(name, worst >= -tol, worst, -tol);
        });
    }

    const double q = 2.0;
    ctx.guard("extremal-constraint", [&] {
        Rng rng(ctx.seed_for("extremal-constraint"));
        double worst = 0.0;
        for (int t = 0; t < ctx.trials(); ++t) {
            const CoeffField lambda = random_field(ctx.w, rng);
            worst = std::max(worst, std::abs(constraint_norm(extremal_sequence(lambda, ctx.w, q), ctx.w, q) - 1.0));
        }
        ctx.bound("extremal-constraint", worst <= ctx.tol().extremal, worst, ctx.tol().extremal);
    });

    ctx.refined("extremal-lower-constant", [&](const WeightSequence& w) {
        Rng rng(ctx.seed_for("extremal-lower-constant"));
        double worst = kInfinity;
        for (int t = 0; t < ctx.trials(); ++t) {
            const CoeffField lambda = random_field(w, rng);
            const ConjugateNormReport r = conjugate_norm(lambda, w, q);
            worst = std::min(worst, r.extremal_value / r.plain_norm);
        }
        return worst;
    });

    ctx.guard("d-p-claim", [&] {
        Rng rng(ctx.seed_for("d-p-claim"));
        const Grid& grid = ctx.grid();
        double worst = 0.0;
        for (int t = 0; t < ctx.trials(); ++t) {
            const CoeffField kappa = random_field(ctx.w, rng);
            const int k = grid.coarsest_level() + static_cast<int>(rng.below(ctx.w.k_max() - grid.coarsest_level() + 1));
            const DyadicCube P = grid.cube_at(k, static_cast<Index>(rng.below(grid.cube_count(k))));
            worst = std::max(worst, d_p_claim(kappa, ctx.w, q, P));
        }
        const double bound = 1.0 + ctx.tol().identity;
        ctx.bound("d-p-claim", worst <= bound, worst, bound);
    });

    ctx.guard("representation", [&] {
        Rng rng(ctx.seed_for("representation"));
        double worst = 0.0;
        for (int t = 0; t < std::min(ctx.trials(), 5); ++t) {
            const CoeffField target = random_field(ctx.w, rng);
            const CoeffField got = represent_functional([&](const CoeffField& s) { return pairing(s, target); }, target);
            for (int k = target.k_min(); k <= target.k_max(); ++k) {
                const auto a = target.level(k), b = got.level(k);
                for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
            }
        }
        ctx.bound("representation", worst <= ctx.tol().identity, worst, ctx.tol().identity);
    });
}

// ---- phitransform

void suite_phitransform(Context& ctx) {
    const Grid& grid = ctx.grid();
    const FilterPair fp(grid, 1.0);
    if (ctx.w.k_max() > fp.highest_level()) {
        ctx.skip("phitransform", "k_max must be at most J - 1 for the sampling lattice");
        return;
    }
    ctx.guard("filter", [&] {
        const FilterInvariants inv = filter_invariants(build_filter_pair(grid));
        ctx.bound("filter-support", inv.max_outside <= ctx.tol().filter_support, inv.max_outside,
                  ctx.tol().filter_support);
        ctx.measured("filter-plateau", inv.min_plateau).witness = Json{{"samples", inv.plateau_samples}};
        ctx.bound("reproducing-identity", inv.max_identity_dev <= ctx.tol().filter_identity, inv.max_identity_dev,
                  ctx.tol().filter_identity);
    });

    const int lo = ctx.w.k_min(), hi = ctx.w.k_max();
    ctx.guard("roundtrip", [&] {
        Rng rng(ctx.seed_for("roundtrip"));
        double worst = 0.0, leak = 0.0;
        for (int t = 0; t < ctx.trials(); ++t) {
            const BandSignal sig = random_band_signal(grid, lo, hi, rng);
            worst = std::max(worst, roundtrip_residual(sig.values, fp, lo, hi));
            leak = std::max(leak, spectral_leakage(sig.values, fp, lo, hi));
        }
        ctx.bound("roundtrip", worst <= ctx.tol().roundtrip, worst, ctx.tol().roundtrip);
        ctx.measured("spectral-leakage", leak);
    });

    for (const bool upper : {true, false}) {
        ctx.refined(upper ? "transfer-ratio-max" : "transfer-ratio-min", [&](const WeightSequence& w) {
            const FilterPair f(w.grid(), 1.0);
            Rng rng(ctx.seed_for("transfer-ratio"));
            double best = upper ? 0.0 : kInfinity;
            for (int t = 0; t < ctx.trials(); ++t) {
                const BandSignal sig = random_band_signal(w.grid(), lo, hi, rng);
                const auto [seq, fun] = transfer_check(sig.values, f, w, 2.0, 2.0);
                const double r = seq / fun;
                best = upper ? std::max(best, r) : std::min(best, r);
            }
            return best;
        });
    }
}

const std::map<std::string, void (*)(Context&)>& suite_table() {
    static const std::map<std::string, void (*)(Context&)> table = {
        {"ap-audit", suite_ap_audit}, {"duality", suite_duality},   {"maximal", suite_maximal},
        {"phitransform", suite_phitransform}, {"seqnorms", suite_seqnorms}, {"xclass", suite_xclass}};
    return table;
}

}  // namespace

SuiteResult run_suite(const std::string& name, const ExperimentConfig& cfg) {
    const auto it = suite_table().find(name);
    if (it == suite_table().end()) throw ConfigError("suite", "unknown suite '" + name + "'");
    Context ctx{cfg, name, make_weights(cfg), std::nullopt, {}, splitmix64(cfg.seed ^ fnv1a(name)), {}};
    try {
        ctx.w_fine = make_weights(cfg, cfg.grid.J + 1);
    } catch (const Error& e) {
        ctx.fine_reason = std::string("no refined weights: ") + e.what();
    }
    it->second(ctx);
    return {name, std::move(ctx.checks)};
}

int thread_budget() {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const char* env = std::getenv("TLW_THREADS");
    if (!env || !*env) return static_cast<int>(hw);
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) throw ConfigError("TLW_THREADS", "must be a positive integer");
    return static_cast<int>(v);
}

Report run(const ExperimentConfig& cfg, int threads) {
    make_weights(cfg);  // configuration-time validation, e.g. positivity
    Report report;
    report.config_hash = config_hash(cfg);
    report.seed = cfg.seed;
    report.grid = Json{{"n", cfg.grid.n}, {"L", cfg.grid.L}, {"J", cfg.grid.J}, {"k_min", cfg.grid.k_min},
                       {"k_max", cfg.grid.k_max}};
    report.weight = Json{{"kind", cfg.weight.kind}, {"s", cfg.weight.s}, {"alpha", cfg.weight.alpha}};
    if (!cfg.weight.file.empty()) report.weight["file"] = cfg.weight.file;

    std::vector<SuiteResult> results(cfg.suites.size());
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    auto worker = [&] {
        for (std::size_t i = next++; i < results.size(); i = next++) {
            try {
                results[i] = run_suite(cfg.suites[i], cfg);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    const int n_workers = std::clamp<int>(threads, 1, static_cast<int>(std::max<std::size_t>(results.size(), 1)));
    std::vector<std::thread> pool;
    for (int i = 1; i < n_workers; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    // cfg.suites is sorted, so the merge order does not depend on scheduling.
    report.suites = std::move(results);
    return report;
}

}  // namespace tlw
