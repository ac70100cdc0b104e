// fpesusy: residual, darboux, hierarchy, evolve and compare pipelines over the
// model catalog. Writes long-form CSV fields, JSON reports and a run manifest.
//
// Exit status: 0 all gates pass, 1 a gate failed, 2 invalid configuration.

#include <CLI11.hpp>

#include <Eigen/Core>
#include <boost/version.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "fpesusy/catalog.hpp"
#include "fpesusy/darboux.hpp"
#include "fpesusy/hierarchy.hpp"
#include "fpesusy/io.hpp"
#include "fpesusy/numerics.hpp"
#include "fpesusy/stationary.hpp"
#include "fpesusy/version.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace fpesusy;

namespace {

const std::vector<std::string> kPipelines{"residual", "darboux", "hierarchy", "evolve", "compare",
                                          "catalog"};
const std::vector<std::string> kClaims{"forward-backward", "partner-closed-form",
                                       "hierarchy-closed-form", "series-closed-form",
                                       "series-partner"};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string pipeline;
    std::string model;
    double gamma = 1.0;
    double a = 1.0;
    double C = 1.0;
    int k = 2;
    int N = 100;
    std::string claim;
    std::string out = "fpesusy_out";
    std::optional<double> x_min, x_max, t_start, t_end;
    std::optional<std::size_t> nx, nt;
    std::optional<double> tol, residual_tol;
};

struct Gate {
    std::string report;
    std::string metric;
    double value;
    double tol;

    bool passed() const { return value < tol; }
};

json grid_json(const Grid& g) {
    return {{"x_min", g.x_min}, {"x_max", g.x_max}, {"nx", g.nx},
            {"t_start", g.t_start}, {"t_end", g.t_end}, {"nt", g.nt}};
}

json comparison_json(const numerics::Comparison& c) {
    return {{"fitted_scalar", c.fitted_scalar},
            {"l_inf_rel", c.l_inf_rel},
            {"masked_points", c.masked_points}};
}

struct Context {
    RunConfig cfg;
    catalog::Params params;
    Grid grid;
    fs::path out;
    double tol = 0.0;
    double residual_tol = 1e-6;
    std::vector<std::string> artifacts;
    std::vector<Gate> gates;

    void gate(const std::string& report, const std::string& metric, double value, double limit) {
        gates.push_back({report, metric, value, limit});
    }

    void write_field(const std::string& name, const Field& f, const Grid& g) {
        const std::string file = name + ".csv";
        std::ofstream os(out / file);
        io::write_field_csv(os, f, g);
        artifacts.push_back(file);
    }

    void write_json(const std::string& name, json j) {
        const std::string file = name + ".json";
        json gs = json::array();
        for (const auto& g : gates) {
            if (g.report != name) continue;
            gs.push_back({{"metric", g.metric}, {"value", g.value}, {"tol", g.tol},
                          {"passed", g.passed()}});
        }
        j["gates"] = gs;
        std::ofstream(out / file) << j.dump(2) << '\n';
        artifacts.push_back(file);
    }

    json header() const {
        return {{"model", cfg.model}, {"params", params}, {"grid", grid_json(grid)}};
    }
};

double param(const Context& c, const std::string& key) { return catalog::detail::param(c.params, key); }

void require_model(const Context& c, std::initializer_list<const char*> allowed) {
    for (const char* m : allowed) {
        if (c.cfg.model == m) return;
    }
    std::string list;
    for (const char* m : allowed) list += (list.empty() ? "" : ", ") + std::string(m);
    throw ConfigError(c.cfg.pipeline + (c.cfg.claim.empty() ? "" : " --claim " + c.cfg.claim) +
                      " supports --model " + list + ", got '" + c.cfg.model + "'");
}

std::pair<ResidualReport, std::string> residual(const Field& p, const FpeProblem& prob, const Grid& g) {
    const bool analytic = p.depth().x >= 2 && p.depth().t;
    const auto mode = analytic ? ResidualMode::analytic : ResidualMode::stencil;
    return {fpe_residual(p, prob, g, mode), analytic ? "analytic" : "stencil"};
}

// ---- pipelines ---------------------------------------------------------------

void run_residual(Context& c) {
    const auto entry = catalog::entry(c.cfg.model);
    json sols = json::array();
    for (const auto& sol : entry.solutions(c.params)) {
        const auto [rep, mode] = residual(sol.P, sol.problem(), c.grid);
        c.write_field(sol.name, sol.P, c.grid);
        sols.push_back({{"name", sol.name},
                        {"drift", sol.drift_formula},
                        {"provenance", to_string(sol.provenance)},
                        {"residual_mode", mode},
                        {"residual", to_json(rep)}});
        c.gate("residual", sol.name + ".l_inf", rep.l_inf, c.tol);
    }
    json j = c.header();
    j["solutions"] = sols;
    c.write_json("residual", j);
}

struct DarbouxResult {
    Field p0, p1;
    PartnerPair pair;
};

DarbouxResult guo_darboux(const Context& c) {
    const double a = param(c, "a"), C = param(c, "C");
    const auto aux = catalog::guo_auxiliary(a, C, c.grid);
    auto pair = trivial_partner(aux, c.grid);
    const Field p0 = catalog::guo_seed_P0(C).P;
    return {p0, partner_solution(p0, pair), std::move(pair)};
}

void run_darboux(Context& c) {
    require_model(c, {"guo", "guo-partner"});
    const auto d = guo_darboux(c);
    const auto [rep, mode] = residual(d.p1, d.pair.partner(), c.grid);
    const auto cmp = numerics::compare(d.p1, catalog::guo_partner_P1(param(c, "a"), param(c, "C")).P,
                                       c.grid);
    c.write_field("P_0", d.p0, c.grid);
    c.write_field("P_1", d.p1, c.grid);
    c.gate("darboux", "R1.l_inf", d.pair.aux.r1().l_inf, 1e-8);
    c.gate("darboux", "R2.l_inf", d.pair.r2.l_inf, 1e-8);
    c.gate("darboux", "partner_residual.l_inf", rep.l_inf, c.residual_tol);
    c.gate("darboux", "closed_form.l_inf_rel", cmp.l_inf_rel, c.tol);
    json j = c.header();
    j["auxiliary"] = d.pair.aux.wtil0().name();
    j["R1"] = to_json(d.pair.aux.r1());
    j["R2"] = to_json(d.pair.r2);
    j["partner_drift"] = io::format_double(d.pair.drift1.value(0.0, c.grid.t_start));
    j["partner_residual"] = to_json(rep);
    j["residual_mode"] = mode;
    j["closed_form"] = comparison_json(cmp);
    c.write_json("darboux", j);
}

struct Level {
    int k;
    Field P;
    FpeProblem problem;
    std::optional<Field> closed;
};

std::vector<Level> build_hierarchy(const Context& c, int k) {
    std::vector<Level> levels;
    if (c.cfg.model == "guo") {
        if (k < 0 || k > 3) throw ConfigError("guo hierarchy supports 0 <= k <= 3");
        const double C = param(c, "C");
        const auto seq = catalog::guo_sequence(C);
        std::vector<HierarchyPrepotential> w;
        for (int j = 0; j <= k; ++j) w.emplace_back(seq, j, c.grid.t_start);
        levels.push_back({0, catalog::guo_seed_P0(C).P, w[0].problem(), std::nullopt});
        for (int j = 1; j <= k; ++j) {
            const Field p = hierarchy_step_td(levels.back().P, w[j - 1], w[j], c.grid);
            std::optional<Field> closed;
            if (j <= 2) closed = catalog::guo_hierarchy_closed(j, C).P;
            levels.push_back({j, p, w[j].problem(), closed});
        }
    } else if (c.cfg.model == "uo") {
        if (k < -3 || k > 3) throw ConfigError("uo hierarchy supports -3 <= k <= 3");
        const double g = param(c, "gamma");
        const auto seq = catalog::uo_sequence(g);
        const auto prob = FpeProblem::from_prepotential(catalog::uo_prepotential(g), "-gamma x");
        const Field p0 = catalog::uo_seed_P0(g).P;
        levels.push_back({0, p0, prob, std::nullopt});
        for (int j = 1; j <= std::abs(k); ++j) {
            const Field p = k > 0 ? forward_step_stationary(levels.back().P, seq, j)
                                  : backward_step_stationary(levels.back().P, seq, j);
            const int signed_j = k > 0 ? j : -j;
            std::optional<Field> closed;
            if (j <= 2) closed = catalog::uo_hierarchy_closed(signed_j, g).P;
            levels.push_back({signed_j, p, prob, closed});
        }
    } else {
        throw ConfigError("hierarchy supports --model guo or uo, got '" + c.cfg.model + "'");
    }
    return levels;
}

std::string level_name(int k) { return k < 0 ? "P_-" + std::to_string(-k) : "P_" + std::to_string(k); }

void run_hierarchy(Context& c) {
    json records = json::array();
    for (const auto& lv : build_hierarchy(c, c.cfg.k)) {
        const auto [rep, mode] = residual(lv.P, lv.problem, c.grid);
        HierarchyRecord r{lv.k, lv.problem.drift_label, rep, mode, std::nullopt, std::nullopt};
        if (lv.closed) {
            const auto cmp = numerics::compare(lv.P, *lv.closed, c.grid);
            r.comparison_scalar = cmp.fitted_scalar;
            r.comparison_l_inf_rel = cmp.l_inf_rel;
            c.gate("hierarchy", level_name(lv.k) + ".closed_form.l_inf_rel", cmp.l_inf_rel, c.tol);
        }
        c.gate("hierarchy", level_name(lv.k) + ".residual.l_inf", rep.l_inf, c.residual_tol);
        c.write_field(level_name(lv.k), lv.P, c.grid);
        records.push_back(to_json(r));
    }
    json j = c.header();
    j["records"] = records;
    c.write_json("hierarchy", j);
}

void run_evolve(Context& c) {
    require_model(c, {"heat", "guo", "uo"});
    Field exact = catalog::heat_self_similar();
    Field drift = constant(0.0);
    if (c.cfg.model == "guo") {
        const auto s = catalog::guo_seed_P0(param(c, "C"));
        exact = s.P;
        drift = s.problem().drift;
    } else if (c.cfg.model == "uo") {
        const auto s = catalog::uo_seed_P0(param(c, "gamma"));
        exact = s.P;
        drift = s.problem().drift;
    }
    const auto ev = numerics::evolve_fpe(numerics::sample(exact, c.grid, c.grid.t_start), drift, c.grid);
    {
        std::ofstream os(c.out / "evolved.csv");
        os << "x,t,value\n";
        for (const auto& lv : ev.levels) {
            for (std::size_t i = 0; i < lv.grid.nx; ++i) {
                os << io::format_double(lv.grid.x(i)) << ',' << io::format_double(lv.time) << ','
                   << io::format_double(lv.values[i]) << '\n';
            }
        }
        c.artifacts.push_back("evolved.csv");
    }
    c.write_field("exact", exact, c.grid);
    json errs = json::array();
    double worst = 0.0;
    for (const auto& lv : ev.levels) {
        const double e = numerics::max_error(lv, exact);
        worst = std::max(worst, e);
        errs.push_back({{"t", lv.time}, {"l_inf", e}});
    }
    const double final_err = numerics::max_error(ev.levels.back(), exact);
    c.gate("evolve", "final.l_inf", final_err, c.tol);
    json j = c.header();
    j["mesh_ratio"] = c.grid.mesh_ratio();
    j["warnings"] = ev.warnings;
    j["final_l_inf"] = final_err;
    j["max_l_inf"] = worst;
    j["levels"] = errs;
    c.write_json("evolve", j);
}

void run_compare(Context& c) {
    const std::string& claim = c.cfg.claim;
    json j = c.header();
    j["claim"] = claim;
    if (claim == "forward-backward") {
        require_model(c, {"uo"});
        const double g = param(c, "gamma");
        const auto seq = catalog::uo_sequence(g);
        const Field p0 = catalog::uo_seed_P0(g).P;
        const Field fwd = forward_step_stationary(p0, seq, 1);
        const Field bwd = backward_step_stationary(p0, seq, 1);
        const auto cmp = numerics::compare(fwd, bwd, c.grid);
        c.write_field("P_+1", fwd, c.grid);
        c.write_field("P_-1", bwd, c.grid);
        j["comparison"] = comparison_json(cmp);
        j["ratio_spread"] = numerics::ratio_spread(fwd, bwd, c.grid);
        c.gate("compare", "l_inf_rel", cmp.l_inf_rel, c.tol);
    } else if (claim == "partner-closed-form") {
        require_model(c, {"guo", "guo-partner"});
        const auto d = guo_darboux(c);
        const Field closed = catalog::guo_partner_P1(param(c, "a"), param(c, "C")).P;
        const auto cmp = numerics::compare(d.p1, closed, c.grid);
        c.write_field("P_1", d.p1, c.grid);
        c.write_field("P_1_closed", closed, c.grid);
        j["comparison"] = comparison_json(cmp);
        c.gate("compare", "l_inf_rel", cmp.l_inf_rel, c.tol);
    } else if (claim == "hierarchy-closed-form") {
        require_model(c, {"guo", "uo"});
        if (c.cfg.k == 0 || std::abs(c.cfg.k) > 2 || (c.cfg.model == "guo" && c.cfg.k < 0)) {
            throw ConfigError("hierarchy-closed-form needs a closed form: k in {1,2} (guo) or "
                              "{-2,-1,1,2} (uo)");
        }
        const auto levels = build_hierarchy(c, c.cfg.k);
        const Level& top = levels.back();
        const auto cmp = numerics::compare(top.P, *top.closed, c.grid);
        c.write_field(level_name(top.k), top.P, c.grid);
        c.write_field(level_name(top.k) + "_closed", *top.closed, c.grid);
        j["k"] = top.k;
        j["comparison"] = comparison_json(cmp);
        c.gate("compare", "l_inf_rel", cmp.l_inf_rel, c.tol);
    } else if (claim == "series-closed-form" || claim == "series-partner") {
        require_model(c, {"uo"});
        if (c.cfg.N < 1 || c.cfg.N > 200) throw ConfigError("--N must lie in [1, 200]");
        const double g = param(c, "gamma");
        const auto eig = uo_eigensystem(g, static_cast<std::size_t>(c.cfg.N));
        const auto coef = expand_initial(DeltaStart{0.0}, eig);
        const bool partner = claim == "series-partner";
        const auto pe = partner ? std::optional(apply_A0(coef, eig)) : std::nullopt;
        const Field target = partner ? forward_step_stationary(catalog::uo_seed_P0(g).P,
                                                               catalog::uo_sequence(g), 1)
                                     : catalog::uo_seed_P0(g).P;
        std::vector<double> got, want;
        json per_t = json::array();
        std::ofstream os(c.out / "series.csv");
        os << "x,t,value\n";
        for (std::size_t n = 0; n < c.grid.nt; ++n) {
            const double t = c.grid.t(n);
            const Field s = partner ? partner_series(*pe, t) : evolve_expansion(coef, eig, t);
            double worst = 0.0;
            for (std::size_t i = 0; i < c.grid.nx; ++i) {
                const double x = c.grid.x(i);
                const double v = s.value(x, 0.0), w = target.value(x, t);
                os << io::format_double(x) << ',' << io::format_double(t) << ','
                   << io::format_double(v) << '\n';
                got.push_back(v);
                want.push_back(w);
                worst = std::max(worst, std::abs(v - w));
            }
            json row = {{"t", t}, {"l_inf", worst}};
            if (!partner) {
                try {
                    row["terms"] = choose_truncation(coef, eig, t);
                } catch (const NumericsError&) {
                    row["terms"] = eig.levels;
                }
            }
            per_t.push_back(row);
        }
        c.artifacts.push_back("series.csv");
        j["levels"] = eig.levels;
        j["times"] = per_t;
        if (partner) {
            const auto cmp = numerics::compare(got, want);
            j["comparison"] = comparison_json(cmp);
            c.gate("compare", "l_inf_rel", cmp.l_inf_rel, c.tol);
        } else {
            double worst = 0.0;
            for (std::size_t i = 0; i < got.size(); ++i) worst = std::max(worst, std::abs(got[i] - want[i]));
            j["l_inf"] = worst;
            c.gate("compare", "l_inf", worst, c.tol);
        }
    } else {
        throw ConfigError("compare needs --claim, one of: forward-backward, partner-closed-form, "
                          "hierarchy-closed-form, series-closed-form, series-partner");
    }
    c.write_json("compare", j);
}

int run_catalog() {
    const auto all = catalog::entries();
    std::size_t wn = 0, wd = 0;
    for (const auto& e : all) {
        wn = std::max(wn, e.name.size());
        wd = std::max(wd, e.drift_formula.size());
    }
    for (const auto& e : all) {
        std::printf("%-*s  %-*s  %zu\n", static_cast<int>(wn), e.name.c_str(), static_cast<int>(wd),
                    e.drift_formula.c_str(), e.known_solution_count);
    }
    return 0;
}

// ---- configuration -------------------------------------------------------------

std::vector<std::string> supported_models(const RunConfig& cfg) {
    if (cfg.pipeline == "darboux") return {"guo", "guo-partner"};
    if (cfg.pipeline == "hierarchy") return {"guo", "uo"};
    if (cfg.pipeline == "evolve") return {"heat", "guo", "uo"};
    if (cfg.pipeline == "compare") {
        if (cfg.claim == "partner-closed-form") return {"guo", "guo-partner"};
        if (cfg.claim == "hierarchy-closed-form") return {"guo", "uo"};
        if (cfg.claim.empty()) throw ConfigError("compare needs --claim");
        return {"uo"};
    }
    return {};
}

double default_tol(const RunConfig& cfg) {
    if (cfg.pipeline == "residual") return 1e-8;
    if (cfg.pipeline == "evolve") return 1e-3;
    if (cfg.pipeline == "compare" && cfg.claim == "series-partner") return 1e-7;
    return 1e-8;
}

Grid default_grid(const RunConfig& cfg, const catalog::ModelEntry& entry, const catalog::Params& p) {
    if (cfg.pipeline == "evolve") return Grid{-10.0, 10.0, 401, 0.25, 1.0, 151};
    if (cfg.pipeline == "compare" && cfg.claim.rfind("series-", 0) == 0) {
        return Grid{-6.0, 6.0, 121, 0.5, 1.0, 2};
    }
    if (cfg.pipeline == "darboux" || cfg.claim == "partner-closed-form") {
        const auto partner = catalog::entry("guo-partner");
        return partner.grid(p);
    }
    return entry.grid(p);
}

void validate_params(const std::string& model, const catalog::Params& p) {
    for (const auto& [key, v] : p) {
        if (!std::isfinite(v)) throw ConfigError("parameter " + key + " must be finite");
    }
    if (p.count("gamma") && !(p.at("gamma") > 0.0)) throw ConfigError("--gamma must be > 0");
    if (p.count("C") && !(p.at("C") > 0.0)) throw ConfigError("--C must be > 0");
    const auto names = catalog::si_family_names();
    if (std::find(names.begin(), names.end(), model) != names.end()) {
        const auto stub = catalog::si_family_stub(model);
        if (!stub.family->valid(p.at("a"))) {
            throw ConfigError("--a outside the validity domain of " + model + ": " + stub.family->rule);
        }
    }
}

std::string toml_string(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"' || ch == '\\') out += '\\';
        out += ch;
    }
    return out + '"';
}

std::string run_toml(const Context& c) {
    std::ostringstream os;
    os << "pipeline = " << toml_string(c.cfg.pipeline) << '\n';
    os << "model = " << toml_string(c.cfg.model) << '\n';
    for (const auto& [key, v] : c.params) os << key << " = " << io::format_double(v) << '\n';
    os << "k = " << c.cfg.k << '\n';
    os << "N = " << c.cfg.N << '\n';
    if (!c.cfg.claim.empty()) os << "claim = " << toml_string(c.cfg.claim) << '\n';
    os << "x-min = " << io::format_double(c.grid.x_min) << '\n';
    os << "x-max = " << io::format_double(c.grid.x_max) << '\n';
    os << "nx = " << c.grid.nx << '\n';
    os << "t-start = " << io::format_double(c.grid.t_start) << '\n';
    os << "t-end = " << io::format_double(c.grid.t_end) << '\n';
    os << "nt = " << c.grid.nt << '\n';
    os << "tol = " << io::format_double(c.tol) << '\n';
    os << "residual-tol = " << io::format_double(c.residual_tol) << '\n';
    os << "out = " << toml_string(c.cfg.out) << '\n';
    return os.str();
}

json libraries() {
    return {{"fpesusy", version},
            {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                          "." + std::to_string(EIGEN_MINOR_VERSION)},
            {"boost", BOOST_LIB_VERSION},
            {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                  std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                  std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
            {"cli11", CLI11_VERSION},
            {"compiler", __VERSION__}};
}

int execute(const RunConfig& cfg, const CLI::App& app) {
    const auto t0 = std::chrono::steady_clock::now();
    if (cfg.pipeline == "catalog") return run_catalog();
    if (cfg.model.empty()) throw ConfigError("--model is required for " + cfg.pipeline);

    const auto all = catalog::entries();
    const auto it = std::find_if(all.begin(), all.end(), [&](const auto& e) { return e.name == cfg.model; });
    if (it == all.end()) throw ConfigError("unknown model '" + cfg.model + "' (see `fpesusy catalog`)");

    const auto models = supported_models(cfg);
    if (!models.empty() && std::find(models.begin(), models.end(), cfg.model) == models.end()) {
        std::string list;
        for (const auto& m : models) list += (list.empty() ? "" : ", ") + m;
        throw ConfigError(cfg.pipeline + (cfg.claim.empty() ? "" : " --claim " + cfg.claim) +
                          " supports --model " + list + ", got '" + cfg.model + "'");
    }

    Context c;
    c.cfg = cfg;
    // darboux and the partner claim read (a, C) even under --model guo
    const bool partner = cfg.pipeline == "darboux" || cfg.claim == "partner-closed-form";
    c.params = partner && cfg.model == "guo" ? catalog::find(all, "guo-partner").defaults : it->defaults;
    for (const auto& [flag, key, value] : {std::tuple{"--gamma", "gamma", cfg.gamma},
                                           std::tuple{"--a", "a", cfg.a},
                                           std::tuple{"--C", "C", cfg.C}}) {
        if (app.get_option(flag)->count() == 0) continue;
        if (!c.params.count(key)) {
            throw ConfigError("model '" + cfg.model + "' takes no parameter " + std::string(flag));
        }
        c.params[key] = value;
    }
    validate_params(cfg.model, c.params);

    Grid g = default_grid(cfg, *it, c.params);
    if (cfg.x_min) g.x_min = *cfg.x_min;
    if (cfg.x_max) g.x_max = *cfg.x_max;
    if (cfg.nx) g.nx = *cfg.nx;
    if (cfg.t_start) g.t_start = *cfg.t_start;
    if (cfg.t_end) g.t_end = *cfg.t_end;
    if (cfg.nt) g.nt = *cfg.nt;
    try {
        g.validate();
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    if (!(g.t_start > 0.0)) throw ConfigError("--t-start must be > 0");
    c.grid = g;
    c.tol = cfg.tol.value_or(default_tol(cfg));
    c.residual_tol = cfg.residual_tol.value_or(1e-6);
    if (!(c.tol > 0.0) || !(c.residual_tol > 0.0)) throw ConfigError("tolerances must be > 0");

    c.out = cfg.out;
    fs::create_directories(c.out);

    if (cfg.pipeline == "residual") run_residual(c);
    else if (cfg.pipeline == "darboux") run_darboux(c);
    else if (cfg.pipeline == "hierarchy") run_hierarchy(c);
    else if (cfg.pipeline == "evolve") run_evolve(c);
    else if (cfg.pipeline == "compare") run_compare(c);

    std::ofstream(c.out / "run.toml") << run_toml(c);
    bool ok = true;
    json gates = json::array();
    for (const auto& gt : c.gates) {
        ok = ok && gt.passed();
        gates.push_back({{"report", gt.report + ".json"}, {"metric", gt.metric}, {"value", gt.value},
                         {"tol", gt.tol}, {"passed", gt.passed()}});
    }
    json config = {{"pipeline", cfg.pipeline}, {"model", cfg.model}, {"params", c.params},
                   {"k", cfg.k}, {"N", cfg.N}, {"grid", grid_json(c.grid)},
                   {"tol", c.tol}, {"residual_tol", c.residual_tol}, {"out", cfg.out}};
    if (!cfg.claim.empty()) config["claim"] = cfg.claim;
    json manifest = {{"tool", "fpesusy"},
                     {"config", config},
                     {"versions", libraries()},
                     {"artifacts", c.artifacts},
                     {"gates", gates},
                     {"passed", ok},
                     {"rerun", "fpesusy --config run.toml"},
                     {"wall_time_s", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}};
    std::ofstream(c.out / "manifest.json") << manifest.dump(2) << '\n';

    for (const auto& gt : c.gates) {
        std::printf("%-4s %s.json %s = %s (tol %s)\n", gt.passed() ? "ok" : "FAIL", gt.report.c_str(),
                    gt.metric.c_str(), io::format_double(gt.value).c_str(),
                    io::format_double(gt.tol).c_str());
    }
    if (!ok) {
        for (const auto& gt : c.gates) {
            if (!gt.passed()) {
                std::fprintf(stderr, "tolerance failure in %s.json: %s = %s >= %s\n", gt.report.c_str(),
                             gt.metric.c_str(), io::format_double(gt.value).c_str(),
                             io::format_double(gt.tol).c_str());
            }
        }
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Supersymmetric hierarchies of Fokker-Planck equations"};
    app.set_version_flag("--version", version);
    app.set_config("--config", "", "TOML run configuration; flags on the command line override it");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.fallthrough();
    app.require_subcommand(0, 1);

    RunConfig cfg;
    app.add_option("--pipeline", cfg.pipeline, "Pipeline when no subcommand is given (config files)")
        ->check(CLI::IsMember(kPipelines));
    app.add_option("--model", cfg.model, "Catalog model name");
    app.add_option("--gamma", cfg.gamma, "Oscillator rate gamma");
    app.add_option("--a", cfg.a, "Auxiliary shift a, or the family parameter of a shape-invariant stub");
    app.add_option("--C", cfg.C, "Integration constant C of gamma(t) = 1/(2(t+C))");
    app.add_option("--k", cfg.k, "Hierarchy index (signed for uo: <0 backward, >0 forward)");
    app.add_option("--N", cfg.N, "Highest eigenlevel index kept by series claims");
    app.add_option("--claim", cfg.claim, "Claim checked by `compare`")->check(CLI::IsMember(kClaims));
    app.add_option("--out", cfg.out, "Output directory")->envname("FPESUSY_OUT");
    app.add_option("--x-min", cfg.x_min);
    app.add_option("--x-max", cfg.x_max);
    app.add_option("--nx", cfg.nx, "Number of x nodes");
    app.add_option("--t-start", cfg.t_start);
    app.add_option("--t-end", cfg.t_end);
    app.add_option("--nt", cfg.nt, "Number of t nodes");
    app.add_option("--tol", cfg.tol, "Headline gate of the pipeline");
    app.add_option("--residual-tol", cfg.residual_tol, "FPE residual gate for constructed fields");

    app.add_subcommand("residual", "FPE residuals of every known solution of a model");
    app.add_subcommand("darboux", "Partner solution through the catalog auxiliary (guo)");
    app.add_subcommand("hierarchy", "Hierarchy P_0..P_k (guo: time-dependent, uo: stationary)");
    app.add_subcommand("evolve", "Crank-Nicolson evolution against the closed form");
    app.add_subcommand("compare", "Check a named claim (--claim)");
    auto* cat = app.add_subcommand("catalog", "List catalog entries: name, drift, known solutions");
    std::string action = "list";
    cat->add_option("action", action)->check(CLI::IsMember({"list"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    for (const auto* sub : app.get_subcommands()) cfg.pipeline = sub->get_name();
    if (cfg.pipeline.empty()) {
        std::cerr << "error: no pipeline given; use one of: residual, darboux, hierarchy, evolve, "
                     "compare, catalog\n";
        return 2;
    }
    try {
        return execute(cfg, app);
    } catch (const ConfigError& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return 2;
    } catch (const VerificationError& e) {
        std::cerr << "tolerance failure: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
