// Batch front end: one subcommand per run, settings from a key = value config file.
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage or configuration error.

#include "output.hpp"

#include "opcalc/acceptance.hpp"
#include "opcalc/angular.hpp"
#include "opcalc/bip.hpp"
#include "opcalc/config.hpp"
#include "opcalc/corpus.hpp"
#include "opcalc/discrete.hpp"
#include "opcalc/dpg.hpp"
#include "opcalc/oracle.hpp"
#include "opcalc/perturbation.hpp"
#include "opcalc/roots.hpp"
#include "opcalc/temporal.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace opcalc;
using opcalc::cli::CsvWriter;

namespace {

constexpr int kPass = 0, kFail = 1, kUsage = 2;

// Pinned checks asserted by the subcommands.
constexpr double kDpgTol = 1e-3;
constexpr double kRecoveryTol = 1e-5;
constexpr double kLimitTol = 1e-6;
constexpr double kSupTol = 1e-3;
constexpr double kGammaTol = 1e-6;
constexpr double kSectorEps = 0.1;

struct Common {
    std::string config_path;
    std::string out_dir;
    std::vector<std::string> overrides;
};

RunConfig resolve(const Common& c) {
    RunConfig cfg = c.config_path.empty() ? RunConfig{} : load_config(c.config_path);
    for (const auto& o : c.overrides) apply_override(cfg, o);
    if (!c.out_dir.empty()) cfg.output_dir = c.out_dir;
    return cfg;
}

cplx parse_complex(const std::string& s) {
    const auto comma = s.find(',');
    try {
        if (comma == std::string::npos) return {std::stod(s), 0.0};
        return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
    } catch (const std::exception&) {
        throw DomainError("expected re[,im], got '" + s + "'");
    }
}

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

void write_field(const fs::path& path, const std::string& cmd, const RunConfig& cfg, const SpaceTimeField& V) {
    CsvWriter w(path, cmd, cfg, {"t", "theta", "v1_re", "v1_im", "v2_re", "v2_im"});
    for (int m = 0; m < V.tgrid.size(); ++m)
        for (int j = 0; j < V.agrid.size(); ++j) {
            w << V.tgrid.node(m) << V.agrid.node(j) << V.v1(m, j).real() << V.v1(m, j).imag() << V.v2(m, j).real()
              << V.v2(m, j).imag();
            w.end_row();
        }
}

SpaceTimeField read_field(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot read '" + path.string() + "'");
    std::string line;
    bool header = false;
    std::vector<std::array<double, 6>> rows;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            if (line.rfind("t,theta,v1_re", 0) != 0)
                throw DomainError(path.string() + ": not a field CSV (header '" + line + "')");
            header = true;
            continue;
        }
        std::array<double, 6> r{};
        std::istringstream ss(line);
        std::string cell;
        for (double& x : r) {
            if (!std::getline(ss, cell, ',')) throw DomainError(path.string() + ":" + std::to_string(lineno) + ": short row");
            x = std::stod(cell);
        }
        rows.push_back(r);
    }
    if (rows.empty()) throw DomainError(path.string() + ": no data rows");
    int na = 0;
    while (na < static_cast<int>(rows.size()) && rows[na][0] == rows[0][0]) ++na;
    if (rows.size() % na != 0) throw DomainError(path.string() + ": rows do not form a t x theta grid");
    const int nt = static_cast<int>(rows.size()) / na;
    SpaceTimeField V(TemporalGrid(rows.back()[0], nt), AngularGrid(rows.back()[1], na));
    for (int m = 0; m < nt; ++m)
        for (int j = 0; j < na; ++j) {
            const auto& r = rows[static_cast<std::size_t>(m * na + j)];
            V.v1(m, j) = {r[2], r[3]};
            V.v2(m, j) = {r[4], r[5]};
        }
    return V;
}

Contour contour_for(const RunConfig& cfg) {
    return build_contour(cfg.params, angular_eigenvalues(cfg.params.omega, default_box, cfg.root_tol), cfg.n_nodes,
                         cfg.s_max, cfg.nu_prime);
}

fs::path out(const RunConfig& cfg, const std::string& name) { return fs::path(cfg.output_dir) / name; }

// ---------------------------------------------------------------------------------------------

int cmd_roots(const RunConfig& cfg, const std::string& family, const std::vector<double>& box_v) {
    Box box = default_box;
    if (!box_v.empty()) {
        if (box_v.size() != 4) throw DomainError("--box needs re_min,re_max,im_min,im_max");
        box = {box_v[0], box_v[1], box_v[2], box_v[3]};
    }
    std::vector<Family> fams;
    if (family == "all") fams = {Family::minus, Family::plus, Family::proof_minus, Family::proof_plus};
    else fams = {family_from_string(family)};

    json doc = cli::document("roots", cfg);
    doc["box"] = {box.re_min, box.re_max, box.im_min, box.im_max};
    CsvWriter w(out(cfg, "roots.csv"), "roots", cfg, {"family", "index", "re", "im", "residual", "eig_re", "eig_im"});
    std::vector<TranscendentalRoot> sinh_family;
    bool counts_agree = true;
    json fam_json = json::array();
    for (Family f : fams) {
        const RootSearchResult res = find_roots(Determinant{f, cfg.params.omega}, box, cfg.root_tol);
        for (const auto& r : res.roots) {
            w << std::string(to_string(f)) << r.index << r.value.real() << r.value.imag() << r.residual
              << r.eigenvalue.real() << r.eigenvalue.imag();
            w.end_row();
        }
        if (f == Family::minus || f == Family::plus)
            sinh_family.insert(sinh_family.end(), res.roots.begin(), res.roots.end());
        const bool agree = res.argument_count == static_cast<int>(res.roots.size());
        counts_agree = counts_agree && agree && res.diagnostics.empty();
        json diags = json::array();
        for (const auto& d : res.diagnostics) diags.push_back({{"seed", cjson(d.seed)}, {"message", d.message}});
        fam_json.push_back({{"family", std::string(to_string(f))},
                            {"found", res.roots.size()},
                            {"argument_count", res.argument_count},
                            {"counts_agree", agree},
                            {"diagnostics", diags}});
    }
    doc["families"] = fam_json;
    if (!sinh_family.empty()) {
        const double t = tau(sinh_family);
        const Separation s = check_separation(cfg.params.omega, cfg.params.nu(), t);
        doc["tau"] = t;
        doc["separation"] = {{"omega_nu", cfg.params.omega * cfg.params.nu()}, {"holds", s.holds}, {"margin", s.margin}};
        std::cout << "tau = " << format_double(t) << " (omega*nu = " << cfg.params.omega * cfg.params.nu()
                  << ", separation " << (s.holds ? "holds" : "fails") << ")\n";
    }
    doc["status"] = counts_agree ? "pass" : "fail";
    cli::write_json(out(cfg, "roots.json"), doc);
    return counts_agree ? kPass : kFail;
}

int cmd_eigs(const RunConfig& cfg) {
    const auto eigs = angular_eigenvalues(cfg.params.omega, default_box, cfg.root_tol);
    CsvWriter w(out(cfg, "eigs.csv"), "eigs", cfg, {"index", "re", "im", "sqrt_re", "sqrt_im"});
    for (std::size_t i = 0; i < eigs.size(); ++i) {
        const cplx s = std::sqrt(eigs[i]);
        w << static_cast<int>(i) << eigs[i].real() << eigs[i].imag() << s.real() << s.imag();
        w.end_row();
    }
    json doc = cli::document("eigs", cfg);
    doc["count"] = eigs.size();
    if (!eigs.empty()) {
        const double lowest = std::sqrt(eigs.front()).real();
        doc["epsilon0"] = estimate_epsilon0(cfg.params.omega);
        doc["lowest_sqrt_re"] = lowest;
        doc["margin"] = lowest - cfg.params.nu();
    }
    const Separation s = check_separation(cfg.params.omega, cfg.params.nu());
    doc["separation"] = {{"holds", s.holds}, {"margin", s.margin}};
    cli::write_json(out(cfg, "eigs.json"), doc);
    std::cout << eigs.size() << " eigenvalues; lowest Re sqrt = "
              << (eigs.empty() ? 0.0 : std::sqrt(eigs.front()).real()) << "\n";
    return kPass;
}

int cmd_resolve_angular(const RunConfig& cfg, const std::string& lambda_s, const std::string& variant) {
    const cplx lam = parse_complex(lambda_s);
    AngularResolventOptions opts;
    if (variant == "paper") opts.variant = UVariant::paper_eq;
    else if (variant != "proof") throw DomainError("--variant must be paper or proof");
    const AngularGrid ag = cfg.angular_grid();
    const AngularData data = corpus::angular_corpus(1, ag.omega(), cfg.seed).front();
    const StateVector F = sample(data, ag);
    const CVector fpp = sample_f1pp(data, ag);
    const StateVector psi = resolve_A(lam, F, ag, opts, &fpp);

    CsvWriter w(out(cfg, "resolve_angular.csv"), "resolve-angular", cfg,
                {"theta", "f1_re", "f1_im", "f2_re", "f2_im", "psi1_re", "psi1_im", "psi2_re", "psi2_im"});
    for (int i = 0; i < ag.size(); ++i) {
        w << ag.node(i) << F.psi1[i].real() << F.psi1[i].imag() << F.psi2[i].real() << F.psi2[i].imag()
          << psi.psi1[i].real() << psi.psi1[i].imag() << psi.psi2[i].real() << psi.psi2[i].imag();
        w.end_row();
    }

    json doc = cli::document("resolve-angular", cfg);
    doc["lambda"] = cjson(lam);
    doc["variant"] = variant;
    doc["norm_ratio"] = x_norm(psi, ag, cfg.params.p) / x_norm(F, ag, cfg.params.p);
    const StateVector ref = dense_clamped_oracle(lam, F, ag);
    const StateVector diff{psi.psi1 - ref.psi1, psi.psi2 - ref.psi2, DomainTag::X};
    doc["oracle_discrepancy"] = x_norm(diff, ag, cfg.params.p) / x_norm(ref, ag, cfg.params.p);
    doc["clamped"] = is_clamped(psi.psi1, ag.h(), 1e-2);

    bool ok = true;
    if (lam.imag() == 0.0 && lam.real() < 0.0) {
        const double e0 = estimate_epsilon0(ag.omega());
        const LemmaReport rep = verify_lemma_bounds(lam.real(), data, ag.omega(), cfg.params.p, e0);
        json ineq = json::array();
        for (const auto& q : rep.inequalities)
            ineq.push_back({{"name", q.name}, {"lhs", q.lhs}, {"rhs", q.rhs}, {"slack", q.slack()}, {"holds", q.holds()}});
        doc["lemma"] = {{"epsilon0", e0},
                        {"precondition", rep.precondition},
                        {"identity_error", rep.identity_error},
                        {"inequalities", ineq},
                        {"all_hold", rep.all_hold(cfg.quad_tol)}};
        ok = !rep.precondition || rep.all_hold(cfg.quad_tol);
    }
    doc["status"] = ok ? "pass" : "fail";
    cli::write_json(out(cfg, "resolve_angular.json"), doc);
    std::cout << "oracle discrepancy " << doc["oracle_discrepancy"].get<double>() << ", status "
              << (ok ? "pass" : "fail") << "\n";
    return ok ? kPass : kFail;
}

int cmd_resolve_temporal(const RunConfig& cfg, const std::string& lambda_s) {
    const cplx lam = parse_complex(lambda_s);
    const TemporalGrid tg = cfg.temporal_grid();
    const AngularGrid ag = cfg.angular_grid();
    const double nu = cfg.params.nu();
    TemporalResolventOptions opts;
    opts.decay_tol = cfg.decay_tol;
    const auto data = corpus::temporal_corpus(1, tg, ag, cfg.seed);
    const SpaceTimeField V = resolve_L1(lam, data.front(), nu, opts);
    write_field(out(cfg, "resolve_temporal.csv"), "resolve-temporal", cfg, V);

    const L1BoundReport rep = verify_L1_bound({lam}, data, nu, kSectorEps, cfg.params.p, opts);
    const L1BoundSample& s = rep.samples.front();
    json doc = cli::document("resolve-temporal", cfg);
    doc["lambda"] = cjson(lam);
    doc["eps_L1"] = kSectorEps;
    doc["in_sigma_nu"] = in_region(lam, {SpectralRegion::Kind::sigma_nu, nu, kSectorEps});
    doc["in_sigma_L1"] = s.in_sigma_L1;
    doc["ratio"] = s.ratio;
    doc["bound"] = s.bound;
    doc["proof_bound"] = s.proof_bound;
    doc["truncation_tail"] = truncation_tail(lam, nu, tg.T());
    const bool ok = s.proof_holds() && (!s.in_sigma_L1 || s.holds());
    doc["status"] = ok ? "pass" : "fail";
    cli::write_json(out(cfg, "resolve_temporal.json"), doc);
    std::cout << "ratio " << s.ratio << ", bound " << s.bound << ", status " << (ok ? "pass" : "fail") << "\n";
    return ok ? kPass : kFail;
}

int cmd_dpg(const RunConfig& cfg, bool manufactured, bool contour_only) {
    const TemporalGrid tg = cfg.temporal_grid();
    const AngularGrid ag = cfg.angular_grid();
    const double nu = cfg.params.nu();
    const Contour c = contour_for(cfg);
    const SpaceTimeField F = manufactured ? discrete::apply_sum(corpus::manufactured(tg, ag), nu)
                                          : corpus::field_corpus(1, tg, ag, cfg.seed).front();
    const DpgInverter inv(tg, ag, nu, c);

    const auto w_q = inv.integrand_norms(F, cfg.params.p);
    CsvWriter w(out(cfg, "contour.csv"), "dpg-solve", cfg, {"s", "re_z", "im_z", "abs_integrand"});
    for (std::size_t q = 0; q < c.z.size(); ++q) {
        w << c.s[q] << c.z[q].real() << c.z[q].imag() << w_q[q];
        w.end_row();
    }
    json doc = cli::document("dpg-solve", cfg);
    doc["contour"] = {{"nu", c.nu},         {"nu_prime", c.nu_prime}, {"margin", c.margin},
                      {"n_nodes", c.n_nodes}, {"s_max", c.s_max},     {"tail_estimate", c.tail_estimate}};
    bool ok = true;
    if (!contour_only) {
        const SpaceTimeField V = inv.apply(F);
        write_field(out(cfg, "dpg_solution.csv"), "dpg-solve", cfg, V);
        double residual = 0.0;
        const SpaceTimeField Vd = DirectSumSolver(tg, ag, nu).solve(F, &residual);
        const double disc = e_norm(V - Vd, cfg.params.p) / e_norm(Vd, cfg.params.p);
        doc["data"] = manufactured ? "manufactured" : "corpus";
        doc["discrepancy_vs_direct"] = disc;
        doc["direct_residual"] = residual;
        doc["tolerance"] = kDpgTol;
        if (manufactured) {
            const SpaceTimeField Vs = corpus::manufactured(tg, ag);
            doc["recovery_error"] = e_norm(V - Vs, cfg.params.p) / e_norm(Vs, cfg.params.p);
        }
        ok = disc <= kDpgTol;
        std::cout << "DP-G vs direct: " << disc << "\n";
    }
    doc["status"] = ok ? "pass" : "fail";
    cli::write_json(out(cfg, "dpg.json"), doc);
    return ok ? kPass : kFail;
}

json regularity_json(const RegularityReport& r) {
    return {{"norm_F", r.norm_F},
            {"norm_Vtt", r.norm_Vtt},
            {"norm_AV", r.norm_AV},
            {"c_tt", r.c_tt},
            {"c_A", r.c_A},
            {"origin", r.origin},
            {"trace_value", r.trace_value},
            {"trace_slope", r.trace_slope},
            {"tail", r.tail},
            {"thresholds",
             {{"c_max", r.thresholds.c_max},
              {"origin_tol", r.thresholds.origin_tol},
              {"trace_tol", r.thresholds.trace_tol},
              {"decay_tol", r.thresholds.decay_tol}}},
            {"finite", r.finite()},
            {"passed", r.passed()}};
}

json trace_json(const IterationTrace& t) {
    return {{"converged", t.converged},
            {"iterations", t.iterations()},
            {"increments", t.increments},
            {"ratios", t.ratios},
            {"max_ratio", t.max_ratio_after()}};
}

std::vector<double> sample_radii(const ProblemParams& P, const TemporalGrid& tg) {
    std::vector<double> radii;
    for (int m = 0; m + 1 < tg.size(); ++m) radii.push_back(P.rho * std::exp(-tg.node(m)));
    return radii;
}

void write_u(const fs::path& path, const std::string& cmd, const RunConfig& cfg, const SectorField& u) {
    CsvWriter w(path, cmd, cfg, {"r", "theta", "u_re", "u_im"});
    for (std::size_t i = 0; i < u.radii.size(); ++i)
        for (std::size_t j = 0; j < u.thetas.size(); ++j) {
            const cplx v = u.u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            w << u.radii[i] << u.thetas[j] << v.real() << v.imag();
            w.end_row();
        }
}

int cmd_solve(RunConfig cfg, std::optional<double> k, std::optional<double> rho, bool rho_auto, bool manufactured,
              bool direct) {
    if (k) cfg.params.k = *k;
    if (rho) cfg.params.rho = *rho;
    if (rho_auto && rho) throw DomainError("--rho and --rho-auto are exclusive");
    cfg.params.validate();
    const TemporalGrid tg = cfg.temporal_grid();
    const AngularGrid ag = cfg.angular_grid();
    const double nu = cfg.params.nu(), p = cfg.params.p;

    SumInverse inverse;
    if (direct) {
        auto solver = std::make_shared<DirectSumSolver>(tg, ag, nu);
        inverse = [solver](const SpaceTimeField& F) { return solver->solve(F); };
    } else {
        auto inv = std::make_shared<DpgInverter>(tg, ag, nu, contour_for(cfg));
        inverse = [inv](const SpaceTimeField& F) { return inv->apply(F); };
    }

    FixedPointOptions fo;
    fo.fp_tol = cfg.fp_tol;
    std::optional<double> rho0;
    if (rho_auto) {
        const auto probes = corpus::field_corpus(3, tg, ag, cfg.seed + 1);
        rho0 = estimate_rho0(cfg.params.k, probes, nu, inverse, p);
        if (std::isfinite(*rho0)) cfg.params.rho = *rho0;
        fo.rho0 = *rho0;
    }
    // Echo the config after rho is resolved.
    json trace_doc = cli::document("solve", cfg);
    if (rho0) trace_doc["rho0"] = std::isfinite(*rho0) ? json(*rho0) : json("inf");
    trace_doc["k"] = cfg.params.k;
    trace_doc["rho"] = cfg.params.rho;
    trace_doc["inverse"] = direct ? "direct" : "dpg";

    const SpaceTimeField Vs = corpus::manufactured(tg, ag);
    const SpaceTimeField F = manufactured ? apply_full(Vs, cfg.params) : corpus::field_corpus(1, tg, ag, cfg.seed).front();
    trace_doc["data"] = manufactured ? "manufactured" : "corpus";

    std::optional<FullSolution> solved;
    try {
        solved = solve_full(F, cfg.params, inverse, fo, p);
    } catch (const DivergenceError& e) {
        trace_doc["trace"] = trace_json(e.trace());
        trace_doc["error"] = e.what();
        trace_doc["status"] = "fail";
        cli::write_json(out(cfg, "trace.json"), trace_doc);
        std::cerr << "error: " << e.what() << "\n";
        return kFail;
    }
    const FullSolution& sol = *solved;
    trace_doc["trace"] = trace_json(sol.trace);
    trace_doc["residual"] = sol.residual;
    bool ok = sol.trace.converged;
    if (manufactured) {
        const double rec = e_norm(sol.V - Vs, p) / e_norm(Vs, p);
        trace_doc["recovery_error"] = rec;
        trace_doc["recovery_tol"] = kRecoveryTol;
        ok = ok && rec <= kRecoveryTol;
    }
    write_field(out(cfg, "solution.csv"), "solve", cfg, sol.V);

    const RegularityReport reg = classical_regularity_check(sol.V, F, p);
    json reg_doc = cli::document("solve", cfg);
    reg_doc["regularity"] = regularity_json(reg);
    cli::write_json(out(cfg, "regularity.json"), reg_doc);
    ok = ok && reg.passed();

    const SectorField u = reconstruct_u(sol.V, cfg.params, PolarGrid{sample_radii(cfg.params, tg)});
    write_u(out(cfg, "u.csv"), "solve", cfg, u);

    trace_doc["status"] = ok ? "pass" : "fail";
    cli::write_json(out(cfg, "trace.json"), trace_doc);
    std::cout << "rho = " << cfg.params.rho << ", " << sol.trace.iterations() << " iterations, regularity "
              << (reg.passed() ? "pass" : "fail") << "\n";
    return ok ? kPass : kFail;
}

int cmd_verify(const RunConfig& cfg, const std::vector<int>& only) {
    acceptance::Options o;
    o.seed = cfg.seed;
    o.only = only;
    const auto results = acceptance::run(o);
    json doc = cli::document("verify", cfg);
    json suites = json::array();
    bool all = !results.empty();
    for (const auto& r : results) {
        std::cout << acceptance::format_line(r) << "\n";
        suites.push_back({{"id", r.id},
                          {"name", r.name},
                          {"status", r.passed ? "pass" : "fail"},
                          {"measured", r.measured},
                          {"threshold", r.threshold},
                          {"detail", r.detail}});
        all = all && r.passed;
    }
    doc["suites"] = suites;
    doc["verdict"] = all ? "pass" : "fail";
    cli::write_json(out(cfg, "verdict.json"), doc);
    return all ? kPass : kFail;
}

int cmd_bip(const RunConfig& cfg, const std::vector<double>& rs, int per_decade, double lo, double hi) {
    const auto grid = symmetric_log_grid(lo, hi, per_decade);
    CsvWriter w(out(cfg, "bip.csv"), "bip-check", cfg, {"r", "xi", "abs_m", "abs_xi_mprime", "abs_xi_dm_dxi"});
    json doc = cli::document("bip-check", cfg);
    json per_r = json::array();
    bool ok = true;
    for (double r : rs) {
        for (double xi : grid) {
            w << r << xi << std::abs(multiplier(xi, r)) << std::abs(xi_times_mprime(xi, r))
              << std::abs(xi_dm_dxi(xi, r));
            w.end_row();
        }
        const SupBounds b = sup_bounds(r, grid);
        const double a = std::abs(r);
        const bool pass = std::abs(b.limit_m - a / 2) <= kLimitTol && std::abs(b.limit_xm - 3 * a / 32) <= kLimitTol &&
                          std::abs(b.sup_m - a / 2) <= kSupTol && std::abs(b.sup_xm - 3 * a / 32) <= kSupTol &&
                          std::abs(b.mikhlin_sum - 19 * a / 32) <= kSupTol;
        ok = ok && pass;
        per_r.push_back({{"r", r},
                         {"sup_m", b.sup_m},
                         {"sup_xi_mprime", b.sup_xm},
                         {"mikhlin_sum", b.mikhlin_sum},
                         {"limit_m", b.limit_m},
                         {"limit_xi_mprime", b.limit_xm},
                         {"expected", {a / 2, 3 * a / 32, 19 * a / 32}},
                         {"argmax_m", b.argmax_m},
                         {"argmax_xi_mprime", b.argmax_xm},
                         {"sup_true_derivative", b.sup_true_derivative},
                         {"argmax_true_derivative", b.argmax_true_derivative},
                         {"attained_at_origin", b.attained_at_origin()},
                         {"status", pass ? "pass" : "fail"}});
    }
    doc["grid"] = {{"lo", lo}, {"hi", hi}, {"per_decade", per_decade}, {"points", grid.size()}};
    doc["multipliers"] = per_r;
    const GammaReport g = gamma_reflection_check({cplx(0.5, 0.0), cplx(0.3, -2.0), cplx(0.7, 5.0)});
    json gs = json::array();
    for (const auto& s : g.samples)
        gs.push_back({{"z", cjson(s.z)}, {"integral", cjson(s.integral)}, {"error", s.error}, {"flip_error", s.flip_error}});
    doc["gamma"] = gs;
    ok = ok && g.max_error() <= kGammaTol && g.max_flip_error() <= kGammaTol;
    doc["status"] = ok ? "pass" : "fail";
    cli::write_json(out(cfg, "bip.json"), doc);
    std::cout << "bip-check " << (ok ? "pass" : "fail") << "\n";
    return ok ? kPass : kFail;
}

int cmd_reconstruct(const RunConfig& cfg, const std::string& input) {
    const SpaceTimeField V = read_field(input);
    if (std::abs(V.agrid.omega() - cfg.params.omega) > 1e-9 * cfg.params.omega)
        throw DomainError("field omega " + format_double(V.agrid.omega()) + " differs from problem.omega " +
                          format_double(cfg.params.omega));
    const SectorField u = reconstruct_u(V, cfg.params, PolarGrid{sample_radii(cfg.params, V.tgrid)});
    write_u(out(cfg, "u.csv"), "reconstruct", cfg, u);
    const double top = u.u.size() ? u.u.cwiseAbs().maxCoeff() : 0.0;
    const double rel_trace = top > 0 ? u.trace_value() / top : 0.0;
    json doc = cli::document("reconstruct", cfg);
    doc["input"] = input;
    doc["r_min"] = cfg.params.rho * std::exp(-V.tgrid.T());
    doc["trace_value"] = u.trace_value();
    doc["trace_normal_derivative"] = u.trace_normal_derivative();
    const bool ok = rel_trace <= 1e-12;
    doc["status"] = ok ? "pass" : "fail";
    cli::write_json(out(cfg, "reconstruct.json"), doc);
    return ok ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"opcalc: operator-calculus toolkit for the clamped-sector problem"};
    app.require_subcommand(1);
    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("-c,--config", common.config_path, "config file (key = value, [sections])")->check(CLI::ExistingFile);
        sub->add_option("-o,--out", common.out_dir, "output directory (overrides run.output_dir)");
        sub->add_option("--set", common.overrides, "section.key=value override, repeatable");
    };

    std::string family = "all";
    std::vector<double> box;
    auto* roots = app.add_subcommand("roots", "roots of the determinant families and tau");
    add_common(roots);
    roots->add_option("--family", family, "minus, plus, proof-minus, proof-plus or all");
    roots->add_option("--box", box, "re_min,re_max,im_min,im_max")->delimiter(',')->expected(4);

    auto* eigs = app.add_subcommand("eigs", "eigenvalues of the angular operator");
    add_common(eigs);

    std::string lambda_a = "-1", variant = "proof";
    auto* ra = app.add_subcommand("resolve-angular", "(A - lambda)^-1 on a corpus datum plus the lemma checks");
    add_common(ra);
    ra->add_option("--lambda", lambda_a, "re[,im]");
    ra->add_option("--variant", variant, "proof or paper");

    std::string lambda_t = "16";
    auto* rt = app.add_subcommand("resolve-temporal", "(L1 - lambda)^-1 on a corpus field");
    add_common(rt);
    rt->add_option("--lambda", lambda_t, "re[,im]");

    bool dpg_manufactured = false, contour_only = false;
    auto* dpg = app.add_subcommand("dpg-solve", "contour inversion of L1 + L2 with a direct-solve cross-check");
    add_common(dpg);
    dpg->add_flag("--manufactured", dpg_manufactured, "use F = (L1 + L2)V* for the manufactured V*");
    dpg->add_flag("--contour-only", contour_only, "only dump the contour and integrand norms");

    std::optional<double> k, rho;
    bool rho_auto = false, solve_manufactured = false, direct = false;
    auto* solve = app.add_subcommand("solve", "full perturbed solve by fixed-point iteration");
    add_common(solve);
    solve->add_option("--k", k, "coupling k");
    solve->add_option("--rho", rho, "radius rho");
    solve->add_flag("--rho-auto", rho_auto, "use the estimated contraction radius rho0");
    solve->add_flag("--manufactured", solve_manufactured, "recover the manufactured V*");
    solve->add_flag("--direct", direct, "invert L1 + L2 by sparse LU instead of the contour integral");

    std::vector<int> only;
    auto* verify = app.add_subcommand("verify", "run acceptance criteria 1-10, write verdict.json");
    add_common(verify);
    verify->add_option("--only", only, "criteria to run")->delimiter(',')->check(CLI::Range(1, 10));

    std::vector<double> rs{1.0};
    int per_decade = 2000;
    double lo = 1e-8, hi = 1e4;
    auto* bip = app.add_subcommand("bip-check", "multiplier suprema and the gamma reflection check");
    add_common(bip);
    bip->add_option("--r", rs, "comma-separated r values")->delimiter(',');
    bip->add_option("--per-decade", per_decade, "grid points per decade of |xi|")->check(CLI::PositiveNumber);
    bip->add_option("--lo", lo, "smallest |xi|")->check(CLI::PositiveNumber);
    bip->add_option("--hi", hi, "largest |xi|")->check(CLI::PositiveNumber);

    std::string input;
    auto* rec = app.add_subcommand("reconstruct", "u(r, theta) from a solution CSV");
    add_common(rec);
    rec->add_option("--input", input, "field CSV written by solve or dpg-solve")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kUsage;
    }

    RunConfig cfg;
    try {
        cfg = resolve(common);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        cli::DirectoryLock lock(cfg.output_dir);
        if (*roots) return cmd_roots(cfg, family, box);
        if (*eigs) return cmd_eigs(cfg);
        if (*ra) return cmd_resolve_angular(cfg, lambda_a, variant);
        if (*rt) return cmd_resolve_temporal(cfg, lambda_t);
        if (*dpg) return cmd_dpg(cfg, dpg_manufactured, contour_only);
        if (*solve) return cmd_solve(cfg, k, rho, rho_auto, solve_manufactured, direct);
        if (*verify) return cmd_verify(cfg, only);
        if (*bip) return cmd_bip(cfg, rs, per_decade, lo, hi);
        if (*rec) return cmd_reconstruct(cfg, input);
    } catch (const ConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFail;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
