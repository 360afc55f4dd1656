// momdyn: moment phase-space dynamics toolkit
//
// Subcommands: bracket, realize, tunnel, thermo, effpot, ground, reconstruct.
// Exit codes: 0 ok, 1 numerical failure, 2 usage error.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "momdyn/dynamics.hpp"
#include "momdyn/effpot2.hpp"
#include "momdyn/oscillator_basis.hpp"
#include "momdyn/reconstruct.hpp"
#include "momdyn/thermo.hpp"
#include "momdyn/weyl.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace momdyn;

namespace {

constexpr const char* kVersion = "0.1.0";

struct GlobalOpts {
    std::string out_dir;
    std::string config_path;
    std::uint64_t seed = 0;
    double tol = 1e-10;
};

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream f(p);
    if (!f) throw Error("cannot write " + p.string());
    f << text;
}

// manifest echoing the resolved parameters next to every file output
void write_manifest(const GlobalOpts& g, const std::string& subcommand, const json& params) {
    if (g.out_dir.empty()) return;
    fs::create_directories(g.out_dir);
    json m;
    m["tool"] = "momdyn";
    m["version"] = kVersion;
    m["subcommand"] = subcommand;
    m["seed"] = g.seed;
    m["tolerance"] = g.tol;
    m["parameters"] = params;
    write_file(fs::path(g.out_dir) / "manifest.json", m.dump(2) + "\n");
}

void emit(const GlobalOpts& g, const std::string& name, const std::string& text) {
    if (g.out_dir.empty()) {
        std::cout << text;
    } else {
        fs::create_directories(g.out_dir);
        write_file(fs::path(g.out_dir) / name, text);
    }
}

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (...) {
            throw ConfigError("bad numeric list entry '" + item + "'");
        }
    }
    return out;
}

Potential1D potential_from(const std::string& name, double v_top, double gamma, double omega) {
    return Potential1D::named(name, {{"v_top", v_top}, {"gamma", gamma}, {"omega", omega}});
}

// ---------------------------------------------------------------- bracket

int cmd_bracket(const GlobalOpts& g, const std::string& a, const std::string& b, int order,
                bool oracle) {
    auto A = MomentIndex::parse(a, 1);
    auto B = MomentIndex::parse(b, 1);
    MomentPolynomial p = oracle ? weyl_bracket_oracle(A, B).truncated(order)
                                : bracket_single_dof(A, B, order);
    json params = {{"indexA", a}, {"indexB", b}, {"order", order}, {"oracle", oracle}};
    write_manifest(g, "bracket", params);
    emit(g, "bracket.txt", p.str() + "\n");
    return 0;
}

// ---------------------------------------------------------------- realize

int cmd_realize(const GlobalOpts& g, const std::string& name, const std::string& point_json,
                bool certify, int points) {
    const auto& R = realization(name);
    json params = {{"realization", name}, {"certify", certify}, {"points", points}};
    if (certify) {
        std::mt19937 rng(static_cast<unsigned>(g.seed ? g.seed : 1234));
        const bool second_only = name == "order3_ansatz" || name == "order4_ansatz";
        auto rep = closure_certificate(R, points, rng, second_only);
        json out = {{"realization", name},
                    {"pairs_checked", rep.pairs_checked},
                    {"points", rep.points},
                    {"max_rel_deviation", rep.max_rel},
                    {"worst_pair", rep.worst_pair},
                    {"second_order_pairs_only", second_only}};
        write_manifest(g, "realize", params);
        emit(g, "certificate.json", out.dump(2) + "\n");
        return rep.max_rel <= 1e-9 ? 0 : 1;
    }
    if (point_json.empty()) throw ConfigError("realize: --point JSON required");
    json jp = json::parse(point_json, nullptr, false);
    if (jp.is_discarded()) {
        std::ifstream f(point_json);
        if (!f) throw ConfigError("realize: --point is neither JSON nor a readable file");
        jp = json::parse(f);
    }
    std::vector<double> vals;
    for (const auto& nm : R.chart()->names()) {
        if (!jp.contains(nm)) throw ConfigError("realize: point is missing chart name '" + nm + "'");
        vals.push_back(jp[nm].get<double>());
    }
    params["point"] = jp;
    auto st = R.realize(R.point(vals));
    write_manifest(g, "realize", params);
    emit(g, "state.json", st.to_json() + "\n");
    return 0;
}

// ---------------------------------------------------------------- tunnel

int cmd_tunnel(const GlobalOpts& g, const std::string& model_name, double v_top, double gamma,
               double U, double mass, double t_max, const std::string& sweep_kind,
               const std::string& sweep_values, double start_q) {
    BarrierSpec spec{v_top, gamma, U, mass};
    TunnelModel model = tunnel_model_from_string(model_name);
    json params = {{"model", model_name}, {"v_top", v_top}, {"gamma", gamma}, {"U", U},
                   {"mass", mass},        {"t_max", t_max}, {"tol", g.tol}};

    if (!sweep_kind.empty()) {
        SweepKind kind;
        if (sweep_kind == "gamma")
            kind = SweepKind::gamma;
        else if (sweep_kind == "v_top")
            kind = SweepKind::v_top;
        else if (sweep_kind == "start_q")
            kind = SweepKind::start_q;
        else
            throw ConfigError("tunnel: --sweep must be gamma | v_top | start_q");
        auto values = parse_list(sweep_values);
        params["sweep"] = sweep_kind;
        params["values"] = values;
        auto rows = tunneling_sweep(spec, model, kind, values, t_max, g.tol);
        std::ostringstream csv;
        csv << "param,time,exit_q,exit_pi,status\n" << std::setprecision(17);
        for (const auto& r : rows)
            csv << r.param << "," << r.time << "," << r.exit_q << "," << r.exit_pi << ","
                << r.status << "\n";
        write_manifest(g, "tunnel", params);
        emit(g, "sweep.csv", csv.str());
        return 0;
    }

    params["start_q"] = start_q;
    auto r = tunneling_run(spec, model, t_max, g.tol,
                           start_q != 0.0 ? std::optional<double>(start_q) : std::nullopt);
    json out = {{"status", r.status},
                {"tunneling_time", r.tunneling_time},
                {"exit_position", r.exit_position},
                {"exit_momentum", r.exit_momentum},
                {"q_top", r.q_top},
                {"initial_energy", r.initial_energy},
                {"v0_estimate_display", r.v0_estimate},
                {"energy_drift", r.energy_drift},
                {"tunneling_time_definition", "first crossing of the numerically computed q_top"}};
    write_manifest(g, "tunnel", params);
    if (!g.out_dir.empty()) {
        std::ostringstream traj;
        r.trajectory.write_csv(traj);
        write_file(fs::path(g.out_dir) / "trajectory.csv", traj.str());
        json ev = json::array();
        for (const auto& e : r.trajectory.events) ev.push_back({{"time", e.time}, {"kind", e.kind}});
        write_file(fs::path(g.out_dir) / "events.json", ev.dump(2) + "\n");
    }
    emit(g, "result.json", out.dump(2) + "\n");
    return 0;
}

// ---------------------------------------------------------------- thermo

int cmd_thermo(const GlobalOpts& g, const std::string& betas_csv, const std::string& omegas_csv,
               double lambda, bool two_point, bool circle, double mass_m,
               const std::string& r_csv, int k_max) {
    auto betas = parse_list(betas_csv);
    auto omegas = parse_list(omegas_csv);
    if (betas.empty()) throw ConfigError("thermo: --betas required");
    json params = {{"betas", betas}, {"omegas", omegas}, {"lambda", lambda}};

    if (two_point || circle) {
        auto rs = parse_list(r_csv);
        if (rs.empty()) throw ConfigError("thermo: --r values required for two-point output");
        params["r"] = rs;
        params["mass_m"] = mass_m;
        params["circle"] = circle;
        params["k_max"] = k_max;
        std::ostringstream csv;
        csv << "beta,r,G2\n" << std::setprecision(17);
        for (double beta : betas)
            for (double r : rs) {
                const double v = circle ? circle_two_point(r, mass_m, beta, k_max)
                                        : two_point_function(r, mass_m, beta,
                                                             two_point_k_cut(beta, 1.0, 1e-8));
                csv << beta << "," << r << "," << v << "\n";
            }
        write_manifest(g, "thermo", params);
        emit(g, "two_point.csv", csv.str());
        return 0;
    }

    if (omegas.empty()) throw ConfigError("thermo: --omegas required");
    std::ostringstream csv;
    csv << "beta,omega,Z,s2,E,U,Z_quad_rel_delta,s2_quad_rel_delta\n" << std::setprecision(17);
    for (double beta : betas)
        for (double omega : omegas) {
            const double z = partition_function(beta, omega, lambda);
            const double zq = partition_function_quadrature(beta, omega, lambda);
            auto avg = ensemble_averages(beta, omega);
            auto avq = ensemble_averages_quadrature(beta, omega);
            csv << beta << "," << omega << "," << z << "," << avg.s2 << "," << avg.energy << ","
                << avg.casimir << "," << (z - zq) / zq << "," << (avg.s2 - avq.s2) / avq.s2 << "\n";
        }
    write_manifest(g, "thermo", params);
    emit(g, "thermo.csv", csv.str());
    return 0;
}

// ---------------------------------------------------------------- effpot

int cmd_effpot(const GlobalOpts& g, double omega, double gamma, const std::string& grid1,
               const std::string& grid2) {
    auto V = Potential2D::named("coupled_harmonic", {{"omega", omega}, {"gamma", gamma}});
    json params = {{"potential", "coupled_harmonic"}, {"omega", omega}, {"gamma", gamma}};

    if (grid1.empty()) {
        const auto hh = V.hessian(0.0, 0.0);
        Hessian2 h{hh[0], hh[1], hh[2]};
        auto m = minimize_moment_sector(h);
        json out = {{"E", low_energy_potential(0.0, 0.0, V)},
                    {"V_eff_minimized", m.value + V.value(0.0, 0.0)},
                    {"s1", m.s1},
                    {"s2", m.s2},
                    {"beta", m.beta},
                    {"closed_form", m.closed_form},
                    {"stationarity", m.stationarity}};
        write_manifest(g, "effpot", params);
        emit(g, "effpot.json", out.dump(2) + "\n");
        return 0;
    }
    auto g1 = parse_list(grid1), g2 = parse_list(grid2);
    if (g1.size() != 3 || g2.size() != 3)
        throw ConfigError("effpot: --q1-grid/--q2-grid want lo,hi,n");
    params["q1_grid"] = g1;
    params["q2_grid"] = g2;
    std::ostringstream csv;
    csv << "q1,q2,V,V_low,s1,s2,beta\n" << std::setprecision(17);
    const int n1 = static_cast<int>(g1[2]), n2 = static_cast<int>(g2[2]);
    for (int i = 0; i < n1; ++i) {
        const double q1 = g1[0] + (g1[1] - g1[0]) * (n1 == 1 ? 0.0 : double(i) / (n1 - 1));
        for (int j = 0; j < n2; ++j) {
            const double q2 = g2[0] + (g2[1] - g2[0]) * (n2 == 1 ? 0.0 : double(j) / (n2 - 1));
            const auto hh = V.hessian(q1, q2);
            auto m = minimize_moment_sector(Hessian2{hh[0], hh[1], hh[2]});
            csv << q1 << "," << q2 << "," << V.value(q1, q2) << ","
                << low_energy_potential(q1, q2, V) << "," << m.s1 << "," << m.s2 << "," << m.beta
                << "\n";
        }
    }
    write_manifest(g, "effpot", params);
    emit(g, "effpot_grid.csv", csv.str());
    return 0;
}

// ---------------------------------------------------------------- ground

int cmd_ground(const GlobalOpts& g, const std::string& pot_name, double U, double mass,
               double v_top, double gamma, double omega, int exact_basis) {
    auto V = potential_from(pot_name, v_top, gamma, omega);
    auto est = ground_state_estimate(V, U, mass);
    json out = {{"q", est.q}, {"s", est.s}, {"E", est.energy}};
    if (exact_basis > 0) out["exact"] = exact_ground_state(V, exact_basis, 1.0, mass);
    json params = {{"potential", pot_name}, {"U", U},         {"mass", mass},
                   {"v_top", v_top},        {"gamma", gamma}, {"omega", omega},
                   {"exact_basis", exact_basis}};
    write_manifest(g, "ground", params);
    emit(g, "ground.json", out.dump(2) + "\n");
    return 0;
}

// ---------------------------------------------------------------- reconstruct

int cmd_reconstruct(const GlobalOpts& g, const std::string& input, const std::string& grid_spec,
                    int order) {
    std::ifstream f(input);
    if (!f) throw ConfigError("reconstruct: cannot open input '" + input + "'");
    json jin = json::parse(f);
    const double hbar = jin.value("hbar", 1.0);
    std::vector<double> a = jin.at("a").get<std::vector<double>>();
    std::vector<double> b =
        jin.contains("b") ? jin.at("b").get<std::vector<double>>() : std::vector<double>(a.size(), 0.0);
    auto gs = parse_list(grid_spec);
    if (gs.size() != 3) throw ConfigError("reconstruct: --grid wants lo,hi,n");
    std::vector<double> grid;
    const int n = static_cast<int>(gs[2]);
    for (int i = 0; i < n; ++i) grid.push_back(gs[0] + (gs[1] - gs[0]) * double(i) / (n - 1));
    if (order < 0) order = static_cast<int>(a.size()) - 1;

    auto dres = density_from_moments(a, order, grid);
    auto pres = phase_from_moments(b, dres, order, hbar);
    std::ostringstream csv;
    csv << "q,density,dalpha_dq,alpha\n" << std::setprecision(17);
    for (std::size_t i = 0; i < grid.size(); ++i)
        csv << grid[i] << "," << dres.density[i] << "," << pres.dalpha_dq[i] << "," << pres.alpha[i]
            << "\n";
    json params = {{"input", input}, {"order", order}, {"hbar", hbar},
                   {"grid", gs},     {"raw_norm", dres.raw_norm},
                   {"truncation_residual", dres.truncation_residual}};
    write_manifest(g, "reconstruct", params);
    emit(g, "reconstruction.csv", csv.str());
    return 0;
}

// merge --config file values under the CLI defaults (flags win)
void apply_config(CLI::App& app, const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config '" + path + "'");
    json j = json::parse(f);
    for (auto it = j.begin(); it != j.end(); ++it) {
        auto* opt = app.get_option_no_throw("--" + it.key());
        if (!opt) throw ConfigError("unknown config key '" + it.key() + "'");
        if (opt->count() > 0) continue;  // explicit flags win
        opt->add_result(it.value().is_string() ? it.value().get<std::string>() : it.value().dump());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"momdyn: canonical dynamics on moment phase space"};
    app.require_subcommand(1);
    app.fallthrough();
    GlobalOpts g;
    app.add_option("--out", g.out_dir, "output directory (files + manifest)");
    app.add_option("--seed", g.seed, "seed for stochastic minimizer starts");
    app.add_option("--tol", g.tol, "integrator relative tolerance");

    // bracket
    auto* br = app.add_subcommand("bracket", "single-DOF moment bracket, e.g. bracket q2 pi2 --order 2");
    std::string idxA, idxB;
    int br_order = 2;
    bool br_oracle = false;
    br->add_option("indexA", idxA)->required();
    br->add_option("indexB", idxB)->required();
    br->add_option("--order", br_order, "truncation order");
    br->add_flag("--oracle", br_oracle, "use the commutator oracle instead of the closed form");

    // realize
    auto* re = app.add_subcommand("realize", "evaluate a realization at a chart point or certify it");
    std::string re_name = "order2", re_point;
    bool re_cert = false;
    int re_points = 50;
    re->add_option("--realization", re_name, "order2 | order3_systematic | order3_ansatz | order4_ansatz | twodof_order2");
    re->add_option("--point", re_point, "chart point as JSON object or a path to one");
    re->add_option("--config", g.config_path, "JSON config file");
    re->add_flag("--certify", re_cert, "run the bracket-closure certificate");
    re->add_option("--points", re_points, "random points for the certificate");

    // tunnel
    auto* tu = app.add_subcommand("tunnel", "tunneling runs in the quartic barrier");
    std::string tu_model = "all_orders", tu_sweep, tu_values;
    double tu_vtop = 1.0, tu_gamma = 0.1, tu_U = 0.25, tu_mass = 1.0, tu_tmax = 100.0, tu_q0 = 0.0;
    tu->add_option("--model", tu_model, "all_orders | order2 | order3_ansatz");
    tu->add_option("--v-top", tu_vtop);
    tu->add_option("--gamma", tu_gamma);
    tu->add_option("--U", tu_U);
    tu->add_option("--mass", tu_mass);
    tu->add_option("--t-max", tu_tmax);
    tu->add_option("--start-q", tu_q0);
    tu->add_option("--sweep", tu_sweep, "gamma | v_top | start_q");
    tu->add_option("--values", tu_values, "comma list of sweep values");
    tu->add_option("--config", g.config_path, "JSON config file");

    // thermo
    auto* th = app.add_subcommand("thermo", "mode thermodynamics and two-point functions");
    std::string th_betas = "1", th_omegas = "1", th_r;
    double th_lambda = 1.0, th_m = 1.0;
    bool th_two = false, th_circle = false;
    int th_kmax = 2000;
    th->add_option("--betas", th_betas, "comma list");
    th->add_option("--omegas", th_omegas, "comma list");
    th->add_option("--lambda", th_lambda);
    th->add_flag("--two-point", th_two);
    th->add_flag("--circle", th_circle);
    th->add_option("--m", th_m, "field mass");
    th->add_option("--r", th_r, "comma list of separations");
    th->add_option("--k-max", th_kmax);

    // effpot
    auto* ef = app.add_subcommand("effpot", "two-DOF low-energy effective potential");
    double ef_omega = 1.0, ef_gamma = 0.5;
    std::string ef_g1, ef_g2;
    ef->add_option("--omega", ef_omega);
    ef->add_option("--gamma", ef_gamma);
    ef->add_option("--q1-grid", ef_g1, "lo,hi,n");
    ef->add_option("--q2-grid", ef_g2, "lo,hi,n");

    // ground
    auto* gr = app.add_subcommand("ground", "all-orders ground-state estimate + exact oracle");
    std::string gr_pot = "abs";
    double gr_U = 0.25, gr_mass = 1.0, gr_vtop = 1.0, gr_gamma = 0.1, gr_omega = 1.0;
    int gr_basis = 240;
    gr->add_option("--potential", gr_pot, "abs | relativistic_sqrt | harmonic | quartic_barrier");
    gr->add_option("--U", gr_U);
    gr->add_option("--mass", gr_mass);
    gr->add_option("--v-top", gr_vtop);
    gr->add_option("--gamma", gr_gamma);
    gr->add_option("--omega", gr_omega);
    gr->add_option("--exact-basis", gr_basis, "oscillator basis size (0 skips the oracle)");

    // reconstruct
    auto* rc = app.add_subcommand("reconstruct", "density and phase from raw moments");
    std::string rc_input, rc_grid = "-4,4,401";
    int rc_order = -1;
    rc->add_option("--input", rc_input, "MomentInput JSON file")->required();
    rc->add_option("--grid", rc_grid, "lo,hi,n");
    rc->add_option("--order", rc_order, "series order (default: highest available moment)");

    try {
        app.parse(argc, argv);
        if (!g.config_path.empty()) {
            CLI::App* sub = app.get_subcommands().front();
            apply_config(*sub, g.config_path);
        }
        CLI::App* sub = app.get_subcommands().front();
        if (sub == br) return cmd_bracket(g, idxA, idxB, br_order, br_oracle);
        if (sub == re) return cmd_realize(g, re_name, re_point, re_cert, re_points);
        if (sub == tu)
            return cmd_tunnel(g, tu_model, tu_vtop, tu_gamma, tu_U, tu_mass, tu_tmax, tu_sweep,
                              tu_values, tu_q0);
        if (sub == th)
            return cmd_thermo(g, th_betas, th_omegas, th_lambda, th_two, th_circle, th_m, th_r,
                              th_kmax);
        if (sub == ef) return cmd_effpot(g, ef_omega, ef_gamma, ef_g1, ef_g2);
        if (sub == gr) return cmd_ground(g, gr_pot, gr_U, gr_mass, gr_vtop, gr_gamma, gr_omega, gr_basis);
        if (sub == rc) return cmd_reconstruct(g, rc_input, rc_grid, rc_order);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
