#include "momdyn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <atomic>
#include <functional>
#include <thread>

#include "momdyn/minimize.hpp"

namespace momdyn {

namespace {

// Dormand-Prince 5(4) tableau
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176,
                 A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784,
                 B6 = 11.0 / 84;
constexpr double E1 = 35.0 / 384 - 5179.0 / 57600, E3 = 500.0 / 1113 - 7571.0 / 16695,
                 E4 = 125.0 / 192 - 393.0 / 640, E5 = -2187.0 / 6784 + 92097.0 / 339200,
                 E6 = 11.0 / 84 - 187.0 / 2100, E7 = -1.0 / 40;

struct Field {
    const ChartFunction& H;
    std::shared_ptr<const CanonicalChart> chart;
    int npairs;

    // dy = J grad H; returns false on non-finite evaluation
    bool operator()(const std::vector<double>& y, std::vector<double>& dy) const {
        const std::size_t n = y.size();
        std::array<Dual<double>, kMaxChartVars> buf;
        for (std::size_t i = 0; i < n; ++i) buf[i] = Dual<double>{y[i], 0.0};
        const std::span<const Dual<double>> xs(buf.data(), n);
        std::fill(dy.begin(), dy.end(), 0.0);
        for (int k = 0; k < npairs; ++k) {
            buf[2 * k].b = 1.0;
            Dual<double> gs = H.eval<Dual<double>>(xs);
            buf[2 * k].b = 0.0;
            buf[2 * k + 1].b = 1.0;
            Dual<double> gp = H.eval<Dual<double>>(xs);
            buf[2 * k + 1].b = 0.0;
            if (!dual_finite(gs) || !dual_finite(gp)) return false;
            dy[2 * k] = gp.b;
            dy[2 * k + 1] = -gs.b;
        }
        return true;
    }
};

void run_parallel(std::size_t n, const std::function<void(std::size_t)>& body) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(hw, n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) body(i);
        });
    for (auto& t : pool) t.join();
}

}  // namespace

void Trajectory::write_csv(std::ostream& os) const {
    os << "t";
    for (const auto& name : chart->names()) os << "," << name;
    os << ",E\n";
    os << std::setprecision(17);
    for (std::size_t i = 0; i < times.size(); ++i) {
        os << times[i];
        for (double v : states[i]) os << "," << v;
        os << "," << energies[i] << "\n";
    }
}

Trajectory integrate(const ChartFunction& H, const ChartPoint& x0, const IntegrateOptions& opt) {
    Trajectory traj;
    traj.chart = x0.chart;
    const std::size_t n = x0.v.size();
    Field field{H, x0.chart, x0.chart->npairs()};

    std::vector<double> y = x0.v, dy(n), ynew(n), err(n);
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n);
    double t = 0.0, h = opt.h_init;
    const double E0 = H(x0);
    double drift = 0.0;

    auto record = [&](double tt, const std::vector<double>& yy, double E) {
        traj.times.push_back(tt);
        traj.states.push_back(yy);
        traj.energies.push_back(E);
        drift = std::max(drift, std::abs(E - E0) / std::max(1.0, std::abs(E0)));
    };
    record(0.0, y, E0);

    if (!field(y, k1)) {
        traj.status = "singularity_stop";
        traj.events.push_back({0.0, "singularity_stop"});
        return traj;
    }

    long steps = 0;
    const double t_end = opt.t_max * (1.0 - 1e-14) - 1e-300;
    while (t < t_end && steps++ < opt.max_steps) {
        h = std::min(h, opt.t_max - t);
        bool bad = false;
        auto stage = [&](std::vector<double>& out, std::initializer_list<std::pair<const std::vector<double>*, double>> terms) {
            for (std::size_t i = 0; i < n; ++i) {
                double acc = y[i];
                for (const auto& [kv, c] : terms) acc += h * c * (*kv)[i];
                tmp[i] = acc;
            }
            if (!field(tmp, out)) bad = true;
        };
        stage(k2, {{&k1, A21}});
        if (!bad) stage(k3, {{&k1, A31}, {&k2, A32}});
        if (!bad) stage(k4, {{&k1, A41}, {&k2, A42}, {&k3, A43}});
        if (!bad) stage(k5, {{&k1, A51}, {&k2, A52}, {&k3, A53}, {&k4, A54}});
        if (!bad) stage(k6, {{&k1, A61}, {&k2, A62}, {&k3, A63}, {&k4, A64}, {&k5, A65}});
        if (!bad) {
            for (std::size_t i = 0; i < n; ++i)
                ynew[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
            if (!field(ynew, k7)) bad = true;
        }
        if (bad) {
            h *= 0.25;
            if (h < opt.h_min) {
                traj.status = "singularity_stop";
                traj.events.push_back({t, "singularity_stop"});
                return traj;
            }
            continue;
        }
        double errnorm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e =
                h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            const double sc = opt.tol + opt.tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            errnorm += (e / sc) * (e / sc);
        }
        errnorm = std::sqrt(errnorm / n);
        if (errnorm > 1.0) {
            h *= std::max(0.2, 0.9 * std::pow(errnorm, -0.2));
            if (h < opt.h_min) throw StepFailure("integrate: step size underflow at t=" + std::to_string(t));
            continue;
        }

        const double tnew = t + h;
        ChartPoint xp(x0.chart, ynew);
        const double E = H(xp);

        if (opt.event_var >= 0) {
            const double prev = y[opt.event_var] - opt.event_threshold;
            const double cur = ynew[opt.event_var] - opt.event_threshold;
            if (prev < 0.0 && cur >= 0.0) {
                // cubic Hermite interpolation of the crossing inside the step
                const double y0 = prev, y1 = cur;
                const double d0 = h * k1[opt.event_var], d1 = h * k7[opt.event_var];
                double lo = 0.0, hi = 1.0;
                auto hermite = [&](double u) {
                    const double u2 = u * u, u3 = u2 * u;
                    return (2 * u3 - 3 * u2 + 1) * y0 + (u3 - 2 * u2 + u) * d0 +
                           (-2 * u3 + 3 * u2) * y1 + (u3 - u2) * d1;
                };
                for (int it = 0; it < 60; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    (hermite(mid) < 0.0 ? lo : hi) = mid;
                }
                const double tev = t + 0.5 * (lo + hi) * h;
                traj.events.push_back({tev, opt.event_kind});
                record(tnew, ynew, E);
                if (opt.stop_on_event) {
                    traj.energy_drift = drift;
                    traj.status = "event";
                    return traj;
                }
                y = ynew;
                k1 = k7;
                t = tnew;
                h *= std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(errnorm, 1e-10), -0.2)));
                continue;
            }
        }

        record(tnew, ynew, E);
        y = ynew;
        k1 = k7;  // FSAL
        t = tnew;
        h *= std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(errnorm, 1e-10), -0.2)));
    }
    traj.energy_drift = drift;
    traj.status = t >= t_end ? "completed" : "step_limit";
    return traj;
}

Potential1D barrier_potential(const BarrierSpec& spec) {
    return Potential1D::named("quartic_barrier", {{"v_top", spec.v_top}, {"gamma", spec.gamma}});
}

double barrier_top_position(const BarrierSpec& spec) {
    // critical points of q^2(q-1)(q-1/g): q (4q^2 - 3(1+1/g)q + 2/g) = 0
    const double g = spec.gamma;
    const double b = 3.0 * (1.0 + 1.0 / g);
    const double disc = b * b - 32.0 / g;
    if (disc < 0.0) throw Error("barrier_top_position: no interior critical point");
    return (b - std::sqrt(disc)) / 8.0;
}

ChartPoint tunneling_initial_conditions(const BarrierSpec& spec) {
    const double s = std::pow(2.0 * spec.U / (27.0 * spec.v_top), 0.25);
    return ChartPoint(all_orders_chart(), {0.0, 0.0, s, 0.0, spec.U});
}

double tunneling_v0_estimate(const BarrierSpec& spec) {
    return 3.0 / 8.0 * std::sqrt(3.0 * spec.U / spec.v_top) * (spec.v_top + 2.0);
}

TunnelModel tunnel_model_from_string(const std::string& name) {
    if (name == "all_orders") return TunnelModel::all_orders;
    if (name == "order2") return TunnelModel::order2;
    if (name == "order3_ansatz") return TunnelModel::order3_ansatz;
    throw ConfigError("unknown tunnel model '" + name + "'");
}

std::string to_string(TunnelModel m) {
    switch (m) {
        case TunnelModel::all_orders: return "all_orders";
        case TunnelModel::order2: return "order2";
        default: return "order3_ansatz";
    }
}

namespace {

// Ground-state-like start for the order-3 ansatz chart: minimize the
// momentum-free part of H_eff at q = q0 over distinct (s1,s2,s3), confined to
// the metastable neighbourhood (the static landscape is unbounded below along
// single-coordinate runaways, which is the tunneling channel itself).
std::vector<double> order3_static_start(const ChartFunction& H,
                                        const std::shared_ptr<const CanonicalChart>& chart, double q0,
                                        double U) {
    const double box = 1.0;
    auto f = [&](std::span<const double> s) {
        ChartPoint x(chart, {q0, 0.0, s[0], 0.0, s[1], 0.0, s[2], 0.0, U});
        return H(x);
    };
    auto feasible = [box](std::span<const double> s) {
        const double gap = 5e-3;
        return std::abs(s[0] - s[1]) > gap && std::abs(s[0] - s[2]) > gap &&
               std::abs(s[1] - s[2]) > gap && std::abs(s[0]) < box && std::abs(s[1]) < box &&
               std::abs(s[2]) < box;
    };
    PatternResult best;
    bool found = false;
    for (double scale : {0.25, 0.4, 0.6}) {
        auto r = pattern_search(f, {-1.1 * scale, 0.07 * scale, scale}, 0.05, 1e-8, feasible);
        if (!r.converged) continue;
        // discard runaways pinned to the box wall
        if (std::abs(r.x[0]) > 0.95 * box || std::abs(r.x[1]) > 0.95 * box ||
            std::abs(r.x[2]) > 0.95 * box)
            continue;
        if (!found || r.value < best.value) {
            best = r;
            found = true;
        }
    }
    if (!found)
        throw NoMinimumFound("order3 start: no metastable moment configuration inside the box");
    return {q0, 0.0, best.x[0], 0.0, best.x[1], 0.0, best.x[2], 0.0, U};
}

}  // namespace

TunnelResult tunneling_run(const BarrierSpec& spec, TunnelModel model, double t_max, double tol,
                           std::optional<double> start_q) {
    const Potential1D V = barrier_potential(spec);
    TunnelResult res;
    res.q_top = barrier_top_position(spec);
    res.v0_estimate = tunneling_v0_estimate(spec);

    ChartFunction H;
    ChartPoint x0;
    const double q0 = start_q.value_or(0.0);
    const double s0 = std::pow(2.0 * spec.U / (27.0 * spec.v_top), 0.25);
    if (model == TunnelModel::all_orders) {
        H = all_orders_hamiltonian(V, spec.mass);
        x0 = ChartPoint(all_orders_chart(), {q0, 0.0, s0, 0.0, spec.U});
    } else if (model == TunnelModel::order2) {
        EffectiveModel em{V, "order2", 2, spec.mass, 1.0};
        H = taylor_effective_hamiltonian(em);
        x0 = ChartPoint(effective_chart(em), {q0, 0.0, s0, 0.0, spec.U});
    } else {
        EffectiveModel em{V, "order3_ansatz", 3, spec.mass, 1.0};
        H = taylor_effective_hamiltonian(em);
        x0 = ChartPoint(effective_chart(em), order3_static_start(H, effective_chart(em), q0, spec.U));
    }
    res.initial_energy = H(x0);

    IntegrateOptions opt;
    opt.t_max = t_max;
    opt.tol = tol;
    opt.event_var = 0;  // q
    opt.event_threshold = res.q_top;
    opt.stop_on_event = true;
    res.trajectory = integrate(H, x0, opt);
    res.energy_drift = res.trajectory.energy_drift;

    if (res.trajectory.status == "event") {
        res.status = "escaped";
        res.tunneling_time = res.trajectory.events.back().time;
        const auto& last = res.trajectory.states.back();
        res.exit_position = last[0];
        res.exit_momentum = last[1];
        res.trajectory.events.push_back({res.tunneling_time, "escape"});
        res.trajectory.status = "escaped";
    } else if (res.trajectory.status == "singularity_stop") {
        res.status = "singularity_stop";
    } else {
        res.status = "no_escape";
    }
    return res;
}

std::vector<SweepRow> tunneling_sweep(const BarrierSpec& base, TunnelModel model, SweepKind kind,
                                      const std::vector<double>& values, double t_max, double tol) {
    std::vector<SweepRow> rows(values.size());
    run_parallel(values.size(), [&](std::size_t i) {
        SweepRow row;
        row.param = values[i];
        try {
            BarrierSpec spec = base;
            std::optional<double> q0;
            if (kind == SweepKind::gamma)
                spec.gamma = values[i];
            else if (kind == SweepKind::v_top)
                spec.v_top = values[i];
            else
                q0 = values[i];
            auto r = tunneling_run(spec, model, t_max, tol, q0);
            row.status = r.status;
            row.time = r.tunneling_time;
            row.exit_q = r.exit_position;
            row.exit_pi = r.exit_momentum;
        } catch (const Error& e) {
            row.status = std::string("error: ") + e.what();
        }
        rows[i] = std::move(row);
    });
    return rows;
}

}  // namespace momdyn
