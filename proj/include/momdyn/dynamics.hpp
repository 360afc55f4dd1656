#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "momdyn/effective_model.hpp"

namespace momdyn {

struct TrajectoryEvent {
    double time = 0.0;
    std::string kind;  // barrier_crossing | escape | singularity_stop
};

struct Trajectory {
    std::shared_ptr<const CanonicalChart> chart;
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    std::vector<double> energies;
    std::vector<TrajectoryEvent> events;
    double energy_drift = 0.0;  // max |E(t)-E(0)| / max(1,|E(0)|)
    std::string status = "completed";

    // CSV columns: t, chart names in layout order, E
    void write_csv(std::ostream& os) const;
};

struct IntegrateOptions {
    double t_max = 100.0;
    double tol = 1e-10;
    double h_init = 1e-3;
    double h_min = 1e-12;
    long max_steps = 20000000;
    // upward-crossing event on chart variable `event_var` at `event_threshold`
    int event_var = -1;
    double event_threshold = 0.0;
    bool stop_on_event = true;
    std::string event_kind = "barrier_crossing";
};

// Adaptive embedded Runge-Kutta 5(4) (Dormand-Prince) on the Hamiltonian
// vector field. Step rejection on NaN/Inf; integration stops with a
// singularity_stop event when the step collapses at a chart boundary.
Trajectory integrate(const ChartFunction& H, const ChartPoint& x0, const IntegrateOptions& opt);

struct BarrierSpec {
    double v_top = 1.0;
    double gamma = 0.1;
    double U = 0.25;
    double mass = 1.0;
};

Potential1D barrier_potential(const BarrierSpec& spec);
// actual critical point of V_poly between the minima (not the small-gamma 2/3)
double barrier_top_position(const BarrierSpec& spec);
// metastable start: q=0, pi=0, s=(2U/27V_top)^(1/4), ps=0 on the all-orders chart
ChartPoint tunneling_initial_conditions(const BarrierSpec& spec);
// the quoted closed-form energy estimate (metadata only; trajectories use H(x0))
double tunneling_v0_estimate(const BarrierSpec& spec);

enum class TunnelModel { all_orders, order2, order3_ansatz };
TunnelModel tunnel_model_from_string(const std::string& name);
std::string to_string(TunnelModel m);

struct TunnelResult {
    std::string status;  // escaped | no_escape | singularity_stop
    double tunneling_time = 0.0;
    double exit_position = 0.0;
    double exit_momentum = 0.0;
    double q_top = 0.0;
    double initial_energy = 0.0;
    double v0_estimate = 0.0;
    double energy_drift = 0.0;
    Trajectory trajectory;
};

// Integrates the chosen model from the metastable start (or start_q override);
// tunneling time is the first crossing of the barrier-top position.
TunnelResult tunneling_run(const BarrierSpec& spec, TunnelModel model, double t_max,
                           double tol = 1e-10, std::optional<double> start_q = {});

struct SweepRow {
    double param = 0.0;
    std::string status;
    double time = 0.0;
    double exit_q = 0.0;
    double exit_pi = 0.0;
};

enum class SweepKind { gamma, v_top, start_q };

// One tunneling_run per grid value; failures recorded per row, sweep continues.
// Rows are independent and evaluated in parallel when hardware allows.
std::vector<SweepRow> tunneling_sweep(const BarrierSpec& base, TunnelModel model, SweepKind kind,
                                      const std::vector<double>& values, double t_max,
                                      double tol = 1e-10);

}  // namespace momdyn
