#pragma once

#include <vector>

#include "uavmec/scenario.hpp"
#include "uavmec/solution.hpp"

namespace uavmec {

// Linearisation of log(1 + x/tau)/log(1 + 1/tau) at the current per-UAV load x:
// the surrogate is delta x + rho.
struct ReweightState {
    std::vector<double> delta;
    std::vector<double> rho;
    int iteration = 0;
};

ReweightState update_weights(const std::vector<double>& counts, double tau, int iteration);

// Lagrange multipliers: beta (latency) and gamma (UE power) per UE, lambda
// (user count) and mu (capacity coupling, unsigned) per UAV.
struct DualState {
    std::vector<double> beta;
    std::vector<double> gamma;
    std::vector<double> lambda;
    std::vector<double> mu;
};

// Primal data of one choice for one UE at the fixed (F, P, Z).
struct Candidate {
    bool allowed = false;   // covered and deadline reachable (or locally feasible)
    double f_hz = 0.0;
    double p_w = 0.0;       // transmit power, or kappa f^nu when local
    double latency_s = 0.0; // C_ij, or E_i when local
};

// candidates[i][c], c = 0 local, c = j + 1 for UAV j.
using CandidateTable = std::vector<std::vector<Candidate>>;

// Active pairs keep their current (f, p). An inactive offload pair gets the
// capacity that balances its transmit-power marginal against UAV j's
// computing-energy marginal at the current load, floored at f_ij,min and
// capped by the remaining headroom, with closed-form power.
CandidateTable build_candidates(const Scenario& scenario, const Solution& current);

// Offload: W1 p + W2 Q_j delta_j + beta C + gamma p + lambda_j + mu_j f.
// Local:   W1 kappa f^nu + beta E + gamma kappa f^nu.
double candidate_cost_h(const Scenario& scenario, int ue, int choice, const Candidate& cand,
                        const ReweightState& weights, const DualState& duals);

struct InnerSolution {
    Assignment assoc;
    std::vector<double> aux_f_hz;  // per-UAV auxiliary capacity f_j
};

// Per-UE argmin of h over allowed choices (ties to the lowest index) and the
// closed-form auxiliary capacities. Throws NoFeasibleChoice listing every UE
// without an allowed choice.
InnerSolution dual_inner_solve(const Scenario& scenario, const CandidateTable& cand,
                               const ReweightState& weights, const DualState& duals);

// Subgradients evaluated at an inner solution.
struct DualResiduals {
    std::vector<double> latency;   // C_i - T
    std::vector<double> ue_power;  // p_i - P_max
    std::vector<double> count;     // n_j - U_j
    std::vector<double> coupling;  // sum_i a_ij f_ij - f_j
};

DualResiduals dual_residuals(const Scenario& scenario, const CandidateTable& cand,
                             const InnerSolution& inner);

// Per-entry step sizes of one subgradient step.
struct DualSteps {
    std::vector<double> beta;
    std::vector<double> gamma;
    std::vector<double> lambda;
    std::vector<double> mu;
};

// One projected subgradient step: beta, gamma, lambda clipped at zero, mu free.
DualState multiplier_update(const DualState& duals, const DualResiduals& res,
                            const DualSteps& steps);
// Same with one step phi for beta, gamma, lambda and psi for mu.
DualState multiplier_update(const DualState& duals, const DualResiduals& res, double phi,
                            double psi);

// Exact objective of an assignment when every UE uses its candidate (f, p);
// +inf if a UAV exceeds its capacity cap or user limit.
double assignment_objective(const Scenario& scenario, const CandidateTable& cand,
                            const Assignment& assoc);

struct AssociationOptions {
    int max_outer = 20;         // reweighting rounds
    int max_inner = 500;        // dual ascent steps per round
    int stable_inner = 25;      // stop a round after this many unchanged argmins
    bool local_search = true;   // improve the recovered primal with exact moves
};

struct AssociationResult {
    Solution solution;          // prev when nothing strictly better was found
    bool changed = false;
    double objective = 0.0;     // exact objective of `solution`
    int outer_iterations = 0;
    long inner_iterations = 0;
    // Best-so-far surrogate value after each inner step, one row per round.
    std::vector<std::vector<double>> surrogate_trace;
};

// Reweighted-l1 + dual subgradient association at the fixed (F, P, Z) of prev,
// with primal recovery and a strict-improvement safeguard.
AssociationResult solve_association(const Scenario& scenario, const Solution& prev,
                                    const AssociationOptions& opts = {});

}  // namespace uavmec
