#ifndef ZERIS_OUTAGE_HPP
#define ZERIS_OUTAGE_HPP

#include <optional>

#include "zeris/cascade.hpp"
#include "zeris/model.hpp"
#include "zeris/phase.hpp"

namespace zeris::outage {

enum class SchemeKind { time_switching, element_splitting };

/// Harvest-and-reflect scheme selection. TS harvests for a fraction tau of
/// the block; ES dedicates n1 elements to harvesting and n2 to reflection.
/// Degenerate ES splits (n1 = 0 or n2 = 0) are accepted so sweep endpoints
/// stay evaluable.
struct SchemeConfig {
    SchemeKind kind = SchemeKind::time_switching;
    double tau = 0.5;
    int n1 = 0;
    int n2 = 0;
    int n_total = 1;

    void validate() const;
    static SchemeConfig time_switching(double tau, int n_total);
    static SchemeConfig element_splitting(int n1, int n2);
};

enum class OutageBranch { hard_cutoff, gamma_cdf, union_formula };

struct Feasibility {
    double n_min = 0.0;  // energy self-sufficiency threshold, 0 when not applicable
    bool hard_cutoff = false;
    bool boundary_flag = false;  // optimizer landed on a domain boundary
};

struct OutageResult {
    double probability = 1.0;
    OutageBranch branch = OutageBranch::hard_cutoff;
    double threshold_x = 0.0;   // active threshold (rate side, or max for shared-variable TS)
    double threshold_x2 = 0.0;  // energy-side threshold of the union formula
    std::optional<cascade::GammaMatch> match;
    std::optional<cascade::GammaMatch> match2;  // second component of the union formula
    Feasibility feasibility;
};

/// Tx-side deployment, TS scheme: hard cutoff below the element count that
/// makes the (fully coherent) harvest self-sufficient, Gamma CDF of the
/// reflected-power rate threshold otherwise.
OutageResult outage_tx_ts(const model::SystemConfig& sys, const model::Deployment& dep,
                          const SchemeConfig& sc, const phase::QuantizerConfig& qc,
                          int truncation = phase::kDefaultTruncation,
                          cascade::MomentModel mm = cascade::MomentModel::proposed);

/// Tx-side deployment, ES scheme.
OutageResult outage_tx_es(const model::SystemConfig& sys, const model::Deployment& dep,
                          const SchemeConfig& sc, const phase::QuantizerConfig& qc,
                          int truncation = phase::kDefaultTruncation,
                          cascade::MomentModel mm = cascade::MomentModel::proposed);

/// UE-side deployment, TS scheme: energy and rate events share one random
/// variable, so the outage is a single Gamma CDF at the larger threshold.
OutageResult outage_ue_ts(const model::SystemConfig& sys, const model::Deployment& dep,
                          const SchemeConfig& sc, const phase::QuantizerConfig& qc,
                          int truncation = phase::kDefaultTruncation,
                          cascade::MomentModel mm = cascade::MomentModel::proposed);

/// UE-side deployment, ES scheme: independent element subsets give the
/// union formula P1 + P2 - P1*P2.
OutageResult outage_ue_es(const model::SystemConfig& sys, const model::Deployment& dep,
                          const SchemeConfig& sc, const phase::QuantizerConfig& qc,
                          int truncation = phase::kDefaultTruncation,
                          cascade::MomentModel mm = cascade::MomentModel::proposed);

/// Dispatch on deployment side and scheme kind.
OutageResult outage_probability(const model::SystemConfig& sys, const model::Deployment& dep,
                                const SchemeConfig& sc, const phase::QuantizerConfig& qc,
                                int truncation = phase::kDefaultTruncation,
                                cascade::MomentModel mm = cascade::MomentModel::proposed);

/// Energy-feasibility boundary of the Tx-side TS scheme:
/// tau* = (N P_elem + P_ctrl) / (N P_elem + N^2 zeta P_t G_t l1).
/// Throws infeasible_error when no split sustains the surface (tau* >= 1).
double opt_tau_tx(int n_elements, const model::SystemConfig& sys, const model::Deployment& dep,
                  const phase::QuantizerConfig& qc);

/// Energy-feasibility boundary of the Tx-side ES scheme, returned as the
/// smallest feasible integer harvest count ceil(N1*), clamped to [1, N-1].
struct EsSplit {
    double n1_real = 0.0;
    int n1 = 0;
};
EsSplit opt_n1_tx(int n_elements, const model::SystemConfig& sys, const model::Deployment& dep,
                  const phase::QuantizerConfig& qc);

/// UE-side TS optimum: the tau equating the rate and energy thresholds,
/// found by bisection. When the thresholds never cross, the boundary
/// minimizing their max is returned and boundary_flag is set.
struct TauResult {
    double tau = 0.0;
    bool boundary_flag = false;
};
TauResult opt_tau_ue(int n_elements, const model::SystemConfig& sys,
                     const model::Deployment& dep, const phase::QuantizerConfig& qc);

/// Outage at the scheme's optimal operating point (infeasible counts as 1).
struct OperatingPoint {
    double outage = 1.0;
    double tau = 0.0;  // TS schemes
    int n1 = 0;        // ES schemes
    int n2 = 0;
};
OperatingPoint optimal_point(const model::SystemConfig& sys, const model::Deployment& dep,
                             SchemeKind kind, int n_elements, const phase::QuantizerConfig& qc,
                             int truncation = phase::kDefaultTruncation,
                             cascade::MomentModel mm = cascade::MomentModel::proposed);

/// Smallest N whose optimal-point outage meets `target`, by exponential
/// growth plus binary search, with a +/-2 neighborhood re-check. Throws
/// search_exhausted_error when no N <= 10^6 reaches the target.
int nmin_search(const model::SystemConfig& sys, const model::Deployment& dep, SchemeKind kind,
                const phase::QuantizerConfig& qc, int truncation = phase::kDefaultTruncation,
                double target = 1e-6,
                cascade::MomentModel mm = cascade::MomentModel::proposed);

/// Energy-efficiency definition hook: f(rate_threshold, outage, P_t, T).
using EeDefinition = double (*)(double, double, double, double);

/// Successfully delivered spectral efficiency per unit transmit energy:
/// R_thr (1 - P_out) / (P_t T).
double ee_delivered_rate_per_joule(double rate_threshold, double outage, double transmit_power_w,
                                   double block_duration_s);

/// Energy efficiency of the scheme at its optimal operating point for
/// sc.n_total elements (bit/J for T = 1 s, bandwidth-normalized).
double energy_efficiency(const model::SystemConfig& sys, const model::Deployment& dep,
                         const SchemeConfig& sc, const phase::QuantizerConfig& qc,
                         int truncation = phase::kDefaultTruncation,
                         cascade::MomentModel mm = cascade::MomentModel::proposed,
                         EeDefinition definition = ee_delivered_rate_per_joule);

}  // namespace zeris::outage

#endif
