#include "zeris/outage.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "zeris/errors.hpp"
#include "zeris/numerics.hpp"

namespace zeris::outage {

namespace {

// Within this relative distance of the energy-feasibility boundary the
// harvested energy exactly covers consumption, so the rate branch applies;
// optimal operating points sit exactly on this boundary.
constexpr double kBoundaryTol = 1e-9;

struct Ctx {
    double l1 = 0.0;
    double l2 = 0.0;
    double lp = 0.0;
    double gain = 0.0;
    double gamma_t = 0.0;
    double p_elem = 0.0;
    double harvest_coeff = 0.0;  // zeta * P_t * G_t * l1
    const model::ChannelLeg* fading = nullptr;
    cascade::CircularMomentPair mu;
};

Ctx make_ctx(const model::SystemConfig& sys, const model::Deployment& dep,
             const phase::QuantizerConfig& qc, int truncation, cascade::MomentModel mm) {
    sys.validate();
    dep.validate();
    qc.validate();
    Ctx ctx;
    ctx.l1 = model::path_loss(dep.leg1, sys.wavelength_m);
    ctx.l2 = model::path_loss(dep.leg2, sys.wavelength_m);
    ctx.lp = ctx.l1 * ctx.l2;
    ctx.gain = sys.combined_gain();
    ctx.gamma_t = sys.transmit_snr();
    ctx.p_elem = model::element_power(qc.bits, sys);
    ctx.harvest_coeff = sys.conversion_efficiency * sys.transmit_power_w * sys.tx_gain * ctx.l1;
    ctx.fading = &dep.fading_leg();
    const auto mix = phase::PhaseMixture::from_leg(*ctx.fading, sys.wavelength_m);
    ctx.mu = cascade::circular_moments(mix, qc, truncation, mm);
    return ctx;
}

struct CdfEval {
    double p = 1.0;
    std::optional<cascade::GammaMatch> match;
};

// P(X <= x) for the summed fading channel over n elements.
CdfEval fading_power_cdf(const Ctx& ctx, int n_elements, double x) {
    CdfEval out;
    if (n_elements <= 0) {
        out.p = x > 0.0 ? 1.0 : 0.0;
        return out;
    }
    const double ex = cascade::moment_e_x(n_elements, *ctx.fading, ctx.mu);
    const double ex2 = cascade::moment_e_x2(n_elements, *ctx.fading, ctx.mu);
    try {
        const auto gm = cascade::gamma_match(ex, ex2);
        const double z = x / gm.scale;
        out.p = std::isfinite(z) ? numerics::reg_lower_incomplete_gamma(gm.shape, z) : 1.0;
        out.match = gm;
    } catch (const degenerate_variance_error&) {
        out.p = x >= ex ? 1.0 : 0.0;
    }
    return out;
}

double rate_threshold_x(const model::SystemConfig& sys, const Ctx& ctx, double time_fraction) {
    const double exponent = sys.rate_threshold / time_fraction;
    const double spread = std::exp2(exponent) - 1.0;
    return spread / (ctx.gamma_t * ctx.gain * ctx.lp);
}

void require(bool ok, const char* msg) {
    if (!ok) throw std::domain_error(msg);
}

}  // namespace

void SchemeConfig::validate() const {
    if (n_total < 1) throw std::domain_error("SchemeConfig: n_total must be at least 1");
    if (kind == SchemeKind::time_switching) {
        if (!(tau > 0.0 && tau < 1.0)) {
            throw std::domain_error("SchemeConfig: tau must lie in (0, 1)");
        }
    } else {
        if (n1 < 0 || n2 < 0) throw std::domain_error("SchemeConfig: negative element split");
        if (n1 + n2 != n_total) {
            throw std::domain_error("SchemeConfig: n1 + n2 must equal n_total");
        }
    }
}

SchemeConfig SchemeConfig::time_switching(double tau, int n_total) {
    SchemeConfig sc;
    sc.kind = SchemeKind::time_switching;
    sc.tau = tau;
    sc.n_total = n_total;
    sc.validate();
    return sc;
}

SchemeConfig SchemeConfig::element_splitting(int n1, int n2) {
    SchemeConfig sc;
    sc.kind = SchemeKind::element_splitting;
    sc.n1 = n1;
    sc.n2 = n2;
    sc.n_total = n1 + n2;
    sc.validate();
    return sc;
}

OutageResult outage_tx_ts(const model::SystemConfig& sys, const model::Deployment& dep,
                          const SchemeConfig& sc, const phase::QuantizerConfig& qc,
                          int truncation, cascade::MomentModel mm) {
    sc.validate();
    require(dep.side == model::DeploymentSide::tx_side, "outage_tx_ts: deployment must be tx-side");
    require(sc.kind == SchemeKind::time_switching, "outage_tx_ts: scheme must be TS");
    const Ctx ctx = make_ctx(sys, dep, qc, truncation, mm);

    const double tau = sc.tau;
    const double a = tau * ctx.harvest_coeff;
    const double b = (1.0 - tau) * ctx.p_elem;
    const double n_min =
        (b + std::sqrt(b * b + 4.0 * a * sys.controller_power_w)) / (2.0 * a);

    OutageResult out;
    out.feasibility.n_min = n_min;
    const double n = static_cast<double>(sc.n_total);
    if (n < n_min * (1.0 - kBoundaryTol)) {
        out.probability = 1.0;
        out.branch = OutageBranch::hard_cutoff;
        out.feasibility.hard_cutoff = true;
        return out;
    }
    const double x = rate_threshold_x(sys, ctx, 1.0 - tau);
    const auto cdf = fading_power_cdf(ctx, sc.n_total, x);
    out.probability = cdf.p;
    out.branch = OutageBranch::gamma_cdf;
    out.threshold_x = x;
    out.match = cdf.match;
    return out;
}

OutageResult outage_tx_es(const model::SystemConfig& sys, const model::Deployment& dep,
                          const SchemeConfig& sc, const phase::QuantizerConfig& qc,
                          int truncation, cascade::MomentModel mm) {
    sc.validate();
    require(dep.side == model::DeploymentSide::tx_side, "outage_tx_es: deployment must be tx-side");
    require(sc.kind == SchemeKind::element_splitting, "outage_tx_es: scheme must be ES");
    const Ctx ctx = make_ctx(sys, dep, qc, truncation, mm);

    const double consumption =
        static_cast<double>(sc.n2) * ctx.p_elem + sys.controller_power_w;
    const double n_min = std::sqrt(consumption / ctx.harvest_coeff);

    OutageResult out;
    out.feasibility.n_min = n_min;
    const double n1 = static_cast<double>(sc.n1);
    if (n1 < n_min * (1.0 - kBoundaryTol)) {
        out.probability = 1.0;
        out.branch = OutageBranch::hard_cutoff;
        out.feasibility.hard_cutoff = true;
        return out;
    }
    const double x = rate_threshold_x(sys, ctx, 1.0);
    const auto cdf = fading_power_cdf(ctx, sc.n2, x);
    out.probability = cdf.p;
    out.branch = OutageBranch::gamma_cdf;
    out.threshold_x = x;
    out.match = cdf.match;
    return out;
}

OutageResult outage_ue_ts(const model::SystemConfig& sys, const model::Deployment& dep,
                          const SchemeConfig& sc, const phase::QuantizerConfig& qc,
                          int truncation, cascade::MomentModel mm) {
    sc.validate();
    require(dep.side == model::DeploymentSide::ue_side, "outage_ue_ts: deployment must be ue-side");
    require(sc.kind == SchemeKind::time_switching, "outage_ue_ts: scheme must be TS");
    const Ctx ctx = make_ctx(sys, dep, qc, truncation, mm);

    const double tau = sc.tau;
    const double x_rate = rate_threshold_x(sys, ctx, 1.0 - tau);
    const double x_energy =
        (static_cast<double>(sc.n_total) * ctx.p_elem * (1.0 - tau) + sys.controller_power_w) /
        (tau * ctx.harvest_coeff);
    const double x = std::max(x_rate, x_energy);

    const auto cdf = fading_power_cdf(ctx, sc.n_total, x);
    OutageResult out;
    out.probability = cdf.p;
    out.branch = OutageBranch::gamma_cdf;
    out.threshold_x = x;
    out.threshold_x2 = std::min(x_rate, x_energy);
    out.match = cdf.match;
    return out;
}

OutageResult outage_ue_es(const model::SystemConfig& sys, const model::Deployment& dep,
                          const SchemeConfig& sc, const phase::QuantizerConfig& qc,
                          int truncation, cascade::MomentModel mm) {
    sc.validate();
    require(dep.side == model::DeploymentSide::ue_side, "outage_ue_es: deployment must be ue-side");
    require(sc.kind == SchemeKind::element_splitting, "outage_ue_es: scheme must be ES");
    const Ctx ctx = make_ctx(sys, dep, qc, truncation, mm);

    const double x_energy =
        (static_cast<double>(sc.n2) * ctx.p_elem + sys.controller_power_w) / ctx.harvest_coeff;
    const double x_rate = rate_threshold_x(sys, ctx, 1.0);

    const auto cdf_energy = fading_power_cdf(ctx, sc.n1, x_energy);
    const auto cdf_rate = fading_power_cdf(ctx, sc.n2, x_rate);

    OutageResult out;
    out.probability = cdf_energy.p + cdf_rate.p - cdf_energy.p * cdf_rate.p;
    out.branch = OutageBranch::union_formula;
    out.threshold_x = x_rate;
    out.threshold_x2 = x_energy;
    out.match = cdf_energy.match;
    out.match2 = cdf_rate.match;
    return out;
}

OutageResult outage_probability(const model::SystemConfig& sys, const model::Deployment& dep,
                                const SchemeConfig& sc, const phase::QuantizerConfig& qc,
                                int truncation, cascade::MomentModel mm) {
    const bool tx = dep.side == model::DeploymentSide::tx_side;
    if (sc.kind == SchemeKind::time_switching) {
        return tx ? outage_tx_ts(sys, dep, sc, qc, truncation, mm)
                  : outage_ue_ts(sys, dep, sc, qc, truncation, mm);
    }
    return tx ? outage_tx_es(sys, dep, sc, qc, truncation, mm)
              : outage_ue_es(sys, dep, sc, qc, truncation, mm);
}

double opt_tau_tx(int n_elements, const model::SystemConfig& sys, const model::Deployment& dep,
                  const phase::QuantizerConfig& qc) {
    require(n_elements >= 1, "opt_tau_tx: need at least one element");
    sys.validate();
    dep.validate();
    qc.validate();
    const double l1 = model::path_loss(dep.leg1, sys.wavelength_m);
    const double p_elem = model::element_power(qc.bits, sys);
    const double n = static_cast<double>(n_elements);
    const double a = n * p_elem;
    const double c = n * n * sys.conversion_efficiency * sys.transmit_power_w * sys.tx_gain * l1;
    const double tau = (a + sys.controller_power_w) / (a + c);
    if (tau >= 1.0) {
        throw infeasible_error("opt_tau_tx: surface cannot sustain itself at any time split");
    }
    return tau;
}

EsSplit opt_n1_tx(int n_elements, const model::SystemConfig& sys, const model::Deployment& dep,
                  const phase::QuantizerConfig& qc) {
    require(n_elements >= 2, "opt_n1_tx: need at least two elements");
    sys.validate();
    dep.validate();
    qc.validate();
    const double l1 = model::path_loss(dep.leg1, sys.wavelength_m);
    const double p_elem = model::element_power(qc.bits, sys);
    const double a = sys.conversion_efficiency * sys.transmit_power_w * sys.tx_gain * l1;
    const double n = static_cast<double>(n_elements);
    const double disc = p_elem * p_elem + 4.0 * a * (n * p_elem + sys.controller_power_w);
    EsSplit split;
    split.n1_real = (-p_elem + std::sqrt(disc)) / (2.0 * a);
    const double up = std::ceil(split.n1_real * (1.0 - kBoundaryTol));
    if (up >= n) {
        throw infeasible_error("opt_n1_tx: no element split leaves a reflecting subset");
    }
    split.n1 = std::max(1, static_cast<int>(up));
    return split;
}

TauResult opt_tau_ue(int n_elements, const model::SystemConfig& sys,
                     const model::Deployment& dep, const phase::QuantizerConfig& qc) {
    require(n_elements >= 1, "opt_tau_ue: need at least one element");
    sys.validate();
    dep.validate();
    qc.validate();
    const double l1 = model::path_loss(dep.leg1, sys.wavelength_m);
    const double l2 = model::path_loss(dep.leg2, sys.wavelength_m);
    const double lp = l1 * l2;
    const double p_elem = model::element_power(qc.bits, sys);
    const double harvest = sys.conversion_efficiency * sys.transmit_power_w * sys.tx_gain * l1;
    const double gain_snr = sys.transmit_snr() * sys.combined_gain() * lp;
    const double n = static_cast<double>(n_elements);

    const auto rate_term = [&](double tau) {
        return (std::exp2(sys.rate_threshold / (1.0 - tau)) - 1.0) / gain_snr;
    };
    const auto energy_term = [&](double tau) {
        return (n * p_elem * (1.0 - tau) + sys.controller_power_w) / (tau * harvest);
    };

    constexpr double lo_edge = 1e-12;
    constexpr double hi_edge = 1.0 - 1e-12;
    TauResult out;
    const double g_lo = rate_term(lo_edge) - energy_term(lo_edge);
    if (g_lo >= 0.0) {
        // energy side never dominates: max is minimized where the rate term is
        out.tau = lo_edge;
        out.boundary_flag = true;
        return out;
    }
    const double g_hi = rate_term(hi_edge) - energy_term(hi_edge);
    if (g_hi <= 0.0) {
        out.tau = hi_edge;
        out.boundary_flag = true;
        return out;
    }
    double lo = lo_edge;
    double hi = hi_edge;
    for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (rate_term(mid) - energy_term(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    out.tau = 0.5 * (lo + hi);
    return out;
}

OperatingPoint optimal_point(const model::SystemConfig& sys, const model::Deployment& dep,
                             SchemeKind kind, int n_elements, const phase::QuantizerConfig& qc,
                             int truncation, cascade::MomentModel mm) {
    OperatingPoint op;
    const bool tx = dep.side == model::DeploymentSide::tx_side;
    if (kind == SchemeKind::time_switching) {
        if (tx) {
            double tau;
            try {
                tau = opt_tau_tx(n_elements, sys, dep, qc);
            } catch (const infeasible_error&) {
                return op;  // outage 1
            }
            op.tau = tau;
            op.outage =
                outage_tx_ts(sys, dep, SchemeConfig::time_switching(tau, n_elements), qc,
                             truncation, mm)
                    .probability;
        } else {
            const auto tr = opt_tau_ue(n_elements, sys, dep, qc);
            op.tau = tr.tau;
            op.outage =
                outage_ue_ts(sys, dep, SchemeConfig::time_switching(tr.tau, n_elements), qc,
                             truncation, mm)
                    .probability;
        }
        return op;
    }
    if (n_elements < 2) return op;
    if (tx) {
        EsSplit split;
        try {
            split = opt_n1_tx(n_elements, sys, dep, qc);
        } catch (const infeasible_error&) {
            return op;
        }
        // the real optimum is fractional; evaluate both neighbors and keep
        // the better integer split
        const int lo = std::clamp(static_cast<int>(std::floor(split.n1_real)), 1, n_elements - 1);
        for (int n1 : {split.n1, lo}) {
            if (n1 == op.n1) continue;
            const auto r = outage_tx_es(sys, dep, SchemeConfig::element_splitting(n1, n_elements - n1),
                                        qc, truncation, mm);
            if (op.n1 == 0 || r.probability < op.outage) {
                op.outage = r.probability;
                op.n1 = n1;
                op.n2 = n_elements - n1;
            }
        }
        return op;
    }
    // UE-side ES has no closed-form split; scan the integer range
    for (int n1 = 1; n1 < n_elements; ++n1) {
        const auto r = outage_ue_es(sys, dep, SchemeConfig::element_splitting(n1, n_elements - n1),
                                    qc, truncation, mm);
        if (r.probability < op.outage || op.n1 == 0) {
            op.outage = r.probability;
            op.n1 = n1;
            op.n2 = n_elements - n1;
        }
    }
    return op;
}

int nmin_search(const model::SystemConfig& sys, const model::Deployment& dep, SchemeKind kind,
                const phase::QuantizerConfig& qc, int truncation, double target,
                cascade::MomentModel mm) {
    if (!(target > 0.0 && target <= 1.0)) {
        throw std::domain_error("nmin_search: target must lie in (0, 1]");
    }
    constexpr int kMaxElements = 1000000;
    const auto meets = [&](int n) {
        return optimal_point(sys, dep, kind, n, qc, truncation, mm).outage <= target;
    };

    if (meets(1)) return 1;
    int lo = 1;  // fails
    int hi = 2;
    while (!meets(hi)) {
        lo = hi;
        if (hi >= kMaxElements) {
            throw search_exhausted_error("nmin_search: no element count up to 10^6 meets target");
        }
        hi = std::min(hi * 2, kMaxElements);
    }
    while (hi - lo > 1) {
        const int mid = lo + (hi - lo) / 2;
        if (meets(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // the optimal-point outage is assumed monotone in N; re-check the
    // immediate neighborhood in case of a ragged edge
    int best = hi;
    for (int n = std::max(1, hi - 2); n < hi; ++n) {
        if (meets(n)) {
            best = n;
            break;
        }
    }
    return best;
}

double ee_delivered_rate_per_joule(double rate_threshold, double outage, double transmit_power_w,
                                   double block_duration_s) {
    return rate_threshold * (1.0 - outage) / (transmit_power_w * block_duration_s);
}

double energy_efficiency(const model::SystemConfig& sys, const model::Deployment& dep,
                         const SchemeConfig& sc, const phase::QuantizerConfig& qc,
                         int truncation, cascade::MomentModel mm, EeDefinition definition) {
    sc.validate();
    const auto op = optimal_point(sys, dep, sc.kind, sc.n_total, qc, truncation, mm);
    return definition(sys.rate_threshold, op.outage, sys.transmit_power_w,
                      sys.block_duration_s);
}

}  // namespace zeris::outage
