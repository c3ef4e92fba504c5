#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "zeris/errors.hpp"
#include "zeris/experiment.hpp"
#include "zeris/numerics.hpp"
#include "zeris/outage.hpp"

using namespace zeris;

namespace {

struct Fixture {
    model::SystemConfig sys;
    model::Deployment tx;
    model::Deployment ue;
    phase::QuantizerConfig q1;
    phase::QuantizerConfig q2;

    Fixture() {
        sys = experiment::load_config("paper-table-1").system;
        tx = experiment::load_config("paper-table-1").deployment;
        ue = experiment::load_config("paper-table-1", {"deployment=ue-side"}).deployment;
        q1.bits = 1;
        q2.bits = 2;
    }
};

double harvest_coeff(const model::SystemConfig& sys, const model::Deployment& dep) {
    return sys.conversion_efficiency * sys.transmit_power_w * sys.tx_gain *
           model::path_loss(dep.leg1, sys.wavelength_m);
}

}  // namespace

TEST_SUITE_BEGIN("outage");

TEST_CASE("tx-side TS hard cutoff and rate branch") {
    Fixture f;
    // well below the self-sufficiency threshold (about 237 elements at tau = 0.5)
    const auto cut = outage::outage_tx_ts(f.sys, f.tx,
                                          outage::SchemeConfig::time_switching(0.5, 200), f.q1);
    CHECK(cut.probability == 1.0);
    CHECK(cut.branch == outage::OutageBranch::hard_cutoff);
    CHECK(cut.feasibility.hard_cutoff);
    CHECK(cut.feasibility.n_min > 200.0);
    CHECK(cut.feasibility.n_min < 250.0);

    const auto ok = outage::outage_tx_ts(f.sys, f.tx,
                                         outage::SchemeConfig::time_switching(0.5, 250), f.q1);
    CHECK(ok.branch == outage::OutageBranch::gamma_cdf);
    CHECK(ok.probability >= 0.0);
    CHECK(ok.probability <= 1.0);
    CHECK(ok.match.has_value());

    // zero rate threshold: any feasible configuration never misses the rate
    auto sys0 = f.sys;
    sys0.rate_threshold = 0.0;
    const auto free_rate = outage::outage_tx_ts(
        sys0, f.tx, outage::SchemeConfig::time_switching(0.5, 250), f.q1);
    CHECK(free_rate.probability == 0.0);
}

TEST_CASE("scheme and deployment mismatches are rejected") {
    Fixture f;
    const auto ts = outage::SchemeConfig::time_switching(0.5, 250);
    const auto es = outage::SchemeConfig::element_splitting(150, 100);
    CHECK_THROWS_AS((void)outage::outage_tx_ts(f.sys, f.ue, ts, f.q1), std::domain_error);
    CHECK_THROWS_AS((void)outage::outage_tx_ts(f.sys, f.tx, es, f.q1), std::domain_error);
    CHECK_THROWS_AS((void)outage::outage_ue_es(f.sys, f.tx, es, f.q1), std::domain_error);
    CHECK_THROWS_AS((void)outage::SchemeConfig::time_switching(1.2, 100), std::domain_error);
    CHECK_THROWS_AS((void)outage::SchemeConfig::time_switching(0.0, 100), std::domain_error);
}

TEST_CASE("tx-side ES cutoff, degenerate splits and dispatch") {
    Fixture f;
    const auto cut = outage::outage_tx_es(f.sys, f.tx,
                                          outage::SchemeConfig::element_splitting(100, 150), f.q1);
    CHECK(cut.probability == 1.0);
    CHECK(cut.feasibility.hard_cutoff);

    // all elements harvesting: energy fine, nothing reflects
    const auto no_reflect = outage::outage_tx_es(
        f.sys, f.tx, outage::SchemeConfig::element_splitting(250, 0), f.q1);
    CHECK(no_reflect.probability == 1.0);
    CHECK(!no_reflect.feasibility.hard_cutoff);

    // nothing harvesting: energy cannot be met
    const auto no_harvest = outage::outage_tx_es(
        f.sys, f.tx, outage::SchemeConfig::element_splitting(0, 250), f.q1);
    CHECK(no_harvest.probability == 1.0);
    CHECK(no_harvest.feasibility.hard_cutoff);

    const auto direct = outage::outage_tx_es(
        f.sys, f.tx, outage::SchemeConfig::element_splitting(200, 50), f.q1);
    const auto dispatched = outage::outage_probability(
        f.sys, f.tx, outage::SchemeConfig::element_splitting(200, 50), f.q1);
    CHECK(direct.probability == dispatched.probability);
}

TEST_CASE("ue-side TS collapses to the max threshold and saturates at the edges") {
    Fixture f;
    const auto near0 = outage::outage_ue_ts(
        f.sys, f.ue, outage::SchemeConfig::time_switching(1e-6, 1500), f.q1);
    CHECK(near0.probability == doctest::Approx(1.0).epsilon(1e-12));
    const auto near1 = outage::outage_ue_ts(
        f.sys, f.ue, outage::SchemeConfig::time_switching(1.0 - 1e-9, 1500), f.q1);
    CHECK(near1.probability == doctest::Approx(1.0).epsilon(1e-12));

    const auto mid = outage::outage_ue_ts(
        f.sys, f.ue, outage::SchemeConfig::time_switching(0.49, 1500), f.q1);
    CHECK(mid.threshold_x >= mid.threshold_x2);
    CHECK(mid.probability ==
          doctest::Approx(numerics::reg_lower_incomplete_gamma(
                              mid.match->shape, mid.threshold_x / mid.match->scale))
              .epsilon(1e-12));
}

TEST_CASE("ue-side ES union formula and its bounds") {
    Fixture f;
    // certain energy outage through an empty harvesting subset
    const auto all_reflect = outage::outage_ue_es(
        f.sys, f.ue, outage::SchemeConfig::element_splitting(0, 1500), f.q1);
    CHECK(all_reflect.probability == 1.0);

    for (int n1 : {900, 962, 1000, 1100}) {
        const auto r = outage::outage_ue_es(
            f.sys, f.ue, outage::SchemeConfig::element_splitting(n1, 1500 - n1), f.q1);
        REQUIRE(r.match.has_value());
        REQUIRE(r.match2.has_value());
        const double p1 = numerics::reg_lower_incomplete_gamma(
            r.match->shape, r.threshold_x2 / r.match->scale);
        const double p2 = numerics::reg_lower_incomplete_gamma(
            r.match2->shape, r.threshold_x / r.match2->scale);
        CAPTURE(n1);
        CHECK(r.probability == doctest::Approx(p1 + p2 - p1 * p2).epsilon(1e-12));
        CHECK(r.probability >= std::max(p1, p2) - 1e-15);
        CHECK(r.probability <= std::min(1.0, p1 + p2) + 1e-15);
    }
}

TEST_CASE("optimal tau for tx-side TS sits on the energy balance") {
    Fixture f;
    for (int n : {200, 250, 400}) {
        for (auto* qc : {&f.q1, &f.q2}) {
            const double tau = outage::opt_tau_tx(n, f.sys, f.tx, *qc);
            CHECK(tau > 0.0);
            CHECK(tau < 1.0);
            const double p_elem = model::element_power(qc->bits, f.sys);
            const double lhs = tau * harvest_coeff(f.sys, f.tx) * n * n;
            const double rhs = (1.0 - tau) * n * p_elem + f.sys.controller_power_w;
            CHECK(std::fabs(lhs - rhs) <= 1e-9 * std::max(lhs, rhs));
        }
    }
    // too few elements to ever self-sustain
    CHECK_THROWS_AS((void)outage::opt_tau_tx(100, f.sys, f.tx, f.q1), infeasible_error);
    // free-running surface: boundary collapses to zero harvest time
    auto free_sys = f.sys;
    free_sys.pin_diode_power_w = 0.0;
    free_sys.controller_power_w = 0.0;
    CHECK(outage::opt_tau_tx(250, free_sys, f.tx, f.q1) == 0.0);
}

TEST_CASE("optimal ES split for tx-side sits on the energy balance") {
    Fixture f;
    for (int n : {250, 400}) {
        for (auto* qc : {&f.q1, &f.q2}) {
            const auto split = outage::opt_n1_tx(n, f.sys, f.tx, *qc);
            CHECK(split.n1 >= 1);
            CHECK(split.n1 <= n - 1);
            const double p_elem = model::element_power(qc->bits, f.sys);
            const double lhs = harvest_coeff(f.sys, f.tx) * split.n1_real * split.n1_real;
            const double rhs = (n - split.n1_real) * p_elem + f.sys.controller_power_w;
            CHECK(std::fabs(lhs - rhs) <= 1e-9 * std::max(lhs, rhs));
            // the integer point is the smallest feasible harvest count
            CHECK(static_cast<double>(split.n1) >= split.n1_real * (1.0 - 1e-9));
            CHECK(static_cast<double>(split.n1) - split.n1_real < 1.0);
        }
    }
    CHECK_THROWS_AS((void)outage::opt_n1_tx(100, f.sys, f.tx, f.q1), infeasible_error);

    auto free_sys = f.sys;
    free_sys.pin_diode_power_w = 0.0;
    const auto split = outage::opt_n1_tx(250, free_sys, f.tx, f.q1);
    const double expected =
        std::sqrt(free_sys.controller_power_w / harvest_coeff(free_sys, f.tx));
    CHECK(split.n1_real == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("optimal tau for ue-side TS equalizes the two thresholds") {
    Fixture f;
    for (int n : {600, 1500}) {
        for (auto* qc : {&f.q1, &f.q2}) {
            const auto tr = outage::opt_tau_ue(n, f.sys, f.ue, *qc);
            CHECK(!tr.boundary_flag);
            CHECK(tr.tau > 0.0);
            CHECK(tr.tau < 1.0);
            const double p_elem = model::element_power(qc->bits, f.sys);
            const double lp = model::path_loss(f.ue.leg1, f.sys.wavelength_m) *
                              model::path_loss(f.ue.leg2, f.sys.wavelength_m);
            const double rate = (std::exp2(f.sys.rate_threshold / (1.0 - tr.tau)) - 1.0) /
                                (f.sys.transmit_snr() * f.sys.combined_gain() * lp);
            const double energy =
                (n * p_elem * (1.0 - tr.tau) + f.sys.controller_power_w) /
                (tr.tau * harvest_coeff(f.sys, f.ue));
            CHECK(std::fabs(rate - energy) <= 1e-8 * std::max(rate, energy));
        }
    }
    // zero consumption: energy threshold vanishes, minimiser slides to tau -> 0
    auto free_sys = f.sys;
    free_sys.pin_diode_power_w = 0.0;
    free_sys.controller_power_w = 0.0;
    const auto tr = outage::opt_tau_ue(1500, free_sys, f.ue, f.q1);
    CHECK(tr.boundary_flag);
    CHECK(tr.tau < 1e-9);
}

TEST_CASE("outage is monotone where the model says it must be") {
    Fixture f;
    // non-increasing in N on the rate branch at fixed tau
    double prev = 1.0;
    for (int n : {250, 300, 400, 600}) {
        const auto r = outage::outage_tx_ts(f.sys, f.tx,
                                            outage::SchemeConfig::time_switching(0.57, n), f.q1);
        CHECK(r.probability <= prev + 1e-15);
        prev = r.probability;
    }
    // non-increasing in transmit power on the rate branch
    prev = 1.0;
    for (double pt : {0.4, 0.6, 1.0, 2.0}) {
        auto sys = f.sys;
        sys.transmit_power_w = pt;
        const auto r = outage::outage_tx_ts(sys, f.tx,
                                            outage::SchemeConfig::time_switching(0.57, 250), f.q1);
        CHECK(r.probability <= prev + 1e-15);
        prev = r.probability;
    }
}

TEST_CASE("rate-limited outage is invariant to a common snr rescaling") {
    Fixture f;
    // scaling P_t and the noise floor together leaves gamma_t unchanged;
    // on rate-limited branches (energy side slack or deterministic) the
    // probability must not move
    const auto base_tx = outage::outage_tx_ts(
        f.sys, f.tx, outage::SchemeConfig::time_switching(0.57, 250), f.q1);
    auto scaled = f.sys;
    scaled.transmit_power_w *= 4.0;
    scaled.noise_power_w *= 4.0;
    const auto moved = outage::outage_tx_ts(
        scaled, f.tx, outage::SchemeConfig::time_switching(0.57, 250), f.q1);
    CHECK(moved.probability == doctest::Approx(base_tx.probability).epsilon(1e-12));
}

TEST_CASE("nmin_search finds the first element count meeting the target") {
    Fixture f;
    CHECK(outage::nmin_search(f.sys, f.tx, outage::SchemeKind::time_switching, f.q1, 10, 1.0) ==
          1);
    const int nmin = outage::nmin_search(f.sys, f.tx, outage::SchemeKind::time_switching, f.q1);
    CHECK(nmin > 1);
    const auto at = outage::optimal_point(f.sys, f.tx, outage::SchemeKind::time_switching, nmin,
                                          f.q1);
    const auto below = outage::optimal_point(f.sys, f.tx, outage::SchemeKind::time_switching,
                                             nmin - 1, f.q1);
    CHECK(at.outage <= 1e-6);
    CHECK(below.outage > 1e-6);

    // unreachable target within the search range
    auto weak = f.sys;
    weak.transmit_power_w = 1e-9;
    CHECK_THROWS_AS((void)outage::nmin_search(weak, f.tx, outage::SchemeKind::time_switching,
                                              f.q1, 10, 1e-6),
                    search_exhausted_error);
}

TEST_CASE("energy efficiency at the optimal point") {
    Fixture f;
    // infeasible: no operating point, zero efficiency
    CHECK(outage::energy_efficiency(f.sys, f.tx,
                                    outage::SchemeConfig::time_switching(0.5, 100), f.q1) == 0.0);
    // nearly outage-free: efficiency approaches R_thr / (P_t T)
    const double ee = outage::energy_efficiency(
        f.sys, f.tx, outage::SchemeConfig::time_switching(0.5, 250), f.q1);
    const double ceiling = f.sys.rate_threshold /
                           (f.sys.transmit_power_w * f.sys.block_duration_s);
    CHECK(ee > 0.99 * ceiling);
    CHECK(ee <= ceiling);
    CHECK(ceiling == doctest::Approx(8.6486).epsilon(1e-4));

    // alternative definition through the strategy hook
    const auto success_rate = [](double, double outage, double, double) { return 1.0 - outage; };
    const double sr = outage::energy_efficiency(
        f.sys, f.tx, outage::SchemeConfig::time_switching(0.5, 250), f.q1, 10,
        cascade::MomentModel::proposed, success_rate);
    CHECK(sr > 0.99);
    CHECK(sr <= 1.0);
}

TEST_CASE("optimal point reporting") {
    Fixture f;
    const auto op_ts = outage::optimal_point(f.sys, f.tx, outage::SchemeKind::time_switching,
                                             250, f.q1);
    CHECK(op_ts.tau > 0.0);
    CHECK(op_ts.tau < 1.0);
    CHECK(op_ts.outage < 1e-6);

    const auto op_es = outage::optimal_point(f.sys, f.tx, outage::SchemeKind::element_splitting,
                                             250, f.q1);
    CHECK(op_es.n1 >= 1);
    CHECK(op_es.n2 == 250 - op_es.n1);
    CHECK(op_es.outage < 1e-6);

    const auto op_ue = outage::optimal_point(f.sys, f.ue, outage::SchemeKind::element_splitting,
                                             1500, f.q1);
    CHECK(op_ue.n1 >= 1);
    CHECK(op_ue.outage < 1e-6);
}

TEST_SUITE_END();
