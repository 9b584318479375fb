#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"

#include "yieldcast/error.hpp"
#include "yieldcast/phenology.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace yieldcast;
using namespace yieldcast::phenology;
using Catch::Approx;

namespace {

DoubleLogisticParams params(double b, double a, double s1, double m1, double s2, double m2) {
    DoubleLogisticParams p;
    p.v_base = b;
    p.v_amp = a;
    p.s1 = s1;
    p.m1 = m1;
    p.s2 = s2;
    p.m2 = m2;
    return p;
}

std::vector<double> axis(int n) {
    std::vector<double> t(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = i;
    return t;
}

}  // namespace

TEST_CASE("double logistic evaluation") {
    const auto p = params(0.2, 0.5, 10, 1.5, 25, 1.2);
    const double expected = 0.2 + 0.5 * (0.5 + 1.0 / (1.0 + std::exp(1.2 * (10.0 - 25.0))) - 1.0);
    CHECK(eval_double_logistic(p, 10.0) == Approx(expected).epsilon(1e-14));
    CHECK(eval_double_logistic(p, -1e3) == Approx(0.2));
    CHECK(eval_double_logistic(p, 17.5) == Approx(0.7).margin(1e-4));
}

TEST_CASE("branches are monotone when well separated") {
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> u(0.8, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        const auto p = params(0.1, 0.5, 10, u(gen), 30, u(gen));
        for (double t = -10; t < p.s1; t += 0.25) {
            REQUIRE(eval_double_logistic(p, t + 0.25) >= eval_double_logistic(p, t) - 1e-9);
        }
        for (double t = p.s2; t < 50; t += 0.25) {
            REQUIRE(eval_double_logistic(p, t + 0.25) <= eval_double_logistic(p, t) + 1e-9);
        }
    }
}

TEST_CASE("season thresholds") {
    auto p = params(0.1, 0.5, 10, 1.0, 25, 0.7);
    CHECK(extract_sos_eos(p, 0.2).first == Approx(10 + std::log(0.25)));
    CHECK(extract_sos_eos(p, 0.2).second == Approx(25 - std::log(0.25) / 0.7));
    CHECK(extract_sos_eos(p, 0.5).first == Approx(10.0));
    CHECK(extract_sos_eos(p, 0.5).second == Approx(25.0));

    const auto [sos, eos] = extract_sos_eos(p, 0.2);
    auto f = [&](double t) { return eval_double_logistic(p, t) - (p.v_base + 0.2 * p.v_amp); };
    CHECK(oracle::bisect(f, -40.0, 17.5) == Approx(sos).margin(0.01));
    CHECK(oracle::bisect(f, 17.5, 70.0) == Approx(eos).margin(0.01));

    p.s2 = 11.0;
    CHECK_THROWS_AS(extract_sos_eos(p, 0.2), Error);
}

TEST_CASE("noiseless fit recovers parameters") {
    const auto p = params(0.15, 0.45, 10.5, 0.9, 27.0, 0.7);
    const auto t = axis(36);
    std::vector<double> v;
    for (double ti : t) v.push_back(oracle::double_logistic(0.15, 0.45, 10.5, 0.9, 27.0, 0.7, ti));
    const auto f = fit_double_logistic(v, t);
    CHECK(f.params.v_base == Approx(p.v_base).epsilon(1e-3));
    CHECK(f.params.v_amp == Approx(p.v_amp).epsilon(1e-3));
    CHECK(f.params.s1 == Approx(p.s1).epsilon(1e-3));
    CHECK(f.params.m1 == Approx(p.m1).epsilon(1e-3));
    CHECK(f.params.s2 == Approx(p.s2).epsilon(1e-3));
    CHECK(f.params.m2 == Approx(p.m2).epsilon(1e-3));
    CHECK(f.rmse < 1e-6);

    // affine rescaling of the data
    std::vector<double> w;
    for (double x : v) w.push_back(1.5 * x + 0.05);
    const auto g = fit_double_logistic(w, t);
    CHECK(g.params.v_base == Approx(1.5 * f.params.v_base + 0.05).epsilon(1e-3));
    CHECK(g.params.v_amp == Approx(1.5 * f.params.v_amp).epsilon(1e-3));
    CHECK(g.params.s1 == Approx(f.params.s1).epsilon(1e-3));
    CHECK(g.params.m2 == Approx(f.params.m2).epsilon(1e-3));
}

TEST_CASE("fit rejects flat or short series") {
    const auto t = axis(36);
    std::vector<double> flat(36, 0.3);
    try {
        fit_double_logistic(flat, t);
        FAIL("expected NoSeasonality");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoSeasonality);
    }
    std::vector<double> few{0.1, 0.5, 0.1};
    std::vector<double> tf{0, 1, 2};
    CHECK_THROWS_AS(fit_double_logistic(few, tf), Error);
}

TEST_CASE("circular season average") {
    const auto a = average_season({{32, 17}, {32, 17}, {32, 17}});
    CHECK(a.sos == 32);
    CHECK(a.eos == 17);
    CHECK(a.sos_sd == Approx(0.0).margin(1e-9));
    const auto b = average_season({{35, 17}, {36, 17}, {1, 17}});
    CHECK(b.sos == 36);
}

TEST_CASE("season detection on synthetic data") {
    const auto& sc = fixture::scenario();
    const auto res = detect_season(sc.dataset);
    CHECK(std::abs(res.window.sos - 32) <= 1);
    CHECK(std::abs(res.window.eos - 17) <= 1);
    CHECK(res.records.size() == 5 * 17);
    const auto text = phenology_csv(res.records);
    CHECK(text.rfind("unit_id,harvest_year,sos_dekad,eos_dekad,fit_rmse", 0) == 0);
}
