#include "../support/oracles.hpp"

#include "yieldcast/error.hpp"
#include "yieldcast/metrics.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace yieldcast;
using namespace yieldcast::metrics;
using Catch::Approx;

namespace {

std::vector<PredictionRecord> fold(const std::vector<double>& obs, const std::vector<double>& pred, int year = 2010) {
    std::vector<PredictionRecord> out;
    for (std::size_t i = 0; i < obs.size(); ++i) out.push_back({"U" + std::to_string(i), year, obs[i], pred[i]});
    return out;
}

}  // namespace

TEST_CASE("fold metrics hand cases") {
    const auto perfect = fold_metrics(fold({1, 2, 3}, {1, 2, 3}), 2.0);
    CHECK(perfect.rmse == 0.0);
    CHECK(perfect.rrmse == 0.0);
    CHECK(perfect.me == 0.0);
    CHECK(*perfect.r2 == 1.0);

    const auto flat = fold_metrics(fold({1, 2, 3}, {2, 2, 2}), 2.0);
    CHECK(flat.rmse == Approx(std::sqrt(2.0 / 3.0)));
    CHECK(flat.rrmse == Approx(100.0 * std::sqrt(2.0 / 3.0) / 2.0));
    CHECK(flat.me == Approx(0.0).margin(1e-15));
    CHECK(*flat.r2 == Approx(0.0).margin(1e-15));

    const auto offset = fold_metrics(fold({1, 2, 3}, {1.5, 2.5, 3.5}), 2.0);
    CHECK(offset.me == Approx(0.5));
    CHECK(offset.rmse == Approx(0.5));

    CHECK_FALSE(fold_metrics(fold({2, 2}, {1, 3}), 2.0).r2.has_value());
}

TEST_CASE("provincial averages") {
    auto recs = fold({1, 1}, {1.2, 0.8}, 2001);
    const auto second = fold({1, 1}, {1.4, 0.6}, 2002);
    recs.insert(recs.end(), second.begin(), second.end());
    const auto p = provincial_metrics(recs, 1.0);
    CHECK(p.rmse == Approx(0.3));
    CHECK(std::isnan(p.r2_foldavg));

    std::vector<PredictionRecord> anti{{"A", 1, 1, 3}, {"A", 2, 2, 2}, {"A", 3, 3, 1}};
    CHECK(provincial_metrics(anti, 2.0).r2_temporal == Approx(-3.0));
    std::vector<PredictionRecord> exact{{"A", 1, 1, 1}, {"A", 2, 2, 2}, {"B", 1, 4, 4}, {"B", 2, 3, 3}};
    CHECK(provincial_metrics(exact, 2.5).r2_temporal == Approx(1.0));
}

TEST_CASE("national weighting") {
    std::vector<PredictionRecord> recs{{"A", 1, 1.0, 1.0}, {"B", 1, 3.0, 3.0}, {"A", 2, 2.0, 2.5}};
    const auto s = national_series(recs, {{"A", 1.0}, {"B", 3.0}});
    REQUIRE(s.size() == 2);
    CHECK(s[0].obs == Approx(2.5));
    CHECK(s[1].obs == Approx(2.0));
    CHECK(s[1].pred == Approx(2.5));
    const auto eq = national_series(recs, {{"A", 7.0}, {"B", 7.0}});
    CHECK(eq[0].obs == Approx(2.0));
    try {
        national_series(recs, {{"A", 1.0}});
        FAIL("expected MissingWeight");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MissingWeight);
    }
    const auto perfect = series_metrics(national_series(fold({1, 2, 3}, {1, 2, 3}), {{"U0", 1}, {"U1", 2}, {"U2", 3}}), 2);
    CHECK(perfect.rmse == 0.0);
}

TEST_CASE("first quartile years") {
    std::vector<double> v{8, 3, 5, 1, 7, 2, 6, 4};
    CHECK(percentile(v, 0.25) == Approx(2.75));
    CHECK(percentile(v, 0.5) == Approx(4.5));
    CHECK(percentile({5}, 0.25) == 5);

    std::vector<NationalPoint> s;
    for (int y = 1; y <= 8; ++y) s.push_back({2000 + y, static_cast<double>(y), y + 0.3});
    const auto low = low_yield_metrics(s, 4.5);
    CHECK(low.years == std::vector<int>{2001, 2002});
    CHECK(low.rmse == Approx(0.3));
    CHECK(low.d_rrmse == Approx(0.0).margin(1e-12));

    std::vector<NationalPoint> s17;
    for (int y = 0; y < 17; ++y) s17.push_back({2000 + y, 1.0 + 0.1 * ((y * 7) % 17), 1.0});
    CHECK(low_yield_metrics(s17, 1.0).years.size() == 5);
    s.resize(3);
    CHECK_THROWS_AS(low_yield_metrics(s, 2.0), Error);
}

TEST_CASE("metric identities") {
    std::mt19937_64 gen(12);
    std::uniform_real_distribution<double> u(0.5, 3.0), e(-0.4, 0.4);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> obs, pred;
        for (int i = 0; i < 7; ++i) {
            obs.push_back(u(gen));
            pred.push_back(obs.back() + e(gen));
        }
        const auto f = fold_metrics(fold(obs, pred), 1.7);
        double var = 0.0;
        for (std::size_t i = 0; i < obs.size(); ++i) var += std::pow(pred[i] - obs[i] - f.me, 2);
        var /= static_cast<double>(obs.size());
        CHECK(f.rmse * f.rmse == Approx(f.me * f.me + var).margin(1e-10));

        std::vector<double> obs2, pred2;
        for (std::size_t i = 0; i < obs.size(); ++i) {
            obs2.push_back(3.0 * obs[i]);
            pred2.push_back(3.0 * pred[i]);
        }
        CHECK(fold_metrics(fold(obs2, pred2), 5.1).rrmse == Approx(f.rrmse).epsilon(1e-12));
    }
}

TEST_CASE("report matches the streaming oracle") {
    std::mt19937_64 gen(77);
    std::uniform_real_distribution<double> u(0.5, 3.0), e(-0.5, 0.5), w(1.0, 100.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::map<std::string, double> weights;
        std::vector<PredictionRecord> recs;
        std::vector<oracle::Record> orecs;
        double mean = 0.0;
        for (int unit = 0; unit < 4; ++unit) {
            weights["U" + std::to_string(unit)] = w(gen);
            for (int y = 0; y < 3 + trial % 12; ++y) {
                const double o = u(gen);
                const double p = o + e(gen);
                recs.push_back({"U" + std::to_string(unit), 1990 + y, o, p});
                orecs.push_back({"U" + std::to_string(unit), 1990 + y, o, p});
                mean += o;
            }
        }
        mean /= static_cast<double>(recs.size());
        const auto m = compute_report(recs, mean, weights);
        const auto o = oracle::metrics(orecs, mean, weights);
        CHECK(m.rmsep == Approx(o.rmse).epsilon(1e-10));
        CHECK(m.rrmsep == Approx(o.rrmse).epsilon(1e-10));
        CHECK(m.r2p_foldavg == Approx(o.r2_foldavg).epsilon(1e-10));
        CHECK(m.r2p_temporal == Approx(o.r2_temporal).epsilon(1e-10));
        CHECK(m.r2p_nat == Approx(o.r2_nat).epsilon(1e-10));
        CHECK(m.mep_nat == Approx(o.me_nat).epsilon(1e-10).margin(1e-12));
        if (std::isnan(o.rmse_fq)) {
            CHECK(std::isnan(m.rmsep_fq));
        } else {
            CHECK(m.d_rrmsep_fq == Approx(o.d_rrmse_fq).epsilon(1e-10).margin(1e-10));
        }
    }
}
