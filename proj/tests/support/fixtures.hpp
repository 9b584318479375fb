#pragma once

#include "yieldcast/cv_engine.hpp"
#include "yieldcast/synthgen.hpp"

#include <initializer_list>

namespace fixture {

inline const yieldcast::synth::Scenario& scenario(yieldcast::synth::Law law = yieldcast::synth::Law::PeakLinear,
                                                  std::uint64_t seed = 3) {
    static std::map<std::pair<int, std::uint64_t>, yieldcast::synth::Scenario> cache;
    const auto key = std::make_pair(static_cast<int>(law), seed);
    auto it = cache.find(key);
    if (it == cache.end()) {
        yieldcast::synth::ScenarioSpec spec;
        spec.law = law;
        spec.seed = seed;
        it = cache.emplace(key, yieldcast::synth::generate(spec)).first;
    }
    return it->second;
}

// A handful of grid points per algorithm keeps engine tests fast.
inline yieldcast::cv::RunOptions small_options(int workers = 1) {
    using yieldcast::models::AlgorithmId;
    yieldcast::cv::RunOptions o;
    o.workers = workers;
    auto take = [](AlgorithmId a, std::initializer_list<std::size_t> idx) {
        const auto full = yieldcast::models::enumerate_grid(a);
        std::vector<yieldcast::models::Assignment> out;
        for (auto i : idx) out.push_back(full.at(i));
        return out;
    };
    o.grid_override[AlgorithmId::LASSO] = take(AlgorithmId::LASSO, {3, 7, 11});
    o.grid_override[AlgorithmId::RF] = take(AlgorithmId::RF, {18});
    o.grid_override[AlgorithmId::SVR_lin] = take(AlgorithmId::SVR_lin, {28, 29});
    o.grid_override[AlgorithmId::SVR_rbf] = take(AlgorithmId::SVR_rbf, {85, 86});
    o.grid_override[AlgorithmId::GBR] = take(AlgorithmId::GBR, {108});
    o.grid_override[AlgorithmId::MLP] = take(AlgorithmId::MLP, {0});
    return o;
}

inline std::vector<yieldcast::cv::ModelConfiguration> configs(std::initializer_list<const char*> ids) {
    std::vector<yieldcast::cv::ModelConfiguration> out;
    for (const auto* id : ids) out.push_back(yieldcast::cv::ModelConfiguration::parse(id));
    return out;
}

}  // namespace fixture
