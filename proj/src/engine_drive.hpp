#pragma once

#include "rarefan/dynamics.hpp"

#include <algorithm>
#include <stdexcept>

namespace rarefan {

template <class Engine>
RunStats drive(Engine& engine, const Configuration& config, double until, const Observers& obs)
{
    if (!(until >= 0.0))
        throw std::invalid_argument("run horizon must be >= 0");
    engine.set_log(obs.log);
    std::vector<double> times = obs.times;
    std::sort(times.begin(), times.end());
    for (double s : times) {
        if (s > until)
            break;
        engine.advance_to(s);
        if (obs.on_snapshot)
            obs.on_snapshot(s, config);
    }
    engine.advance_to(until);
    return engine.stats();
}

}
