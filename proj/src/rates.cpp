#include "qdistil/rates.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

namespace qdistil {

double entropy(std::span<const double> dist, double base) {
    if (!(base > 1.0)) throw ContractError("entropy: base must exceed 1");
    double total = 0.0;
    for (double w : dist) {
        if (!(w >= 0.0)) throw ContractError("entropy: negative weight");
        total += w;
    }
    if (std::abs(total - 1.0) > kWeightTolerance) {
        throw ContractError("entropy: distribution is not normalized");
    }
    double h = 0.0;
    const double lb = std::log(base);
    for (double w : dist) {
        if (w > 0.0) h -= w * std::log(w) / lb;
    }
    return h;
}

double entropy(const BellDiagState& state, double base) {
    if (state.is_product()) {
        double h = 0.0;
        for (const BellDiagState& f : state.factors()) h += entropy(f, base);
        return h;
    }
    return entropy(std::span<const double>(state.dense_weights()), base);
}

double hashing_yield(const BellDiagState& w) {
    double raw = static_cast<double>(w.pairs()) - entropy(w, static_cast<double>(w.p()));
    return raw > 0.0 ? raw : 0.0;
}

CombinedYield combined_yield(const ConvertedProtocol& proto, double fidelity, int max_rounds) {
    const int k = proto.code.k();
    BellDiagState initial = werner_converted(fidelity, proto.code.p());
    if (k > 1) {
        std::vector<BellDiagState> copies(static_cast<std::size_t>(k), initial);
        initial = tensor(copies);
    }
    IterationTrace trace = iterate(proto, initial, max_rounds);
    CombinedYield best{0, trace.rounds.front().net_yield_per_initial_pair};
    for (const IterationRound& r : trace.rounds) {
        if (r.net_yield_per_initial_pair > best.net_yield) {
            best = {r.round, r.net_yield_per_initial_pair};
        }
    }
    return best;
}

std::vector<YieldCurve> comparison_sweep(std::span<const NamedProtocol> protocols,
                                         std::span<const double> f_grid, int max_rounds) {
    std::vector<YieldCurve> curves(protocols.size());
    for (std::size_t c = 0; c < protocols.size(); ++c) {
        curves[c].protocol = protocols[c].name;
        curves[c].points.resize(f_grid.size());
    }
    // grid points are pure and independent; static partition keeps the
    // result identical to the serial evaluation
    const std::size_t jobs = protocols.size() * f_grid.size();
    unsigned workers = std::min<std::size_t>(jobs, std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t j = w; j < jobs; j += workers) {
                std::size_t c = j / f_grid.size();
                std::size_t i = j % f_grid.size();
                CombinedYield y = combined_yield(protocols[c].proto, f_grid[i], max_rounds);
                curves[c].points[i] = YieldPoint{f_grid[i], y.best_rounds, y.net_yield};
            }
        });
    }
    for (std::thread& t : pool) t.join();
    return curves;
}

std::string sweep_to_csv(std::span<const YieldCurve> curves) {
    std::ostringstream os;
    os << "F,protocol,best_rounds,net_yield\n";
    if (curves.empty()) return os.str();
    const std::size_t grid_size = curves.front().points.size();
    char buf[64];
    for (std::size_t i = 0; i < grid_size; ++i) {
        for (const YieldCurve& c : curves) {
            const YieldPoint& pt = c.points[i];
            std::snprintf(buf, sizeof buf, "%.12g", pt.fidelity);
            os << buf << ',' << c.protocol << ',' << pt.best_rounds << ',';
            std::snprintf(buf, sizeof buf, "%.12g", pt.net_yield);
            os << buf << '\n';
        }
    }
    return os.str();
}

} // namespace qdistil
