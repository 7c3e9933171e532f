#include "doctest.h"

#include <array>
#include <cmath>

#include "qdistil/presets.hpp"
#include "qdistil/rates.hpp"

using namespace qdistil;

TEST_CASE("entropy basics") {
    std::array<double, 4> uniform{0.25, 0.25, 0.25, 0.25};
    CHECK(entropy(uniform, 2.0) == doctest::Approx(2.0).epsilon(1e-12));

    std::array<double, 3> point{1.0, 0.0, 0.0};
    CHECK(entropy(point, 2.0) == doctest::Approx(0.0));

    std::array<double, 4> werner{0.75, 1.0 / 12, 1.0 / 12, 1.0 / 12};
    CHECK(entropy(werner, 2.0) == doctest::Approx(1.207518749639422).epsilon(1e-12));

    std::array<double, 2> off{0.5, 0.4};
    CHECK_THROWS_AS(entropy(off, 2.0), ContractError);
}

TEST_CASE("entropy is additive over product factors") {
    BellDiagState prod = tensor(werner_converted(0.8), werner_converted(0.65));
    double split = entropy(werner_converted(0.8), 2.0) + entropy(werner_converted(0.65), 2.0);
    CHECK(entropy(prod, 2.0) == doctest::Approx(split).epsilon(1e-12));
    CHECK(entropy(prod.densified(), 2.0) == doctest::Approx(split).epsilon(1e-12));
}

TEST_CASE("hashing yield of Werner states") {
    CHECK(hashing_yield(werner_converted(1.0)) == doctest::Approx(1.0));
    // below threshold the yield clips to zero; the pre-clip value at 0.75
    CHECK(1.0 - entropy(werner_converted(0.75), 2.0) == doctest::Approx(-0.207518749639422).epsilon(1e-9));
    CHECK(hashing_yield(werner_converted(0.75)) == doctest::Approx(0.0));
    // ternary uniform: H_3 over nine outcomes is 2
    CHECK(hashing_yield(werner_converted(1.0 / 9.0, 3)) == doctest::Approx(0.0));
}

TEST_CASE("hashing yield threshold location") {
    // independent root-find on 1 - H_2(F, (1-F)/3 x3)
    double lo = 0.75;
    double hi = 0.95;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (1.0 - entropy(werner_converted(mid), 2.0) < 0.0 ? lo : hi) = mid;
    }
    double crossing = 0.5 * (lo + hi);
    CHECK(crossing == doctest::Approx(0.8107103750847682).epsilon(1e-9));
    CHECK(hashing_yield(werner_converted(crossing + 1e-6)) > 0.0);
    CHECK(hashing_yield(werner_converted(crossing - 1e-6)) == doctest::Approx(0.0));
}

TEST_CASE("block additivity before clipping") {
    BellDiagState single = werner_converted(0.9);
    std::vector<BellDiagState> copies(3, single);
    BellDiagState block = tensor(copies);
    double pre_clip_block = 3.0 - entropy(block, 2.0);
    double pre_clip_single = 1.0 - entropy(single, 2.0);
    CHECK(pre_clip_block == doctest::Approx(3.0 * pre_clip_single).epsilon(1e-12));
    CHECK(hashing_yield(block) == doctest::Approx(3.0 * hashing_yield(single)).epsilon(1e-12));
}

TEST_CASE("combined yield endpoints") {
    ConvertedProtocol rec = preset_protocol("recurrence");
    CombinedYield perfect = combined_yield(rec, 1.0, 4);
    CHECK(perfect.best_rounds == 0);
    CHECK(perfect.net_yield == doctest::Approx(1.0));

    CombinedYield high = combined_yield(rec, 0.9, 4);
    CHECK(high.best_rounds == 0); // hashing alone is already best
    CHECK(high.net_yield == doctest::Approx(0.372508156338603).epsilon(1e-9));

    CombinedYield low = combined_yield(rec, 0.75, 4);
    CHECK(low.best_rounds == 1); // hashing alone yields zero at 0.75
    CHECK(low.net_yield == doctest::Approx(0.026153415687399).epsilon(1e-9));
}

TEST_CASE("combined yield with no rounds is the plain hashing yield") {
    ConvertedProtocol rec = preset_protocol("recurrence");
    CombinedYield y = combined_yield(rec, 0.87, 0);
    CHECK(y.best_rounds == 0);
    CHECK(y.net_yield == doctest::Approx(hashing_yield(werner_converted(0.87))).epsilon(1e-12));

    ConvertedProtocol big = preset_protocol("xxxx-zzzz");
    CombinedYield y2 = combined_yield(big, 0.87, 0);
    CHECK(y2.net_yield == doctest::Approx(hashing_yield(werner_converted(0.87))).epsilon(1e-12));
}

TEST_CASE("comparison sweep ordering and determinism") {
    std::vector<NamedProtocol> protos;
    for (const std::string& name : preset_names()) {
        protos.push_back({name, preset_protocol(name)});
    }
    std::vector<double> grid{0.75, 0.80, 0.85, 0.90};
    std::vector<YieldCurve> curves = comparison_sweep(protos, grid, 4);
    REQUIRE(curves.size() == 3);

    // the four-pair protocol dominates both [[2,1]] protocols at 0.80
    CHECK(curves[2].points[1].net_yield > curves[0].points[1].net_yield);
    CHECK(curves[2].points[1].net_yield > curves[1].points[1].net_yield);

    // yields are non-decreasing in F for every protocol
    for (const YieldCurve& c : curves) {
        for (std::size_t i = 1; i < c.points.size(); ++i) {
            CHECK(c.points[i].net_yield >= c.points[i - 1].net_yield);
        }
    }

    // deterministic across runs, including the parallel evaluation
    std::vector<YieldCurve> again = comparison_sweep(protos, grid, 4);
    CHECK(sweep_to_csv(curves) == sweep_to_csv(again));

    std::string csv = sweep_to_csv(curves);
    CHECK(csv.rfind("F,protocol,best_rounds,net_yield\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 12);
}

TEST_CASE("grid {1.0} gives yield one for all protocols") {
    std::vector<NamedProtocol> protos;
    for (const std::string& name : preset_names()) {
        protos.push_back({name, preset_protocol(name)});
    }
    std::vector<double> grid{1.0};
    for (const YieldCurve& c : comparison_sweep(protos, grid, 2)) {
        CHECK(c.points[0].net_yield == doctest::Approx(1.0));
        CHECK(c.points[0].best_rounds == 0);
    }
}
