#include "chx/experiments.hpp"
#include "chx/fit.hpp"
#include "chx/io.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace chx;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::filesystem::path temp_dir(const char* tag) {
    auto p = std::filesystem::temp_directory_path() / (std::string("chx_test_") + tag);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("rate fitting") {
    SUBCASE("exact power law") {
        std::vector<double> x{1.0, 2.0, 4.0, 8.0}, y;
        for (double v : x) y.push_back(v * v);
        RateFit f = fit_rate(x, y, RateModel::power);
        CHECK(f.exponent == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(f.prefactor == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("noisy decay") {
        std::vector<double> x, y;
        for (int k = 1; k <= 10; ++k) {
            x.push_back(0.1 * k);
            const double wiggle = 1.0 + 0.01 * std::sin(7.0 * k);
            y.push_back(3.0 * std::pow(0.1 * k, -1.5) * wiggle);
        }
        RateFit f = fit_rate(x, y, RateModel::power);
        CHECK(std::fabs(f.exponent + 1.5) <= 0.05);
        CHECK(f.r2 > 0.999);
    }
    SUBCASE("exact exponential") {
        std::vector<double> x{0.0, 1.0, 2.0, 3.0}, y;
        for (double v : x) y.push_back(0.5 * std::exp(-2.0 * v));
        RateFit f = fit_rate(x, y, RateModel::exponential);
        CHECK(f.exponent == doctest::Approx(-2.0).epsilon(1e-12));
        CHECK(f.prefactor == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("bad input") {
        CHECK_THROWS(fit_rate({1.0, 2.0}, {1.0, 2.0}, RateModel::power));
        CHECK_THROWS(fit_rate({1.0, 2.0, 3.0}, {1.0, -2.0, 3.0}, RateModel::power));
        CHECK_THROWS(fit_rate({-1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}, RateModel::power));
        CHECK_THROWS(fit_rate({1.0, 2.0, 3.0}, {1.0, 2.0}, RateModel::power));
    }
}

TEST_CASE("convolution bound survey") {
    SUBCASE("the q = 0 entry is a plain double sum") {
        const int qmax = 16;
        Lemma2Report rep = lemma2_check(1, 0.75, 0.75, qmax);
        double expect = 0.0;
        for (int m = -4 * qmax; m <= 4 * qmax; ++m) {
            const double n4m = static_cast<double>(m) * m * static_cast<double>(m) * m;
            expect += std::pow(1.0 + n4m, -0.25 * 0.75) * std::pow(1.0 + n4m, -0.25 * 0.75);
        }
        const std::size_t zero_idx = static_cast<std::size_t>(qmax);  // q = -qmax .. qmax
        CHECK(rep.q_norm[zero_idx] == 0.0);
        CHECK(rep.ratio[zero_idx] == doctest::Approx(expect).epsilon(1e-12));
        CHECK(rep.max_ratio >= rep.ratio[zero_idx]);
        CHECK(rep.tail_bound > 0.0);
    }
    SUBCASE("hypotheses are enforced") {
        CHECK_THROWS(lemma2_check(3, 1.5, 1.6, 32));
        CHECK_THROWS(lemma2_check(1, 1.2, 0.75, 32));   // max(alpha,beta) >= d
        CHECK_THROWS(lemma2_check(1, 0.4, 0.5, 32));    // alpha + beta <= d
        CHECK_THROWS(lemma2_check(1, 0.75, 0.75, 8));   // qmax too small
    }
}

TEST_CASE("field and table io") {
    const auto dir = temp_dir("io");
    SUBCASE("field round trip is bit exact") {
        const TorusGrid g(2, 16);
        Field f = random_field(g, 91, 0, 1.0);
        const std::string base = (dir / "state").string();
        io::dump_field(f, base, "initial condition");
        std::string name;
        Field back = io::load_field(base, &name);
        CHECK(name == "initial condition");
        CHECK(back.grid == g);
        CHECK(back.values == f.values);
    }
    SUBCASE("number formatting round trips") {
        for (double v : {0.1, -3.25e-17, 1.0, 123456.789, 2.2250738585072014e-308}) {
            CHECK(std::stod(io::num(v)) == v);
        }
        CHECK(io::num(1.5) == "1.5");
    }
    SUBCASE("csv enforces the header width") {
        const std::string path = (dir / "t.csv").string();
        {
            io::Csv csv(path, {"a", "b"});
            csv.row({"1", "2"});
            CHECK_THROWS(csv.row({"1"}));
        }
        CHECK(slurp(path) == "a,b\n1,2\n");
    }
    SUBCASE("manifest format") {
        const std::string path = (dir / "m.txt").string();
        io::write_manifest(path, {{"alpha", "0.5"}, {"verdict", "PASS"}});
        CHECK(slurp(path) == "alpha = 0.5\nverdict = PASS\n");
    }
}

TEST_CASE("config parsing") {
    SUBCASE("defaults plus overrides") {
        ExperimentConfig c = config_from_json_text(
            R"({"experiment": "bony", "d": 2, "n": 32, "seed": 9, "mc": 7})");
        CHECK(c.experiment == "bony");
        CHECK(c.d == 2);
        CHECK(c.n == 32);
        CHECK(c.seed == 9);
        CHECK(c.mc == 7);
        CHECK(c.alpha == 1.0);  // untouched default
    }
    SUBCASE("unknown experiment") {
        CHECK_THROWS_WITH_AS(
            (void)config_from_json_text(R"({"experiment": "nope"})"),
            doctest::Contains("experiment"), std::invalid_argument);
    }
    SUBCASE("key outside the experiment schema is named") {
        CHECK_THROWS_WITH_AS(
            (void)config_from_json_text(R"({"experiment": "bony", "qmax": 32})"),
            doctest::Contains("qmax"), std::invalid_argument);
    }
    SUBCASE("malformed json and missing file") {
        CHECK_THROWS((void)config_from_json_text("{"));
        CHECK_THROWS((void)load_config("/nonexistent/config.json"));
    }
}

TEST_CASE("runs are deterministic in the seed") {
    for (const char* name : {"bony", "solve"}) {
        ExperimentConfig c;
        c.experiment = name;
        c.n = 32;
        c.mc = 3;
        c.seed = 11;
        c.horizon = 2e-4;
        c.dt = 2e-5;
        const auto d1 = temp_dir("det1"), d2 = temp_dir("det2");
        c.out_dir = d1.string();
        RunManifest r1 = run(c);
        c.out_dir = d2.string();
        RunManifest r2 = run(c);
        CHECK(slurp(r1.series_path) == slurp(r2.series_path));
        CHECK(!slurp(r1.series_path).empty());
        CHECK(r1.pass == r2.pass);
    }
}

}  // TEST_SUITE
