#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>

#include "gplab/errors.hpp"
#include "gplab/rng.hpp"
#include "gplab/sieve.hpp"
#include "oracles.hpp"

using namespace gplab;
using std::numbers::pi;

namespace {

std::set<std::pair<int64_t, int64_t>> entry_set(const PrimeTable& table) {
    std::set<std::pair<int64_t, int64_t>> out;
    for (const auto& e : table.entries()) out.insert({e.p.re, e.p.im});
    return out;
}

} // namespace

TEST_CASE("max_norm 2 gives exactly the four associates of 1+i") {
    PrimeTable table = PrimeTable::build(2);
    auto got = entry_set(table);
    std::set<std::pair<int64_t, int64_t>> want{{1, 1}, {-1, 1}, {-1, -1}, {1, -1}};
    CHECK(got == want);
}

TEST_CASE("table equals the trial-division enumeration") {
    for (int64_t bound : {25, 100, 1000}) {
        PrimeTable table = PrimeTable::build(bound);
        auto oracle_list = oracle::enumerate_primes_trial(bound);
        std::set<std::pair<int64_t, int64_t>> want;
        for (const auto& g : oracle_list) want.insert({g.re, g.im});
        CAPTURE(bound);
        CHECK(entry_set(table) == want);
        CHECK(table.entries().size() % 4 == 0);
    }
    CHECK(PrimeTable::build(100).entries().size() == 100);
}

TEST_CASE("entries are sorted by norm then arg") {
    PrimeTable table = PrimeTable::build(500);
    auto entries = table.entries();
    for (size_t i = 1; i < entries.size(); ++i) {
        bool ordered = entries[i - 1].norm < entries[i].norm ||
                       (entries[i - 1].norm == entries[i].norm &&
                        entries[i - 1].arg <= entries[i].arg);
        CHECK(ordered);
        CHECK(entries[i].norm == entries[i].p.norm64());
    }
}

TEST_CASE("full circle and quarter sector counts at radius 10") {
    PrimeTable table = PrimeTable::build(100);
    auto full = count_primes_sector(table, SectorAnnulus::full_circle(10.0));
    CHECK(full.observed == 100);
    CHECK(full.kubilius_main == doctest::Approx(400.0 / std::log(100.0)).epsilon(1e-12));

    auto quarter = count_primes_sector(table, {0.0, 10.0, 0.0, pi / 2.0});
    CHECK(quarter.observed == 25);
}

TEST_CASE("rotation by pi/2 leaves sector counts invariant") {
    PrimeTable table = PrimeTable::build(2000);
    for (int trial = 0; trial < 24; ++trial) {
        double t1 = -pi + 2.0 * pi * u01(counter_rng(11, trial, 0));
        double width = 0.2 + 2.0 * u01(counter_rng(11, trial, 1));
        double r2 = 10.0 + 34.0 * u01(counter_rng(11, trial, 2));
        SectorAnnulus s{0.0, r2, t1, t1 + width};
        SectorAnnulus rot{0.0, r2, t1 + pi / 2.0, t1 + width + pi / 2.0};
        CHECK(count_primes_sector(table, s).observed ==
              count_primes_sector(table, rot).observed);
    }
}

TEST_CASE("sector partitions sum to the full count, exactly") {
    PrimeTable table = PrimeTable::build(3000);
    auto full = count_primes_sector(table, SectorAnnulus::full_circle(50.0));
    for (int parts : {3, 7, 8}) {
        int64_t sum = 0;
        for (int k = 0; k < parts; ++k) {
            double lo = -pi + 2.0 * pi * k / parts;
            double hi = -pi + 2.0 * pi * (k + 1) / parts;
            sum += count_primes_sector(table, {0.0, 50.0, lo, hi}).observed;
        }
        CAPTURE(parts);
        CHECK(sum == full.observed);
    }
}

TEST_CASE("conjugation symmetry on boundary-free sectors") {
    PrimeTable table = PrimeTable::build(2000);
    for (int trial = 0; trial < 16; ++trial) {
        // random boundaries chosen away from any lattice angle
        double t1 = 0.05 + 2.9 * u01(counter_rng(17, trial, 0)) + 1e-5;
        double t2 = t1 + 0.1 + (3.0 - t1) * u01(counter_rng(17, trial, 1)) * 0.9;
        SectorAnnulus s{3.0, 40.0, t1, t2};
        SectorAnnulus conj{3.0, 40.0, -t2, -t1};
        CHECK(count_primes_sector(table, s).observed ==
              count_primes_sector(table, conj).observed);
    }
}

TEST_CASE("coverage violations are rejected") {
    PrimeTable table = PrimeTable::build(100);
    CHECK_THROWS_AS(count_primes_sector(table, SectorAnnulus::full_circle(11.0)),
                    coverage_error);
    CHECK_THROWS_AS(primes_in_disc(table, ComplexHP::of(9.5, 0.0), 2.0), coverage_error);
}

TEST_CASE("primes_in_disc examples") {
    PrimeTable table = PrimeTable::build(400);
    auto a = primes_in_disc(table, ComplexHP::of(0.0, 0.0), 1.5);
    CHECK(a.size() == 4); // associates of 1+i

    auto b = primes_in_disc(table, ComplexHP::of(2.0, 1.0), 0.0);
    REQUIRE(b.size() == 1);
    CHECK(b[0] == GaussInt{2, 1});

    auto c = primes_in_disc(table, ComplexHP::of(0.5, 0.5), 0.6);
    CHECK(c.empty());
}

TEST_CASE("primes_in_disc matches a table scan") {
    PrimeTable table = PrimeTable::build(3000);
    for (int trial = 0; trial < 12; ++trial) {
        double cx = 30.0 * u01(counter_rng(23, trial, 0)) - 15.0;
        double cy = 30.0 * u01(counter_rng(23, trial, 1)) - 15.0;
        double r = 4.0 * u01(counter_rng(23, trial, 2));
        ComplexHP center = ComplexHP::of(cx, cy);
        auto got = primes_in_disc(table, center, r);
        int64_t expected = 0;
        for (const auto& e : table.entries()) {
            double dx = static_cast<double>(e.p.re) - cx;
            double dy = static_cast<double>(e.p.im) - cy;
            if (dx * dx + dy * dy <= r * r) ++expected;
        }
        CHECK(static_cast<int64_t>(got.size()) == expected);
    }
}

TEST_CASE("memory budget produces a resource error") {
    PrimeTable::BuildOptions opts;
    opts.mem_budget_bytes = 1024;
    CHECK_THROWS_AS(PrimeTable::build(1000000, opts), resource_error);
}

TEST_CASE("cache round-trip is exact; corrupted caches are rejected") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "gplab_sieve_test";
    fs::create_directories(dir);
    std::string path = (dir / "t.bin").string();

    PrimeTable table = PrimeTable::build(5000);
    table.save(path);
    PrimeTable loaded = PrimeTable::load(path);
    CHECK(loaded.max_norm() == table.max_norm());
    REQUIRE(loaded.entries().size() == table.entries().size());
    for (size_t i = 0; i < loaded.entries().size(); ++i) {
        CHECK(loaded.entries()[i].p == table.entries()[i].p);
        CHECK(loaded.entries()[i].norm == table.entries()[i].norm);
    }

    // version mismatch
    {
        std::ifstream in(path, std::ios::binary);
        std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        buf[8] = 99;
        std::ofstream out(path + ".v", std::ios::binary);
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    }
    CHECK_THROWS_AS(PrimeTable::load(path + ".v"), cache_error);

    // truncation
    {
        std::ifstream in(path, std::ios::binary);
        std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        std::ofstream out(path + ".t", std::ios::binary);
        out.write(buf.data(), static_cast<std::streamsize>(buf.size() / 2));
    }
    CHECK_THROWS_AS(PrimeTable::load(path + ".t"), cache_error);
    CHECK_THROWS_AS(PrimeTable::load((dir / "missing.bin").string()), cache_error);

    fs::remove_all(dir);
}

TEST_CASE("build is deterministic across thread counts") {
    PrimeTable::BuildOptions one;
    one.threads = 1;
    PrimeTable::BuildOptions four;
    four.threads = 4;
    PrimeTable a = PrimeTable::build(20000, one);
    PrimeTable b = PrimeTable::build(20000, four);
    REQUIRE(a.entries().size() == b.entries().size());
    for (size_t i = 0; i < a.entries().size(); ++i) CHECK(a.entries()[i].p == b.entries()[i].p);
}
