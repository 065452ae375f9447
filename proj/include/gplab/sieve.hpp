#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gplab/gauss.hpp"

namespace gplab {

struct PrimeEntry {
    GaussInt p;
    int64_t norm;
    double arg; // in (-pi, pi]
};

// Sector annulus D(r_min, r_max, theta_min, theta_max): points Re^{i theta}
// with r_min < R <= r_max and theta_min < theta <= theta_max, the argument
// reduced mod 2pi into the sector window.
struct SectorAnnulus {
    double r_min = 0.0;
    double r_max = 0.0;
    double theta_min = 0.0;
    double theta_max = 0.0;

    static SectorAnnulus full_circle(double r_max, double r_min = 0.0);
    void validate() const; // throws std::invalid_argument
    double angle_width() const { return theta_max - theta_min; }
};

// angle membership theta_min < arg(g) <= theta_max after mod-2pi reduction;
// decisions within 1e-12 of a boundary are re-made in extended precision
bool angle_in_window(GaussInt g, double theta_min, double theta_max);
// norm membership x1 < n <= x2 with long double thresholds
bool norm_in_window(int64_t n, double x1, double x2);

struct PrimeTableBuildOptions {
    int threads = 0;                        // 0 = hardware
    uint64_t mem_budget_bytes = 2ull << 30; // sieve + entries estimate
};

// All Gaussian primes with 0 < norm <= max_norm: every unit associate, both
// conjugates of split primes. Entries sorted by (norm, arg).
class PrimeTable {
public:
    using BuildOptions = PrimeTableBuildOptions;

    static PrimeTable build(int64_t max_norm, const BuildOptions& opts = BuildOptions{});
    static PrimeTable load(const std::string& path);
    void save(const std::string& path) const;

    int64_t max_norm() const { return max_norm_; }
    std::span<const PrimeEntry> entries() const { return entries_; }
    // first index with norm > x (entries are norm-sorted)
    size_t upper_bound_norm(double x) const;

    void require_radius(double r) const;  // throws coverage_error if r^2 > max_norm
    void require_norm(double n) const;

private:
    int64_t max_norm_ = 0;
    std::vector<PrimeEntry> entries_;
};

struct SectorCount {
    int64_t observed = 0;
    double kubilius_main = 0.0; // (2/pi) (dtheta) (r2^2 - r1^2) / log(r2^2)
};

SectorCount count_primes_sector(const PrimeTable& table, const SectorAnnulus& region);

// Primes g with |g - center| <= radius, found by scanning the candidate
// lattice points around the center, not the table. Sorted by (norm, arg).
std::vector<GaussInt> primes_in_disc(const PrimeTable& table, const ComplexHP& center,
                                     double radius);

} // namespace gplab
