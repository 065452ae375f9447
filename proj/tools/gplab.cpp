// gplab: experiment front end for the Gaussian-prime approximation laboratory.
//
// Exit codes: 0 success, 1 compute-time error, 2 unknown command or bad
// flags, 3 missing required field, 4 precondition violation.

#include <cctype>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gplab/dioph.hpp"
#include "gplab/errors.hpp"
#include "gplab/expsum.hpp"
#include "gplab/hurwitz.hpp"
#include "gplab/metrical.hpp"
#include "gplab/rng.hpp"
#include "gplab/sieve.hpp"
#include "gplab/version.hpp"

using namespace gplab;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_i(int64_t v) { return std::to_string(v); }

// ---- complex constant parsing ------------------------------------------------

RealHP sqrt_int_hp(long n, mpfr_prec_t prec) {
    return RealHP::sqrt(RealHP::of_int(n, prec));
}

std::optional<ComplexHP> named_constant(const std::string& name, mpfr_prec_t prec) {
    if (name == "sqrt2i") return ComplexHP{RealHP::of_int(0, prec), sqrt_int_hp(2, prec)};
    if (name == "sqrt3i") return ComplexHP{RealHP::of_int(0, prec), sqrt_int_hp(3, prec)};
    if (name == "sqrt5i") return ComplexHP{RealHP::of_int(0, prec), sqrt_int_hp(5, prec)};
    if (name == "sqrt2") return ComplexHP{sqrt_int_hp(2, prec), RealHP::of_int(0, prec)};
    if (name == "algpair") // (sqrt3 - 1) + (sqrt5 - 2) i
        return ComplexHP{sqrt_int_hp(3, prec).add_int(-1), sqrt_int_hp(5, prec).add_int(-2)};
    if (name == "recip-pi-e") { // 1/pi + i/e
        RealHP one = RealHP::of_int(1, prec);
        RealHP e(prec);
        mpfr_set_ui(e.raw(), 1, MPFR_RNDN);
        mpfr_exp(e.raw(), e.raw(), MPFR_RNDN);
        return ComplexHP{one / RealHP::pi(prec), one / e};
    }
    return std::nullopt;
}

// accepts "a+bi", "a-bi", "a", "bi", "i", "-i" or a preset name
ComplexHP parse_complex(const std::string& text, mpfr_prec_t prec) {
    if (auto named = named_constant(text, prec)) return *named;
    std::string s = text;
    s.erase(std::remove_if(s.begin(), s.end(), [](char ch) { return ch == ' '; }), s.end());
    if (s.empty()) throw std::invalid_argument("empty complex constant");

    if (s.back() == 'i' || s.back() == 'I') {
        s.pop_back();
        // split at the last +/- that is not an exponent sign and not leading
        size_t split = std::string::npos;
        for (size_t k = s.size(); k-- > 1;) {
            if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
                split = k;
                break;
            }
        }
        std::string re_str, im_str;
        if (split == std::string::npos) {
            re_str = "0";
            im_str = s.empty() ? "1" : s;
        } else {
            re_str = s.substr(0, split);
            im_str = s.substr(split);
        }
        if (im_str == "+" || im_str.empty()) im_str = "1";
        if (im_str == "-") im_str = "-1";
        return {RealHP::parse(re_str, prec), RealHP::parse(im_str, prec)};
    }
    return {RealHP::parse(s, prec), RealHP::of_int(0, prec)};
}

GaussInt parse_gauss(const std::string& text) {
    ComplexHP z = parse_complex(text, 64);
    GaussInt g = nearest_gauss(z);
    ComplexHP back = to_complex_hp(g, 64);
    if (!(z - back).is_zero())
        throw std::invalid_argument("not a Gaussian integer: '" + text + "'");
    return g;
}

// ---- report writer ------------------------------------------------------------

struct Report {
    std::string command;
    std::vector<std::pair<std::string, std::string>> params;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void echo(const std::string& key, const std::string& value) { params.emplace_back(key, value); }
    void echo(const std::string& key, double value) { params.emplace_back(key, fmt_g(value)); }
    void echo(const std::string& key, int64_t value) { params.emplace_back(key, fmt_i(value)); }
    void echo(const std::string& key, uint64_t value) { params.emplace_back(key, std::to_string(value)); }

    void write_csv(std::ostream& out, double wall_ms) const {
        out << "# gplab v" << kVersion << "\n";
        out << "# command: " << command << "\n";
        for (const auto& [k, v] : params) out << "# " << k << " = " << v << "\n";
        out << "# wall_ms: " << fmt_g(wall_ms) << "\n";
        for (size_t i = 0; i < columns.size(); ++i)
            out << columns[i] << (i + 1 < columns.size() ? "," : "");
        out << "\n";
        for (const auto& row : rows) {
            for (size_t i = 0; i < row.size(); ++i)
                out << row[i] << (i + 1 < row.size() ? "," : "");
            out << "\n";
        }
    }

    void write_json(std::ostream& out) const {
        json j;
        j["version"] = kVersion;
        j["command"] = command;
        json& p = j["params"] = json::object();
        for (const auto& [k, v] : params) p[k] = v;
        json& rws = j["results"] = json::array();
        for (const auto& row : rows) {
            json r = json::object();
            for (size_t i = 0; i < columns.size() && i < row.size(); ++i) r[columns[i]] = row[i];
            rws.push_back(std::move(r));
        }
        out << j.dump(2) << "\n";
    }
};

struct CommonOpts {
    std::string output;
    std::string format = "csv";
    uint64_t seed = 0;
    int threads = 0;
    long precision = 256;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("-o,--output", opts.output, "write the report here (default: stdout)");
    cmd->add_option("--format", opts.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--seed", opts.seed, "64-bit seed (default 0)");
    cmd->add_option("--threads", opts.threads, "worker threads (default: hardware)");
    cmd->add_option("--precision", opts.precision, "working precision in bits (default 256)");
}

void emit(const Report& report, const CommonOpts& opts, double wall_ms) {
    std::ostringstream body;
    if (opts.format == "json")
        report.write_json(body);
    else
        report.write_csv(body, wall_ms);
    if (opts.output.empty()) {
        std::cout << body.str();
    } else {
        std::ofstream out(opts.output, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open output file: " + opts.output);
        out << body.str();
    }
    if (opts.format == "json") std::fprintf(stderr, "wall_ms: %.3f\n", wall_ms);
}

// ---- prime table acquisition ---------------------------------------------------

struct TableOpts {
    std::string cache;
    int64_t max_norm = 0;
    int64_t mem_budget_mb = 2048;
};

void add_table_opts(CLI::App* cmd, TableOpts& opts) {
    cmd->add_option("--cache", opts.cache, "prime table cache file");
    cmd->add_option("--max-norm", opts.max_norm, "prime table norm bound");
    cmd->add_option("--mem-budget-mb", opts.mem_budget_mb, "table memory budget in MiB");
}

std::string resolve_cache_path(const std::string& path) {
    if (path.empty() || path.find('/') != std::string::npos) return path;
    const char* dir = std::getenv("GPLAB_CACHE_DIR");
    if (dir && *dir) return std::string(dir) + "/" + path;
    return path;
}

// read-only acquisition: loads the cache when given, else builds in memory
PrimeTable acquire_table(const TableOpts& opts, int threads) {
    if (!opts.cache.empty()) {
        PrimeTable table = PrimeTable::load(resolve_cache_path(opts.cache));
        if (opts.max_norm > 0 && table.max_norm() < opts.max_norm)
            throw coverage_error("cache covers norm " + std::to_string(table.max_norm()) +
                                 " but the command needs " + std::to_string(opts.max_norm));
        return table;
    }
    if (opts.max_norm < 2)
        throw std::invalid_argument("need --cache or --max-norm for this command");
    PrimeTable::BuildOptions build_opts;
    build_opts.threads = threads;
    build_opts.mem_budget_bytes = static_cast<uint64_t>(opts.mem_budget_mb) << 20;
    return PrimeTable::build(opts.max_norm, build_opts);
}

// ---- config file injection -------------------------------------------------------

std::string json_scalar_to_arg(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
    if (v.is_number_float()) return fmt_g(v.get<double>());
    throw std::invalid_argument("config value is not a scalar");
}

std::string complex_array_to_arg(const json& arr) {
    std::string re = json_scalar_to_arg(arr.at(0));
    std::string im = json_scalar_to_arg(arr.at(1));
    if (!im.empty() && im[0] != '-' && im[0] != '+') im = "+" + im;
    return re + im + "i";
}

// expands {"c": [...], "sector": {...}, key: scalar} into --key value pairs,
// keeping any flag the user passed explicitly
std::vector<std::string> inject_config(const std::vector<std::string>& args) {
    auto it = std::find(args.begin(), args.end(), "--config");
    if (it == args.end() || it + 1 == args.end()) return args;
    std::ifstream in(*(it + 1));
    if (!in) throw std::invalid_argument("cannot open config file: " + *(it + 1));
    json cfg = json::parse(in);

    std::vector<std::string> out = args;
    auto cfg_it = std::find(out.begin(), out.end(), "--config");
    out.erase(cfg_it, cfg_it + 2);

    auto has_flag = [&](const std::string& flag) {
        return std::find(out.begin(), out.end(), flag) != out.end();
    };
    auto push = [&](std::string key, const std::string& value) {
        for (char& ch : key) {
            if (ch == '_') ch = '-';
            ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        }
        std::string flag = "--" + key;
        if (!has_flag(flag)) {
            out.push_back(flag);
            out.push_back(value);
        }
    };

    for (const auto& [key, value] : cfg.items()) {
        if (key == "sector" && value.is_object()) {
            for (const auto& [sk, sv] : value.items()) push(sk, json_scalar_to_arg(sv));
        } else if (value.is_array() && value.size() == 2) {
            push(key, complex_array_to_arg(value));
        } else {
            push(key, json_scalar_to_arg(value));
        }
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian-prime Diophantine approximation laboratory"};
    app.require_subcommand(1);

    // ---- sieve ----
    auto* sieve_cmd = app.add_subcommand("sieve", "build a Gaussian prime table");
    CommonOpts sieve_common;
    TableOpts sieve_table;
    add_common(sieve_cmd, sieve_common);
    sieve_cmd->add_option("--max-norm", sieve_table.max_norm, "norm bound")->required();
    sieve_cmd->add_option("--cache", sieve_table.cache, "write the table cache here");
    sieve_cmd->add_option("--mem-budget-mb", sieve_table.mem_budget_mb, "memory budget in MiB");

    // ---- count ----
    auto* count_cmd = app.add_subcommand("count", "sector/annulus prime counts");
    CommonOpts count_common;
    TableOpts count_table;
    double count_rmin = 0.0, count_rmax = 0.0;
    double count_tmin = -kPi, count_tmax = kPi;
    double count_x1 = 0.0, count_x2 = 0.0;
    std::string count_c;
    double count_delta = 0.5;
    std::string count_metric = "sup";
    add_common(count_cmd, count_common);
    add_table_opts(count_cmd, count_table);
    count_cmd->add_option("--r-min", count_rmin, "inner radius (default 0)");
    count_cmd->add_option("--r-max", count_rmax, "outer radius");
    count_cmd->add_option("--theta-min", count_tmin, "sector start (default -pi)");
    count_cmd->add_option("--theta-max", count_tmax, "sector end (default pi)");
    count_cmd->add_option("--x1", count_x1, "norm window start (overrides radii)");
    count_cmd->add_option("--x2", count_x2, "norm window end (overrides radii)");
    count_cmd->add_option("--c", count_c, "constraint constant; enables the constrained count");
    count_cmd->add_option("--delta", count_delta, "distance threshold (default 1/2)");
    count_cmd->add_option("--metric", count_metric, "sup or euclid")
        ->check(CLI::IsMember({"sup", "euclid"}));

    // ---- equid ----
    auto* equid_cmd = app.add_subcommand("equid", "equidistribution main-term report");
    CommonOpts equid_common;
    TableOpts equid_table;
    std::string equid_c;
    double equid_delta = 0.0, equid_x = 1.0, equid_eps = 0.01;
    int64_t equid_bound = 0;
    int64_t equid_k = -1;
    double equid_tmin = -kPi, equid_tmax = kPi;
    add_common(equid_cmd, equid_common);
    add_table_opts(equid_cmd, equid_table);
    equid_cmd->add_option("--c", equid_c, "the constant c")->required();
    equid_cmd->add_option("--delta", equid_delta, "threshold in (0, 1/2]")->required();
    equid_cmd->add_option("--x", equid_x, "window start (norm units, default 1)");
    equid_cmd->add_option("--norm-bound", equid_bound, "window end (norm units)");
    equid_cmd->add_option("--k", equid_k, "use schedule scale N_k instead of --norm-bound");
    equid_cmd->add_option("--epsilon", equid_eps, "admissibility epsilon (default 0.01)");
    equid_cmd->add_option("--theta-min", equid_tmin, "sector start");
    equid_cmd->add_option("--theta-max", equid_tmax, "sector end");

    // ---- spacing ----
    auto* spacing_cmd = app.add_subcommand("spacing", "Hurwitz spacing audits");
    CommonOpts spacing_common;
    std::string spacing_c, spacing_q, spacing_a;
    double spacing_qmax = 100.0;
    add_common(spacing_cmd, spacing_common);
    spacing_cmd->add_option("--c", spacing_c, "the constant c")->required();
    spacing_cmd->add_option("--q", spacing_q, "explicit denominator a+bi");
    spacing_cmd->add_option("--a", spacing_a, "explicit numerator a+bi");
    spacing_cmd->add_option("--q-max", spacing_qmax, "audit all convergents with |q| <= bound");

    // ---- coro-search ----
    auto* coro_cmd = app.add_subcommand("coro-search", "primes with ||pc|| <= |p|^e");
    CommonOpts coro_common;
    TableOpts coro_table;
    std::string coro_c;
    double coro_e = -1.0 / 12.0;
    int64_t coro_max_rows = 100000;
    add_common(coro_cmd, coro_common);
    add_table_opts(coro_cmd, coro_table);
    coro_cmd->add_option("--c", coro_c, "the constant c")->required();
    coro_cmd->add_option("--e", coro_e, "threshold exponent (default -1/12)");
    coro_cmd->add_option("--max-rows", coro_max_rows, "cap on emitted rows");

    // ---- vaaler ----
    auto* vaaler_cmd = app.add_subcommand("vaaler", "Vaaler approximation values");
    CommonOpts vaaler_common;
    int64_t vaaler_j = 1, vaaler_grid = 0;
    double vaaler_x = 0.0;
    add_common(vaaler_cmd, vaaler_common);
    vaaler_cmd->add_option("--j", vaaler_j, "trigonometric degree J")->required();
    vaaler_cmd->add_option("--x", vaaler_x, "single evaluation point");
    vaaler_cmd->add_option("--grid", vaaler_grid, "evaluate on N grid points of [0, 1)");

    // ---- linear ----
    auto* linear_cmd = app.add_subcommand("linear", "linear exponential sums");
    CommonOpts linear_common;
    std::string linear_kappa;
    double linear_ylo = 0.0, linear_yhi = 0.0;
    double linear_f1 = -kPi, linear_f2 = kPi;
    int64_t linear_trials = 0;
    double linear_ymax = 10000.0;
    add_common(linear_cmd, linear_common);
    linear_cmd->add_option("--kappa", linear_kappa, "frequency constant");
    linear_cmd->add_option("--y-lo", linear_ylo, "norm window start");
    linear_cmd->add_option("--y-hi", linear_yhi, "norm window end");
    linear_cmd->add_option("--f1", linear_f1, "sector start");
    linear_cmd->add_option("--f2", linear_f2, "sector end");
    linear_cmd->add_option("--trials", linear_trials, "run a seeded randomized battery");
    linear_cmd->add_option("--y-max", linear_ymax, "battery norm cap (default 1e4)");

    // ---- gc ----
    auto* gc_cmd = app.add_subcommand("gc", "G_c(y, z) profile vs bounds");
    CommonOpts gc_common;
    std::string gc_c;
    double gc_qmax = 50.0;
    std::vector<double> gc_y, gc_z_factors;
    add_common(gc_cmd, gc_common);
    gc_cmd->add_option("--c", gc_c, "the constant c")->required();
    gc_cmd->add_option("--q-max", gc_qmax, "audit convergents with |q| <= bound");
    gc_cmd->add_option("--y", gc_y, "y grid values (default 4 100 10000)");
    gc_cmd->add_option("--z-factor", gc_z_factors,
                       "z as multiples of |q|^2 (default 0.125 0.5 1 4)");

    // ---- e3 ----
    auto* e3_cmd = app.add_subcommand("e3", "exact E3(H1, H2) frequency-box sum");
    CommonOpts e3_common;
    std::string e3_c;
    TypeSumParams e3_params;
    add_common(e3_cmd, e3_common);
    e3_cmd->add_option("--c", e3_c, "the constant c")->required();
    e3_cmd->add_option("--x1", e3_params.x1, "product norm window start")->required();
    e3_cmd->add_option("--x2", e3_params.x2, "product norm window end")->required();
    e3_cmd->add_option("--m-max", e3_params.m_max, "type-I inner range M")->required();
    e3_cmd->add_option("--h1", e3_params.h1, "frequency box |Re j| <= H1");
    e3_cmd->add_option("--h2", e3_params.h2, "frequency box |Im j| <= H2");
    e3_cmd->add_option("--theta-min", e3_params.sector.theta_min, "sector start");
    e3_cmd->add_option("--theta-max", e3_params.sector.theta_max, "sector end");

    // ---- f3 ----
    auto* f3_cmd = app.add_subcommand("f3", "exact F3(H1, H2) bilinear sum");
    CommonOpts f3_common;
    std::string f3_c;
    TypeSumParams f3_params;
    std::string f3_coeff = "unit";
    add_common(f3_cmd, f3_common);
    f3_cmd->add_option("--c", f3_c, "the constant c")->required();
    f3_cmd->add_option("--x1", f3_params.x1, "product norm window start")->required();
    f3_cmd->add_option("--x2", f3_params.x2, "product norm window end")->required();
    f3_cmd->add_option("--alpha", f3_params.alpha, "m-window exponent alpha (default 1/3)");
    f3_cmd->add_option("--beta", f3_params.beta, "m-window exponent beta (default 1/2)");
    f3_cmd->add_option("--delta", f3_params.delta, "A-membership threshold")->required();
    f3_cmd->add_option("--h1", f3_params.h1, "frequency box |Re j| <= H1");
    f3_cmd->add_option("--h2", f3_params.h2, "frequency box |Im j| <= H2");
    f3_cmd->add_option("--theta-min", f3_params.sector.theta_min, "sector start");
    f3_cmd->add_option("--theta-max", f3_params.sector.theta_max, "sector end");
    f3_cmd->add_option("--coeff", f3_coeff, "coefficient sequences: unit or pm1")
        ->check(CLI::IsMember({"unit", "pm1"}));

    // ---- report ----
    auto* report_cmd = app.add_subcommand("report", "type-I/II relation report at x = |q|^12");
    CommonOpts report_common;
    std::string report_c, report_q, report_a;
    int64_t report_k = -1;
    double report_delta = 0.0, report_eps = 0.01, report_x1 = -1.0;
    double report_tmin = -kPi, report_tmax = kPi;
    add_common(report_cmd, report_common);
    report_cmd->add_option("--c", report_c, "the constant c")->required();
    report_cmd->add_option("--delta", report_delta, "threshold in (0, 1/2]")->required();
    report_cmd->add_option("--q", report_q, "explicit convergent denominator");
    report_cmd->add_option("--a", report_a, "explicit convergent numerator");
    report_cmd->add_option("--k", report_k, "use the k-th Hurwitz convergent");
    report_cmd->add_option("--epsilon", report_eps, "error-budget epsilon (default 0.01)");
    report_cmd->add_option("--x1", report_x1, "window start (default x2/2)");
    report_cmd->add_option("--theta-min", report_tmin, "sector start");
    report_cmd->add_option("--theta-max", report_tmax, "sector end");

    // ---- fn-count ----
    auto* fn_cmd = app.add_subcommand("fn-count", "exact F_N(alpha) solution count");
    CommonOpts fn_common;
    TableOpts fn_table;
    std::string fn_c, fn_alpha;
    MetricalParams fn_params;
    fn_params.a_radius = 0.5;
    fn_params.b_radius = 2.0;
    add_common(fn_cmd, fn_common);
    add_table_opts(fn_cmd, fn_table);
    fn_cmd->add_option("--c", fn_c, "the line constant c")->required();
    fn_cmd->add_option("--alpha", fn_alpha, "the sample point alpha")->required();
    fn_cmd->add_option("--epsilon", fn_params.epsilon, "threshold exponent knob");
    fn_cmd->add_option("--n", fn_params.n_bound, "radius bound N")->required();
    fn_cmd->add_option("--a", fn_params.a_radius, "annulus A (default 0.5)");
    fn_cmd->add_option("--b", fn_params.b_radius, "annulus B (default 2)");
    fn_cmd->add_option("--c-const", fn_params.c_const, "G_N constant C (default 1)");

    // ---- theo1-mc ----
    auto* mc_cmd = app.add_subcommand("theo1-mc", "Monte-Carlo check of the integral inequality");
    CommonOpts mc_common;
    TableOpts mc_table;
    std::string mc_c;
    MetricalParams mc_params;
    SectorAnnulus mc_sector{0.5, 2.0, -kPi, kPi};
    int64_t mc_samples = 0;
    add_common(mc_cmd, mc_common);
    add_table_opts(mc_cmd, mc_table);
    mc_cmd->add_option("--c", mc_c, "the line constant c")->required();
    mc_cmd->add_option("--epsilon", mc_params.epsilon, "threshold exponent knob");
    mc_cmd->add_option("--n", mc_params.n_bound, "radius bound N")->required();
    mc_cmd->add_option("--a", mc_params.a_radius, "annulus A")->required();
    mc_cmd->add_option("--b", mc_params.b_radius, "annulus B")->required();
    mc_cmd->add_option("--c-const", mc_params.c_const, "G_N constant C (default 1)");
    mc_cmd->add_option("--r-min", mc_sector.r_min, "sector inner radius");
    mc_cmd->add_option("--r-max", mc_sector.r_max, "sector outer radius");
    mc_cmd->add_option("--theta-min", mc_sector.theta_min, "sector start");
    mc_cmd->add_option("--theta-max", mc_sector.theta_max, "sector end");
    mc_cmd->add_option("--samples", mc_samples, "Monte-Carlo sample count")->required();

    // ---- sieve-error ----
    auto* se_cmd = app.add_subcommand("sieve-error", "T_P / E_P sieve-error counts");
    CommonOpts se_common;
    std::string se_c, se_alpha, se_d1 = "1", se_d2 = "1";
    SieveErrorParams se_params;
    double se_mu = -1.0;
    bool se_two_prime = false;
    add_common(se_cmd, se_common);
    se_cmd->add_option("--c", se_c, "the line constant c")->required();
    se_cmd->add_option("--alpha", se_alpha, "the sample point alpha")->required();
    se_cmd->add_option("--p", se_params.p_scale, "scale P")->required();
    se_cmd->add_option("--d1", se_d1, "modulus d1 (default 1)");
    se_cmd->add_option("--d2", se_d2, "modulus d2 (default 1)");
    se_cmd->add_option("--epsilon", se_params.epsilon, "exponent knob (default 0.01)");
    se_cmd->add_option("--mu", se_mu, "window width; overrides (P/2)^(eps-1/12)");
    se_cmd->add_flag("--two-prime", se_two_prime, "also count the two-prime products");

    // ---- parse -------------------------------------------------------------

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        args = inject_config(args);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    std::vector<const char*> cargs;
    cargs.push_back(argv[0]);
    for (const auto& s : args) cargs.push_back(s.c_str());

    try {
        app.parse(static_cast<int>(cargs.size()), const_cast<char**>(cargs.data()));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::RequiredError& e) {
        app.exit(e);
        // no recognized subcommand at all -> unknown command
        return app.get_subcommands().empty() ? 2 : 3;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    Report report;
    CommonOpts* common = nullptr;
    auto started = std::chrono::steady_clock::now();

    // phase 1: validation (exit 4), phase 2: compute (exit 1)
    bool computing = false;
    try {
        if (sieve_cmd->parsed()) {
            common = &sieve_common;
            report.command = "sieve";
            if (sieve_table.max_norm < 2)
                throw std::invalid_argument("sieve: --max-norm must be >= 2");
            report.echo("max_norm", sieve_table.max_norm);
            report.echo("cache", sieve_table.cache.empty() ? "-" : sieve_table.cache);
            report.echo("seed", sieve_common.seed);
            report.echo("threads", static_cast<int64_t>(sieve_common.threads));
            computing = true;

            PrimeTable::BuildOptions build_opts;
            build_opts.threads = sieve_common.threads;
            build_opts.mem_budget_bytes = static_cast<uint64_t>(sieve_table.mem_budget_mb) << 20;
            PrimeTable table = PrimeTable::build(sieve_table.max_norm, build_opts);
            if (!sieve_table.cache.empty()) table.save(resolve_cache_path(sieve_table.cache));
            report.columns = {"max_norm", "entries"};
            report.rows.push_back(
                {fmt_i(table.max_norm()), fmt_i(static_cast<int64_t>(table.entries().size()))});
        } else if (count_cmd->parsed()) {
            common = &count_common;
            report.command = "count";
            bool norm_mode = count_cmd->count("--x2") > 0;
            bool constrained = count_cmd->count("--c") > 0;
            if (!norm_mode && count_rmax <= 0.0)
                throw std::invalid_argument("count: need --r-max or --x1/--x2");
            ConstraintQuery query;
            query.region = {count_rmin, norm_mode ? std::sqrt(count_x2) : count_rmax, count_tmin,
                            count_tmax};
            if (norm_mode) query.norm_window = {{count_x1 < 1.0 ? 1.0 : count_x1, count_x2}};
            query.delta = count_delta;
            query.metric = count_metric == "sup" ? DistMetric::kSup : DistMetric::kEuclid;
            ComplexHP c;
            if (constrained) c = parse_complex(count_c, count_common.precision);
            query.validate();

            report.echo("r_min", count_rmin);
            report.echo("r_max", query.region.r_max);
            report.echo("theta_min", count_tmin);
            report.echo("theta_max", count_tmax);
            if (norm_mode) {
                report.echo("x1", query.norm_window->first);
                report.echo("x2", query.norm_window->second);
            }
            if (constrained) {
                report.echo("c", count_c);
                report.echo("delta", count_delta);
                report.echo("metric", count_metric);
            }
            report.echo("seed", count_common.seed);
            report.echo("threads", static_cast<int64_t>(count_common.threads));
            computing = true;

            PrimeTable table = acquire_table(count_table, count_common.threads);
            int64_t plain = count_primes_plain(table, query);
            SectorCount sector{0, 0.0};
            if (!norm_mode) {
                sector = count_primes_sector(table, query.region);
            } else {
                double width = query.region.angle_width();
                sector.observed = plain;
                sector.kubilius_main = 2.0 / kPi * width *
                                       (query.norm_window->second - query.norm_window->first) /
                                       std::log(query.norm_window->second);
            }
            report.columns = {"observed", "kubilius_main", "ratio"};
            std::vector<std::string> row{
                fmt_i(sector.observed), fmt_g(sector.kubilius_main),
                fmt_g(static_cast<double>(sector.observed) / sector.kubilius_main)};
            if (constrained) {
                int64_t constrained_count =
                    count_constrained_primes(table, c, query, count_common.threads);
                report.columns.push_back("constrained");
                report.columns.push_back("predicted");
                row.push_back(fmt_i(constrained_count));
                row.push_back(fmt_g(4.0 * count_delta * count_delta * static_cast<double>(plain)));
            }
            report.rows.push_back(std::move(row));
        } else if (equid_cmd->parsed()) {
            common = &equid_common;
            report.command = "equid";
            if (!(equid_delta > 0.0) || equid_delta > 0.5)
                throw std::invalid_argument("equid: --delta must lie in (0, 1/2]");
            if (equid_k < 0 && equid_bound <= 0)
                throw std::invalid_argument("equid: need --norm-bound or --k");
            if (equid_k < 0 && equid_x > static_cast<double>(equid_bound))
                throw std::invalid_argument("equid: need x <= norm bound");
            ComplexHP c = parse_complex(equid_c, equid_common.precision);
            SectorAnnulus region{0.0, 1.0, equid_tmin, equid_tmax};
            report.echo("c", equid_c);
            report.echo("delta", equid_delta);
            report.echo("x", equid_x);
            report.echo("epsilon", equid_eps);
            report.echo("theta_min", equid_tmin);
            report.echo("theta_max", equid_tmax);
            report.echo("seed", equid_common.seed);
            report.echo("threads", static_cast<int64_t>(equid_common.threads));
            computing = true;

            EquidReport rep;
            if (equid_k >= 0) {
                ScaleSchedule schedule = ScaleSchedule::build(
                    c, equid_table.max_norm > 0 ? equid_table.max_norm : int64_t{1} << 62);
                if (static_cast<size_t>(equid_k) >= schedule.scales.size())
                    throw std::runtime_error("equid: schedule has only " +
                                             std::to_string(schedule.scales.size()) + " scales");
                TableOpts t = equid_table;
                if (t.max_norm < schedule.scales[static_cast<size_t>(equid_k)].n_k)
                    t.max_norm = schedule.scales[static_cast<size_t>(equid_k)].n_k;
                PrimeTable table = acquire_table(t, equid_common.threads);
                rep = equid_report(table, schedule, static_cast<size_t>(equid_k), equid_x,
                                   equid_delta, region, equid_eps, equid_common.threads);
            } else {
                TableOpts t = equid_table;
                if (t.max_norm < equid_bound) t.max_norm = equid_bound;
                PrimeTable table = acquire_table(t, equid_common.threads);
                bool rational = hurwitz_expansion(c, 24, 1e6).terminated;
                rep = equid_report_window(table, c, equid_x, equid_bound, equid_delta, region,
                                          equid_eps, equid_common.threads, rational);
            }
            report.columns = {"x",        "n_k",      "delta",     "theta_min",
                              "theta_max", "epsilon",  "observed",  "baseline",
                              "predicted", "ratio",    "admissible", "rational_constant"};
            std::stringstream ss(rep.csv_row());
            std::vector<std::string> row;
            std::string cell;
            while (std::getline(ss, cell, ',')) row.push_back(cell);
            report.rows.push_back(std::move(row));
        } else if (spacing_cmd->parsed()) {
            common = &spacing_common;
            report.command = "spacing";
            ComplexHP c = parse_complex(spacing_c, spacing_common.precision);
            bool explicit_pair = spacing_cmd->count("--q") > 0;
            if (explicit_pair && spacing_cmd->count("--a") == 0)
                throw std::invalid_argument("spacing: --q needs --a");
            if (explicit_pair)
                require_convergent(c, parse_gauss(spacing_a), parse_gauss(spacing_q));
            report.echo("c", spacing_c);
            report.echo("q_max", spacing_qmax);
            report.echo("seed", spacing_common.seed);
            computing = true;

            report.columns = {"q_re",          "q_im",        "q_abs",
                              "min_pair_dist", "dist2_bound", "pair_bound_ok",
                              "zero_window_delta", "zero_window_ok"};
            auto emit_row = [&](GaussInt q, GaussInt a) {
                SpacingAudit audit = spacing_audit(c, q, a);
                report.rows.push_back({fmt_i(q.re), fmt_i(q.im), fmt_g(q.abs()),
                                       fmt_g(audit.min_pair_dist), fmt_g(audit.dist2_bound),
                                       audit.pair_bound_ok ? "1" : "0",
                                       fmt_g(audit.zero_window_delta),
                                       audit.zero_window_ok ? "1" : "0"});
            };
            if (explicit_pair) {
                emit_row(parse_gauss(spacing_q), parse_gauss(spacing_a));
            } else {
                HurwitzExpansion exp =
                    hurwitz_expansion(c, 64, spacing_qmax * spacing_qmax + 1.0);
                for (const auto& [p, q] : exp.convergents)
                    if (q.abs() <= spacing_qmax) emit_row(q, p);
            }
        } else if (coro_cmd->parsed()) {
            common = &coro_common;
            report.command = "coro-search";
            ComplexHP c = parse_complex(coro_c, coro_common.precision);
            report.echo("c", coro_c);
            report.echo("e", coro_e);
            report.echo("seed", coro_common.seed);
            report.echo("threads", static_cast<int64_t>(coro_common.threads));
            computing = true;

            PrimeTable table = acquire_table(coro_table, coro_common.threads);
            bool rational = hurwitz_expansion(c, 24, 1e6).terminated;
            auto found = find_approx_primes(table, c, coro_e, coro_common.threads);
            report.echo("found", static_cast<int64_t>(found.size()));
            report.echo("rational_constant", rational ? "1" : "0");
            report.columns = {"norm", "re", "im", "dist"};
            int64_t emitted = 0;
            for (const auto& ap : found) {
                if (emitted++ >= coro_max_rows) break;
                report.rows.push_back(
                    {fmt_i(ap.p.norm64()), fmt_i(ap.p.re), fmt_i(ap.p.im), fmt_g(ap.dist)});
            }
        } else if (vaaler_cmd->parsed()) {
            common = &vaaler_common;
            report.command = "vaaler";
            VaalerParams vp;
            vp.j = vaaler_j;
            vp.validate();
            report.echo("j", vaaler_j);
            report.echo("grid", vaaler_grid);
            report.echo("seed", vaaler_common.seed);
            computing = true;

            report.columns = {"x", "psi", "psi_star", "sigma", "envelope_ok"};
            auto emit_row = [&](double x) {
                VaalerEval ev = vaaler_eval(vp, x);
                bool ok = ev.sigma >= -1e-12 && std::fabs(ev.psi_star - ev.psi) <= ev.sigma + 1e-12;
                report.rows.push_back({fmt_g(x), fmt_g(ev.psi), fmt_g(ev.psi_star),
                                       fmt_g(ev.sigma), ok ? "1" : "0"});
            };
            if (vaaler_grid > 0) {
                for (int64_t i = 0; i < vaaler_grid; ++i)
                    emit_row(static_cast<double>(i) / static_cast<double>(vaaler_grid));
            } else {
                emit_row(vaaler_x);
            }
        } else if (linear_cmd->parsed()) {
            common = &linear_common;
            report.command = "linear";
            if (linear_trials <= 0 && linear_cmd->count("--kappa") == 0)
                throw std::invalid_argument("linear: need --kappa or --trials");
            ComplexHP single_kappa;
            if (linear_trials <= 0) {
                if (!(linear_ylo >= 0.0) || !(linear_ylo < linear_yhi))
                    throw std::invalid_argument("linear: need 0 <= y-lo < y-hi");
                if (!(linear_f1 < linear_f2) || linear_f2 > linear_f1 + 2.0 * kPi * (1.0 + 1e-12))
                    throw std::invalid_argument("linear: need f1 < f2 <= f1 + 2pi");
                single_kappa = parse_complex(linear_kappa, linear_common.precision);
            }
            report.echo("seed", linear_common.seed);
            report.echo("trials", linear_trials);
            computing = true;

            report.columns = {"kappa_re", "kappa_im", "y_lo",  "y_hi",  "f1",    "f2",
                              "exact_re", "exact_im", "exact_abs", "bound", "ratio"};
            auto emit_row = [&](const ComplexHP& kappa, double ylo, double yhi, double f1,
                                double f2) {
                LinearSumResult r = linear_expsum(kappa, ylo, yhi, f1, f2);
                double mag = std::abs(r.exact);
                report.rows.push_back({fmt_g(kappa.re.to_double()), fmt_g(kappa.im.to_double()),
                                       fmt_g(ylo), fmt_g(yhi), fmt_g(f1), fmt_g(f2),
                                       fmt_g(r.exact.real()), fmt_g(r.exact.imag()), fmt_g(mag),
                                       fmt_g(r.bound), fmt_g(r.bound > 0 ? mag / r.bound : 0.0)});
            };
            if (linear_trials > 0) {
                for (int64_t t = 0; t < linear_trials; ++t) {
                    auto u = [&](uint64_t lane) {
                        return u01(counter_rng(linear_common.seed, static_cast<uint64_t>(t), lane));
                    };
                    ComplexHP kappa =
                        ComplexHP::of(4.0 * u(0) - 2.0, 4.0 * u(1) - 2.0, linear_common.precision);
                    double yhi = 16.0 + (linear_ymax - 16.0) * u(2);
                    double ylo = yhi * u(3) * 0.9;
                    double f1 = -kPi + 2.0 * kPi * u(4);
                    double f2 = f1 + 2.0 * kPi * std::max(0.05, u(5));
                    if (f2 > f1 + 2.0 * kPi) f2 = f1 + 2.0 * kPi;
                    emit_row(kappa, ylo, yhi, f1, f2);
                }
            } else {
                emit_row(single_kappa, linear_ylo, linear_yhi, linear_f1, linear_f2);
            }
        } else if (gc_cmd->parsed()) {
            common = &gc_common;
            report.command = "gc";
            ComplexHP c = parse_complex(gc_c, gc_common.precision);
            if (gc_y.empty()) gc_y = {4.0, 100.0, 10000.0};
            if (gc_z_factors.empty()) gc_z_factors = {0.125, 0.5, 1.0, 4.0};
            for (double y : gc_y)
                if (!(y >= 1.0)) throw std::invalid_argument("gc: y values must be >= 1");
            for (double zf : gc_z_factors)
                if (!(zf >= 0.0)) throw std::invalid_argument("gc: z factors must be >= 0");
            report.echo("c", gc_c);
            report.echo("q_max", gc_qmax);
            report.echo("seed", gc_common.seed);
            computing = true;

            HurwitzExpansion exp = hurwitz_expansion(c, 64, gc_qmax * gc_qmax + 1.0);
            report.columns = {"q_re",  "q_im",          "y",
                              "z",     "exact",         "bound_general",
                              "ratio_general", "bound_small_z", "ratio_small_z"};
            for (const auto& [p, q] : exp.convergents) {
                (void)p;
                if (q.abs() > gc_qmax) continue;
                for (double y : gc_y) {
                    for (double zf : gc_z_factors) {
                        double z = zf * static_cast<double>(q.norm64());
                        GcProfile prof = g_c_profile(c, y, z, q);
                        std::vector<std::string> row{
                            fmt_i(q.re), fmt_i(q.im), fmt_g(y), fmt_g(z), fmt_g(prof.exact),
                            fmt_g(prof.bound_general), fmt_g(prof.exact / prof.bound_general)};
                        if (prof.bound_small_z) {
                            row.push_back(fmt_g(*prof.bound_small_z));
                            row.push_back(fmt_g(prof.exact / *prof.bound_small_z));
                        } else {
                            row.push_back("-");
                            row.push_back("-");
                        }
                        report.rows.push_back(std::move(row));
                    }
                }
            }
        } else if (e3_cmd->parsed()) {
            common = &e3_common;
            report.command = "e3";
            ComplexHP c = parse_complex(e3_c, e3_common.precision);
            e3_params.validate();
            report.echo("c", e3_c);
            report.echo("x1", e3_params.x1);
            report.echo("x2", e3_params.x2);
            report.echo("m_max", e3_params.m_max);
            report.echo("h1", e3_params.h1);
            report.echo("h2", e3_params.h2);
            report.echo("seed", e3_common.seed);
            report.echo("threads", static_cast<int64_t>(e3_common.threads));
            computing = true;

            double value = e3_exact(c, e3_params, e3_common.threads);
            report.columns = {"e3"};
            report.rows.push_back({fmt_g(value)});
        } else if (f3_cmd->parsed()) {
            common = &f3_common;
            report.command = "f3";
            ComplexHP c = parse_complex(f3_c, f3_common.precision);
            f3_params.m_max = std::pow(f3_params.x2, f3_params.alpha) + 1.0; // unused by f3
            f3_params.validate();
            report.echo("c", f3_c);
            report.echo("x1", f3_params.x1);
            report.echo("x2", f3_params.x2);
            report.echo("alpha", f3_params.alpha);
            report.echo("beta", f3_params.beta);
            report.echo("delta", f3_params.delta);
            report.echo("h1", f3_params.h1);
            report.echo("h2", f3_params.h2);
            report.echo("coeff", f3_coeff);
            report.echo("seed", f3_common.seed);
            report.echo("threads", static_cast<int64_t>(f3_common.threads));
            computing = true;

            CoeffFn a_fn = f3_coeff == "pm1" ? pm1_coeffs(f3_common.seed) : unit_coeffs();
            CoeffFn b_fn =
                f3_coeff == "pm1" ? pm1_coeffs(f3_common.seed ^ 0x5bf03635ull) : unit_coeffs();
            double value = f3_exact(c, f3_params, a_fn, b_fn, f3_common.threads);
            report.columns = {"f3"};
            report.rows.push_back({fmt_g(value)});
        } else if (report_cmd->parsed()) {
            common = &report_common;
            report.command = "report";
            if (!(report_delta > 0.0) || report_delta > 0.5)
                throw std::invalid_argument("report: --delta must lie in (0, 1/2]");
            if (!(report_eps > 0.0))
                throw std::invalid_argument("report: --epsilon must be > 0");
            ComplexHP c = parse_complex(report_c, report_common.precision);
            GaussInt q, a;
            if (report_cmd->count("--q") > 0) {
                if (report_cmd->count("--a") == 0)
                    throw std::invalid_argument("report: --q needs --a");
                q = parse_gauss(report_q);
                a = parse_gauss(report_a);
            } else {
                HurwitzExpansion exp = hurwitz_expansion(c, 64, 1438.0);
                size_t idx = report_k >= 0 ? static_cast<size_t>(report_k) : 1;
                if (idx >= exp.convergents.size())
                    throw std::invalid_argument("report: expansion has only " +
                                                std::to_string(exp.convergents.size()) +
                                                " convergents");
                a = exp.convergents[idx].first;
                q = exp.convergents[idx].second;
            }
            report.echo("c", report_c);
            report.echo("q", q.str());
            report.echo("delta", report_delta);
            report.echo("epsilon", report_eps);
            report.echo("seed", report_common.seed);
            report.echo("threads", static_cast<int64_t>(report_common.threads));
            computing = true;

            std::optional<double> x1;
            if (report_x1 >= 0.0) x1 = report_x1;
            TypeSumReport rep = type_sum_report(c, q, a, report_delta, report_eps, report_tmin,
                                                report_tmax, x1, report_common.threads);
            std::stringstream hs(TypeSumReport::csv_header());
            std::string cell;
            while (std::getline(hs, cell, ',')) report.columns.push_back(cell);
            std::stringstream ss(rep.csv_row());
            std::vector<std::string> row;
            while (std::getline(ss, cell, ',')) row.push_back(cell);
            report.rows.push_back(std::move(row));
        } else if (fn_cmd->parsed()) {
            common = &fn_common;
            report.command = "fn-count";
            fn_params.c = parse_complex(fn_c, fn_common.precision);
            ComplexHP alpha = parse_complex(fn_alpha, fn_common.precision);
            fn_params.validate();
            report.echo("c", fn_c);
            report.echo("alpha", fn_alpha);
            report.echo("epsilon", fn_params.epsilon);
            report.echo("n", fn_params.n_bound);
            report.echo("seed", fn_common.seed);
            report.echo("threads", static_cast<int64_t>(fn_common.threads));
            computing = true;

            TableOpts t = fn_table;
            int64_t needed = static_cast<int64_t>(fn_params.n_bound * fn_params.n_bound) + 1;
            if (t.cache.empty() && t.max_norm < needed) t.max_norm = needed;
            PrimeTable table = acquire_table(t, fn_common.threads);
            int64_t count = count_F_N(table, fn_params, alpha, fn_common.threads);
            report.columns = {"f_n", "g_n"};
            report.rows.push_back({fmt_i(count), fmt_g(g_n_value(fn_params))});
        } else if (mc_cmd->parsed()) {
            common = &mc_common;
            report.command = "theo1-mc";
            mc_params.c = parse_complex(mc_c, mc_common.precision);
            mc_params.validate();
            if (mc_samples <= 0) throw std::invalid_argument("theo1-mc: --samples must be >= 1");
            mc_sector.validate();
            report.echo("c", mc_c);
            report.echo("epsilon", mc_params.epsilon);
            report.echo("n", mc_params.n_bound);
            report.echo("a", mc_params.a_radius);
            report.echo("b", mc_params.b_radius);
            report.echo("c_const", mc_params.c_const);
            report.echo("r_min", mc_sector.r_min);
            report.echo("r_max", mc_sector.r_max);
            report.echo("theta_min", mc_sector.theta_min);
            report.echo("theta_max", mc_sector.theta_max);
            report.echo("samples", mc_samples);
            report.echo("seed", mc_common.seed);
            report.echo("threads", static_cast<int64_t>(mc_common.threads));
            computing = true;

            TableOpts t = mc_table;
            double max_alpha = mc_sector.r_max * std::max(1.0, mc_params.c.abs_d());
            int64_t needed =
                static_cast<int64_t>(mc_params.n_bound * mc_params.n_bound *
                                     std::max(1.0, max_alpha)) + 1;
            if (t.cache.empty() && t.max_norm < needed) t.max_norm = needed;
            PrimeTable table = acquire_table(t, mc_common.threads);
            MonteCarloResult mc = monte_carlo_theo_i(table, mc_params, mc_sector, mc_samples,
                                                     mc_common.seed, mc_common.threads);
            report.columns = {"integral_estimate", "stderr", "rhs", "samples"};
            report.rows.push_back({fmt_g(mc.integral_estimate), fmt_g(mc.stderr_est),
                                   fmt_g(mc.rhs), fmt_i(mc.samples)});
        } else if (se_cmd->parsed()) {
            common = &se_common;
            report.command = "sieve-error";
            ComplexHP c = parse_complex(se_c, se_common.precision);
            se_params.alpha = parse_complex(se_alpha, se_common.precision);
            se_params.d1 = parse_gauss(se_d1);
            se_params.d2 = parse_gauss(se_d2);
            if (se_mu >= 0.0) se_params.mu = se_mu;
            se_params.validate();
            report.echo("c", se_c);
            report.echo("alpha", se_alpha);
            report.echo("p", se_params.p_scale);
            report.echo("d1", se_params.d1.str());
            report.echo("d2", se_params.d2.str());
            report.echo("epsilon", se_params.epsilon);
            report.echo("mu", se_params.mu_value());
            report.echo("seed", se_common.seed);
            report.echo("threads", static_cast<int64_t>(se_common.threads));
            computing = true;

            TpResult tp = t_p_and_e_p(se_params, c, se_common.threads);
            report.columns = {"t_p", "main", "e_p", "degenerate_alpha"};
            std::vector<std::string> row{fmt_i(tp.t_p), fmt_g(tp.main), fmt_g(tp.e_p),
                                         tp.degenerate_alpha ? "1" : "0"};
            if (se_two_prime) {
                report.columns.push_back("two_prime_count");
                row.push_back(fmt_i(a_p_two_prime_count(se_params, c)));
            }
            report.rows.push_back(std::move(row));
        }
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return computing ? 1 : 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }

    double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
            .count();
    try {
        emit(report, *common, wall_ms);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
