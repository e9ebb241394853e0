// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "commands.hpp"
#include "helpers.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "rmtcorr/io.hpp"
#include "rmtcorr/sectors.hpp"
#include "rmtcorr/simulator.hpp"
#include "rmtcorr/spectrum.hpp"
#include "rmtcorr/transform.hpp"
#include "schema_check.hpp"

using namespace rmtcorr;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

class Checker {
public:
    void require(bool ok, const std::string& what) {
        if (!ok && pass_) {
            pass_ = false;
            failure_ = what;
        }
    }
    Outcome outcome(std::string summary) const {
        return {pass_, pass_ ? std::move(summary) : failure_ + " | " + summary};
    }

private:
    bool pass_ = true;
    std::string failure_;
};

std::string fmt(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string fmt_sci(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

CorrMatrix wrap(const Matrix& values, std::size_t samples = 0) {
    CorrMatrix c;
    for (Eigen::Index i = 0; i < values.rows(); ++i) c.tickers.push_back("S" + std::to_string(i));
    c.values = values;
    c.samples = samples;
    return c;
}

FactorModelConfig paper_config(std::uint64_t seed) {
    FactorModelConfig c;
    c.seed = seed;
    return c;
}

int run_cli(const std::vector<std::string>& args, std::string* out_text = nullptr) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    if (out_text) *out_text = out.str();
    return code;
}

Outcome wishart_bounds_table() {
    struct Row {
        int n;
        int t;
        double q;
        double lo;
        double hi;
    };
    const Row rows[] = {{259, 2632, 10.16, 0.47, 1.73},
                        {201, 2621, 13.04, 0.52, 1.63},
                        {201, 2606, 12.97, 0.52, 1.63}};
    Checker check;
    std::string summary;
    for (const auto& r : rows) {
        std::string text;
        const int code = run_cli({"mp-bounds", std::to_string(r.n), std::to_string(r.t)}, &text);
        check.require(code == 0, "mp-bounds exit code " + std::to_string(code));
        if (code != 0) continue;
        const auto j = json::parse(text);
        const double q = j["Q"].get<double>();
        const double lo = j["lambda_min_ran"].get<double>();
        const double hi = j["lambda_max_ran"].get<double>();
        const std::string tag = std::to_string(r.n) + "/" + std::to_string(r.t);
        check.require(std::abs(q - r.q) <= 0.005, tag + " Q=" + fmt(q));
        check.require(std::abs(lo - r.lo) <= 0.005, tag + " lambda_min=" + fmt(lo));
        check.require(std::abs(hi - r.hi) <= 0.005, tag + " lambda_max=" + fmt(hi));
        summary += tag + ": (" + fmt(q, 2) + ", " + fmt(lo, 2) + ", " + fmt(hi, 2) + ") ";
    }
    return check.outcome(summary);
}

Outcome eigensolver_oracle() {
    Checker check;
    std::mt19937_64 gen(20240601);
    double worst_value = 0.0;
    double worst_rebuild = 0.0;
    double worst_trace = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(trial) % 11;
        const Matrix c = trial % 2 == 0 ? support::random_unit_diagonal(n, gen)
                                        : support::random_correlation(n, n + trial % 7, gen);
        const auto s = eigensolve(wrap(c));
        const auto oracle = support::bisection_eigenvalues(c);
        for (std::size_t k = 0; k < n; ++k) {
            const double err = std::abs(s.eigenvalues(static_cast<Eigen::Index>(k)) - oracle[k]) /
                               std::max(1.0, std::abs(oracle[k]));
            worst_value = std::max(worst_value, err);
        }
        const Matrix rebuilt = s.eigenvectors * s.eigenvalues.asDiagonal() * s.eigenvectors.transpose();
        worst_rebuild = std::max(worst_rebuild, (rebuilt - c).cwiseAbs().maxCoeff());
        worst_trace = std::max(worst_trace, std::abs(s.eigenvalues.sum() - static_cast<double>(n)) /
                                                static_cast<double>(n));
    }
    check.require(worst_value <= 1e-9, "eigenvalue error " + fmt_sci(worst_value));
    check.require(worst_rebuild <= 1e-8, "reconstruction error " + fmt_sci(worst_rebuild));
    check.require(worst_trace <= 1e-8, "trace error " + fmt_sci(worst_trace));
    return check.outcome("200 matrices; max rel eig err " + fmt_sci(worst_value) + ", reconstruction " +
                         fmt_sci(worst_rebuild) + ", trace/N " + fmt_sci(worst_trace));
}

Outcome analytic_spectra() {
    Checker check;
    const std::pair<std::size_t, double> cases[] = {{50, 0.37}, {100, 0.2}, {10, -0.05}};
    double worst = 0.0;
    for (const auto& [n, c] : cases) {
        const auto s = eigensolve(wrap(support::uniform_correlation(n, c)));
        // One eigenvalue 1 + (N-1)c and N-1 copies of 1 - c; for c < 0 the
        // single one is the smallest.
        std::vector<double> expected(n, 1.0 - c);
        expected.push_back(1.0 + static_cast<double>(n - 1) * c);
        expected.erase(expected.begin());
        std::sort(expected.begin(), expected.end(), std::greater<>());
        for (std::size_t k = 0; k < n; ++k) {
            worst = std::max(worst, std::abs(s.eigenvalues(static_cast<Eigen::Index>(k)) - expected[k]));
        }
        if (c > 0) {
            check.require(std::abs(s.eigenvalues(0) - (1.0 + static_cast<double>(n - 1) * c)) <= 1e-9,
                          "lambda_0 for N=" + std::to_string(n));
        }
    }
    check.require(worst <= 1e-9, "max deviation " + fmt_sci(worst));
    return check.outcome("(50,0.37) (100,0.2) (10,-0.05); max deviation " + fmt_sci(worst));
}

Outcome surrogate_null() {
    Checker check;
    const auto market = simulate(paper_config(0));
    const auto spectrum = eigensolve(correlation(market.returns));
    const auto& bounds = *spectrum.bounds;
    check.require(spectrum.eigenvalues(0) > 10.0 * bounds.lambda_max,
                  "pre-shuffle lambda_0 " + fmt(spectrum.eigenvalues(0), 2));
    const auto reps = shuffle_surrogate(market.returns, 1, 100);
    const auto bc = band_compliance(reps, bounds, kSurrogateBandPad);
    check.require(bc.replicates_inside >= 99,
                  std::to_string(bc.replicates_inside) + "/100 replicates inside the band");
    double top = 0.0;
    for (const auto& r : reps) top = std::max(top, r.eigenvalues(0));
    return check.outcome("lambda_0 " + fmt(spectrum.eigenvalues(0), 2) + " -> max shuffled " + fmt(top, 3) +
                         "; " + std::to_string(bc.replicates_inside) + "/100 inside [" +
                         fmt(bc.band_lo, 3) + ", " + fmt(bc.band_hi, 3) + "]");
}

Outcome factor_betas() {
    Checker check;
    auto config = paper_config(0);
    config.delta = 0.0;
    double st = -1.0;
    double bc = -1.0;
    for (const auto& s : sample_coefficients(config)) {
        if (s.category == Category::ST) {
            check.require(std::abs(s.beta - 0.7533) <= 1e-4, "ST beta " + fmt(s.beta, 6));
            st = s.beta;
        } else if (s.category == Category::BlueChip) {
            check.require(std::abs(s.beta - 0.8426) <= 1e-4, "BC beta " + fmt(s.beta, 6));
            bc = s.beta;
        }
    }
    check.require(st > 0 && bc > 0, "no ST or BC stocks sampled");
    check.require(std::abs(st - 0.75) < 0.005 && std::abs(bc - 0.84) < 0.005, "rounded values");
    return check.outcome("beta_ST " + fmt(st, 6) + ", beta_BC " + fmt(bc, 6));
}

Outcome spectral_structure() {
    Checker check;
    const std::size_t seeds = 50;
    std::size_t market_ok = 0;
    std::size_t st_ok = 0;
    std::size_t bc_ok = 0;
    std::size_t edge_ok = 0;
    for (std::uint64_t seed = 0; seed < seeds; ++seed) {
        const auto config = paper_config(seed);
        const auto market = simulate(config);
        const auto map = market.sector_map();
        const auto s = eigensolve(correlation(market.returns));
        const double lmax = s.bounds->lambda_max;
        market_ok += s.eigenvalues(0) > 10.0 * lmax;
        const auto mode1 = top_components(s, 1, config.n_st, map);
        const auto mode2 = top_components(s, 2, config.n_bc, map);
        st_ok += mode1.share(Category::ST).value_or(0.0) >= 0.9;
        bc_ok += mode2.share(Category::BlueChip).value_or(0.0) >= 0.9;
        edge_ok += s.eigenvalues(7) < 1.2 * lmax;
    }
    check.require(market_ok == seeds, "lambda_0 > 10 lambda_max in " + std::to_string(market_ok) + "/50");
    check.require(st_ok >= 45, "mode 1 ST-dominated in " + std::to_string(st_ok) + "/50");
    check.require(bc_ok >= 45, "mode 2 BC-dominated in " + std::to_string(bc_ok) + "/50");
    check.require(edge_ok >= 45, "lambda_7 below 1.2 lambda_max in " + std::to_string(edge_ok) + "/50");
    return check.outcome("market " + std::to_string(market_ok) + "/50, ST " + std::to_string(st_ok) +
                         "/50, BC " + std::to_string(bc_ok) + "/50, edge " + std::to_string(edge_ok) + "/50");
}

Outcome correlation_oracle() {
    Checker check;
    FactorModelConfig config = support::small_config(20, 100000, 3);
    config.delta = 0.0;
    const auto market = simulate(config);
    const auto corr = correlation(market.returns);
    const double tol = 5.0 / std::sqrt(static_cast<double>(config.length));
    std::size_t pairs = 0;
    std::size_t good = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < config.stocks; ++i) {
        for (std::size_t j = i + 1; j < config.stocks; ++j) {
            const double err = std::abs(corr.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -
                                        expected_correlation(config, market.truth[i], market.truth[j]));
            worst = std::max(worst, err);
            good += err <= tol;
            ++pairs;
        }
    }
    const double fraction = static_cast<double>(good) / static_cast<double>(pairs);
    check.require(fraction >= 0.99, "fraction within 5/sqrt(T): " + fmt(fraction));
    return check.outcome(std::to_string(good) + "/" + std::to_string(pairs) + " pairs within " + fmt(tol) +
                         ", worst " + fmt(worst));
}

Outcome report_formats() {
    Checker check;
    // Percentages in the reference layout.
    const std::pair<std::pair<int, int>, const char*> table[] = {
        {{20, 25}, "80.00"}, {{17, 23}, "73.91"}, {{22, 27}, "81.48"},
        {{5, 5}, "100.00"},  {{10, 12}, "83.33"}, {{3, 4}, "75.00"}};
    for (const auto& [ratio, text] : table) {
        check.require(format_percent(static_cast<std::size_t>(ratio.first),
                                     static_cast<std::size_t>(ratio.second)) == text,
                      std::string("format_percent ") + text);
    }
    check.require(format_percent(0, 0) == "—", "empty set rendering");

    // Full pipeline on user-style input files.
    const auto dir = support::fresh_dir("acceptance_formats");
    const auto market = simulate(support::small_config(10, 600, 8));
    support::write_file(dir / "prices.csv", support::prices_from_returns(market.returns));
    support::write_file(dir / "sectors.csv", support::sectors_from_market(market));
    const int code = run_cli({"analyze", "--prices", (dir / "prices.csv").string(), "--sectors",
                              (dir / "sectors.csv").string(), "--out", (dir / "out").string()});
    check.require(code == 0, "analyze exit code " + std::to_string(code));
    std::size_t cells = 0;
    if (code == 0) {
        const auto report = json::parse(support::read_file(dir / "out" / "report.json"));
        const auto schema = json::parse(support::read_file(RMTCORR_SCHEMA_PATH));
        const auto problems = support::schema_problems(report, schema);
        check.require(problems.empty(), problems.empty() ? "" : "schema: " + problems.front());
        cells = report["composition"].size();
        for (const char* name : {"hist_elements.csv", "hist_eigs.csv", "mp_density.csv", "composition.csv",
                                 "components.csv", "spectrum.csv"}) {
            check.require(fs::exists(dir / "out" / name), std::string("missing ") + name);
        }
    }
    return check.outcome("layout strings ok, schema-valid report with " + std::to_string(cells) +
                         " composition cells; empirical dataset values not reproducible without the original data");
}

Outcome property_suites() {
    Checker check;
    std::mt19937_64 gen(99);

    // Nesting of dominant sets.
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 20;
        const auto s = eigensolve(wrap(support::random_correlation(n, 60, gen), 60));
        std::uniform_real_distribution<double> u(0.01, 0.6);
        double a = u(gen);
        double b = u(gen);
        if (a > b) std::swap(a, b);
        const std::size_t mode = static_cast<std::size_t>(trial) % n;
        const auto low = dominant_components(s, mode, a, {});
        const auto high = dominant_components(s, mode, b, {});
        std::set<std::size_t> members;
        for (const auto& m : low.members) members.insert(m.stock);
        for (const auto& m : high.members) check.require(members.count(m.stock) == 1, "nesting");
    }

    // Scale invariance and permutation equivariance through the CLI-free path.
    const auto base = simulate(support::small_config(4, 200, 12));
    {
        RawReturns raw{base.returns.tickers, base.returns.returns, 1};
        RawReturns scaled = raw;
        scaled.values.row(3) *= 37.5;
        scaled.values.row(3).array() += 0.2;
        const auto a = normalize(raw);
        const auto b = normalize(scaled);
        check.require((a.returns - b.returns).cwiseAbs().maxCoeff() <= 1e-12, "scale invariance");

        std::vector<Eigen::Index> perm(raw.tickers.size());
        std::iota(perm.begin(), perm.end(), Eigen::Index{0});
        std::shuffle(perm.begin(), perm.end(), gen);
        RawReturns permuted = raw;
        for (std::size_t i = 0; i < perm.size(); ++i) {
            permuted.values.row(static_cast<Eigen::Index>(i)) = raw.values.row(perm[i]);
            permuted.tickers[i] = raw.tickers[static_cast<std::size_t>(perm[i])];
        }
        const auto c = correlation(normalize(raw));
        const auto cp = correlation(normalize(permuted));
        bool equal = true;
        for (std::size_t i = 0; i < perm.size(); ++i) {
            for (std::size_t j = 0; j < perm.size(); ++j) {
                equal = equal && cp.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) ==
                                     c.values(perm[i], perm[j]);
            }
        }
        check.require(equal, "permutation equivariance");
    }

    // Unit mass of the Wishart density.
    boost::math::quadrature::tanh_sinh<double> integrator;
    double worst_mass = 0.0;
    for (double q : {1.5, 5.0, 10.16, 13.04}) {
        const auto b = mp_bounds_for_ratio(q);
        const double mass = integrator.integrate([q](double l) { return mp_density(l, q); },
                                                 b.lambda_min, b.lambda_max);
        worst_mass = std::max(worst_mass, std::abs(mass - 1.0));
    }
    check.require(worst_mass <= 1e-6, "density mass error " + fmt_sci(worst_mass));

    // End-to-end byte determinism.
    const auto dir = support::fresh_dir("acceptance_determinism");
    const auto config = support::small_config(8, 500, 21);
    support::write_file(dir / "config.json", config_json(config));
    std::vector<std::string> files[2];
    for (int run = 0; run < 2; ++run) {
        const auto out = dir / ("run" + std::to_string(run));
        const int code = run_cli({"simulate", "--config", (dir / "config.json").string(), "--analyze",
                                  "--surrogates", "3", "--out", out.string()});
        check.require(code == 0, "simulate exit code");
        // Directory iteration order is unspecified; compare sorted per-file contents.
        for (const auto& entry : fs::directory_iterator(out)) {
            files[run].push_back(entry.path().filename().string() + "\n" + support::read_file(entry.path()));
        }
        std::sort(files[run].begin(), files[run].end());
    }
    check.require(!files[0].empty() && files[0] == files[1], "simulate --analyze outputs not byte-identical");
    return check.outcome("nesting, scale invariance, permutation equivariance, density mass (err " +
                         fmt_sci(worst_mass) + "), byte determinism over " + std::to_string(files[0].size()) +
                         " files");
}

}  // namespace

int main() {
    struct Criterion {
        const char* id;
        const char* name;
        std::function<Outcome()> check;
    };
    const std::vector<Criterion> criteria{
        {"AC1", "Wishart bounds of the reference markets", wishart_bounds_table},
        {"AC2", "eigensolver vs Sturm bisection oracle", eigensolver_oracle},
        {"AC3", "analytic uniform-correlation spectra", analytic_spectra},
        {"AC4", "shuffle surrogate collapses into the Wishart band", surrogate_null},
        {"AC5", "factor-model market couplings", factor_betas},
        {"AC6", "simulated spectral structure over 50 seeds", spectral_structure},
        {"AC7", "Monte Carlo correlation oracle", correlation_oracle},
        {"AC8", "report formats and pipeline on user-style data", report_formats},
        {"AC9", "property suites", property_suites},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.check();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += !outcome.pass;
        std::cout << c.id << ' ' << (outcome.pass ? "PASS" : "FAIL") << "  " << c.name << ": "
                  << outcome.detail << " [" << fmt(seconds, 1) << " s]" << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
