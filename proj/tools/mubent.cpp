#include <cstdio>
#include <cstdlib>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mubent/bounds.hpp"
#include "mubent/harness.hpp"
#include "mubent/io.hpp"
#include "mubent/measure.hpp"
#include "mubent/mub.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadConstruction = 2;
constexpr int kExitDimMismatch = 3;
constexpr int kExitMubVerification = 4;
constexpr int kExitViolation = 5;

using mubent::io::json;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("MUB_ENTROPY_SEED")) {
        return std::strtoull(env, nullptr, 10);
    }
    return 1;
}

void print_config(const json& cfg) {
    std::printf("config: %s\n", cfg.dump().c_str());
}

struct CliError {
    int code;
    std::string message;
};

mubent::MubSet load_mub_file(const std::string& path, double tol) {
    try {
        return mubent::io::mub_from_json(mubent::io::read_json_file(path), tol);
    } catch (const std::invalid_argument& e) {
        throw CliError{kExitMubVerification,
                       std::string("MUB verification failed for ") + path + ": " + e.what()};
    }
}

// ---------------------------------------------------------------------------

int run_construct(std::size_t d, bool full, bool fourier, const std::vector<std::size_t>& tensor,
                  const std::string& out_path, std::optional<std::uint64_t> seed_flag) {
    const int modes = (full ? 1 : 0) + (fourier ? 1 : 0) + (tensor.empty() ? 0 : 1);
    if (modes != 1) {
        throw CliError{kExitBadConstruction,
                       "choose exactly one of --full, --fourier, --tensor d1 d2"};
    }
    const std::uint64_t seed = resolve_seed(seed_flag);
    json cfg = {{"command", "construct"}, {"d", d}, {"out", out_path}, {"seed", seed}};

    mubent::MubSet set = [&]() -> mubent::MubSet {
        try {
            if (full) {
                cfg["mode"] = "full";
                return mubent::construct_full(d, seed);
            }
            if (fourier) {
                cfg["mode"] = "fourier";
                return mubent::fourier_pair(d);
            }
            cfg["mode"] = "tensor";
            cfg["tensor"] = tensor;
            if (tensor.size() != 2) {
                throw std::invalid_argument("--tensor needs exactly two factor dimensions");
            }
            if (tensor[0] * tensor[1] != d) {
                throw std::invalid_argument("tensor factors " + std::to_string(tensor[0]) + " * " +
                                            std::to_string(tensor[1]) + " != d = " +
                                            std::to_string(d));
            }
            return mubent::tensor_compose(mubent::construct_full(tensor[0], seed),
                                          mubent::construct_full(tensor[1], seed));
        } catch (const std::exception& e) {
            throw CliError{kExitBadConstruction, e.what()};
        }
    }();

    print_config(cfg);
    mubent::io::write_json_file(out_path, mubent::io::mub_to_json(set));
    const mubent::MubVerification check =
        mubent::verify_mub_set(std::span(set.bases()), set.unbiasedness_tol());
    std::printf("wrote %zu bases for d = %zu to %s\n", set.count(), set.dim(), out_path.c_str());
    std::printf("verification: worst overlap deviation %.3e, worst orthonormality %.3e\n",
                check.worst_overlap_deviation, check.worst_orthonormality);
    return kExitOk;
}

// ---------------------------------------------------------------------------

mubent::DensityMatrix synthesize_state(std::size_t d, bool maximally_mixed, bool pure_random,
                                       std::optional<double> purity, std::uint64_t seed) {
    using mubent::cplx;
    if (maximally_mixed) {
        mubent::ComplexMatrix m(d, d);
        for (std::size_t i = 0; i < d; ++i) {
            m(i, i) = 1.0 / static_cast<double>(d);
        }
        return mubent::DensityMatrix(std::move(m));
    }
    if (pure_random) {
        mubent::rng::Stream stream(seed, "cli-pure-random");
        std::vector<cplx> v(d);
        double norm2 = 0.0;
        for (cplx& z : v) {
            z = stream.next_complex_gaussian();
            norm2 += std::norm(z);
        }
        for (cplx& z : v) {
            z /= std::sqrt(norm2);
        }
        return mubent::PureState(v).projector();
    }
    // Diagonal interpolation between I/d and |0><0| hitting the requested
    // purity: rho = (1-t) I/d + t |0><0|.
    const double target = *purity;
    const double dd = static_cast<double>(d);
    if (target < 1.0 / dd - 1e-12 || target > 1.0 + 1e-12) {
        throw std::invalid_argument("--purity must lie in [1/d, 1]");
    }
    const double t = std::sqrt(std::max(0.0, (target - 1.0 / dd) / (1.0 - 1.0 / dd)));
    mubent::ComplexMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        m(i, i) = (1.0 - t) / dd;
    }
    m(0, 0) += t;
    return mubent::DensityMatrix(std::move(m));
}

int run_bounds(const std::string& state_path, bool maximally_mixed, bool pure_random,
               std::optional<double> purity, std::size_t d_flag, const std::string& mubs_path,
               std::size_t auto_m, const std::string& report_path, const std::string& format,
               double tol, std::optional<std::uint64_t> seed_flag) {
    const std::uint64_t seed = resolve_seed(seed_flag);

    std::optional<mubent::DensityMatrix> rho;
    if (!state_path.empty()) {
        rho.emplace(mubent::io::matrix_from_json(mubent::io::read_json_file(state_path)));
    } else {
        if ((maximally_mixed ? 1 : 0) + (pure_random ? 1 : 0) + (purity ? 1 : 0) != 1) {
            throw CliError{kExitBadConstruction,
                           "choose one state source: --state, --maximally-mixed, "
                           "--pure-random, or --purity"};
        }
        if (d_flag < 2) {
            throw CliError{kExitBadConstruction, "--d is required without --state"};
        }
        rho.emplace(synthesize_state(d_flag, maximally_mixed, pure_random, purity, seed));
    }
    const std::size_t d = rho->dim();

    std::optional<mubent::MubSet> set;
    if (!mubs_path.empty()) {
        set.emplace(load_mub_file(mubs_path, tol));
    } else {
        if (auto_m == 0) {
            throw CliError{kExitBadConstruction, "need --mubs FILE or --auto M"};
        }
        try {
            set.emplace(mubent::auto_mub_set(d, auto_m));
        } catch (const std::exception& e) {
            throw CliError{kExitBadConstruction, e.what()};
        }
    }
    if (set->dim() != d) {
        throw CliError{kExitDimMismatch, "state dim " + std::to_string(d) + " != MUB dim " +
                                             std::to_string(set->dim())};
    }

    json cfg = {{"command", "bounds"},
                {"d", d},
                {"M", set->count()},
                {"seed", seed},
                {"tolerance", tol}};
    print_config(cfg);

    const mubent::BoundReport report = mubent::evaluate_bounds(*rho, *set);
    std::printf("%-22s %14s %14s\n", "name", "value", "margin");
    for (const mubent::MarginEntry& m : report.margins) {
        std::printf("%-22s %14.6f %14.6f\n", m.name.c_str(), m.bound, m.margin);
    }
    std::printf("%-22s %14.6f\n", "measured_shannon_sum", report.measured_shannon_sum);

    if (!report_path.empty()) {
        if (format == "csv") {
            mubent::io::write_file(report_path, mubent::io::bound_report_to_csv(report));
        } else {
            json out = mubent::io::bound_report_to_json(report);
            out["config"] = cfg;
            mubent::io::write_json_file(report_path, out);
        }
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

int run_campaign(std::size_t d, std::size_t m, std::size_t samples, const std::string& ensemble,
                 std::size_t rank, const std::string& mubs_path, double unbiasedness_tol,
                 double margin_tol, const std::string& out_path, const std::string& csv_path,
                 std::optional<std::uint64_t> seed_flag) {
    mubent::CampaignConfig cfg;
    cfg.d = d;
    cfg.M = m;
    cfg.n_samples = samples;
    cfg.seed = resolve_seed(seed_flag);
    cfg.ensemble = mubent::ensemble_from_string(ensemble);
    cfg.rank = rank;
    cfg.tolerance = margin_tol;
    cfg.collect_samples = !csv_path.empty();

    std::optional<mubent::MubSet> set;
    if (!mubs_path.empty()) {
        set.emplace(load_mub_file(mubs_path, unbiasedness_tol));
        if (set->dim() != d) {
            throw CliError{kExitDimMismatch, "--mubs dim " + std::to_string(set->dim()) +
                                                 " != --d " + std::to_string(d)};
        }
        if (set->count() != m) {
            throw CliError{kExitDimMismatch, "--mubs has " + std::to_string(set->count()) +
                                                 " bases, --M is " + std::to_string(m)};
        }
    } else {
        try {
            set.emplace(mubent::auto_mub_set(d, m));
        } catch (const std::exception& e) {
            throw CliError{kExitBadConstruction, e.what()};
        }
    }

    json cfg_json = mubent::io::campaign_config_to_json(cfg);
    cfg_json["command"] = "campaign";
    cfg_json["mubs"] = mubs_path.empty() ? "auto" : mubs_path;
    print_config(cfg_json);

    const mubent::CampaignSummary summary = mubent::run_verification_campaign(cfg, *set);
    std::printf("samples: %zu, violations: %zu, min shannon sum: %.9f\n", cfg.n_samples,
                summary.violations_total, summary.min_shannon_sum);
    for (const auto& [name, stat] : summary.inequalities) {
        std::printf("  %-20s min margin %+.3e  violations %zu\n", name.c_str(), stat.min_margin,
                    stat.violations);
    }
    if (!out_path.empty()) {
        json out = mubent::io::campaign_summary_to_json(summary);
        out["config"]["mubs"] = mubs_path.empty() ? "auto" : mubs_path;
        mubent::io::write_json_file(out_path, out);
    }
    if (!csv_path.empty()) {
        mubent::io::write_file(csv_path, mubent::io::campaign_samples_to_csv(summary));
    }
    return summary.violations_total == 0 ? kExitOk : kExitViolation;
}

// ---------------------------------------------------------------------------

int run_tighten(std::size_t d, std::size_t m, std::size_t restarts, std::size_t max_iters,
                const std::string& bound_name, const std::string& out_path,
                std::optional<std::uint64_t> seed_flag) {
    const std::uint64_t seed = resolve_seed(seed_flag);
    std::optional<mubent::MubSet> set;
    try {
        set.emplace(mubent::auto_mub_set(d, m));
    } catch (const std::exception& e) {
        throw CliError{kExitBadConstruction, e.what()};
    }
    const mubent::TightnessBound bound = mubent::tightness_bound_from_string(bound_name);

    json cfg = {{"command", "tighten"}, {"d", d},         {"M", m},
                {"restarts", restarts}, {"seed", seed},   {"bound", bound_name},
                {"max_iters", max_iters}};
    print_config(cfg);

    const mubent::TightnessResult result =
        mubent::tightness_search(d, *set, bound, restarts, max_iters, seed);
    std::printf("best value %.9f, bound %.9f, gap %+.3e (%zu evaluations)\n", result.best_value,
                result.bound_value, result.gap, result.iterations);
    if (!out_path.empty()) {
        json out = mubent::io::tightness_result_to_json(result);
        out["config"] = cfg;
        mubent::io::write_json_file(out_path, out);
    }
    return result.gap >= -1e-9 ? kExitOk : kExitViolation;
}

// ---------------------------------------------------------------------------

int run_separable(std::size_t da, std::size_t db, std::size_t m, std::size_t samples,
                  std::size_t terms, const std::string& out_path,
                  std::optional<std::uint64_t> seed_flag) {
    const std::uint64_t seed = resolve_seed(seed_flag);
    json cfg = {{"command", "separable"}, {"dA", da},     {"dB", db},     {"M", m},
                {"samples", samples},     {"terms", terms}, {"seed", seed}};
    print_config(cfg);

    const mubent::SeparabilitySummary summary =
        mubent::separability_experiment(da, db, m, samples, terms, seed);
    std::printf("separable min sum %.9f vs bound %.9f, violations %zu\n",
                summary.separable_min_sum, summary.bound, summary.violations);
    for (const mubent::SeparabilityProbe& p : summary.probes) {
        std::printf("  probe %-20s sum %.9f %s\n", p.name.c_str(), p.shannon_sum,
                    p.flagged ? "[flagged entangled]" : "[not flagged]");
    }
    if (!out_path.empty()) {
        json out = mubent::io::separability_summary_to_json(summary);
        out["config"] = cfg;
        mubent::io::write_json_file(out_path, out);
    }
    return summary.violations == 0 ? kExitOk : kExitViolation;
}

// ---------------------------------------------------------------------------

std::pair<std::size_t, std::size_t> parse_range(const std::string& text) {
    const auto pos = text.find("..");
    if (pos == std::string::npos) {
        const std::size_t v = std::stoull(text);
        return {v, v};
    }
    return {std::stoull(text.substr(0, pos)), std::stoull(text.substr(pos + 2))};
}

int run_scan(const std::string& d_range, const std::string& m_range, std::size_t purity_points,
             const std::string& out_path) {
    const auto [d_lo, d_hi] = parse_range(d_range);
    const auto [m_lo, m_hi] = parse_range(m_range);
    json cfg = {{"command", "scan"},
                {"d_range", d_range},
                {"M_range", m_range},
                {"purity_grid", purity_points},
                {"out", out_path}};
    print_config(cfg);
    const std::vector<mubent::ScanRow> rows =
        mubent::bound_comparison_scan(d_lo, d_hi, m_lo, m_hi, purity_points);
    mubent::io::write_file(out_path, mubent::io::scan_rows_to_csv(rows));
    std::printf("wrote %zu rows to %s\n", rows.size(), out_path.c_str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mutually unbiased bases and entropic uncertainty bounds"};
    app.require_subcommand(1);

    // construct
    auto* construct = app.add_subcommand("construct", "construct a MUB set and write it to JSON");
    std::size_t c_d = 0;
    bool c_full = false, c_fourier = false;
    std::vector<std::size_t> c_tensor;
    std::string c_out;
    std::optional<std::uint64_t> c_seed;
    construct->add_option("d", c_d, "dimension")->required();
    construct->add_flag("--full", c_full, "full d+1 set (prime-power d)");
    construct->add_flag("--fourier", c_fourier, "standard + Fourier pair");
    construct->add_option("--tensor", c_tensor, "two factor dimensions")->expected(2);
    construct->add_option("--out", c_out, "output file")->required();
    construct->add_option("--seed", c_seed, "construction seed");

    // bounds
    auto* bounds = app.add_subcommand("bounds", "evaluate all bounds for a state and MUB set");
    std::string b_state, b_mubs, b_report, b_format = "json";
    bool b_mixed = false, b_pure_random = false;
    std::optional<double> b_purity;
    std::size_t b_d = 0, b_auto = 0;
    double b_tol = 1e-9;
    std::optional<std::uint64_t> b_seed;
    bounds->add_option("--state", b_state, "density matrix JSON file");
    bounds->add_flag("--maximally-mixed", b_mixed, "use rho = I/d");
    bounds->add_flag("--pure-random", b_pure_random, "use a seeded Haar-random pure state");
    bounds->add_option("--purity", b_purity, "use a diagonal state with this purity");
    bounds->add_option("--d", b_d, "dimension (required without --state)");
    bounds->add_option("--mubs", b_mubs, "MUB set JSON file");
    bounds->add_option("--auto", b_auto, "construct M bases automatically");
    bounds->add_option("--report", b_report, "report output file");
    bounds->add_option("--format", b_format, "report format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    bounds->add_option("--tol", b_tol, "MUB verification tolerance");
    bounds->add_option("--seed", b_seed, "seed for --pure-random");

    // campaign
    auto* campaign = app.add_subcommand("campaign", "randomized verification campaign");
    std::size_t g_d = 2, g_m = 3, g_samples = 1000, g_rank = 1;
    std::string g_ensemble = "haar_pure", g_mubs, g_out, g_csv;
    double g_ub_tol = 1e-9, g_margin_tol = 1e-9;
    std::optional<std::uint64_t> g_seed;
    campaign->add_option("--d", g_d, "dimension")->required();
    campaign->add_option("--M", g_m, "number of bases")->required();
    campaign->add_option("--samples", g_samples, "number of sampled states")->required();
    campaign->add_option("--ensemble", g_ensemble,
                         "haar_pure | hilbert_schmidt_mixed | rank_limited");
    campaign->add_option("--rank", g_rank, "rank for rank_limited");
    campaign->add_option("--mubs", g_mubs, "MUB set JSON file (default: construct automatically)");
    campaign->add_option("--unbiasedness-tol", g_ub_tol, "acceptance tolerance for --mubs");
    campaign->add_option("--margin-tol", g_margin_tol, "violation tolerance on margins");
    campaign->add_option("--out", g_out, "summary JSON file");
    campaign->add_option("--csv", g_csv, "per-sample CSV file");
    campaign->add_option("--seed", g_seed, "sampling seed");

    // tighten
    auto* tighten = app.add_subcommand("tighten", "search for states minimizing the entropy sum");
    std::size_t t_d = 2, t_m = 3, t_restarts = 64, t_max_iters = 4000;
    std::string t_bound = "theorem2", t_out;
    std::optional<std::uint64_t> t_seed;
    tighten->add_option("--d", t_d, "dimension")->required();
    tighten->add_option("--M", t_m, "number of bases")->required();
    tighten->add_option("--restarts", t_restarts, "random restarts");
    tighten->add_option("--max-iters", t_max_iters, "iteration cap per restart");
    tighten->add_option("--bound", t_bound, "bound to compare against");
    tighten->add_option("--out", t_out, "result JSON file");
    tighten->add_option("--seed", t_seed, "restart seed");

    // separable
    auto* separable = app.add_subcommand("separable", "bipartite separability experiment");
    std::size_t s_da = 2, s_db = 2, s_m = 3, s_samples = 1000, s_terms = 0;
    std::string s_out;
    std::optional<std::uint64_t> s_seed;
    separable->add_option("--dA", s_da, "dimension of subsystem A")->required();
    separable->add_option("--dB", s_db, "dimension of subsystem B")->required();
    separable->add_option("--M", s_m, "number of bases per subsystem")->required();
    separable->add_option("--samples", s_samples, "number of separable samples")->required();
    separable->add_option("--terms", s_terms, "product terms per sample (0 = max(dA,dB)^2)");
    separable->add_option("--out", s_out, "summary JSON file");
    separable->add_option("--seed", s_seed, "sampling seed");

    // scan
    auto* scan = app.add_subcommand("scan", "bound comparison scan to CSV");
    std::string n_d_range, n_m_range, n_out;
    std::size_t n_grid = 5;
    scan->add_option("--d-range", n_d_range, "a..b")->required();
    scan->add_option("--M-range", n_m_range, "a..b")->required();
    scan->add_option("--purity-grid", n_grid, "points per purity grid");
    scan->add_option("--out", n_out, "CSV output file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (construct->parsed()) {
            return run_construct(c_d, c_full, c_fourier, c_tensor, c_out, c_seed);
        }
        if (bounds->parsed()) {
            return run_bounds(b_state, b_mixed, b_pure_random, b_purity, b_d, b_mubs, b_auto,
                              b_report, b_format, b_tol, b_seed);
        }
        if (campaign->parsed()) {
            return run_campaign(g_d, g_m, g_samples, g_ensemble, g_rank, g_mubs, g_ub_tol,
                                g_margin_tol, g_out, g_csv, g_seed);
        }
        if (tighten->parsed()) {
            return run_tighten(t_d, t_m, t_restarts, t_max_iters, t_bound, t_out, t_seed);
        }
        if (separable->parsed()) {
            return run_separable(s_da, s_db, s_m, s_samples, s_terms, s_out, s_seed);
        }
        if (scan->parsed()) {
            return run_scan(n_d_range, n_m_range, n_grid, n_out);
        }
    } catch (const CliError& e) {
        std::fprintf(stderr, "error: %s\n", e.message.c_str());
        return e.code;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return kExitOk;
}
