#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mubent/bounds.hpp"
#include "mubent/measure.hpp"
#include "mubent/mub.hpp"
#include "mubent/rng.hpp"

namespace mubent {

enum class StateEnsemble { haar_pure, hilbert_schmidt_mixed, rank_limited };

inline const char* to_string(StateEnsemble e) {
    switch (e) {
        case StateEnsemble::haar_pure: return "haar_pure";
        case StateEnsemble::hilbert_schmidt_mixed: return "hilbert_schmidt_mixed";
        case StateEnsemble::rank_limited: return "rank_limited";
    }
    return "?";
}

inline StateEnsemble ensemble_from_string(const std::string& s) {
    if (s == "haar_pure") return StateEnsemble::haar_pure;
    if (s == "hilbert_schmidt_mixed") return StateEnsemble::hilbert_schmidt_mixed;
    if (s == "rank_limited") return StateEnsemble::rank_limited;
    throw std::invalid_argument("unknown ensemble: " + s);
}

struct CampaignConfig {
    std::size_t d = 2;
    std::size_t M = 3;
    std::size_t n_samples = 1;
    std::uint64_t seed = 1;
    StateEnsemble ensemble = StateEnsemble::haar_pure;
    std::size_t rank = 1;          // for rank_limited
    double tolerance = 1e-9;       // margin below -tolerance counts as a violation
    bool collect_samples = false;  // keep per-sample rows for CSV export
};

namespace detail {

inline DensityMatrix ginibre_state(rng::Stream& stream, std::size_t d, std::size_t cols) {
    ComplexMatrix g(d, cols);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            g(i, j) = stream.next_complex_gaussian();
        }
    }
    ComplexMatrix w = g * g.adjoint();
    const double tr = w.trace().real();
    ComplexMatrix rho = w.scaled(1.0 / tr);
    // Force exact Hermitian symmetry before validation.
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i; j < d; ++j) {
            const cplx s = 0.5 * (rho(i, j) + std::conj(rho(j, i)));
            rho(i, j) = s;
            rho(j, i) = std::conj(s);
        }
        rho(i, i) = cplx(rho(i, i).real(), 0.0);
    }
    return DensityMatrix(std::move(rho));
}

inline DensityMatrix haar_pure_state(rng::Stream& stream, std::size_t d) {
    std::vector<cplx> v(d);
    double norm2 = 0.0;
    for (cplx& z : v) {
        z = stream.next_complex_gaussian();
        norm2 += std::norm(z);
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (cplx& z : v) {
        z *= inv;
    }
    return PureState(std::move(v)).projector();
}

}  // namespace detail

// Deterministic function of (seed, ensemble, index).
inline DensityMatrix sample_state(const CampaignConfig& cfg, std::uint64_t index) {
    rng::Stream stream(cfg.seed, "sample-state", index);
    switch (cfg.ensemble) {
        case StateEnsemble::haar_pure:
            return detail::haar_pure_state(stream, cfg.d);
        case StateEnsemble::hilbert_schmidt_mixed:
            return detail::ginibre_state(stream, cfg.d, cfg.d);
        case StateEnsemble::rank_limited:
            if (cfg.rank < 1 || cfg.rank > cfg.d) {
                throw std::invalid_argument("sample_state: rank out of range");
            }
            return detail::ginibre_state(stream, cfg.d, cfg.rank);
    }
    throw std::logic_error("sample_state: unreachable");
}

struct InequalityStat {
    double min_margin = std::numeric_limits<double>::infinity();
    std::size_t violations = 0;

    void record(double margin, double tolerance) {
        min_margin = std::min(min_margin, margin);
        if (margin < -tolerance) ++violations;
    }
};

struct Histogram {
    std::string name;
    std::vector<double> bin_edges;
    std::vector<std::size_t> counts;
};

inline Histogram make_histogram(const std::string& name, const std::vector<double>& values,
                                std::size_t bins = 32) {
    Histogram h;
    h.name = name;
    if (values.empty()) return h;
    double lo = values.front(), hi = values.front();
    for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi - lo < 1e-12) {
        h.bin_edges = {lo - 0.5, hi + 0.5};
        h.counts = {values.size()};
        return h;
    }
    h.bin_edges.resize(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i) {
        h.bin_edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
    }
    h.counts.assign(bins, 0);
    for (double v : values) {
        auto idx = static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(bins));
        idx = std::min(idx, bins - 1);
        ++h.counts[idx];
    }
    return h;
}

struct SampleRow {
    std::uint64_t index = 0;
    double purity = 0.0;
    double total_ic = 0.0;
    double shannon_sum = 0.0;
    double renyi2_sum = 0.0;
    double tsallis2_sum = 0.0;
};

struct CampaignSummary {
    CampaignConfig config;
    std::map<std::string, InequalityStat> inequalities;
    std::vector<Histogram> histograms;
    std::vector<SampleRow> samples;  // only when config.collect_samples
    double min_shannon_sum = std::numeric_limits<double>::infinity();
    std::size_t violations_total = 0;
};

// Evaluates every applicable inequality on every sampled state. Violations
// are data, not errors: the summary reports them and the caller decides.
// The coincidence bound is additionally checked on every prefix subset of
// the bases, since it holds for any number of MUBs.
inline CampaignSummary run_verification_campaign(const CampaignConfig& cfg, const MubSet& s) {
    if (s.dim() != cfg.d || s.count() != cfg.M) {
        throw std::invalid_argument("run_verification_campaign: config does not match the set");
    }
    const std::size_t d = cfg.d;
    const std::size_t m_count = cfg.M;
    const double dd = static_cast<double>(d);
    const double mm = static_cast<double>(m_count);

    CampaignSummary out;
    out.config = cfg;
    auto& ineq = out.inequalities;

    std::vector<double> shannon_sums;
    std::vector<double> purities;
    shannon_sums.reserve(cfg.n_samples);
    purities.reserve(cfg.n_samples);

    for (std::uint64_t idx = 0; idx < cfg.n_samples; ++idx) {
        const DensityMatrix rho = sample_state(cfg, idx);
        const double purity = rho.purity();
        const ProbabilityTable table = probability_table(rho, s);

        double shannon_sum = 0.0, renyi_sum = 0.0, tsallis_sum = 0.0;
        std::vector<double> ics(m_count);
        for (std::size_t m = 0; m < m_count; ++m) {
            const auto row = table.row(m);
            ics[m] = index_of_coincidence(row);
            shannon_sum += shannon(row);
            renyi_sum += renyi(row, 2.0);
            tsallis_sum += tsallis(row, 2.0);
        }

        // Coincidence bound at every prefix size.
        double prefix_ic = 0.0;
        double worst_prefix_margin = std::numeric_limits<double>::infinity();
        for (std::size_t m = 0; m < m_count; ++m) {
            prefix_ic += ics[m];
            const double bound_c = purity + static_cast<double>(m) / dd;
            worst_prefix_margin = std::min(worst_prefix_margin, bound_c - prefix_ic);
        }
        const double full_margin = purity + (mm - 1.0) / dd - prefix_ic;
        ineq["theorem1_ic"].record(full_margin, cfg.tolerance);
        ineq["theorem1_ic_prefix"].record(worst_prefix_margin, cfg.tolerance);

        const BoundInputs inputs = BoundInputs::state_dependent(m_count, d, purity);
        ineq["theorem2"].record(shannon_sum - theorem2_bound(inputs), cfg.tolerance);
        const SimpleBounds simple = simple_bounds(inputs);
        ineq["simple_state_dep"].record(shannon_sum - simple.state_dep, cfg.tolerance);
        ineq["simple_state_indep"].record(shannon_sum - simple.state_indep, cfg.tolerance);
        ineq["prop2"].record(shannon_sum - prop2_bound(m_count, d).closed_form, cfg.tolerance);
        if (m_count >= 2) {
            const ClassicBounds classic = classic_bounds(m_count, d);
            ineq["grouped_half_log"].record(shannon_sum - classic.grouped, cfg.tolerance);
            if (classic.maassen_uffink) {
                ineq["maassen_uffink"].record(shannon_sum - *classic.maassen_uffink,
                                              cfg.tolerance);
            }
        }
        if (m_count == d + 1) {
            ineq["sanchez_ruiz"].record(shannon_sum - sanchez_ruiz_bound(d), cfg.tolerance);
        }
        if (d == 2 && m_count == 3) {
            ineq["qubit_special"].record(shannon_sum - qubit_special_bound(purity),
                                         cfg.tolerance);
        }
        const RenyiTsallisBounds rt = renyi_tsallis_bounds(inputs);
        const double chain_link =
            rt.renyi_sum_bound - simple_bounds(BoundInputs::state_independent(m_count, d)).state_indep;
        ineq["renyi_chain"].record(std::min(renyi_sum - rt.renyi_sum_bound, chain_link),
                                   cfg.tolerance);
        ineq["tsallis"].record(tsallis_sum - rt.tsallis_sum_bound, cfg.tolerance);

        out.min_shannon_sum = std::min(out.min_shannon_sum, shannon_sum);
        shannon_sums.push_back(shannon_sum);
        purities.push_back(purity);
        if (cfg.collect_samples) {
            out.samples.push_back({idx, purity, prefix_ic, shannon_sum, renyi_sum, tsallis_sum});
        }
    }

    out.histograms.push_back(make_histogram("shannon_sum", shannon_sums));
    out.histograms.push_back(make_histogram("purity", purities));
    for (const auto& [name, stat] : ineq) {
        out.violations_total += stat.violations;
    }
    return out;
}

enum class TightnessBound { theorem2, maassen_uffink, grouped, simple_state_dep, prop2 };

inline const char* to_string(TightnessBound b) {
    switch (b) {
        case TightnessBound::theorem2: return "theorem2";
        case TightnessBound::maassen_uffink: return "maassen_uffink";
        case TightnessBound::grouped: return "grouped";
        case TightnessBound::simple_state_dep: return "simple_state_dep";
        case TightnessBound::prop2: return "prop2";
    }
    return "?";
}

inline TightnessBound tightness_bound_from_string(const std::string& s) {
    if (s == "theorem2") return TightnessBound::theorem2;
    if (s == "maassen_uffink") return TightnessBound::maassen_uffink;
    if (s == "grouped") return TightnessBound::grouped;
    if (s == "simple_state_dep") return TightnessBound::simple_state_dep;
    if (s == "prop2") return TightnessBound::prop2;
    throw std::invalid_argument("unknown bound selector: " + s);
}

struct TightnessResult {
    DensityMatrix best_state;
    double best_value = 0.0;
    double bound_value = 0.0;
    double gap = 0.0;
    std::size_t iterations = 0;  // objective evaluations across all restarts
    std::size_t restarts = 0;
    std::vector<double> best_value_trace;  // best-so-far after each restart
};

namespace detail {

// Unit vector from 2d-2 real angles: hyperspherical magnitudes plus d-1
// relative phases (component 0 stays real).
inline std::vector<cplx> state_from_angles(const std::vector<double>& angles, std::size_t d) {
    std::vector<double> mag(d);
    double sin_prod = 1.0;
    for (std::size_t j = 0; j + 1 < d; ++j) {
        mag[j] = sin_prod * std::cos(angles[j]);
        sin_prod *= std::sin(angles[j]);
    }
    mag[d - 1] = sin_prod;
    std::vector<cplx> v(d);
    v[0] = mag[0];
    for (std::size_t j = 1; j < d; ++j) {
        v[j] = std::polar(mag[j], angles[d - 2 + j]);
    }
    return v;
}

inline double shannon_sum_of_vector(const std::vector<cplx>& v, const MubSet& s) {
    const std::size_t d = s.dim();
    double total = 0.0;
    std::vector<double> row(d);
    for (std::size_t m = 0; m < s.count(); ++m) {
        const ComplexMatrix& u = s.basis(m).vectors();
        for (std::size_t i = 0; i < d; ++i) {
            cplx amp(0.0, 0.0);
            for (std::size_t r = 0; r < d; ++r) {
                amp += std::conj(u(r, i)) * v[r];
            }
            row[i] = std::norm(amp);
        }
        total += shannon(std::span<const double>(row));
    }
    return total;
}

}  // namespace detail

// Minimizes the Shannon-entropy sum over pure states by compass search on the
// 2d-2 angles, with uniformly seeded random restarts. Best-effort: reports
// the best state found, never a global-optimality claim.
inline TightnessResult tightness_search(std::size_t d, const MubSet& s,
                                        TightnessBound bound = TightnessBound::theorem2,
                                        std::size_t restarts = 64, std::size_t max_iters = 4000,
                                        std::uint64_t seed = 1) {
    if (s.dim() != d) {
        throw std::invalid_argument("tightness_search: dimension mismatch");
    }
    const std::size_t n_angles = 2 * d - 2;
    std::size_t evals = 0;
    auto objective = [&](const std::vector<double>& angles) {
        ++evals;
        return detail::shannon_sum_of_vector(detail::state_from_angles(angles, d), s);
    };

    std::vector<double> best_angles;
    double best_value = std::numeric_limits<double>::infinity();
    std::vector<double> trace;

    for (std::size_t r = 0; r < restarts; ++r) {
        rng::Stream stream(seed, "tightness-restart", r);
        std::vector<double> x(n_angles);
        for (std::size_t i = 0; i < n_angles; ++i) {
            x[i] = stream.next_in(0.0, 2.0 * M_PI);
        }
        double fx = objective(x);
        double step = M_PI / 4.0;
        std::size_t local_iters = 0;
        while (step > 1e-6 && local_iters < max_iters) {
            ++local_iters;
            double best_move_val = fx;
            std::size_t best_coord = n_angles;
            double best_delta = 0.0;
            for (std::size_t i = 0; i < n_angles; ++i) {
                for (double sign : {+1.0, -1.0}) {
                    std::vector<double> y = x;
                    y[i] += sign * step;
                    const double fy = objective(y);
                    if (fy < best_move_val) {
                        best_move_val = fy;
                        best_coord = i;
                        best_delta = sign * step;
                    }
                }
            }
            if (best_coord < n_angles) {
                x[best_coord] += best_delta;
                fx = best_move_val;
            } else {
                step *= 0.5;
            }
        }
        if (fx < best_value) {
            best_value = fx;
            best_angles = x;
        }
        trace.push_back(best_value);
    }

    const std::vector<cplx> v = detail::state_from_angles(best_angles, d);
    double norm2 = 0.0;
    for (const cplx& z : v) norm2 += std::norm(z);
    std::vector<cplx> vn = v;
    for (cplx& z : vn) z /= std::sqrt(norm2);

    double bound_value = 0.0;
    const BoundInputs pure_inputs = BoundInputs::state_dependent(s.count(), d, 1.0);
    switch (bound) {
        case TightnessBound::theorem2: bound_value = theorem2_bound(pure_inputs); break;
        case TightnessBound::maassen_uffink:
            if (s.count() != 2) {
                throw std::invalid_argument("tightness_search: maassen_uffink needs M = 2");
            }
            bound_value = std::log2(static_cast<double>(d));
            break;
        case TightnessBound::grouped:
            bound_value = classic_bounds(s.count(), d).grouped;
            break;
        case TightnessBound::simple_state_dep:
            bound_value = simple_bounds(pure_inputs).state_dep;
            break;
        case TightnessBound::prop2:
            bound_value = prop2_bound(s.count(), d).closed_form;
            break;
    }

    TightnessResult out{PureState(vn).projector()};
    out.best_value = best_value;
    out.bound_value = bound_value;
    out.gap = best_value - bound_value;
    out.iterations = evals;
    out.restarts = restarts;
    out.best_value_trace = std::move(trace);
    return out;
}

struct SeparabilityProbe {
    std::string name;
    double shannon_sum = 0.0;
    bool flagged = false;  // sum below the separable bound, so entanglement detected
};

struct SeparabilitySummary {
    std::size_t dim_a = 0, dim_b = 0, M = 0;
    std::size_t n_samples = 0, n_product_terms = 0;
    std::uint64_t seed = 0;
    double bound = 0.0;
    double separable_min_sum = std::numeric_limits<double>::infinity();
    std::size_t violations = 0;  // separable samples below the bound (expected 0)
    std::vector<SeparabilityProbe> probes;
};

namespace detail {

inline double joint_shannon_sum(const DensityMatrix& rho, const MubSet& sa, const MubSet& sb) {
    const JointProbabilityTables joint = joint_probability_table(rho, sa, sb);
    double total = 0.0;
    for (const auto& t : joint.tables) {
        total += shannon(std::span<const double>(t));
    }
    return total;
}

}  // namespace detail

// Samples separable states as Dirichlet-weighted mixtures of product states
// and verifies the two-term separable bound; fixed maximally entangled probes
// illustrate detection.
inline SeparabilitySummary separability_experiment(std::size_t dA, std::size_t dB, std::size_t M,
                                                   std::size_t n_samples,
                                                   std::size_t n_product_terms,
                                                   std::uint64_t seed) {
    if (n_product_terms == 0) {
        n_product_terms = std::max(dA, dB) * std::max(dA, dB);
    }
    const MubSet sa = auto_mub_set(dA, M);
    const MubSet sb = auto_mub_set(dB, M);

    SeparabilitySummary out;
    out.dim_a = dA;
    out.dim_b = dB;
    out.M = M;
    out.n_samples = n_samples;
    out.n_product_terms = n_product_terms;
    out.seed = seed;
    out.bound = separable_bound(M, dA, dB);

    for (std::uint64_t idx = 0; idx < n_samples; ++idx) {
        rng::Stream stream(seed, "separable-sample", idx);
        const std::vector<double> weights = stream.next_simplex(n_product_terms);
        ComplexMatrix rho(dA * dB, dA * dB);
        for (std::size_t j = 0; j < n_product_terms; ++j) {
            const DensityMatrix a = detail::ginibre_state(stream, dA, dA);
            const DensityMatrix b = detail::ginibre_state(stream, dB, dB);
            const ComplexMatrix prod = kron(a.matrix(), b.matrix());
            for (std::size_t r = 0; r < rho.rows(); ++r) {
                for (std::size_t c = 0; c < rho.cols(); ++c) {
                    rho(r, c) += weights[j] * prod(r, c);
                }
            }
        }
        const double sum = detail::joint_shannon_sum(DensityMatrix(std::move(rho)), sa, sb);
        out.separable_min_sum = std::min(out.separable_min_sum, sum);
        if (sum < out.bound - 1e-9) ++out.violations;
    }

    if (dA == dB) {
        const std::size_t d = dA;
        std::vector<cplx> me(d * d, cplx(0.0, 0.0));
        for (std::size_t i = 0; i < d; ++i) {
            me[i * d + i] = 1.0 / std::sqrt(static_cast<double>(d));
        }
        const double sum = detail::joint_shannon_sum(PureState(me).projector(), sa, sb);
        out.probes.push_back({"maximally_entangled", sum, sum < out.bound - 1e-9});
    }
    if (dA == 2 && dB == 2) {
        const double inv = 1.0 / std::sqrt(2.0);
        std::vector<cplx> singlet = {0.0, inv, -inv, 0.0};
        const double sum = detail::joint_shannon_sum(PureState(singlet).projector(), sa, sb);
        out.probes.push_back({"singlet", sum, sum < out.bound - 1e-9});
    }
    return out;
}

struct ScanRow {
    std::size_t d = 0;
    std::size_t M = 0;
    double purity = 0.0;
    std::optional<double> maassen_uffink;
    double grouped_half_log = 0.0;
    double theorem2 = 0.0;
    double simple_state_dep = 0.0;
    double simple_state_indep = 0.0;
    double prop2_closed = 0.0;
    double prop2_rewritten = 0.0;
    std::optional<double> sanchez_ruiz;
    std::optional<double> qubit_special;
    double renyi_sum = 0.0;
    double tsallis_sum = 0.0;
    std::string strongest;
    bool dominance_predicate = false;
    bool dominance_observed = false;
};

// Pure-formula scan over (d, M, purity); no states are sampled.
inline std::vector<ScanRow> bound_comparison_scan(std::size_t d_lo, std::size_t d_hi,
                                                  std::size_t m_lo, std::size_t m_hi,
                                                  std::size_t purity_points) {
    if (d_lo > d_hi || m_lo > m_hi || purity_points == 0) {
        throw std::invalid_argument("bound_comparison_scan: empty range");
    }
    std::vector<ScanRow> rows;
    for (std::size_t d = d_lo; d <= d_hi; ++d) {
        for (std::size_t m = m_lo; m <= m_hi; ++m) {
            for (std::size_t gp = 0; gp < purity_points; ++gp) {
                const double lo = 1.0 / static_cast<double>(d);
                const double purity =
                    purity_points == 1
                        ? 1.0
                        : lo + (1.0 - lo) * static_cast<double>(gp) /
                                   static_cast<double>(purity_points - 1);
                const BoundInputs in = BoundInputs::state_dependent(m, d, purity);
                ScanRow row;
                row.d = d;
                row.M = m;
                row.purity = purity;
                const ClassicBounds classic = classic_bounds(m, d);
                row.maassen_uffink = classic.maassen_uffink;
                row.grouped_half_log = classic.grouped;
                row.theorem2 = theorem2_bound(in);
                const SimpleBounds simple = simple_bounds(in);
                row.simple_state_dep = simple.state_dep;
                row.simple_state_indep = simple.state_indep;
                const Prop2Result prop2 = prop2_bound(m, d);
                row.prop2_closed = prop2.closed_form;
                row.prop2_rewritten = prop2.rewritten;
                if (m == d + 1) row.sanchez_ruiz = sanchez_ruiz_bound(d);
                if (d == 2 && m == 3) row.qubit_special = qubit_special_bound(purity);
                const RenyiTsallisBounds rt = renyi_tsallis_bounds(in);
                row.renyi_sum = rt.renyi_sum_bound;
                row.tsallis_sum = rt.tsallis_sum_bound;

                std::vector<std::pair<std::string, double>> candidates = {
                    {"theorem2", row.theorem2},
                    {"prop2_closed", row.prop2_closed},
                };
                if (row.sanchez_ruiz) candidates.emplace_back("sanchez_ruiz", *row.sanchez_ruiz);
                if (row.qubit_special) {
                    candidates.emplace_back("qubit_special", *row.qubit_special);
                }
                candidates.emplace_back("simple_state_dep", row.simple_state_dep);
                candidates.emplace_back("simple_state_indep", row.simple_state_indep);
                if (m >= 2) candidates.emplace_back("grouped_half_log", row.grouped_half_log);
                if (row.maassen_uffink) {
                    candidates.emplace_back("maassen_uffink", *row.maassen_uffink);
                }
                row.strongest = candidates.front().first;
                double best = candidates.front().second;
                for (const auto& [name, value] : candidates) {
                    if (value > best) {
                        best = value;
                        row.strongest = name;
                    }
                }
                const double dd = static_cast<double>(d);
                row.dominance_predicate = static_cast<double>(m) >
                                          (purity - 1.0 / dd) * dd / (std::sqrt(dd) - 1.0);
                row.dominance_observed = row.simple_state_dep > row.grouped_half_log;
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

}  // namespace mubent
