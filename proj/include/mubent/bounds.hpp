#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mubent/entropy.hpp"
#include "mubent/measure.hpp"

namespace mubent {

namespace detail {

// k log2 k with the k = 0 term defined as 0.
inline double k_log2_k(double k) { return k <= 0.0 ? 0.0 : k * std::log2(k); }

}  // namespace detail

enum class CoincidenceVariant { state_dependent, state_independent, custom };

inline const char* to_string(CoincidenceVariant v) {
    switch (v) {
        case CoincidenceVariant::state_dependent: return "state_dependent";
        case CoincidenceVariant::state_independent: return "state_independent";
        case CoincidenceVariant::custom: return "custom";
    }
    return "?";
}

// (M, d, C) triple feeding the coincidence-based bounds. C must upper-bound
// the total index of coincidence; feasibility M/d <= C <= M is enforced (each
// row has coincidence >= 1/d, and C <= M keeps floor(M/C) >= 1).
struct BoundInputs {
    std::size_t M = 0;
    std::size_t d = 0;
    double C = 0.0;
    CoincidenceVariant variant = CoincidenceVariant::custom;

    static BoundInputs state_dependent(std::size_t M, std::size_t d, double purity) {
        const double c = purity + (static_cast<double>(M) - 1.0) / static_cast<double>(d);
        return validated({M, d, c, CoincidenceVariant::state_dependent});
    }

    static BoundInputs state_independent(std::size_t M, std::size_t d) {
        const double c = 1.0 + (static_cast<double>(M) - 1.0) / static_cast<double>(d);
        return validated({M, d, c, CoincidenceVariant::state_independent});
    }

    static BoundInputs custom(std::size_t M, std::size_t d, double c) {
        return validated({M, d, c, CoincidenceVariant::custom});
    }

    static BoundInputs validated(BoundInputs in) {
        if (in.M < 1 || in.d < 2) {
            throw std::invalid_argument("BoundInputs: need M >= 1 and d >= 2");
        }
        const double m = static_cast<double>(in.M);
        const double slack = 1e-12 * std::max(1.0, m);
        if (in.C < m / static_cast<double>(in.d) - slack) {
            throw std::invalid_argument("BoundInputs: C = " + detail::fmt_double(in.C) +
                                        " below the feasible floor M/d");
        }
        if (in.C > m + slack) {
            throw std::invalid_argument("BoundInputs: C = " + detail::fmt_double(in.C) +
                                        " above the feasible ceiling M");
        }
        return in;
    }
};

// f(k) = (M - kC)(k+1) log2(k+1) - (M - (k+1)C) k log2 k, the family of
// entropy-sum lower bounds indexed by the integer k.
inline double f_of_k(std::size_t M, double C, int k) {
    if (k < 1) {
        throw std::invalid_argument("f_of_k: k must be >= 1");
    }
    const double m = static_cast<double>(M);
    const double kk = static_cast<double>(k);
    return (m - kk * C) * (kk + 1.0) * std::log2(kk + 1.0) -
           (m - (kk + 1.0) * C) * detail::k_log2_k(kk);
}

struct ArgmaxResult {
    int k_star = 0;
    double value = 0.0;
};

// Discrete maximizer of f over 1..d-1 in closed form: k* = floor(M/C) clamped
// to d-1. The clamp loses nothing: C >= M/d forces M/C <= d, and at M/C = d
// the maximum is attained at both endpoints, so f(d-1) = f(d).
inline ArgmaxResult appendix_argmax(const BoundInputs& in) {
    const double ratio = static_cast<double>(in.M) / in.C;
    const int k_floor = static_cast<int>(std::floor(ratio));
    const int k_star = std::max(1, std::min(k_floor, static_cast<int>(in.d) - 1));
    return {k_star, f_of_k(in.M, in.C, k_star)};
}

// a C (K+1) log2(K+1) + (1-a) C K log2 K with K = floor(M/C), a = M/C - K;
// evaluated as f(d-1) when K exceeds d-1 (equivalent where reachable).
inline double theorem2_bound(const BoundInputs& in) {
    const double ratio = static_cast<double>(in.M) / in.C;
    const double k_floor = std::floor(ratio);
    if (k_floor > static_cast<double>(in.d) - 1.0) {
        return f_of_k(in.M, in.C, static_cast<int>(in.d) - 1);
    }
    const double a = ratio - k_floor;
    return a * in.C * detail::k_log2_k(k_floor + 1.0) +
           (1.0 - a) * in.C * detail::k_log2_k(k_floor);
}

// Qubit case d = 2, M = 3: sum of entropies >= 4 - 2 Tr(rho^2).
inline double qubit_special_bound(double purity) {
    if (purity < 0.5 - 1e-12 || purity > 1.0 + 1e-12) {
        throw std::invalid_argument("qubit_special_bound: purity " + detail::fmt_double(purity) +
                                    " outside [1/2, 1]");
    }
    return 4.0 - 2.0 * purity;
}

struct SimpleBounds {
    double state_dep = 0.0;    // M log2(M / C)
    double state_indep = 0.0;  // M log2(M d / (d + M - 1))
};

inline SimpleBounds simple_bounds(const BoundInputs& in) {
    const double m = static_cast<double>(in.M);
    const double d = static_cast<double>(in.d);
    return {m * std::log2(m / in.C), m * std::log2(m * d / (d + m - 1.0))};
}

struct Prop2Result {
    double closed_form = 0.0;  // interpolated-K form
    double rewritten = 0.0;    // M log2 K + correction form; algebraically identical
};

// State-independent bound with C = 1 + (M-1)/d folded in:
// K = floor(Md / (d+M-1)), a the fractional part.
inline Prop2Result prop2_bound(std::size_t M, std::size_t d) {
    if (M < 1 || d < 2) {
        throw std::invalid_argument("prop2_bound: need M >= 1 and d >= 2");
    }
    const double m = static_cast<double>(M);
    const double dd = static_cast<double>(d);
    const double c0 = (dd + m - 1.0) / dd;
    const double ratio = m * dd / (dd + m - 1.0);
    const double k = std::floor(ratio);
    const double a = ratio - k;
    Prop2Result out;
    out.closed_form = c0 * (a * detail::k_log2_k(k + 1.0) + (1.0 - a) * detail::k_log2_k(k));
    out.rewritten = m * std::log2(k) +
                    (k + 1.0) * (m - k * c0) * std::log2(1.0 + 1.0 / k);
    return out;
}

// Complete-set bound for M = d + 1 (odd/even closed forms).
inline double sanchez_ruiz_bound(std::size_t d) {
    const double dd = static_cast<double>(d);
    if (d % 2 == 1) {
        return (dd + 1.0) * std::log2((dd + 1.0) / 2.0);
    }
    return (dd / 2.0) * std::log2(dd / 2.0) + (dd / 2.0 + 1.0) * std::log2(dd / 2.0 + 1.0);
}

struct ClassicBounds {
    std::optional<double> maassen_uffink;  // log2 d, for the MUB pair case
    double grouped = 0.0;                  // (M/2) log2 d
};

inline ClassicBounds classic_bounds(std::size_t M, std::size_t d) {
    ClassicBounds out;
    const double dd = static_cast<double>(d);
    out.grouped = 0.5 * static_cast<double>(M) * std::log2(dd);
    if (M == 2) {
        out.maassen_uffink = std::log2(dd);
    }
    return out;
}

struct RenyiTsallisBounds {
    double renyi_sum_bound = 0.0;    // -M log2(C/M)
    double tsallis_sum_bound = 0.0;  // M - C
};

inline RenyiTsallisBounds renyi_tsallis_bounds(const BoundInputs& in) {
    const double m = static_cast<double>(in.M);
    return {-m * std::log2(in.C / m), m - in.C};
}

inline double separable_bound(std::size_t M, std::size_t dA, std::size_t dB) {
    return prop2_bound(M, dA).rewritten + prop2_bound(M, dB).rewritten;
}

struct MarginEntry {
    std::string name;
    double bound = 0.0;
    double margin = 0.0;  // measured sum minus bound
};

// Every bound in one place for a concrete (rho, MubSet) pair, with the
// measured entropy sums they constrain.
struct BoundReport {
    BoundInputs inputs;
    std::optional<double> maassen_uffink;
    std::optional<double> grouped_half_log;
    double theorem2 = 0.0;
    double simple_state_dep = 0.0;
    double simple_state_indep = 0.0;
    double prop2_closed = 0.0;
    double prop2_rewritten = 0.0;
    std::optional<double> sanchez_ruiz;
    std::optional<double> qubit_special;
    double renyi_sum = 0.0;
    double tsallis_sum = 0.0;
    double measured_shannon_sum = 0.0;
    double measured_renyi2_sum = 0.0;
    double measured_tsallis2_sum = 0.0;
    std::vector<MarginEntry> margins;
};

inline BoundReport evaluate_bounds(const DensityMatrix& rho, const MubSet& s) {
    const std::size_t m_count = s.count();
    const std::size_t d = s.dim();
    const ProbabilityTable table = probability_table(rho, s);

    BoundReport report;
    report.inputs = BoundInputs::state_dependent(m_count, d, rho.purity());

    for (std::size_t m = 0; m < m_count; ++m) {
        const auto row = table.row(m);
        report.measured_shannon_sum += shannon(row);
        report.measured_renyi2_sum += renyi(row, 2.0);
        report.measured_tsallis2_sum += tsallis(row, 2.0);
    }

    const ClassicBounds classic = classic_bounds(m_count, d);
    if (m_count >= 2) {
        report.grouped_half_log = classic.grouped;
        report.maassen_uffink = classic.maassen_uffink;
    }
    report.theorem2 = theorem2_bound(report.inputs);
    const SimpleBounds simple = simple_bounds(report.inputs);
    report.simple_state_dep = simple.state_dep;
    report.simple_state_indep = simple.state_indep;
    const Prop2Result prop2 = prop2_bound(m_count, d);
    report.prop2_closed = prop2.closed_form;
    report.prop2_rewritten = prop2.rewritten;
    if (m_count == d + 1) {
        report.sanchez_ruiz = sanchez_ruiz_bound(d);
    }
    if (d == 2 && m_count == 3) {
        report.qubit_special = qubit_special_bound(rho.purity());
    }
    const RenyiTsallisBounds rt = renyi_tsallis_bounds(report.inputs);
    report.renyi_sum = rt.renyi_sum_bound;
    report.tsallis_sum = rt.tsallis_sum_bound;

    auto add_margin = [&](const std::string& name, double bound, double measured) {
        report.margins.push_back({name, bound, measured - bound});
    };
    if (report.maassen_uffink) {
        add_margin("maassen_uffink", *report.maassen_uffink, report.measured_shannon_sum);
    }
    if (report.grouped_half_log) {
        add_margin("grouped_half_log", *report.grouped_half_log, report.measured_shannon_sum);
    }
    add_margin("theorem2", report.theorem2, report.measured_shannon_sum);
    add_margin("simple_state_dep", report.simple_state_dep, report.measured_shannon_sum);
    add_margin("simple_state_indep", report.simple_state_indep, report.measured_shannon_sum);
    add_margin("prop2_closed", report.prop2_closed, report.measured_shannon_sum);
    add_margin("prop2_rewritten", report.prop2_rewritten, report.measured_shannon_sum);
    if (report.sanchez_ruiz) {
        add_margin("sanchez_ruiz", *report.sanchez_ruiz, report.measured_shannon_sum);
    }
    if (report.qubit_special) {
        add_margin("qubit_special", *report.qubit_special, report.measured_shannon_sum);
    }
    add_margin("renyi_sum", report.renyi_sum, report.measured_renyi2_sum);
    add_margin("tsallis_sum", report.tsallis_sum, report.measured_tsallis2_sum);
    return report;
}

struct BoundComparison {
    std::string strongest;
    double strongest_value = 0.0;
    // The paper's dominance criterion for the simple state-dependent bound
    // over the (M/2) log2 d grouping: M > (Tr rho^2 - 1/d) d / (sqrt d - 1).
    std::optional<bool> dominance_predicate;
    std::optional<bool> dominance_observed;
};

inline BoundComparison compare_bounds(const BoundInputs& in, const BoundReport& report) {
    BoundComparison out;
    std::vector<std::pair<std::string, double>> candidates;
    candidates.emplace_back("theorem2", report.theorem2);
    candidates.emplace_back("prop2_closed", report.prop2_closed);
    if (report.sanchez_ruiz) candidates.emplace_back("sanchez_ruiz", *report.sanchez_ruiz);
    if (report.qubit_special) candidates.emplace_back("qubit_special", *report.qubit_special);
    candidates.emplace_back("simple_state_dep", report.simple_state_dep);
    candidates.emplace_back("simple_state_indep", report.simple_state_indep);
    if (report.grouped_half_log) {
        candidates.emplace_back("grouped_half_log", *report.grouped_half_log);
    }
    if (report.maassen_uffink) {
        candidates.emplace_back("maassen_uffink", *report.maassen_uffink);
    }
    out.strongest = candidates.front().first;
    out.strongest_value = candidates.front().second;
    for (const auto& [name, value] : candidates) {
        if (value > out.strongest_value) {
            out.strongest = name;
            out.strongest_value = value;
        }
    }
    if (in.variant == CoincidenceVariant::state_dependent && report.grouped_half_log) {
        const double m = static_cast<double>(in.M);
        const double d = static_cast<double>(in.d);
        const double purity = in.C - (m - 1.0) / d;
        out.dominance_predicate = m > (purity - 1.0 / d) * d / (std::sqrt(d) - 1.0);
        out.dominance_observed = report.simple_state_dep > *report.grouped_half_log;
    }
    return out;
}

}  // namespace mubent
