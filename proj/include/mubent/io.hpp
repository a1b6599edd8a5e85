#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mubent/bounds.hpp"
#include "mubent/harness.hpp"
#include "mubent/linalg.hpp"
#include "mubent/measure.hpp"
#include "mubent/mub.hpp"

namespace mubent::io {

using nlohmann::json;

inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline std::string hex_u64(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(v));
    return buf;
}

// Matrix file format: {"rows": n, "cols": n, "re": [...], "im": [...]},
// row-major.
inline json matrix_to_json(const ComplexMatrix& m) {
    json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    std::vector<double> re, im;
    re.reserve(m.data().size());
    im.reserve(m.data().size());
    for (const cplx& z : m.data()) {
        re.push_back(z.real());
        im.push_back(z.imag());
    }
    j["re"] = std::move(re);
    j["im"] = std::move(im);
    return j;
}

inline ComplexMatrix matrix_from_json(const json& j) {
    const std::size_t rows = j.at("rows").get<std::size_t>();
    const std::size_t cols = j.at("cols").get<std::size_t>();
    const std::vector<double> re = j.at("re").get<std::vector<double>>();
    const std::vector<double> im = j.at("im").get<std::vector<double>>();
    if (re.size() != rows * cols || im.size() != rows * cols) {
        throw std::invalid_argument("matrix_from_json: re/im length does not match rows*cols");
    }
    std::vector<cplx> entries(rows * cols);
    for (std::size_t i = 0; i < entries.size(); ++i) {
        entries[i] = cplx(re[i], im[i]);
    }
    return ComplexMatrix(rows, cols, std::move(entries));
}

// MubSet file format: {"dim": d, "bases": [matrix, ...]} plus optional
// metadata.
inline json mub_to_json(const MubSet& s) {
    json j;
    j["dim"] = s.dim();
    json bases = json::array();
    for (const Basis& b : s.bases()) {
        bases.push_back(matrix_to_json(b.vectors()));
    }
    j["bases"] = std::move(bases);
    j["unbiasedness_tol"] = s.unbiasedness_tol();
    if (!s.metadata().construction.empty()) {
        json meta;
        meta["construction"] = s.metadata().construction;
        if (s.metadata().seeded) {
            meta["seed"] = s.metadata().seed;
        }
        j["metadata"] = std::move(meta);
    }
    return j;
}

inline MubSet mub_from_json(const json& j, double tol = 1e-9) {
    const std::size_t d = j.at("dim").get<std::size_t>();
    std::vector<Basis> bases;
    for (const json& bj : j.at("bases")) {
        ComplexMatrix m = matrix_from_json(bj);
        if (m.rows() != d) {
            throw std::invalid_argument("mub_from_json: basis dimension != dim");
        }
        bases.emplace_back(std::move(m), std::max(tol, 1e-10));
    }
    MubMetadata meta;
    if (j.contains("metadata")) {
        meta.construction = j["metadata"].value("construction", std::string{});
        if (j["metadata"].contains("seed")) {
            meta.seed = j["metadata"]["seed"].get<std::uint64_t>();
            meta.seeded = true;
        }
    }
    return MubSet(std::move(bases), tol, std::move(meta));
}

inline json probability_table_to_json(const ProbabilityTable& t) {
    json j;
    j["M"] = t.bases();
    j["d"] = t.dim();
    json rows = json::array();
    for (std::size_t m = 0; m < t.bases(); ++m) {
        const auto row = t.row(m);
        rows.push_back(std::vector<double>(row.begin(), row.end()));
    }
    j["p"] = std::move(rows);
    j["source"] = {{"state_hash", hex_u64(t.source().state_hash)},
                   {"mub_hash", hex_u64(t.source().mub_hash)}};
    return j;
}

// CSV export, header "basis,outcome,probability"; indices are 1-based to
// match the basis-1 reference convention.
inline std::string probability_table_to_csv(const ProbabilityTable& t) {
    std::string out = "basis,outcome,probability\n";
    for (std::size_t m = 0; m < t.bases(); ++m) {
        for (std::size_t i = 0; i < t.dim(); ++i) {
            out += std::to_string(m + 1) + "," + std::to_string(i + 1) + "," +
                   format_double(t.at(m, i)) + "\n";
        }
    }
    return out;
}

inline json bound_inputs_to_json(const BoundInputs& in) {
    return {{"M", in.M}, {"d", in.d}, {"C", in.C}, {"variant", to_string(in.variant)}};
}

inline json bound_report_to_json(const BoundReport& r) {
    json j;
    j["inputs"] = bound_inputs_to_json(r.inputs);
    if (r.maassen_uffink) j["maassen_uffink"] = *r.maassen_uffink;
    if (r.grouped_half_log) j["grouped_half_log"] = *r.grouped_half_log;
    j["theorem2"] = r.theorem2;
    j["simple_state_dep"] = r.simple_state_dep;
    j["simple_state_indep"] = r.simple_state_indep;
    j["prop2_closed"] = r.prop2_closed;
    j["prop2_rewritten"] = r.prop2_rewritten;
    if (r.sanchez_ruiz) j["sanchez_ruiz"] = *r.sanchez_ruiz;
    if (r.qubit_special) j["qubit_special"] = *r.qubit_special;
    j["renyi_sum"] = r.renyi_sum;
    j["tsallis_sum"] = r.tsallis_sum;
    j["measured_shannon_sum"] = r.measured_shannon_sum;
    j["measured_renyi2_sum"] = r.measured_renyi2_sum;
    j["measured_tsallis2_sum"] = r.measured_tsallis2_sum;
    json margins;
    for (const MarginEntry& m : r.margins) {
        margins[m.name] = m.margin;
    }
    j["margins"] = std::move(margins);
    return j;
}

inline std::string bound_report_to_csv(const BoundReport& r) {
    std::string out = "name,value,margin\n";
    for (const MarginEntry& m : r.margins) {
        out += m.name + "," + format_double(m.bound) + "," + format_double(m.margin) + "\n";
    }
    return out;
}

inline json campaign_config_to_json(const CampaignConfig& cfg) {
    return {{"d", cfg.d},
            {"M", cfg.M},
            {"n_samples", cfg.n_samples},
            {"seed", cfg.seed},
            {"ensemble", to_string(cfg.ensemble)},
            {"rank", cfg.rank},
            {"tolerance", cfg.tolerance}};
}

inline json histogram_to_json(const Histogram& h) {
    return {{"name", h.name}, {"bin_edges", h.bin_edges}, {"counts", h.counts}};
}

inline json campaign_summary_to_json(const CampaignSummary& s) {
    json j;
    j["config"] = campaign_config_to_json(s.config);
    j["min_shannon_sum"] = s.min_shannon_sum;
    j["violations_total"] = s.violations_total;
    json ineq;
    for (const auto& [name, stat] : s.inequalities) {
        ineq[name] = {{"min_margin", stat.min_margin}, {"violations", stat.violations}};
    }
    j["inequalities"] = std::move(ineq);
    json hists = json::array();
    for (const Histogram& h : s.histograms) {
        hists.push_back(histogram_to_json(h));
    }
    j["histograms"] = std::move(hists);
    return j;
}

inline std::string campaign_samples_to_csv(const CampaignSummary& s) {
    std::string out = "sample,purity,total_ic,shannon_sum,renyi2_sum,tsallis2_sum\n";
    for (const SampleRow& row : s.samples) {
        out += std::to_string(row.index) + "," + format_double(row.purity) + "," +
               format_double(row.total_ic) + "," + format_double(row.shannon_sum) + "," +
               format_double(row.renyi2_sum) + "," + format_double(row.tsallis2_sum) + "\n";
    }
    return out;
}

inline json tightness_result_to_json(const TightnessResult& r) {
    json j;
    j["best_value"] = r.best_value;
    j["bound_value"] = r.bound_value;
    j["gap"] = r.gap;
    j["iterations"] = r.iterations;
    j["restarts"] = r.restarts;
    j["best_state"] = matrix_to_json(r.best_state.matrix());
    j["best_value_trace"] = r.best_value_trace;
    return j;
}

inline json separability_summary_to_json(const SeparabilitySummary& s) {
    json j;
    j["dA"] = s.dim_a;
    j["dB"] = s.dim_b;
    j["M"] = s.M;
    j["n_samples"] = s.n_samples;
    j["n_product_terms"] = s.n_product_terms;
    j["seed"] = s.seed;
    j["bound"] = s.bound;
    j["separable_min_sum"] = s.separable_min_sum;
    j["violations"] = s.violations;
    json probes = json::array();
    for (const SeparabilityProbe& p : s.probes) {
        probes.push_back({{"name", p.name}, {"shannon_sum", p.shannon_sum},
                          {"flagged", p.flagged}});
    }
    j["probes"] = std::move(probes);
    return j;
}

inline const char* kScanCsvHeader =
    "d,M,purity,maassen_uffink,grouped_half_log,theorem2,simple_state_dep,"
    "simple_state_indep,prop2_closed,prop2_rewritten,sanchez_ruiz,qubit_special,"
    "renyi_sum,tsallis_sum,strongest,dominance_predicate,dominance_observed";

inline std::string scan_rows_to_csv(const std::vector<ScanRow>& rows) {
    std::string out = std::string(kScanCsvHeader) + "\n";
    auto opt_field = [](const std::optional<double>& v) {
        return v ? format_double(*v) : std::string{};
    };
    for (const ScanRow& r : rows) {
        out += std::to_string(r.d) + "," + std::to_string(r.M) + "," +
               format_double(r.purity) + "," + opt_field(r.maassen_uffink) + "," +
               format_double(r.grouped_half_log) + "," + format_double(r.theorem2) + "," +
               format_double(r.simple_state_dep) + "," + format_double(r.simple_state_indep) +
               "," + format_double(r.prop2_closed) + "," + format_double(r.prop2_rewritten) +
               "," + opt_field(r.sanchez_ruiz) + "," + opt_field(r.qubit_special) + "," +
               format_double(r.renyi_sum) + "," + format_double(r.tsallis_sum) + "," +
               r.strongest + "," + (r.dominance_predicate ? "true" : "false") + "," +
               (r.dominance_observed ? "true" : "false") + "\n";
    }
    return out;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path);
    }
    out << content;
    if (!out) {
        throw std::runtime_error("write failed: " + path);
    }
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open for reading: " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline json read_json_file(const std::string& path) { return json::parse(read_file(path)); }

inline void write_json_file(const std::string& path, const json& j) {
    write_file(path, j.dump(2) + "\n");
}

}  // namespace mubent::io
