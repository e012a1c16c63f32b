// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "csqp/metrics.hpp"

#include "csqp/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cstdio>
#include <map>
#include <ostream>
#include <string>

namespace csqp {

QuerySummary summarize(const RankedList& ranked) {
    QuerySummary q;
    q.query_id = ranked.query_id;
    q.class_label = ranked.query_label;
    q.gallery_size = ranked.entries.size();
    for (std::size_t pos = 0; pos < ranked.entries.size(); ++pos) {
        if (ranked.entries[pos].relevant) {
            q.relevant_ranks.push_back(static_cast<std::uint32_t>(pos + 1));
        }
    }
    q.num_relevant = q.relevant_ranks.size();
    return q;
}

std::pair<double, double> precision_recall_at(const QuerySummary& q, std::size_t n) {
    if (n < 1 || n > q.gallery_size) {
        throw ConfigError("cutoff " + std::to_string(n) + " outside [1," +
                          std::to_string(q.gallery_size) + "]");
    }
    if (q.num_relevant == 0) {
        throw ConfigError("query " + q.query_id +
                          " has no relevant gallery item; precision/recall undefined");
    }
    const auto hits = static_cast<std::size_t>(
        std::upper_bound(q.relevant_ranks.begin(), q.relevant_ranks.end(), n) -
        q.relevant_ranks.begin());
    return {static_cast<double>(hits) / static_cast<double>(n),
            static_cast<double>(hits) / static_cast<double>(q.num_relevant)};
}

std::pair<double, double> precision_recall_at(const RankedList& ranked, std::size_t n) {
    return precision_recall_at(summarize(ranked), n);
}

ArpArrF arp_arr_fscore(std::span<const QuerySummary> queries, std::size_t n) {
    if (queries.empty()) {
        throw ConfigError("no queries to average");
    }
    double sum_p = 0.0;
    double sum_r = 0.0;
    // Class means feed the per-class F-score.
    std::map<std::string, std::array<double, 3>> per_class; // label -> {sum_p, sum_r, count}
    for (const QuerySummary& q : queries) {
        const auto [p, r] = precision_recall_at(q, n);
        sum_p += p;
        sum_r += r;
        auto& acc = per_class[q.class_label];
        acc[0] += p;
        acc[1] += r;
        acc[2] += 1.0;
    }
    ArpArrF out;
    out.arp = sum_p / static_cast<double>(queries.size());
    out.arr = sum_r / static_cast<double>(queries.size());
    double f_sum = 0.0;
    for (const auto& [label, acc] : per_class) {
        const double p = acc[0] / acc[2];
        const double r = acc[1] / acc[2];
        f_sum += (p + r > 0.0) ? 2.0 * p * r / (p + r) : 0.0;
    }
    out.fscore = f_sum / static_cast<double>(per_class.size());
    out.fscore_global =
        (out.arp + out.arr > 0.0) ? 2.0 * out.arp * out.arr / (out.arp + out.arr) : 0.0;
    return out;
}

std::string_view to_string(AnmrrKPolicy policy) {
    switch (policy) {
    case AnmrrKPolicy::MaxClassSize:
        return "max-class-size";
    case AnmrrKPolicy::TwiceNg:
        return "2ng";
    case AnmrrKPolicy::Fixed:
        return "fixed";
    }
    return "?";
}

double nmrr(const QuerySummary& q, std::size_t k) {
    if (q.num_relevant == 0) {
        throw ConfigError("query " + q.query_id + " has no relevant gallery item");
    }
    if (k < q.num_relevant) {
        throw ConfigError("anmrr cutoff K=" + std::to_string(k) + " below NG=" +
                          std::to_string(q.num_relevant) + " for query " + q.query_id);
    }
    const double penalty = 1.25 * static_cast<double>(k);
    double rank_sum = 0.0;
    for (std::uint32_t rank : q.relevant_ranks) {
        rank_sum += (rank <= k) ? static_cast<double>(rank) : penalty;
    }
    const double ng = static_cast<double>(q.num_relevant);
    const double avr = rank_sum / ng;
    const double mrr = avr - 0.5 - ng / 2.0;
    const double denom = penalty - 0.5 - ng / 2.0;
    return mrr / denom;
}

namespace {

std::size_t k_for(const QuerySummary& q, const AnmrrConfig& config) {
    switch (config.policy) {
    case AnmrrKPolicy::MaxClassSize:
        if (config.max_class_size == 0) {
            throw ConfigError("anmrr max-class-size policy needs the class size");
        }
        return config.max_class_size;
    case AnmrrKPolicy::TwiceNg:
        return 2 * q.num_relevant;
    case AnmrrKPolicy::Fixed:
        if (config.fixed_k == 0) {
            throw ConfigError("anmrr fixed policy needs a positive K");
        }
        return config.fixed_k;
    }
    throw ConfigError("unknown anmrr policy");
}

} // namespace

double anmrr(std::span<const QuerySummary> queries, const AnmrrConfig& config) {
    if (queries.empty()) {
        throw ConfigError("no queries to average");
    }
    double sum = 0.0;
    for (const QuerySummary& q : queries) {
        sum += nmrr(q, k_for(q, config));
    }
    return sum / static_cast<double>(queries.size());
}

RetrievalReport retrieval_report(std::span<const QuerySummary> queries,
                                 std::size_t n_max, const AnmrrConfig& config) {
    if (n_max < 1) {
        throw ConfigError("n_max must be at least 1");
    }
    RetrievalReport report;
    report.n_max = n_max;
    report.per_rank.reserve(n_max);
    for (std::size_t n = 1; n <= n_max; ++n) {
        const ArpArrF v = arp_arr_fscore(queries, n);
        report.per_rank.push_back({n, v.arp, v.arr, v.fscore, v.fscore_global});
    }
    report.anmrr = anmrr(queries, config);
    return report;
}

RecognitionReport recognition_report(std::span<const QuerySummary> queries,
                                     std::size_t max_rank) {
    if (queries.empty()) {
        throw ConfigError("no probes to evaluate");
    }
    if (max_rank < 1) {
        throw ConfigError("max_rank must be at least 1");
    }
    RecognitionReport report;
    report.total_probes = queries.size();
    std::vector<std::size_t> first_match_at_or_below(max_rank, 0);
    for (const QuerySummary& q : queries) {
        if (q.num_relevant == 0) {
            throw ConfigError("probe " + q.query_id +
                              " has no relevant gallery item; exclude it upstream");
        }
        const std::uint32_t first = q.relevant_ranks.front();
        if (first == 1) {
            ++report.matches;
        }
        if (first <= max_rank) {
            ++first_match_at_or_below[first - 1];
        }
    }
    report.recognition_rate =
        100.0 * static_cast<double>(report.matches) / static_cast<double>(report.total_probes);
    report.cmc.resize(max_rank);
    std::size_t cumulative = 0;
    for (std::size_t r = 0; r < max_rank; ++r) {
        cumulative += first_match_at_or_below[r];
        report.cmc[r] = static_cast<double>(cumulative) / static_cast<double>(report.total_probes);
    }
    return report;
}

void write_retrieval_csv(std::ostream& out, const RetrievalReport& report) {
    out << "rank,arp,arr,fscore\n";
    char line[128];
    for (const RetrievalRow& row : report.per_rank) {
        std::snprintf(line, sizeof(line), "%zu,%.6f,%.6f,%.6f\n", row.rank, row.arp,
                      row.arr, row.fscore);
        out << line;
    }
}

std::span<const ReferenceResult> reference_results() {
    static constexpr std::array<ReferenceResult, 3> kReference = {{
        {"casia-face-v5", 58.03},
        {"color-feret", 91.0},
        {"lfw", 53.0},
    }};
    return kReference;
}

void write_summary_json(std::ostream& out, const RetrievalReport& retrieval,
                        const RecognitionReport& recognition,
                        const SummaryContext& context) {
    nlohmann::ordered_json j;
    j["tool"] = "csqpbench";
    j["protocol"] = "leave-one-out, 1-NN, chi-square";

    nlohmann::ordered_json config;
    config["descriptor"] = context.descriptor;
    config["normalization"] = context.normalization;
    config["anmrr_k_policy"] = context.anmrr_k_policy;
    if (context.anmrr_fixed_k) {
        config["anmrr_fixed_k"] = *context.anmrr_fixed_k;
    }
    config["csltp_threshold"] = context.csltp_threshold;
    config["n_max"] = retrieval.n_max;
    config["dataset_root"] = context.dataset_root;
    config["cache"] = context.cache_path;
    config["dataset_fingerprint"] = context.dataset_fingerprint;
    j["config"] = config;

    nlohmann::ordered_json dataset;
    dataset["items"] = context.items;
    dataset["classes"] = context.classes;
    dataset["evaluated_probes"] = recognition.total_probes;
    dataset["excluded_singleton_probes"] = recognition.excluded_probes.size();
    dataset["excluded_ids"] = recognition.excluded_probes;
    j["dataset"] = dataset;

    double max_arp = 0.0;
    double max_arr = 0.0;
    for (const RetrievalRow& row : retrieval.per_rank) {
        max_arp = std::max(max_arp, row.arp);
        max_arr = std::max(max_arr, row.arr);
    }
    nlohmann::ordered_json ret;
    ret["anmrr"] = retrieval.anmrr;
    ret["max_arp_percent"] = 100.0 * max_arp;
    ret["max_arr_percent"] = 100.0 * max_arr;
    if (!retrieval.per_rank.empty()) {
        ret["fscore_per_class_at_n_max"] = retrieval.per_rank.back().fscore;
        ret["fscore_global_at_n_max"] = retrieval.per_rank.back().fscore_global;
    }
    j["retrieval"] = ret;

    nlohmann::ordered_json rec;
    rec["recognition_rate_percent"] = recognition.recognition_rate;
    rec["matches"] = recognition.matches;
    rec["probes"] = recognition.total_probes;
    rec["cmc"] = recognition.cmc;
    j["recognition"] = rec;

    nlohmann::ordered_json refs;
    refs["note"] = "Reported CSQP max ARP on the licensed face databases; "
                   "runs on user-supplied copies should land within the advisory band.";
    refs["advisory_band_percent"] = kReferenceAdvisoryBandPercent;
    nlohmann::ordered_json ref_values;
    for (const ReferenceResult& r : reference_results()) {
        ref_values[r.database] = r.max_arp_percent;
    }
    refs["max_arp_percent"] = ref_values;
    j["reference_results"] = refs;

    out << j.dump(2) << "\n";
}

} // namespace csqp
