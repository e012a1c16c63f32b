// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "csqp/matching.hpp"

namespace csqp {

/// Everything the retrieval and recognition metrics need from one query's
/// ranked list: how many gallery items were relevant and at which 1-based
/// ranks they appeared.
struct QuerySummary {
    std::string query_id;
    std::string class_label;
    std::size_t gallery_size = 0;
    std::size_t num_relevant = 0;              // NG(q)
    std::vector<std::uint32_t> relevant_ranks; // ascending, 1-based
};

QuerySummary summarize(const RankedList& ranked);

/// Precision and recall within the top n entries. Requires 1 <= n <= list
/// length and at least one relevant gallery item; queries with no relevant
/// item are undefined and must be excluded upstream.
std::pair<double, double> precision_recall_at(const RankedList& ranked, std::size_t n);
std::pair<double, double> precision_recall_at(const QuerySummary& q, std::size_t n);

struct ArpArrF {
    double arp = 0.0;
    double arr = 0.0;
    double fscore = 0.0;        // harmonic mean per class, then averaged over classes
    double fscore_global = 0.0; // harmonic mean of ARP and ARR, for comparison
};

/// Means of precision and recall at cutoff n over all queries, plus F-scores.
/// Classes whose precision and recall are both zero contribute F = 0.
ArpArrF arp_arr_fscore(std::span<const QuerySummary> queries, std::size_t n);

/// Cutoff policy for the normalized modified retrieval rank.
enum class AnmrrKPolicy {
    MaxClassSize, // K(q) = size of the largest class in the dataset
    TwiceNg,      // K(q) = 2 * NG(q)
    Fixed,        // K(q) = fixed_k for every query
};

struct AnmrrConfig {
    AnmrrKPolicy policy = AnmrrKPolicy::MaxClassSize;
    std::size_t max_class_size = 0; // required for MaxClassSize
    std::size_t fixed_k = 0;        // required for Fixed
};

std::string_view to_string(AnmrrKPolicy policy);

/// Average normalized modified retrieval rank over all queries (MPEG-7 form):
/// ranks above K(q) are penalized as 1.25 K(q); AVR is the mean penalized
/// rank of the NG(q) relevant items; NMRR normalizes the mean retrieval rank
/// into [0, 1], 0 meaning all relevant items occupy the top NG ranks.
/// Throws ConfigError when a policy yields K(q) < NG(q).
double anmrr(std::span<const QuerySummary> queries, const AnmrrConfig& config);

/// Single-query NMRR, exposed for direct checks against the formula.
double nmrr(const QuerySummary& q, std::size_t k);

struct RetrievalRow {
    std::size_t rank = 0;
    double arp = 0.0;
    double arr = 0.0;
    double fscore = 0.0;
    double fscore_global = 0.0;
};

struct RetrievalReport {
    std::vector<RetrievalRow> per_rank; // rows for n = 1..n_max
    double anmrr = 0.0;
    std::size_t n_max = 0;
};

RetrievalReport retrieval_report(std::span<const QuerySummary> queries,
                                 std::size_t n_max, const AnmrrConfig& config);

struct RecognitionReport {
    std::size_t total_probes = 0; // N, evaluable probes
    std::size_t matches = 0;      // N_m, probes whose rank-1 entry is relevant
    double recognition_rate = 0.0; // percent, 100 * matches / total_probes
    std::vector<double> cmc;       // cmc[r-1]: probes with a relevant entry at rank <= r
    std::vector<std::string> excluded_probes; // singleton-class probes, filled upstream
};

/// Recognition rate and cumulative match characteristic up to max_rank.
RecognitionReport recognition_report(std::span<const QuerySummary> queries,
                                     std::size_t max_rank);

/// Writes the per-rank table as CSV with the fixed header rank,arp,arr,fscore.
void write_retrieval_csv(std::ostream& out, const RetrievalReport& report);

/// Reported CSQP retrieval results on the licensed face databases, kept in
/// every benchmark report as reference columns. Runs on user-supplied copies
/// of these databases should land within the advisory band.
struct ReferenceResult {
    const char* database;
    double max_arp_percent;
};
std::span<const ReferenceResult> reference_results();
inline constexpr double kReferenceAdvisoryBandPercent = 2.0;

/// Free-form configuration echo attached to the JSON summary so a report is
/// reproducible from its own header. Worker counts are deliberately absent:
/// reports must not depend on them, byte for byte.
struct SummaryContext {
    std::string descriptor;
    std::string normalization;
    std::string anmrr_k_policy;
    std::optional<std::size_t> anmrr_fixed_k;
    int csltp_threshold = 0;
    std::string dataset_root;
    std::string cache_path;
    std::string dataset_fingerprint;
    std::size_t items = 0;
    std::size_t classes = 0;
};

/// Writes the JSON summary: ANMRR, recognition rate, CMC array, configuration
/// echo, and the reference columns above.
void write_summary_json(std::ostream& out, const RetrievalReport& retrieval,
                        const RecognitionReport& recognition,
                        const SummaryContext& context);

} // namespace csqp
