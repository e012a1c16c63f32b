// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "csqp/evaluation.hpp"

#include "csqp/errors.hpp"
#include "csqp/parallel.hpp"

#include <algorithm>
#include <map>

namespace csqp {

EvaluationResult evaluate_leave_one_out(const FeatureCache& cache,
                                        const EvaluationOptions& options) {
    const std::size_t n = cache.records.size();
    if (n < 2) {
        throw Error("no evaluable probes: the cache holds " + std::to_string(n) +
                    " record(s)");
    }
    if (options.n_max == 0) {
        throw ConfigError("n_max must be at least 1");
    }

    std::map<std::string, std::size_t> class_sizes;
    for (const FeatureCache::Record& rec : cache.records) {
        ++class_sizes[rec.label];
    }
    std::size_t max_class_size = 0;
    for (const auto& [label, size] : class_sizes) {
        max_class_size = std::max(max_class_size, size);
    }

    // Rows are prepared once; the pairwise loop then only reads doubles.
    std::vector<std::vector<double>> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
        FeatureVector fv;
        fv.descriptor = cache.descriptor;
        fv.counts = cache.records[i].counts;
        rows[i] = prepare_row(fv, options.normalization);
    }

    const std::size_t gallery_size = n - 1;
    const std::size_t n_max = std::min(options.n_max, gallery_size);

    std::vector<QuerySummary> slots(n);
    std::vector<char> evaluable(n, 0);
    for (std::size_t p = 0; p < n; ++p) {
        evaluable[p] = class_sizes.at(cache.records[p].label) >= 2 ? 1 : 0;
    }

    parallel_for_index(n, options.jobs, [&](std::size_t p) {
        if (!evaluable[p]) {
            return;
        }
        const std::string& label = cache.records[p].label;

        std::vector<double> distances(n);
        for (std::size_t g = 0; g < n; ++g) {
            if (g != p) {
                distances[g] = chi_square_rows(rows[p], rows[g]);
            }
        }

        std::vector<std::size_t> order;
        order.reserve(gallery_size);
        for (std::size_t g = 0; g < n; ++g) {
            if (g != p) {
                order.push_back(g);
            }
        }
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (distances[a] != distances[b]) {
                return distances[a] < distances[b];
            }
            return a < b; // tie: earlier record first
        });

        QuerySummary& q = slots[p];
        q.query_id = cache.records[p].id;
        q.class_label = label;
        q.gallery_size = gallery_size;
        q.num_relevant = class_sizes.at(label) - 1;
        for (std::size_t rank = 1; rank <= order.size(); ++rank) {
            if (cache.records[order[rank - 1]].label == label) {
                q.relevant_ranks.push_back(static_cast<std::uint32_t>(rank));
            }
        }
    });

    EvaluationResult result;
    result.n_max = n_max;
    for (std::size_t p = 0; p < n; ++p) {
        if (evaluable[p]) {
            result.queries.push_back(std::move(slots[p]));
        } else {
            result.excluded_probes.push_back(cache.records[p].id);
        }
    }
    if (result.queries.empty()) {
        throw Error("no evaluable probes: every class has a single image");
    }

    AnmrrConfig anmrr_config;
    anmrr_config.policy = options.anmrr_policy;
    anmrr_config.max_class_size = max_class_size;
    anmrr_config.fixed_k = options.anmrr_fixed_k;

    result.retrieval = retrieval_report(result.queries, n_max, anmrr_config);
    result.recognition = recognition_report(result.queries, n_max);
    result.recognition.excluded_probes = result.excluded_probes;
    return result;
}

} // namespace csqp
