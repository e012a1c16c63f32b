// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "csqp/dataset.hpp"
#include "csqp/matching.hpp"
#include "csqp/metrics.hpp"

namespace csqp {

struct EvaluationOptions {
    Normalization normalization = Normalization::L1;
    AnmrrKPolicy anmrr_policy = AnmrrKPolicy::MaxClassSize;
    std::size_t anmrr_fixed_k = 0; // used by AnmrrKPolicy::Fixed only
    std::size_t n_max = 10;        // clamped to the per-probe gallery size
    unsigned jobs = 1;             // 0 = one worker per hardware thread
};

struct EvaluationResult {
    RetrievalReport retrieval;
    RecognitionReport recognition;
    std::vector<QuerySummary> queries;        // evaluable probes, record order
    std::vector<std::string> excluded_probes; // singleton-class probe ids
    std::size_t n_max = 0;                    // cutoff after clamping
};

/// Leave-one-out evaluation over a feature cache: every record is a probe
/// ranked against all other records by chi-square distance, ties broken by
/// record order. Probes whose class has no other member are excluded and
/// reported, never scored. Output is independent of `jobs`.
/// Throws when no probe is evaluable ("no evaluable probes").
EvaluationResult evaluate_leave_one_out(const FeatureCache& cache,
                                        const EvaluationOptions& options = {});

} // namespace csqp
