#pragma once

#include <array>
#include <string>

#include "repaint/session.hpp"
#include "repaint/templates.hpp"
#include "repaint/types.hpp"

namespace repaint {

// Per-candidate metrics. clip_pct/dino_pct are clamped cosine percentages in
// [0,100]; judge scores are rubric integers 1..5; composite is the weighted
// mean of the four normalized components and is recomputable from them.
struct ScoreVector {
    double clip_pct = 0.0;
    double dino_pct = 0.0;
    int judge_content = 1;
    int judge_perceptual = 1;
    double composite = 0.0;
    bool judge_fallback = false; // judge response unusable; components pinned to 1
    std::string rationale;

    Json to_json() const;
    static ScoreVector from_json(const Json& j);
};

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

// 100 * max(0, cos): negative similarities are noise at report granularity.
double normalize_similarity(double cosine);

// (s - 1) / 4 over [1,5]; accepts real-valued means of rubric integers.
double normalize_judge(double score);
double denormalize_judge(double normalized);

double composite_score(const std::array<double, 4>& normalized,
                       const std::array<double, 4>& weights);

struct JudgeResult {
    int content = 1;
    int perceptual = 1;
    std::string rationale;
    bool fallback = false;
};

// MLLM rubric call over (reference, candidate); a schema failure after repairs
// degrades to worst-case scores with the fallback flag set.
JudgeResult judge_pair(BackendSession& session, const TemplateSet& templates,
                       const ReferenceImage& reference, const ImageArtifact& candidate);

ScoreVector score_candidate(BackendSession& session, const TemplateSet& templates,
                            const ReferenceImage& reference, const ImageArtifact& candidate);

// Recompute the composite from the stored components (consistency checks).
double recompute_composite(const ScoreVector& scores, const std::array<double, 4>& weights);

} // namespace repaint
