#include "repaint/score.hpp"

#include <cmath>

#include "repaint/errors.hpp"

namespace repaint {

Json ScoreVector::to_json() const {
    return Json{{"clip_pct", clip_pct},
                {"dino_pct", dino_pct},
                {"judge_content", judge_content},
                {"judge_perceptual", judge_perceptual},
                {"composite", composite},
                {"judge_fallback", judge_fallback},
                {"rationale", rationale}};
}

ScoreVector ScoreVector::from_json(const Json& j) {
    ScoreVector s;
    s.clip_pct = j.at("clip_pct").get<double>();
    s.dino_pct = j.at("dino_pct").get<double>();
    s.judge_content = j.at("judge_content").get<int>();
    s.judge_perceptual = j.at("judge_perceptual").get<int>();
    s.composite = j.at("composite").get<double>();
    s.judge_fallback = j.value("judge_fallback", false);
    s.rationale = j.value("rationale", "");
    return s;
}

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dim != b.dim || a.values.size() != b.values.size()) {
        raise(ErrorCode::Protocol, "cosine: dimension mismatch (" + std::to_string(a.dim) +
                                       " vs " + std::to_string(b.dim) + ")");
    }
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        dot += a.values[i] * b.values[i];
        na += a.values[i] * a.values[i];
        nb += b.values[i] * b.values[i];
    }
    if (na < 1e-24 || nb < 1e-24) {
        raise(ErrorCode::DegenerateEmbedding, "cosine: zero vector");
    }
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

double normalize_similarity(double cosine) {
    double pct = 100.0 * (cosine < 0.0 ? 0.0 : cosine);
    return pct > 100.0 ? 100.0 : pct;
}

double normalize_judge(double score) {
    if (!(score >= 1.0 && score <= 5.0)) {
        raise(ErrorCode::Validation, "judge score " + std::to_string(score) + " outside [1,5]");
    }
    return (score - 1.0) / 4.0;
}

double denormalize_judge(double normalized) {
    if (!(normalized >= 0.0 && normalized <= 1.0)) {
        raise(ErrorCode::Validation, "normalized judge score outside [0,1]");
    }
    return normalized * 4.0 + 1.0;
}

double composite_score(const std::array<double, 4>& normalized,
                       const std::array<double, 4>& weights) {
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0.0) raise(ErrorCode::Config, "composite weights must be non-negative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        raise(ErrorCode::Config, "composite weights must sum to 1");
    }
    double value = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        if (normalized[i] < -1e-9 || normalized[i] > 1.0 + 1e-9) {
            raise(ErrorCode::Validation, "normalized component outside [0,1]");
        }
        value += weights[i] * normalized[i];
    }
    return value;
}

JudgeResult judge_pair(BackendSession& session, const TemplateSet& templates,
                       const ReferenceImage& reference, const ImageArtifact& candidate) {
    MllmRequest request;
    request.images.push_back(reference);
    request.images.push_back(ReferenceImage::from_bytes(candidate.bytes));
    request.prompt = templates.render("judge", {});
    request.schema = "judge";

    JudgeResult result;
    try {
        MllmResult response = session.mllm_query(request);
        result.content = response.parsed.at("content").get<int>();
        result.perceptual = response.parsed.at("perceptual").get<int>();
        result.rationale = response.parsed.at("rationale").get<std::string>();
    } catch (const Error& e) {
        if (e.code() != ErrorCode::SchemaViolation) throw;
        result.fallback = true;
        result.content = 1;
        result.perceptual = 1;
        result.rationale = std::string("judge response unusable: ") + e.what();
    }
    return result;
}

ScoreVector score_candidate(BackendSession& session, const TemplateSet& templates,
                            const ReferenceImage& reference, const ImageArtifact& candidate) {
    EmbeddingVector ref_clip = session.embed_reference(reference, "clip-like");
    EmbeddingVector ref_dino = session.embed_reference(reference, "dino-like");
    ImageArtifact artifact = candidate;
    EmbeddingVector cand_clip = session.embed_image(artifact, "clip-like");
    EmbeddingVector cand_dino = session.embed_image(artifact, "dino-like");

    ScoreVector scores;
    scores.clip_pct = normalize_similarity(cosine_similarity(ref_clip, cand_clip));
    scores.dino_pct = normalize_similarity(cosine_similarity(ref_dino, cand_dino));

    JudgeResult judge = judge_pair(session, templates, reference, candidate);
    scores.judge_content = judge.content;
    scores.judge_perceptual = judge.perceptual;
    scores.judge_fallback = judge.fallback;
    scores.rationale = judge.rationale;

    scores.composite = recompute_composite(scores, session.config().weights);
    return scores;
}

double recompute_composite(const ScoreVector& scores, const std::array<double, 4>& weights) {
    return composite_score({scores.clip_pct / 100.0, scores.dino_pct / 100.0,
                            normalize_judge(static_cast<double>(scores.judge_content)),
                            normalize_judge(static_cast<double>(scores.judge_perceptual))},
                           weights);
}

} // namespace repaint
