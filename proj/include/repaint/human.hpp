#pragma once

#include <map>
#include <string>
#include <vector>

#include "repaint/json_util.hpp"

namespace repaint {

struct HumanRating {
    std::string annotator_id;
    int content = 0;
    int perceptual = 0;
};

// Human study ingest. CSV format (header required):
//   model_id,sample_id,annotator_id,content,perceptual
// with integer ratings in 1..5.
struct HumanScores {
    // (model, sample) -> annotator ratings
    std::map<std::pair<std::string, std::string>, std::vector<HumanRating>> ratings;

    struct ModelMeans {
        double content = 0.0;    // normalized to [0,1]
        double perceptual = 0.0;
        int pairs = 0;
    };

    // Per-pair annotator means, then per-model means, normalized via (s-1)/4.
    std::map<std::string, ModelMeans> per_model_normalized() const;
};

HumanScores ingest_human_study(const std::string& csv_path);

} // namespace repaint
