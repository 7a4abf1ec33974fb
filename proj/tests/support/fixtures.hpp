#pragma once

#include <string>
#include <vector>

#include "repaint/config.hpp"
#include "repaint/session.hpp"
#include "test_util.hpp"

namespace repaint::test {

// Published evaluation table used by the report/correlation fixtures.
struct PublishedRow {
    const char* model;
    double clip_pct;
    double dino_pct;
    double gpt_con;  // normalized [0,1]
    double gpt_per;  // normalized [0,1]
    double human_con;
    double human_per;
};

inline const std::vector<PublishedRow>& published_rows() {
    static const std::vector<PublishedRow> rows = {
        {"SD1.4", 89.98, 88.37, 0.5500, 0.4460, 0.4216, 0.3682},
        {"SD1.5", 90.17, 90.33, 0.5660, 0.4760, 0.4338, 0.3976},
        {"SD1.5-DPO", 91.08, 93.57, 0.5560, 0.6840, 0.4544, 0.6388},
        {"SD2.0", 90.79, 91.68, 0.6060, 0.5860, 0.4960, 0.4626},
        {"SD2.0-Inpaint", 90.67, 92.32, 0.6220, 0.6020, 0.4892, 0.4920},
        {"SDXL1.0", 90.17, 92.41, 0.7600, 0.6600, 0.6726, 0.6448},
        {"Juggernautv1", 93.37, 95.27, 0.7120, 0.7740, 0.6472, 0.8072},
        {"Juggernautv9", 93.79, 95.34, 0.7700, 0.8820, 0.7056, 0.8590},
    };
    return rows;
}

// All-mock config writing its stores under the given scratch directory.
inline repaint::RunConfig mock_config(const TempDir& dir, std::uint64_t world_seed = 1337,
                                      std::vector<std::string> blind_tokens = {}) {
    repaint::RunConfig config;
    config.out_dir = dir.sub("runs");
    config.cache_dir = dir.sub("cache");
    config.jobs = 1;
    config.mock_world.seed = world_seed;
    config.mock_world.blind_tokens = std::move(blind_tokens);
    return config;
}

} // namespace repaint::test
