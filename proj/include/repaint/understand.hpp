#pragma once

#include <string>
#include <vector>

#include "repaint/session.hpp"
#include "repaint/store.hpp"
#include "repaint/templates.hpp"
#include "repaint/types.hpp"
#include "repaint/validate.hpp"

namespace repaint {

struct SceneExtraction {
    std::vector<LabeledFeature> global_features;
    std::vector<ObjectNode> objects; // features stripped; filled per object later
    std::vector<Relation> relations;
    std::vector<std::string> warnings;
};

// Stage 1 operations. All propagate backend errors; build_iut persists a
// partial tree for debugging before re-raising.

std::string caption(BackendSession& session, const TemplateSet& templates,
                    const ReferenceImage& image);

SceneExtraction extract_scene(BackendSession& session, const TemplateSet& templates,
                              const ReferenceImage& image, const std::string& caption_text);

std::vector<LabeledFeature> extract_object_features(BackendSession& session,
                                                    const TemplateSet& templates,
                                                    const ReferenceImage& image,
                                                    const ObjectNode& object,
                                                    const std::string& caption_text,
                                                    std::vector<std::string>* warnings = nullptr);

struct BuildOutcome {
    ImageUnderstandingTree tree;
    std::vector<std::string> warnings;
};

BuildOutcome build_iut(BackendSession& session, const TemplateSet& templates,
                       const ReferenceImage& image, RunStore* store = nullptr);

Prompt synthesize_initial_prompt(BackendSession& session, const TemplateSet& templates,
                                 const ImageUnderstandingTree& tree);

} // namespace repaint
