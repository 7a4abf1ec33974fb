#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "repaint/json_util.hpp"

namespace repaint {

// Revision aspects, cycled one per iteration.
enum class Aspect { Overall, Style, Color, Detail };

const char* aspect_name(Aspect a);
Aspect aspect_from_name(const std::string& name);

struct LabeledFeature {
    std::string label;
    std::string value;

    bool operator==(const LabeledFeature&) const = default;
};

struct ObjectNode {
    std::string id;
    std::string name;
    std::vector<LabeledFeature> features;

    bool operator==(const ObjectNode&) const = default;
};

struct Relation {
    std::string subject_id;
    std::string predicate;
    std::string object_id;

    bool operator==(const Relation&) const = default;
};

// Two-level scene record: caption + global features at the root, objects with
// their own features beneath, plus object-to-object relations.
struct ImageUnderstandingTree {
    std::string caption;
    std::vector<LabeledFeature> global_features;
    std::vector<ObjectNode> objects;
    std::vector<Relation> relations;

    bool operator==(const ImageUnderstandingTree&) const = default;

    Json to_json() const;
    static ImageUnderstandingTree from_json(const Json& j);
};

// Reference image: opaque encoded bytes plus declared dimensions. The id is
// the sha256 of the bytes. No pixel-level processing happens in core; PNG
// headers are only sniffed for width/height.
struct ReferenceImage {
    std::string id;
    std::string bytes;
    int width = 0;
    int height = 0;
    std::string category;

    static ReferenceImage from_bytes(std::string bytes, std::string category = "");
    static ReferenceImage from_file(const std::string& path, std::string category = "");
};

// Output of one text-to-image call.
struct ImageArtifact {
    std::string id; // sha256 of bytes
    std::string bytes;
    std::string model;
};

struct PromptStep {
    int iteration = 0;
    std::string aspect; // empty for origin / plain paraphrase steps
    std::string parent_id;

    bool operator==(const PromptStep&) const = default;
};

struct Prompt {
    std::string text;
    std::vector<PromptStep> lineage;
    std::string id;

    // Computes the content id over text + lineage.
    static Prompt make(std::string text, std::vector<PromptStep> lineage);

    Prompt derive(std::string new_text, int iteration, std::string aspect) const;

    // Highest iteration index recorded in the lineage.
    int depth() const;

    Json to_json() const;
    static Prompt from_json(const Json& j);

    bool operator==(const Prompt&) const = default;
};

struct Feedback {
    Aspect aspect = Aspect::Overall;
    std::vector<std::string> directives; // empty means "no changes; paraphrase only"
    std::string source_candidate;

    Json to_json() const;
    static Feedback from_json(const Json& j);

    bool operator==(const Feedback&) const = default;
};

} // namespace repaint
