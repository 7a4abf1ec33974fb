#include "repaint/templates.hpp"

#include <filesystem>

#include "repaint/errors.hpp"
#include "repaint/fs_util.hpp"
#include "repaint/hash.hpp"

namespace repaint {

namespace {

// Embedded copies of the templates/ assets. A unit test keeps the two in sync.
const std::map<std::string, std::string>& embedded_templates() {
    static const std::map<std::string, std::string> texts = {
    {"caption", R"TPL(Task: caption
You are describing an image so that a painter could reproduce it.
Look at the attached reference image and write one concise caption naming the
subjects and the overall treatment. Respond with plain text only, no markup.
)TPL"},
    {"extract_scene", R"TPL(Task: extract_scene
Caption: {{caption}}
Study the attached reference image. List its overall features (style, palette,
lighting and similar), the distinct objects it contains, and the relationships
between those objects.
Respond with JSON only, using exactly this shape:
{"caption": str, "global_features": [{"label": str, "value": str}],
 "objects": [{"id": str, "name": str, "features": [{"label": str, "value": str}]}],
 "relations": [{"subject": str, "predicate": str, "object": str}]}
)TPL"},
    {"extract_object", R"TPL(Task: extract_object
Object: {{object_name}}
Caption: {{caption}}
Look at the attached reference image and describe the named object in detail:
its color, texture, material, pose and any other attribute a painter would
need. Respond with JSON only, using the scene-tree shape restricted to this
single object:
{"caption": str, "global_features": [], "objects": [{"id": str, "name": str,
 "features": [{"label": str, "value": str}]}], "relations": []}
)TPL"},
    {"initial_prompt", R"TPL(Task: initial_prompt
Below is a structured description of a reference image. Turn it into a single
text-to-image prompt that mentions every object, feature and relationship.
Respond with the prompt text only, on one line.
IUT:
{{iut_json}}
)TPL"},
    {"paraphrase", R"TPL(Task: paraphrase
Variant: {{variant}}
Rewrite the prompt below as a synonymous prompt. Keep every subject and
attribute; change only the wording and order. Respond with the rewritten
prompt on one line.
Prompt: {{prompt}}
)TPL"},
    {"revise", R"TPL(Task: revise
Aspect: {{aspect}}
Apply the directives below to the prompt, changing only the named aspect and
keeping everything else intact. Respond with the revised prompt on one line.
Directives:
{{directives}}
Prompt: {{prompt}}
)TPL"},
    {"feedback", R"TPL(Task: feedback
Aspect: {{aspect}}
The first attached image is the reference; the second is a generated
candidate. Using the structured description below, list edit directives that
would make the candidate match the reference. Restrict the directives to the
named aspect; give an empty list if that aspect already matches.
Respond with JSON only: {"aspect": str, "directives": [str]}
IUT:
{{iut_json}}
)TPL"},
    {"judge", R"TPL(Task: judge
The first attached image is the reference; the second is a generated
candidate. Rate the candidate against the reference on two dimensions, each an
integer from 1 (worst) to 5 (best):
- content: how consistently the candidate reproduces the reference content
- perceptual: the perceptual quality of the candidate
Respond with JSON only: {"content": int, "perceptual": int, "rationale": str}
)TPL"},
    };
    return texts;
}

} // namespace

const std::vector<std::string>& TemplateSet::names() {
    static const std::vector<std::string> all = {
        "caption", "extract_scene", "extract_object", "initial_prompt",
        "paraphrase", "revise", "feedback", "judge"};
    return all;
}

TemplateSet::TemplateSet() : texts_(embedded_templates()) {}

TemplateSet TemplateSet::load(const std::string& directory) {
    TemplateSet set;
    for (const auto& name : names()) {
        std::filesystem::path path = std::filesystem::path(directory) / (name + ".txt");
        if (file_exists(path)) {
            set.texts_[name] = read_file(path);
        }
    }
    return set;
}

const std::string& TemplateSet::raw(const std::string& name) const {
    auto it = texts_.find(name);
    if (it == texts_.end()) raise(ErrorCode::Io, "unknown template '" + name + "'");
    return it->second;
}

std::string TemplateSet::render(const std::string& name,
                                const std::map<std::string, std::string>& values) const {
    std::string out = raw(name);
    for (const auto& [key, value] : values) {
        std::string placeholder = "{{" + key + "}}";
        std::size_t pos = 0;
        while ((pos = out.find(placeholder, pos)) != std::string::npos) {
            out.replace(pos, placeholder.size(), value);
            pos += value.size();
        }
    }
    return out;
}

Json TemplateSet::hashes() const {
    Json out = Json::object();
    for (const auto& [name, text] : texts_) out[name] = sha256_hex(text);
    return out;
}

} // namespace repaint
