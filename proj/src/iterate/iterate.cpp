#include "repaint/iterate.hpp"

#include <algorithm>

#include "repaint/concurrency.hpp"
#include "repaint/errors.hpp"
#include "repaint/hash.hpp"
#include "repaint/log.hpp"
#include "repaint/understand.hpp"

namespace repaint {

Json Candidate::to_json() const {
    Json j{{"id", id},
           {"prompt", prompt.to_json()},
           {"selected", selected},
           {"failure", failure}};
    if (image) {
        j["image"] = Json{{"id", image->id}, {"model", image->model}};
    } else {
        j["image"] = Json();
    }
    j["scores"] = scores ? scores->to_json() : Json();
    return j;
}

Candidate Candidate::from_json(const Json& j) {
    Candidate c;
    c.id = j.at("id").get<std::string>();
    c.prompt = Prompt::from_json(j.at("prompt"));
    c.selected = j.at("selected").get<bool>();
    c.failure = j.value("failure", "");
    if (!j.at("image").is_null()) {
        ImageArtifact artifact;
        artifact.id = j["image"].at("id").get<std::string>();
        artifact.model = j["image"].value("model", "");
        c.image = std::move(artifact); // bytes live in the run store
    }
    if (!j.at("scores").is_null()) {
        c.scores = ScoreVector::from_json(j["scores"]);
    }
    return c;
}

Json IterationRecord::to_json() const {
    Json cands = Json::array();
    for (const auto& c : candidates) cands.push_back(c.to_json());
    Json next = Json::array();
    for (const auto& p : next_prompts) next.push_back(p.to_json());
    return Json{{"index", index},
                {"aspect", aspect_name(aspect)},
                {"candidates", cands},
                {"selected", selected_id},
                {"feedback", feedback ? feedback->to_json() : Json()},
                {"next_prompts", next},
                {"warnings", warnings}};
}

IterationRecord IterationRecord::from_json(const Json& j) {
    IterationRecord r;
    r.index = j.at("index").get<int>();
    r.aspect = aspect_from_name(j.at("aspect").get<std::string>());
    for (const auto& c : j.at("candidates")) r.candidates.push_back(Candidate::from_json(c));
    r.selected_id = j.at("selected").get<std::string>();
    if (!j.at("feedback").is_null()) r.feedback = Feedback::from_json(j["feedback"]);
    for (const auto& p : j.at("next_prompts")) r.next_prompts.push_back(Prompt::from_json(p));
    r.warnings = j.value("warnings", std::vector<std::string>{});
    return r;
}

const Candidate& IterationRecord::selected() const {
    for (const auto& c : candidates) {
        if (c.id == selected_id) return c;
    }
    raise(ErrorCode::Run, "iteration record has no selected candidate");
}

const Candidate& RegenerationResult::candidate_by_id(const std::string& id) const {
    for (const auto& record : iterations) {
        for (const auto& c : record.candidates) {
            if (c.id == id) return c;
        }
    }
    raise(ErrorCode::Run, "unknown candidate id '" + id + "'");
}

const Candidate& RegenerationResult::final_candidate() const {
    return candidate_by_id(final_candidate_id);
}

const Candidate& RegenerationResult::global_best() const {
    return candidate_by_id(global_best_id);
}

Json RegenerationResult::to_json() const {
    Json iters = Json::array();
    for (const auto& record : iterations) iters.push_back(record.to_json());
    return Json{{"reference", reference_id},
                {"iut", iut.to_json()},
                {"initial_prompt", initial_prompt.to_json()},
                {"iterations", iters},
                {"final", final_candidate_id},
                {"global_best", global_best_id}};
}

RegenerationResult RegenerationResult::from_json(const Json& j) {
    RegenerationResult r;
    r.reference_id = j.at("reference").get<std::string>();
    r.iut = ImageUnderstandingTree::from_json(j.at("iut"));
    r.initial_prompt = Prompt::from_json(j.at("initial_prompt"));
    for (const auto& it : j.at("iterations")) {
        r.iterations.push_back(IterationRecord::from_json(it));
    }
    r.final_candidate_id = j.at("final").get<std::string>();
    r.global_best_id = j.at("global_best").get<std::string>();
    return r;
}

Aspect aspect_for(int t) {
    if (t < 1) raise(ErrorCode::Validation, "iteration index must be >= 1");
    static const Aspect queue[4] = {Aspect::Overall, Aspect::Style, Aspect::Color,
                                    Aspect::Detail};
    return queue[(t - 1) % 4];
}

std::size_t select_best_index(const std::vector<Candidate>& candidates) {
    std::size_t best = std::string::npos;
    double best_composite = -1.0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (!candidates[i].scores) continue;
        double composite = candidates[i].scores->composite;
        if (best == std::string::npos || composite > best_composite) {
            best = i;
            best_composite = composite;
        }
    }
    return best;
}

std::vector<Prompt> fan_out_prompts(BackendSession& session, const TemplateSet& templates,
                                    const Prompt& prompt, int n, int iteration,
                                    const std::string& aspect, bool* fallback) {
    if (n < 1) raise(ErrorCode::Validation, "fan-out size must be >= 1");
    if (fallback != nullptr) *fallback = false;

    std::vector<Prompt> prompts;
    prompts.reserve(static_cast<std::size_t>(n));
    prompts.push_back(prompt); // anchor: the input verbatim
    try {
        for (int k = 1; k < n; ++k) {
            MllmRequest request;
            request.prompt = templates.render(
                "paraphrase", {{"variant", std::to_string(k)}, {"prompt", prompt.text}});
            request.schema = "freeform";
            std::string text = session.mllm_query(request, /*use_text_llm=*/true).text;
            prompts.push_back(prompt.derive(text, iteration, aspect));
        }
    } catch (const Error& e) {
        log_event("fan_out_fallback", {{"error", e.what()}});
        if (fallback != nullptr) *fallback = true;
        prompts.assign(static_cast<std::size_t>(n), prompt);
    }
    return prompts;
}

Feedback generate_feedback(BackendSession& session, const TemplateSet& templates,
                           const ReferenceImage& reference, const Candidate& best,
                           const ImageUnderstandingTree& iut, Aspect aspect,
                           bool* schema_failed) {
    if (!best.image) {
        raise(ErrorCode::Run, "cannot generate feedback from a failed candidate");
    }
    if (schema_failed != nullptr) *schema_failed = false;

    Feedback feedback;
    feedback.aspect = aspect;
    feedback.source_candidate = best.id;

    MllmRequest request;
    request.images.push_back(reference);
    request.images.push_back(ReferenceImage::from_bytes(best.image->bytes));
    request.prompt = templates.render("feedback", {{"aspect", aspect_name(aspect)},
                                                   {"iut_json", canonical_json(iut.to_json())}});
    request.schema = "feedback";
    try {
        MllmResult response = session.mllm_query(request);
        feedback.directives = response.parsed.at("directives").get<std::vector<std::string>>();
    } catch (const Error& e) {
        if (e.code() != ErrorCode::SchemaViolation) throw;
        // Iteration proceeds with an empty revision; prompts carry forward.
        if (schema_failed != nullptr) *schema_failed = true;
        log_event("feedback_schema_failure", {{"error", e.what()}});
        feedback.directives.clear();
    }
    return feedback;
}

std::vector<Prompt> revise_prompt(BackendSession& session, const TemplateSet& templates,
                                  const Prompt& best_prompt, const Feedback& feedback, int n,
                                  int next_iteration, bool* fallback) {
    if (n < 1) raise(ErrorCode::Validation, "fan-out size must be >= 1");
    const std::string aspect = aspect_name(feedback.aspect);
    if (feedback.directives.empty()) {
        return fan_out_prompts(session, templates, best_prompt, n, next_iteration, "", fallback);
    }

    Prompt revised = best_prompt;
    try {
        std::string directives;
        for (const auto& d : feedback.directives) {
            directives += d;
            directives += '\n';
        }
        if (!directives.empty()) directives.pop_back();
        MllmRequest request;
        request.prompt = templates.render("revise", {{"aspect", aspect},
                                                     {"directives", directives},
                                                     {"prompt", best_prompt.text}});
        request.schema = "freeform";
        std::string text = session.mllm_query(request, /*use_text_llm=*/true).text;
        if (text.empty()) raise(ErrorCode::Run, "revision produced empty prompt");
        revised = best_prompt.derive(text, next_iteration, aspect);
    } catch (const Error& e) {
        log_event("revise_fallback", {{"error", e.what()}});
        if (fallback != nullptr) *fallback = true;
        std::vector<Prompt> copies(static_cast<std::size_t>(n), best_prompt);
        return copies;
    }
    return fan_out_prompts(session, templates, revised, n, next_iteration, aspect, fallback);
}

IterationRecord run_iteration(BackendSession& session, const TemplateSet& templates,
                              const ReferenceImage& reference,
                              const ImageUnderstandingTree& iut, int t, int total_iterations,
                              const std::vector<Prompt>& prompts) {
    if (prompts.empty()) raise(ErrorCode::Validation, "iteration needs at least one prompt");

    IterationRecord record;
    record.index = t;
    record.aspect = aspect_for(t);

    const RunConfig& config = session.config();
    record.candidates.resize(prompts.size());
    parallel_for(prompts.size(), config.jobs, [&](std::size_t i) {
        Candidate& candidate = record.candidates[i];
        candidate.id = "t" + std::to_string(t) + "c" + std::to_string(i);
        candidate.prompt = prompts[i];
        try {
            T2iRequest request;
            request.prompt = prompts[i].text;
            request.seed = static_cast<std::int64_t>(config.base_seed) + 1000 * t +
                           static_cast<std::int64_t>(i);
            request.width = config.image_width;
            request.height = config.image_height;
            request.steps = config.steps;
            candidate.image = session.t2i_generate(request);
            candidate.scores = score_candidate(session, templates, reference, *candidate.image);
        } catch (const Error& e) {
            candidate.image.reset();
            candidate.scores.reset();
            candidate.failure = std::string(error_code_name(e.code())) + ": " + e.what();
        }
    });

    std::size_t best = select_best_index(record.candidates);
    if (best == std::string::npos) {
        raise(ErrorCode::EmptyIteration,
              "every candidate of iteration " + std::to_string(t) + " failed");
    }
    record.candidates[best].selected = true;
    record.selected_id = record.candidates[best].id;

    for (const auto& c : record.candidates) {
        if (!c.failure.empty()) record.warnings.push_back(c.id + " failed: " + c.failure);
    }

    if (t < total_iterations) {
        bool schema_failed = false;
        record.feedback = generate_feedback(session, templates, reference,
                                            record.candidates[best], iut, record.aspect,
                                            &schema_failed);
        if (schema_failed) {
            record.warnings.push_back("feedback schema failure; revision carries prompts forward");
        }
    }
    return record;
}

namespace {

void persist_iteration(RunStore& store, const IterationRecord& record) {
    for (std::size_t i = 0; i < record.candidates.size(); ++i) {
        const Candidate& c = record.candidates[i];
        store.save_json(RunStore::candidate_json(record.index, static_cast<int>(i)), c.to_json());
        if (c.image) {
            store.save_bytes(RunStore::candidate_image(record.index, static_cast<int>(i)),
                             c.image->bytes);
        }
    }
    store.save_json(RunStore::iteration_record(record.index), record.to_json());
}

// Max composite across all scored candidates; ties keep the earliest.
std::string pick_global_best(const std::vector<IterationRecord>& iterations) {
    std::string best_id;
    double best_composite = -1.0;
    for (const auto& record : iterations) {
        for (const auto& c : record.candidates) {
            if (c.scores && c.scores->composite > best_composite) {
                best_composite = c.scores->composite;
                best_id = c.id;
            }
        }
    }
    return best_id;
}

} // namespace

RegenerationResult run_regeneration(BackendSession& session, const TemplateSet& templates,
                                    const ReferenceImage& image, RunStore& store, bool resume) {
    const RunConfig& config = session.config();

    // Capability check doubles as the backend connectivity probe.
    Capabilities caps = session.capabilities();
    if (caps.embed_dims.empty()) {
        raise(ErrorCode::BackendUnavailable, "embed backend declares no model tags");
    }

    store.save_json("config.json", config.to_json());
    store.save_json("templates.json", templates.hashes());

    RegenerationResult result;
    result.reference_id = image.id;

    if (resume && store.has("iut.json")) {
        result.iut = ImageUnderstandingTree::from_json(*store.load_json("iut.json"));
    } else {
        result.iut = build_iut(session, templates, image, &store).tree;
    }

    if (resume && store.has("initial_prompt.json")) {
        result.initial_prompt = Prompt::from_json(*store.load_json("initial_prompt.json"));
    } else {
        if (config.initial_prompt_mode == "caption") {
            // Ablation arm: prompt directly from the caption, skipping the tree.
            result.initial_prompt = Prompt::make(result.iut.caption, {{0, "", ""}});
        } else {
            result.initial_prompt = synthesize_initial_prompt(session, templates, result.iut);
        }
        store.save_json("initial_prompt.json", result.initial_prompt.to_json());
    }

    int T = config.iterations;
    std::vector<Prompt> prompts;
    for (int t = 1; t <= T; ++t) {
        if (resume && store.has(RunStore::iteration_record(t))) {
            IterationRecord record =
                IterationRecord::from_json(*store.load_json(RunStore::iteration_record(t)));
            result.iterations.push_back(std::move(record));
            continue;
        }

        if (prompts.empty()) {
            if (result.iterations.empty()) {
                prompts = fan_out_prompts(session, templates, result.initial_prompt,
                                          config.fan_out[0], 1, "");
            } else {
                prompts = result.iterations.back().next_prompts;
                if (prompts.empty()) {
                    raise(ErrorCode::Run, "stored iteration " +
                                              std::to_string(result.iterations.back().index) +
                                              " has no next prompts to resume from");
                }
            }
        }

        IterationRecord record =
            run_iteration(session, templates, image, result.iut, t, T, prompts);

        if (t < T) {
            record.next_prompts = revise_prompt(session, templates, record.selected().prompt,
                                                *record.feedback, config.fan_out[static_cast<std::size_t>(t)],
                                                t + 1);
        }
        persist_iteration(store, record);
        result.iterations.push_back(std::move(record));
        prompts = result.iterations.back().next_prompts;

        log_event("iteration_done", {{"t", std::to_string(t)},
                                     {"selected", result.iterations.back().selected_id}});
    }

    result.final_candidate_id = result.iterations.back().selected_id;
    result.global_best_id = pick_global_best(result.iterations);
    store.save_json("result.json", result.to_json());
    log_event("run_done", {{"final", result.final_candidate_id},
                           {"global_best", result.global_best_id}});
    return result;
}

} // namespace repaint
