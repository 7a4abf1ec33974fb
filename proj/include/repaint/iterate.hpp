#pragma once

#include <optional>
#include <string>
#include <vector>

#include "repaint/score.hpp"
#include "repaint/session.hpp"
#include "repaint/store.hpp"
#include "repaint/templates.hpp"
#include "repaint/types.hpp"

namespace repaint {

struct Candidate {
    std::string id; // positional: t<t>c<i>
    Prompt prompt;
    std::optional<ImageArtifact> image; // absent = generation failed
    std::string failure;
    std::optional<ScoreVector> scores;
    bool selected = false;

    Json to_json() const;
    static Candidate from_json(const Json& j);
};

struct IterationRecord {
    int index = 0; // 1-based
    Aspect aspect = Aspect::Overall;
    std::vector<Candidate> candidates;
    std::string selected_id;
    std::optional<Feedback> feedback;  // engaged iff index < T
    std::vector<Prompt> next_prompts;  // revision output driving iteration index+1
    std::vector<std::string> warnings;

    Json to_json() const;
    static IterationRecord from_json(const Json& j);

    const Candidate& selected() const;
};

struct RegenerationResult {
    std::string reference_id;
    ImageUnderstandingTree iut;
    Prompt initial_prompt;
    std::vector<IterationRecord> iterations;
    std::string final_candidate_id;
    std::string global_best_id;

    const Candidate& final_candidate() const;
    const Candidate& global_best() const;
    const Candidate& candidate_by_id(const std::string& id) const;

    Json to_json() const;
    static RegenerationResult from_json(const Json& j);
};

// Fixed queue [Overall, Style, Color, Detail]; cycles past T=4.
Aspect aspect_for(int t);

// Index of the selected candidate: argmax composite over scored candidates,
// ties broken by lowest index. Returns npos when nothing is scored.
std::size_t select_best_index(const std::vector<Candidate>& candidates);

// n prompts: the input verbatim first, then text-LLM paraphrases. On backend
// failure degrades to n copies of the input (sets *fallback).
std::vector<Prompt> fan_out_prompts(BackendSession& session, const TemplateSet& templates,
                                    const Prompt& prompt, int n, int iteration,
                                    const std::string& aspect, bool* fallback = nullptr);

Feedback generate_feedback(BackendSession& session, const TemplateSet& templates,
                           const ReferenceImage& reference, const Candidate& best,
                           const ImageUnderstandingTree& iut, Aspect aspect,
                           bool* schema_failed = nullptr);

// Applies feedback to the best prompt (one text-LLM rewrite), then fans out to
// n variants for the next iteration. Empty directives reduce to plain fan-out.
std::vector<Prompt> revise_prompt(BackendSession& session, const TemplateSet& templates,
                                  const Prompt& best_prompt, const Feedback& feedback, int n,
                                  int next_iteration, bool* fallback = nullptr);

IterationRecord run_iteration(BackendSession& session, const TemplateSet& templates,
                              const ReferenceImage& reference,
                              const ImageUnderstandingTree& iut, int t, int total_iterations,
                              const std::vector<Prompt>& prompts);

// Full pipeline: understanding, initial prompt, T iterations. Persists the
// audit trail into the store as it goes; with resume=true completed artifacts
// are loaded instead of recomputed.
RegenerationResult run_regeneration(BackendSession& session, const TemplateSet& templates,
                                    const ReferenceImage& image, RunStore& store,
                                    bool resume = false);

} // namespace repaint
