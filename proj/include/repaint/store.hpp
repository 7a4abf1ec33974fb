#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "repaint/json_util.hpp"

namespace repaint {

// One regeneration run's on-disk state:
//   runs/<run-id>/config.json
//   runs/<run-id>/iut.json          (iut.partial.json on aborted builds)
//   runs/<run-id>/initial_prompt.json
//   runs/<run-id>/iter<t>/record.json
//   runs/<run-id>/iter<t>/cand<i>.json + cand<i>.png
//   runs/<run-id>/result.json
// JSON files hold exactly the canonical bytes, so identical runs are
// byte-identical on disk.
class RunStore {
public:
    explicit RunStore(std::filesystem::path root);

    const std::filesystem::path& root() const { return root_; }

    bool has(const std::string& relative) const;
    void save_json(const std::string& relative, const Json& value);
    std::optional<Json> load_json(const std::string& relative) const;
    void save_bytes(const std::string& relative, std::string_view bytes);
    std::optional<std::string> load_bytes(const std::string& relative) const;

    static std::string iteration_record(int t);
    static std::string candidate_json(int t, int i);
    static std::string candidate_image(int t, int i);

private:
    std::filesystem::path root_;
};

} // namespace repaint
