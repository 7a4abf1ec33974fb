#include "repaint/store.hpp"

#include "repaint/fs_util.hpp"

namespace repaint {

RunStore::RunStore(std::filesystem::path root) : root_(std::move(root)) {}

bool RunStore::has(const std::string& relative) const {
    return file_exists(root_ / relative);
}

void RunStore::save_json(const std::string& relative, const Json& value) {
    write_file_atomic(root_ / relative, canonical_json(value));
}

std::optional<Json> RunStore::load_json(const std::string& relative) const {
    if (!has(relative)) return std::nullopt;
    return parse_json(read_file(root_ / relative));
}

void RunStore::save_bytes(const std::string& relative, std::string_view bytes) {
    write_file_atomic(root_ / relative, bytes);
}

std::optional<std::string> RunStore::load_bytes(const std::string& relative) const {
    if (!has(relative)) return std::nullopt;
    return read_file(root_ / relative);
}

std::string RunStore::iteration_record(int t) {
    return "iter" + std::to_string(t) + "/record.json";
}

std::string RunStore::candidate_json(int t, int i) {
    return "iter" + std::to_string(t) + "/cand" + std::to_string(i) + ".json";
}

std::string RunStore::candidate_image(int t, int i) {
    return "iter" + std::to_string(t) + "/cand" + std::to_string(i) + ".png";
}

} // namespace repaint
