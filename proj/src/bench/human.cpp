#include "repaint/human.hpp"

#include <sstream>

#include "repaint/errors.hpp"
#include "repaint/fs_util.hpp"
#include "repaint/score.hpp"

namespace repaint {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    return fields;
}

} // namespace

HumanScores ingest_human_study(const std::string& csv_path) {
    std::istringstream in(read_file(csv_path));
    std::string line;
    if (!std::getline(in, line)) {
        raise(ErrorCode::Validation, "human study CSV is empty");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "model_id,sample_id,annotator_id,content,perceptual") {
        raise(ErrorCode::Validation,
              "human study CSV header must be model_id,sample_id,annotator_id,content,perceptual");
    }

    HumanScores scores;
    std::vector<std::string> row_errors;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != 5) {
            row_errors.push_back("line " + std::to_string(line_no) + ": expected 5 fields");
            continue;
        }
        int content = 0, perceptual = 0;
        try {
            content = std::stoi(fields[3]);
            perceptual = std::stoi(fields[4]);
        } catch (...) {
            row_errors.push_back("line " + std::to_string(line_no) + ": non-integer rating");
            continue;
        }
        if (content < 1 || content > 5 || perceptual < 1 || perceptual > 5) {
            row_errors.push_back("line " + std::to_string(line_no) + ": rating outside 1..5");
            continue;
        }
        scores.ratings[{fields[0], fields[1]}].push_back({fields[2], content, perceptual});
    }

    if (!row_errors.empty()) {
        std::string message = "human study rows rejected:";
        for (const auto& e : row_errors) message += " " + e + ";";
        raise(ErrorCode::Validation, message);
    }
    if (scores.ratings.empty()) {
        raise(ErrorCode::Validation, "human study CSV has no data rows");
    }
    return scores;
}

std::map<std::string, HumanScores::ModelMeans> HumanScores::per_model_normalized() const {
    struct Sum {
        double content = 0.0, perceptual = 0.0;
        int pairs = 0;
    };
    std::map<std::string, Sum> sums;
    for (const auto& [key, annotator_ratings] : ratings) {
        double content = 0.0, perceptual = 0.0;
        for (const auto& r : annotator_ratings) {
            content += r.content;
            perceptual += r.perceptual;
        }
        double n = static_cast<double>(annotator_ratings.size());
        Sum& sum = sums[key.first];
        sum.content += normalize_judge(content / n);
        sum.perceptual += normalize_judge(perceptual / n);
        sum.pairs += 1;
    }
    std::map<std::string, ModelMeans> out;
    for (const auto& [model, sum] : sums) {
        ModelMeans means;
        means.pairs = sum.pairs;
        means.content = sum.content / sum.pairs;
        means.perceptual = sum.perceptual / sum.pairs;
        out[model] = means;
    }
    return out;
}

} // namespace repaint
