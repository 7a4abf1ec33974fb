#include "repaint/validate.hpp"

#include <set>
#include <sstream>

namespace repaint {

std::string ValidationReport::to_string() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        if (i > 0) out << "; ";
        out << violations[i];
    }
    return out.str();
}

ValidationReport validate_iut(const ImageUnderstandingTree& tree, const IutCaps& caps) {
    ValidationReport report;
    auto violation = [&report](const std::string& message) {
        report.violations.push_back(message);
    };

    if (tree.caption.empty()) violation("empty caption");

    if (static_cast<int>(tree.objects.size()) > caps.max_objects) {
        violation("object count exceeds limit (" + std::to_string(tree.objects.size()) +
                  " > " + std::to_string(caps.max_objects) + ")");
    }
    if (static_cast<int>(tree.global_features.size()) > caps.max_global_features) {
        violation("global feature count exceeds limit");
    }
    for (const auto& f : tree.global_features) {
        if (f.value.empty()) violation("empty global feature value (label '" + f.label + "')");
    }

    std::set<std::string> ids;
    for (const auto& obj : tree.objects) {
        if (obj.id.empty()) violation("object with empty id");
        if (!ids.insert(obj.id).second) violation("duplicate object id '" + obj.id + "'");
        if (obj.name.empty()) violation("object '" + obj.id + "' has empty name");
        if (static_cast<int>(obj.features.size()) > caps.max_features_per_object) {
            violation("feature count exceeds limit for object '" + obj.id + "'");
        }
        std::set<std::string> labels;
        for (const auto& f : obj.features) {
            if (!labels.insert(f.label).second) {
                violation("duplicate feature label '" + f.label + "' on object '" + obj.id + "'");
            }
            if (f.value.empty()) {
                violation("empty feature value on object '" + obj.id + "' (label '" + f.label + "')");
            }
        }
    }

    for (const auto& rel : tree.relations) {
        if (!ids.count(rel.subject_id) || !ids.count(rel.object_id)) {
            violation("dangling relation endpoint (" + rel.subject_id + ", " + rel.predicate +
                      ", " + rel.object_id + ")");
        }
        if (rel.subject_id == rel.object_id) {
            violation("self-relation on '" + rel.subject_id + "'");
        }
        if (rel.predicate.empty()) violation("relation with empty predicate");
    }

    return report;
}

} // namespace repaint
