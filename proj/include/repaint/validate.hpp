#pragma once

#include <string>
#include <vector>

#include "repaint/types.hpp"

namespace repaint {

struct IutCaps {
    int max_objects = 10;
    int max_features_per_object = 8;
    int max_global_features = 6;
};

// Violations are data, not errors: an invalid tree yields a non-empty report,
// never an exception.
struct ValidationReport {
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
    std::string to_string() const;
};

ValidationReport validate_iut(const ImageUnderstandingTree& tree, const IutCaps& caps = {});

} // namespace repaint
