#pragma once

#include <map>
#include <string>

#include "repaint/json_util.hpp"

namespace repaint {

// Prompt templates with {{placeholder}} substitution. Shipped as text assets
// under templates/; identical copies are embedded in the library so the CLI
// works without an install prefix. Template hashes go into run provenance.
class TemplateSet {
public:
    // Embedded defaults.
    TemplateSet();

    // Loads <name>.txt for every known template from the directory; missing
    // files keep the embedded text.
    static TemplateSet load(const std::string& directory);

    const std::string& raw(const std::string& name) const;
    std::string render(const std::string& name,
                       const std::map<std::string, std::string>& values) const;

    // name -> sha256 of the raw text.
    Json hashes() const;

    static const std::vector<std::string>& names();

private:
    std::map<std::string, std::string> texts_;
};

} // namespace repaint
