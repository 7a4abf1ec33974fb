#pragma once

#include <initializer_list>
#include <string>
#include <utility>

namespace repaint {

// JSON-lines logging to stderr. Off by default; the CLI switches it on. Not
// part of any persisted artifact, so timestamps are allowed here.
void set_logging(bool enabled);
bool logging_enabled();
void log_event(const std::string& event,
               std::initializer_list<std::pair<std::string, std::string>> fields);

} // namespace repaint
