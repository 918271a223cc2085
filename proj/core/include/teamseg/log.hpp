#pragma once

#include <string>

namespace teamseg::log {

// Warnings go to stderr by default; tests can capture them instead.
void warn(const std::string& msg);

// Returns the previous sink. Pass nullptr to restore stderr output.
using Sink = void (*)(const std::string&);
Sink set_warn_sink(Sink sink);

} // namespace teamseg::log
