#include "teamseg/log.hpp"

#include <cstdio>

namespace teamseg::log {

namespace {
Sink g_sink = nullptr;
}

void warn(const std::string& msg) {
    if (g_sink) {
        g_sink(msg);
    } else {
        std::fprintf(stderr, "[warn] %s\n", msg.c_str());
    }
}

Sink set_warn_sink(Sink sink) {
    Sink old = g_sink;
    g_sink = sink;
    return old;
}

} // namespace teamseg::log
