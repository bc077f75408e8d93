#pragma once

#include <functional>
#include <string_view>

namespace fasuav::log {

using Sink = std::function<void(std::string_view)>;

/// Replaces the warning sink and returns the previous one. The default sink
/// writes "warning: <msg>" lines to stderr, each distinct message once.
/// Pass an empty function to mute.
Sink set_warning_sink(Sink sink);

void warn(std::string_view message);

}  // namespace fasuav::log
