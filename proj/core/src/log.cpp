#include "fasuav/log.hpp"

#include <iostream>
#include <mutex>
#include <set>
#include <string>
#include <utility>

namespace fasuav::log {
namespace {

std::mutex g_mutex;

// The default sink prints each distinct message once; sweeps would otherwise
// repeat the same clamping notice for every point.
Sink& sink_ref() {
  static Sink sink = [](std::string_view msg) {
    static std::set<std::string, std::less<>> seen;
    if (seen.contains(msg)) return;
    seen.emplace(msg);
    std::cerr << "warning: " << msg << '\n';
  };
  return sink;
}

}  // namespace

Sink set_warning_sink(Sink sink) {
  std::lock_guard lock(g_mutex);
  return std::exchange(sink_ref(), std::move(sink));
}

void warn(std::string_view message) {
  std::lock_guard lock(g_mutex);
  if (auto& s = sink_ref()) s(message);
}

}  // namespace fasuav::log
