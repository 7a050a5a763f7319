#pragma once

#include <functional>
#include <string_view>

namespace pairlink {

using WarningSink = std::function<void(std::string_view)>;

// Installs a process-wide sink for non-fatal diagnostics and returns the
// previous one. The default sink writes to stderr; an empty sink silences.
WarningSink set_warning_sink(WarningSink sink);

void warn(std::string_view message);

}  // namespace pairlink
