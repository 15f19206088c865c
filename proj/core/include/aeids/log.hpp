#pragma once

#include <functional>
#include <string_view>

namespace aeids {

using MessageHandler = std::function<void(std::string_view)>;

/// Replaces the sink for warnings (default: stderr). Returns the old handler.
MessageHandler set_warning_handler(MessageHandler handler);

void warn(std::string_view message);

}  // namespace aeids
