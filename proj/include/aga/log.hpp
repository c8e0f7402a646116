// Copyright (c) 2026 aga contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

namespace aga {

enum class LogLevel { Debug = 0, Info = 1, Warn = 2 };

/// Level parsed once from the AGA_LOG environment variable
/// (debug|info|warn); defaults to info.
LogLevel log_level();

void log_debug(const std::string& msg);
void log_info(const std::string& msg);
void log_warn(const std::string& msg);

}  // namespace aga
