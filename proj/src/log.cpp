// Copyright (c) 2026 aga contributors
// SPDX-License-Identifier: Apache-2.0

#include "aga/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>

namespace aga {

namespace {

std::mutex log_mutex;

LogLevel parse_level() {
    const char* env = std::getenv("AGA_LOG");
    if (env == nullptr) return LogLevel::Info;
    const std::string value(env);
    if (value == "debug") return LogLevel::Debug;
    if (value == "warn") return LogLevel::Warn;
    return LogLevel::Info;
}

void emit(LogLevel level, const char* tag, const std::string& msg) {
    if (level < log_level()) return;
    std::scoped_lock lock(log_mutex);
    std::cerr << tag << msg << "\n";
}

}  // namespace

LogLevel log_level() {
    static const LogLevel level = parse_level();
    return level;
}

void log_debug(const std::string& msg) { emit(LogLevel::Debug, "[debug] ", msg); }
void log_info(const std::string& msg) { emit(LogLevel::Info, "[info] ", msg); }
void log_warn(const std::string& msg) { emit(LogLevel::Warn, "[warn] ", msg); }

}  // namespace aga
