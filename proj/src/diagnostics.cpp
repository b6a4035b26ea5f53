#include "attitude/diagnostics.hpp"

#include <iostream>
#include <mutex>

namespace attitude {
namespace {

std::mutex g_mutex;
WarningHandler g_handler = [](const std::string& msg) { std::cerr << "warning: " << msg << '\n'; };

}  // namespace

void warn(const std::string& message) {
    std::lock_guard lock(g_mutex);
    if (g_handler) g_handler(message);
}

WarningHandler set_warning_handler(WarningHandler handler) {
    std::lock_guard lock(g_mutex);
    std::swap(g_handler, handler);
    return handler;
}

ScopedWarningCapture::ScopedWarningCapture() {
    previous_ = set_warning_handler([this](const std::string& m) { messages_.push_back(m); });
}

ScopedWarningCapture::~ScopedWarningCapture() { set_warning_handler(std::move(previous_)); }

}  // namespace attitude
