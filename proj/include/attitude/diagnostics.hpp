#pragma once

#include <functional>
#include <string>
#include <vector>

namespace attitude {

using WarningHandler = std::function<void(const std::string&)>;

// Non-fatal conditions (dropped lexicon words, skipped dimensions, ...) are
// reported here. The default handler writes to stderr.
void warn(const std::string& message);

// Installs a handler and returns the previous one.
WarningHandler set_warning_handler(WarningHandler handler);

// RAII capture of warnings, mostly for tests.
class ScopedWarningCapture {
public:
    ScopedWarningCapture();
    ~ScopedWarningCapture();
    ScopedWarningCapture(const ScopedWarningCapture&) = delete;
    ScopedWarningCapture& operator=(const ScopedWarningCapture&) = delete;

    const std::vector<std::string>& messages() const { return messages_; }

private:
    std::vector<std::string> messages_;
    WarningHandler previous_;
};

}  // namespace attitude
