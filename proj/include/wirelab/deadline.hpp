#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>

namespace wirelab {

class TimeoutError : public std::runtime_error {
public:
    TimeoutError() : std::runtime_error("phase timed out") {}
};

/// Cooperative cancellation point handed down into the long-running passes.
/// Checked at loop granularity, so overruns stay within one iteration.
class Deadline {
public:
    static Deadline never() { return Deadline{}; }

    static Deadline in_seconds(double seconds) {
        Deadline d;
        d.at_ = std::chrono::steady_clock::now() +
                std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                    std::chrono::duration<double>(seconds));
        return d;
    }

    [[nodiscard]] bool expired() const {
        return at_.has_value() && std::chrono::steady_clock::now() >= *at_;
    }

    /// Cheap periodic check: only consults the clock every 256 calls.
    void poll() const {
        if (!at_.has_value()) return;
        if (++ticks_ % 256 != 0) return;
        if (expired()) throw TimeoutError{};
    }

private:
    std::optional<std::chrono::steady_clock::time_point> at_;
    mutable std::uint32_t ticks_ = 0;
};

}  // namespace wirelab
