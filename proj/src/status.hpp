#pragma once

#include <string_view>

namespace cbt {

/// Three-valued result every tick returns.
enum class Status { Success, Running, Failure };

inline std::string_view to_string(Status s) {
    switch (s) {
        case Status::Success: return "success";
        case Status::Running: return "running";
        case Status::Failure: return "failure";
    }
    return "?";
}

}  // namespace cbt
