#pragma once

#include <stdexcept>
#include <string>

namespace sceneforge {

/// Unreadable/unwritable paths, decode/encode failures.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AreaOutOfBounds : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raster has no pixel with alpha > 0 where content is required.
struct EmptyContent : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyPool : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoBackgrounds : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace sceneforge
