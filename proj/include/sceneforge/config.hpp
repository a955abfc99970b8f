#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "sceneforge/compose.hpp"
#include "sceneforge/sprite_extract.hpp"

namespace sceneforge {

/// All validation failures of one document, each prefixed with the
/// offending field path.
struct ConfigError : std::runtime_error {
    std::vector<std::string> violations;

    explicit ConfigError(std::vector<std::string> errors)
        : std::runtime_error(join(errors)), violations(std::move(errors)) {}

private:
    static std::string join(const std::vector<std::string>& errors);
};

/// Defaults for the extract subcommand, configurable from the shared
/// document's "key_params" section.
struct KeyDefaults {
    std::array<std::uint8_t, 3> background_color{0, 255, 0};
    std::array<int, 3> tolerance{0, 0, 0};
    int remove_outline = 0;
};

struct EvalDefaults {
    double iou_threshold = 0.5;
};

/// The full configuration document: scene parameters, asset paths and
/// output conventions, plus extract and evaluator defaults.
struct RunConfig {
    DatasetJob job;
    KeyDefaults key_params;
    EvalDefaults eval;
};

/// Parses and validates a JSON configuration document. Every violation is
/// collected (not just the first); unknown keys are rejected at every
/// level. Input directories must exist at validation time; output_dir is
/// created later.
RunConfig parse_config(const std::string& json_text,
                       const std::filesystem::path& base_dir = ".");

/// parse_config on a file; relative paths resolve against the file's
/// directory.
RunConfig load_config(const std::filesystem::path& path);

}  // namespace sceneforge
