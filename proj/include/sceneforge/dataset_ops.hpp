#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sceneforge {

/// Image/label file pairs sharing a stem, under a common root.
struct DatasetIndex {
    std::filesystem::path root;
    std::vector<std::pair<std::filesystem::path, std::filesystem::path>> pairs;

    std::size_t size() const { return pairs.size(); }
};

/// Indexes a flat directory: every image file with a sibling <stem>.txt.
/// Throws IoError on duplicate stems (two image files differing only in
/// extension).
DatasetIndex build_index(const std::filesystem::path& dir);

/// Copies every stride-th frame (indices 0, stride, 2*stride, ...) of the
/// alphabetically ordered images in input_dir into output_dir as
/// "<prefix><running index><ext>". Without resize the file bytes are
/// copied verbatim; with resize the frame is decoded, bilinearly resized
/// and re-encoded in its original format. Returns the output count,
/// always ceil(N / stride).
int sample_frames(const std::filesystem::path& input_dir, int stride,
                  std::optional<std::pair<int, int>> resize,
                  const std::string& prefix,
                  const std::filesystem::path& output_dir);

struct SplitResult {
    DatasetIndex train;
    DatasetIndex test;
};

/// Seeded uniform split: membership comes from a Fisher-Yates shuffle,
/// |test| = round(test_fraction * N). Both halves keep the input order.
SplitResult split_train_test(const DatasetIndex& index, double test_fraction,
                             std::uint64_t seed);

/// One image path per line (relative to index.root), newline-terminated.
void write_manifest(const std::filesystem::path& file, const DatasetIndex& index);

struct DatasetStats {
    std::map<int, long long> per_class;          // class id -> object count
    std::map<int, long long> objects_per_image;  // objects in an image -> image count
    long long total_objects = 0;
    long long total_images = 0;
};

/// Exact label counts over the index. Parse failures are rethrown with the
/// offending file path in the message.
DatasetStats dataset_stats(const DatasetIndex& index);

}  // namespace sceneforge
