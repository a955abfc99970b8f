#include "sceneforge/dataset_ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

#include "sceneforge/errors.hpp"
#include "sceneforge/image_io.hpp"
#include "sceneforge/labels.hpp"
#include "sceneforge/resample.hpp"
#include "sceneforge/rng.hpp"
#include "sceneforge/textio.hpp"

namespace sceneforge {

namespace fs = std::filesystem;

DatasetIndex build_index(const fs::path& dir) {
    DatasetIndex index;
    index.root = dir;
    std::set<std::string> seen;
    for (const auto& image : list_image_files(dir)) {
        const std::string stem = image.stem().string();
        if (!seen.insert(stem).second) {
            throw IoError("duplicate image stem in " + dir.string() + ": " + stem);
        }
        fs::path label = dir / (stem + ".txt");
        if (fs::exists(label)) index.pairs.emplace_back(image, std::move(label));
    }
    return index;
}

int sample_frames(const fs::path& input_dir, int stride, std::optional<std::pair<int, int>> resize,
                  const std::string& prefix, const fs::path& output_dir) {
    if (stride < 1) throw std::invalid_argument("stride must be >= 1");
    const auto files = list_image_files(input_dir);
    std::error_code ec;
    fs::create_directories(output_dir, ec);
    if (ec) throw IoError("cannot create " + output_dir.string() + ": " + ec.message());

    int written = 0;
    for (std::size_t i = 0; i < files.size(); i += static_cast<std::size_t>(stride)) {
        char num[16];
        std::snprintf(num, sizeof num, "%06d", written);
        const fs::path out = output_dir / (prefix + num + files[i].extension().string());
        if (resize) {
            const Image frame = load_image(files[i]);
            save_image(out, resample(frame, resize->first, resize->second, Sampling::bilinear));
        } else {
            fs::copy_file(files[i], out, fs::copy_options::overwrite_existing, ec);
            if (ec) throw IoError("cannot copy to " + out.string() + ": " + ec.message());
        }
        ++written;
    }
    return written;
}

SplitResult split_train_test(const DatasetIndex& index, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction >= 0.0 && test_fraction <= 1.0)) {
        throw std::invalid_argument("test_fraction must be in [0,1]");
    }
    const std::size_t n = index.pairs.size();
    const auto test_count =
        static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n)));

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng rng(seed);
    for (std::size_t i = n; i > 1; --i) {
        const std::uint32_t j = rng.uniform_u32(static_cast<std::uint32_t>(i));
        std::swap(perm[i - 1], perm[j]);
    }

    std::vector<bool> in_test(n, false);
    for (std::size_t i = 0; i < test_count; ++i) in_test[perm[i]] = true;

    SplitResult result;
    result.train.root = index.root;
    result.test.root = index.root;
    for (std::size_t i = 0; i < n; ++i) {
        (in_test[i] ? result.test : result.train).pairs.push_back(index.pairs[i]);
    }
    return result;
}

void write_manifest(const fs::path& file, const DatasetIndex& index) {
    std::string text;
    for (const auto& [image, label] : index.pairs) {
        text += fs::relative(image, index.root).generic_string();
        text += '\n';
    }
    write_text_file(file, text);
}

DatasetStats dataset_stats(const DatasetIndex& index) {
    DatasetStats stats;
    for (const auto& [image, label] : index.pairs) {
        const LabelFile file = read_label_file(label);
        for (const LabelRecord& r : file.records) {
            ++stats.per_class[r.class_id];
        }
        ++stats.objects_per_image[static_cast<int>(file.records.size())];
        stats.total_objects += static_cast<long long>(file.records.size());
        ++stats.total_images;
    }
    return stats;
}

}  // namespace sceneforge
