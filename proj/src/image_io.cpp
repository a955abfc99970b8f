#include "sceneforge/image_io.hpp"

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include <algorithm>
#include <cctype>

#include "sceneforge/errors.hpp"

namespace fs = std::filesystem;

namespace sceneforge {

namespace {

std::string lower_ext(const fs::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

}  // namespace

bool is_image_file(const fs::path& path) {
    const std::string ext = lower_ext(path);
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".bmp";
}

std::vector<fs::path> list_image_files(const fs::path& dir) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) {
        throw IoError("not a directory: " + dir.string());
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && is_image_file(entry.path())) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

Image load_image(const fs::path& path) {
    cv::Mat mat = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
    if (mat.empty()) {
        throw IoError("cannot read image: " + path.string());
    }
    Image img(mat.cols, mat.rows);
    std::uint8_t* out = img.data().data();
    for (int y = 0; y < mat.rows; ++y) {
        for (int x = 0; x < mat.cols; ++x, out += 4) {
            switch (mat.channels()) {
                case 1: {
                    const std::uint8_t v = mat.at<std::uint8_t>(y, x);
                    out[0] = out[1] = out[2] = v;
                    out[3] = 255;
                    break;
                }
                case 3: {
                    const cv::Vec3b v = mat.at<cv::Vec3b>(y, x);
                    out[0] = v[2];
                    out[1] = v[1];
                    out[2] = v[0];
                    out[3] = 255;
                    break;
                }
                case 4: {
                    const cv::Vec4b v = mat.at<cv::Vec4b>(y, x);
                    out[0] = v[2];
                    out[1] = v[1];
                    out[2] = v[0];
                    out[3] = v[3];
                    break;
                }
                default:
                    throw IoError("unsupported channel count in " + path.string());
            }
        }
    }
    return img;
}

void save_image(const fs::path& path, const Image& img, int jpeg_quality) {
    if (img.empty()) {
        throw IoError("refusing to write empty image: " + path.string());
    }
    const std::string ext = lower_ext(path);
    const bool jpeg = (ext == ".jpg" || ext == ".jpeg");

    bool any_translucent = false;
    const auto& d = img.data();
    for (std::size_t i = 3; i < d.size(); i += 4) {
        if (d[i] != 255) {
            any_translucent = true;
            break;
        }
    }

    cv::Mat mat;
    if (!jpeg && any_translucent) {
        mat.create(img.height(), img.width(), CV_8UC4);
        for (int y = 0; y < img.height(); ++y) {
            for (int x = 0; x < img.width(); ++x) {
                const std::uint8_t* p = img.px(x, y);
                mat.at<cv::Vec4b>(y, x) = cv::Vec4b(p[2], p[1], p[0], p[3]);
            }
        }
    } else {
        mat.create(img.height(), img.width(), CV_8UC3);
        for (int y = 0; y < img.height(); ++y) {
            for (int x = 0; x < img.width(); ++x) {
                const std::uint8_t* p = img.px(x, y);
                mat.at<cv::Vec3b>(y, x) = cv::Vec3b(p[2], p[1], p[0]);
            }
        }
    }

    std::vector<int> params;
    if (jpeg) {
        params = {cv::IMWRITE_JPEG_QUALITY, jpeg_quality};
    }
    bool ok = false;
    try {
        ok = cv::imwrite(path.string(), mat, params);
    } catch (const cv::Exception& e) {
        throw IoError("cannot write image " + path.string() + ": " + e.what());
    }
    if (!ok) {
        throw IoError("cannot write image: " + path.string());
    }
}

}  // namespace sceneforge
