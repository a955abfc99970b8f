#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace sceneforge {

/// One annotated object: class index plus a center/size box normalized to
/// the image dimensions.
struct LabelRecord {
    int class_id = 0;
    double x_center = 0;
    double y_center = 0;
    double width = 0;
    double height = 0;

    bool operator==(const LabelRecord&) const = default;
};

struct LabelFile {
    std::vector<LabelRecord> records;
    std::string stem;

    bool operator==(const LabelFile&) const = default;
};

struct MalformedLine : std::runtime_error {
    int line_no;
    MalformedLine(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_no(line) {}
};

struct OutOfRange : std::runtime_error {
    int line_no;
    OutOfRange(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_no(line) {}
};

struct UnknownClass : std::runtime_error {
    std::string name;
    explicit UnknownClass(const std::string& class_name)
        : std::runtime_error("unknown class name: " + class_name), name(class_name) {}
};

struct UnmappedClass : std::runtime_error {
    int id;
    explicit UnmappedClass(int class_id)
        : std::runtime_error("no mapping for class id " + std::to_string(class_id)), id(class_id) {}
};

/// Slack allowed on the [0,1] box invariants when validating parsed
/// records; covers the quantization of 6-decimal formatting.
inline constexpr double kBoxEps = 1e-6;

/// True when the record satisfies the normalized-box invariants
/// (positive size, center/size within [0,1] up to kBoxEps).
bool record_valid(const LabelRecord& r);

/// One line per record, "<class_id> <x_center> <y_center> <width> <height>",
/// reals with exactly 6 decimals, newline-terminated. Byte-stable across
/// platforms; empty file for zero records.
std::string write_labels(const LabelFile& file);

/// Inverse of write_labels. Tolerates extra whitespace and a missing final
/// newline. Throws MalformedLine on wrong field count or non-numeric
/// fields, OutOfRange on violated record invariants.
LabelFile parse_labels(const std::string& text, const std::string& stem = "");

LabelFile read_label_file(const std::filesystem::path& path);
void write_label_file(const std::filesystem::path& path, const LabelFile& file);

/// Ordered class names; line number in the class-list file = class id.
struct ClassMap {
    std::vector<std::string> names;

    /// Parses one name per line; blank lines are rejected, duplicate names
    /// are rejected.
    static ClassMap parse(const std::string& text);
    static ClassMap read_file(const std::filesystem::path& path);

    int id_of(const std::string& name) const;  // throws UnknownClass
};

struct VocObject {
    std::string name;
    int xmin = 0, ymin = 0, xmax = 0, ymax = 0;
};

/// The subset of a VOC-style XML annotation this toolkit consumes:
/// size/width, size/height and each object's name and corner box.
struct VocAnnotation {
    int width = 0, height = 0;
    std::vector<VocObject> objects;
};

/// Parses VOC-style XML. Throws MalformedLine(0) on structural problems,
/// OutOfRange(0) on corner boxes violating 0 <= min < max <= dimension.
VocAnnotation parse_voc_xml(const std::string& text);
VocAnnotation read_voc_file(const std::filesystem::path& path);

/// Corner box to normalized center/size:
///   x_center=(xmin+xmax)/(2 w), width=(xmax-xmin)/w, and likewise in y.
LabelFile convert_voc(const VocAnnotation& annotation, const ClassMap& classes);

/// Replaces every record's class id through the mapping; boxes and order
/// untouched. The mapping must cover every id present (UnmappedClass).
LabelFile rename_classes(const LabelFile& file, const std::map<int, int>& mapping);

struct IntegrityReport {
    struct MalformedEntry {
        std::string stem;
        int line_no = 0;
        std::string message;
    };
    std::vector<std::string> missing_labels;  // image stems without a label file
    std::vector<std::string> missing_images;  // label stems without an image
    std::vector<MalformedEntry> malformed;

    bool clean() const {
        return missing_labels.empty() && missing_images.empty() && malformed.empty();
    }
};

/// Scans a flat dataset directory of images plus .txt labels.
IntegrityReport check_integrity(const std::filesystem::path& dataset_dir);

}  // namespace sceneforge
