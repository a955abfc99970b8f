#include "sceneforge/labels.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <climits>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "sceneforge/errors.hpp"
#include "sceneforge/image_io.hpp"
#include "sceneforge/textio.hpp"

namespace sceneforge {

namespace {

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) {
            if (start < text.size()) lines.push_back(text.substr(start));
            break;
        }
        std::string line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        start = end + 1;
    }
    return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) fields.push_back(tok);
    return fields;
}

bool parse_int(const std::string& tok, int& out) {
    char* end = nullptr;
    errno = 0;
    const long v = std::strtol(tok.c_str(), &end, 10);
    if (errno != 0 || end != tok.c_str() + tok.size() || tok.empty()) return false;
    if (v < INT_MIN || v > INT_MAX) return false;
    out = static_cast<int>(v);
    return true;
}

bool parse_double(const std::string& tok, double& out) {
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(tok.c_str(), &end);
    if (errno != 0 || end != tok.c_str() + tok.size() || tok.empty()) return false;
    out = v;
    return true;
}

}  // namespace

bool record_valid(const LabelRecord& r) {
    if (!std::isfinite(r.x_center) || !std::isfinite(r.y_center) || !std::isfinite(r.width) ||
        !std::isfinite(r.height)) {
        return false;
    }
    if (r.class_id < 0) return false;
    if (!(r.width > 0.0 && r.height > 0.0)) return false;
    if (r.width > 1.0 + kBoxEps || r.height > 1.0 + kBoxEps) return false;
    if (r.x_center <= 0.0 || r.x_center >= 1.0 || r.y_center <= 0.0 || r.y_center >= 1.0) return false;
    if (r.x_center - r.width / 2.0 < -kBoxEps) return false;
    if (r.x_center + r.width / 2.0 > 1.0 + kBoxEps) return false;
    if (r.y_center - r.height / 2.0 < -kBoxEps) return false;
    if (r.y_center + r.height / 2.0 > 1.0 + kBoxEps) return false;
    return true;
}

std::string write_labels(const LabelFile& file) {
    std::string out;
    out.reserve(file.records.size() * 48);
    char buf[128];
    for (const LabelRecord& r : file.records) {
        std::snprintf(buf, sizeof buf, "%d %.6f %.6f %.6f %.6f\n", r.class_id, r.x_center,
                      r.y_center, r.width, r.height);
        out += buf;
    }
    return out;
}

LabelFile parse_labels(const std::string& text, const std::string& stem) {
    LabelFile file;
    file.stem = stem;
    const auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const int line_no = static_cast<int>(i) + 1;
        const auto fields = split_fields(lines[i]);
        if (fields.empty()) continue;
        if (fields.size() != 5) {
            throw MalformedLine(line_no, "expected 5 fields, got " + std::to_string(fields.size()));
        }
        LabelRecord r;
        if (!parse_int(fields[0], r.class_id)) {
            throw MalformedLine(line_no, "class id is not an integer: " + fields[0]);
        }
        if (!parse_double(fields[1], r.x_center) || !parse_double(fields[2], r.y_center) ||
            !parse_double(fields[3], r.width) || !parse_double(fields[4], r.height)) {
            throw MalformedLine(line_no, "non-numeric box field");
        }
        if (!record_valid(r)) {
            throw OutOfRange(line_no, "record violates normalized-box invariants");
        }
        file.records.push_back(r);
    }
    return file;
}

LabelFile read_label_file(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    try {
        return parse_labels(text, path.stem().string());
    } catch (const MalformedLine& e) {
        throw MalformedLine(e.line_no, path.string() + ": " + e.what());
    } catch (const OutOfRange& e) {
        throw OutOfRange(e.line_no, path.string() + ": " + e.what());
    }
}

void write_label_file(const std::filesystem::path& path, const LabelFile& file) {
    write_text_file(path, write_labels(file));
}

ClassMap ClassMap::parse(const std::string& text) {
    ClassMap map;
    std::set<std::string> seen;
    const auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string name = lines[i];
        while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back()))) name.pop_back();
        while (!name.empty() && std::isspace(static_cast<unsigned char>(name.front()))) name.erase(0, 1);
        if (name.empty()) throw MalformedLine(static_cast<int>(i) + 1, "blank class name");
        if (!seen.insert(name).second) {
            throw MalformedLine(static_cast<int>(i) + 1, "duplicate class name: " + name);
        }
        map.names.push_back(std::move(name));
    }
    return map;
}

ClassMap ClassMap::read_file(const std::filesystem::path& path) {
    return parse(read_text_file(path));
}

int ClassMap::id_of(const std::string& name) const {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw UnknownClass(name);
    return static_cast<int>(it - names.begin());
}

VocAnnotation parse_voc_xml(const std::string& text) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        std::istringstream in(text);
        pt::read_xml(in, tree);
    } catch (const pt::xml_parser_error& e) {
        throw MalformedLine(0, std::string("bad XML: ") + e.what());
    }

    VocAnnotation ann;
    try {
        const pt::ptree& root = tree.get_child("annotation");
        ann.width = static_cast<int>(std::llround(root.get<double>("size.width")));
        ann.height = static_cast<int>(std::llround(root.get<double>("size.height")));
        for (const auto& [key, node] : root) {
            if (key != "object") continue;
            VocObject obj;
            obj.name = node.get<std::string>("name");
            obj.xmin = static_cast<int>(std::llround(node.get<double>("bndbox.xmin")));
            obj.ymin = static_cast<int>(std::llround(node.get<double>("bndbox.ymin")));
            obj.xmax = static_cast<int>(std::llround(node.get<double>("bndbox.xmax")));
            obj.ymax = static_cast<int>(std::llround(node.get<double>("bndbox.ymax")));
            ann.objects.push_back(std::move(obj));
        }
    } catch (const pt::ptree_error& e) {
        throw MalformedLine(0, std::string("missing annotation field: ") + e.what());
    }

    if (ann.width <= 0 || ann.height <= 0) {
        throw OutOfRange(0, "annotation size must be positive");
    }
    for (const VocObject& o : ann.objects) {
        if (!(0 <= o.xmin && o.xmin < o.xmax && o.xmax <= ann.width) ||
            !(0 <= o.ymin && o.ymin < o.ymax && o.ymax <= ann.height)) {
            throw OutOfRange(0, "object box outside 0 <= min < max <= size for " + o.name);
        }
    }
    return ann;
}

VocAnnotation read_voc_file(const std::filesystem::path& path) {
    try {
        return parse_voc_xml(read_text_file(path));
    } catch (const MalformedLine& e) {
        throw MalformedLine(e.line_no, path.string() + ": " + e.what());
    } catch (const OutOfRange& e) {
        throw OutOfRange(e.line_no, path.string() + ": " + e.what());
    }
}

LabelFile convert_voc(const VocAnnotation& annotation, const ClassMap& classes) {
    LabelFile file;
    for (const VocObject& o : annotation.objects) {
        LabelRecord r;
        r.class_id = classes.id_of(o.name);
        r.x_center = (o.xmin + o.xmax) / (2.0 * annotation.width);
        r.y_center = (o.ymin + o.ymax) / (2.0 * annotation.height);
        r.width = (o.xmax - o.xmin) / static_cast<double>(annotation.width);
        r.height = (o.ymax - o.ymin) / static_cast<double>(annotation.height);
        file.records.push_back(r);
    }
    return file;
}

LabelFile rename_classes(const LabelFile& file, const std::map<int, int>& mapping) {
    LabelFile out = file;
    for (LabelRecord& r : out.records) {
        const auto it = mapping.find(r.class_id);
        if (it == mapping.end()) throw UnmappedClass(r.class_id);
        r.class_id = it->second;
    }
    return out;
}

IntegrityReport check_integrity(const std::filesystem::path& dataset_dir) {
    namespace fs = std::filesystem;
    IntegrityReport report;

    std::set<std::string> image_stems;
    for (const auto& f : list_image_files(dataset_dir)) image_stems.insert(f.stem().string());

    std::set<std::string> label_stems;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(dataset_dir, ec)) {
        if (!entry.is_regular_file()) continue;
        if (entry.path().extension() != ".txt") continue;
        label_stems.insert(entry.path().stem().string());
    }
    if (ec) throw IoError("cannot scan " + dataset_dir.string() + ": " + ec.message());

    for (const auto& stem : image_stems) {
        if (!label_stems.count(stem)) report.missing_labels.push_back(stem);
    }
    for (const auto& stem : label_stems) {
        if (!image_stems.count(stem)) report.missing_images.push_back(stem);
        try {
            read_label_file(dataset_dir / (stem + ".txt"));
        } catch (const MalformedLine& e) {
            report.malformed.push_back({stem, e.line_no, e.what()});
        } catch (const OutOfRange& e) {
            report.malformed.push_back({stem, e.line_no, e.what()});
        }
    }
    return report;
}

}  // namespace sceneforge
