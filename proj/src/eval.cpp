#include "sceneforge/eval.hpp"

#include <algorithm>
#include <cerrno>
#include <climits>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "sceneforge/errors.hpp"

namespace sceneforge {

double iou(const Box& a, const Box& b) {
    const double ix = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
    if (ix <= 0.0) return 0.0;
    const double iy = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
    if (iy <= 0.0) return 0.0;
    const double inter = ix * iy;
    const double uni = a.area() + b.area() - inter;
    return inter / uni;
}

MatchResult match_detections(std::span<const Detection> preds,
                             std::span<const GroundTruth> truths, double iou_threshold) {
    struct Cand {
        double overlap;
        double conf;
        std::size_t p, t;
    };
    std::vector<Cand> cands;
    for (std::size_t p = 0; p < preds.size(); ++p) {
        for (std::size_t t = 0; t < truths.size(); ++t) {
            if (preds[p].class_id != truths[t].class_id) continue;
            const double v = iou(preds[p].box, truths[t].box);
            if (v >= iou_threshold) cands.push_back({v, preds[p].confidence, p, t});
        }
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        if (a.overlap != b.overlap) return a.overlap > b.overlap;
        if (a.conf != b.conf) return a.conf > b.conf;
        if (a.p != b.p) return a.p < b.p;
        return a.t < b.t;
    });

    MatchResult result;
    result.truth_outcomes.assign(truths.size(), TruthOutcome::missed);
    result.pred_matched.assign(preds.size(), false);
    std::vector<bool> truth_matched(truths.size(), false);
    for (const Cand& c : cands) {
        if (result.pred_matched[c.p] || truth_matched[c.t]) continue;
        result.pred_matched[c.p] = true;
        truth_matched[c.t] = true;
        result.truth_outcomes[c.t] = TruthOutcome::correct;
    }

    // Unmatched truths overlapped only by wrong-class predictions count as
    // classification errors rather than outright misses.
    for (std::size_t t = 0; t < truths.size(); ++t) {
        if (truth_matched[t]) continue;
        bool any_overlap = false;
        bool same_class_overlap = false;
        for (std::size_t p = 0; p < preds.size(); ++p) {
            if (iou(preds[p].box, truths[t].box) < iou_threshold) continue;
            any_overlap = true;
            if (preds[p].class_id == truths[t].class_id) same_class_overlap = true;
        }
        if (any_overlap && !same_class_overlap) result.truth_outcomes[t] = TruthOutcome::wrong;
    }
    return result;
}

long long EvalReport::total_truths() const {
    long long n = 0;
    for (const ClassEval& c : classes) n += c.total;
    return n;
}

long long EvalReport::total_correct() const {
    long long n = 0;
    for (const ClassEval& c : classes) n += c.correct;
    return n;
}

double EvalReport::overall_map() const {
    const long long t = total_truths();
    return t > 0 ? static_cast<double>(total_correct()) / static_cast<double>(t) : 0.0;
}

void EvalAccumulator::add(std::span<const GroundTruth> truths, const MatchResult& match) {
    for (std::size_t t = 0; t < truths.size(); ++t) {
        ClassEval& c = classes_[truths[t].class_id];
        ++c.total;
        switch (match.truth_outcomes[t]) {
            case TruthOutcome::correct: ++c.correct; break;
            case TruthOutcome::wrong: ++c.wrong; break;
            case TruthOutcome::missed: ++c.missed; break;
        }
    }
}

EvalReport EvalAccumulator::report() const {
    EvalReport report;
    for (const auto& [id, eval] : classes_) {
        ClassEval c = eval;
        c.class_id = id;
        report.classes.push_back(c);
    }
    return report;
}

EvalReport evaluate_detections(const std::vector<std::vector<Detection>>& preds_per_image,
                               const std::vector<std::vector<GroundTruth>>& truths_per_image,
                               double iou_threshold) {
    if (preds_per_image.size() != truths_per_image.size()) {
        throw std::invalid_argument("evaluate_detections: per-image list sizes differ");
    }
    EvalAccumulator acc;
    for (std::size_t i = 0; i < truths_per_image.size(); ++i) {
        acc.add(truths_per_image[i],
                match_detections(preds_per_image[i], truths_per_image[i], iou_threshold));
    }
    return acc.report();
}

TrackReport tracking_report(const std::vector<std::vector<Detection>>& per_frame_detections,
                            int target_class) {
    if (per_frame_detections.empty()) throw EmptyInput("tracking report needs at least one frame");
    TrackReport report;
    report.frames_total = static_cast<long long>(per_frame_detections.size());
    for (const auto& frame : per_frame_detections) {
        long long n = 0;
        for (const Detection& d : frame) {
            if (d.class_id == target_class) ++n;
        }
        if (n == 0) {
            ++report.frames_none;
        } else if (n == 1) {
            ++report.frames_single;
        } else {
            ++report.frames_multiple;
        }
    }
    const double total = static_cast<double>(report.frames_total);
    report.pct_single = 100.0 * static_cast<double>(report.frames_single) / total;
    report.pct_multiple = 100.0 * static_cast<double>(report.frames_multiple) / total;
    report.pct_none = 100.0 * static_cast<double>(report.frames_none) / total;
    return report;
}

Box denormalize(const LabelRecord& record, double image_w, double image_h) {
    Box box;
    box.x_min = (record.x_center - record.width / 2.0) * image_w;
    box.x_max = (record.x_center + record.width / 2.0) * image_w;
    box.y_min = (record.y_center - record.height / 2.0) * image_h;
    box.y_max = (record.y_center + record.height / 2.0) * image_h;
    return box;
}

namespace {

bool parse_int_tok(const std::string& tok, int& out) {
    char* end = nullptr;
    errno = 0;
    const long v = std::strtol(tok.c_str(), &end, 10);
    if (errno != 0 || tok.empty() || end != tok.c_str() + tok.size()) return false;
    if (v < INT_MIN || v > INT_MAX) return false;
    out = static_cast<int>(v);
    return true;
}

bool parse_double_tok(const std::string& tok, double& out) {
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(tok.c_str(), &end);
    if (errno != 0 || tok.empty() || end != tok.c_str() + tok.size()) return false;
    out = v;
    return true;
}

}  // namespace

std::vector<Detection> parse_predictions(const std::string& text) {
    std::vector<Detection> preds;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ls(line);
        std::vector<std::string> fields;
        std::string tok;
        while (ls >> tok) fields.push_back(tok);
        if (fields.empty()) continue;
        if (fields.size() != 6) {
            throw MalformedLine(line_no, "expected 6 fields, got " + std::to_string(fields.size()));
        }
        Detection d;
        LabelRecord r;
        if (!parse_int_tok(fields[0], d.class_id)) {
            throw MalformedLine(line_no, "class id is not an integer: " + fields[0]);
        }
        if (!parse_double_tok(fields[1], d.confidence) || !parse_double_tok(fields[2], r.x_center) ||
            !parse_double_tok(fields[3], r.y_center) || !parse_double_tok(fields[4], r.width) ||
            !parse_double_tok(fields[5], r.height)) {
            throw MalformedLine(line_no, "non-numeric field");
        }
        r.class_id = d.class_id;
        if (!(d.confidence >= -kBoxEps && d.confidence <= 1.0 + kBoxEps)) {
            throw OutOfRange(line_no, "confidence outside [0,1]");
        }
        if (!record_valid(r)) {
            throw OutOfRange(line_no, "record violates normalized-box invariants");
        }
        d.box = denormalize(r, 1.0, 1.0);
        preds.push_back(d);
    }
    return preds;
}

std::string write_predictions(std::span<const Detection> preds) {
    std::string out;
    char buf[160];
    for (const Detection& d : preds) {
        const double xc = (d.box.x_min + d.box.x_max) / 2.0;
        const double yc = (d.box.y_min + d.box.y_max) / 2.0;
        const double w = d.box.x_max - d.box.x_min;
        const double h = d.box.y_max - d.box.y_min;
        std::snprintf(buf, sizeof buf, "%d %.6f %.6f %.6f %.6f %.6f\n", d.class_id, d.confidence,
                      xc, yc, w, h);
        out += buf;
    }
    return out;
}

}  // namespace sceneforge
