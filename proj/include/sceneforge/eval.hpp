#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "sceneforge/labels.hpp"

namespace sceneforge {

/// Axis-aligned box in pixel (or any consistent) coordinates.
struct Box {
    double x_min = 0, y_min = 0, x_max = 0, y_max = 0;

    bool valid() const { return x_min < x_max && y_min < y_max; }
    double area() const { return (x_max - x_min) * (y_max - y_min); }
    bool operator==(const Box&) const = default;
};

/// Intersection area over union area; 0 for disjoint boxes.
double iou(const Box& a, const Box& b);

struct Detection {
    int class_id = 0;
    Box box;
    double confidence = 1.0;
};

struct GroundTruth {
    int class_id = 0;
    Box box;
};

enum class TruthOutcome { correct, wrong, missed };

struct MatchResult {
    std::vector<TruthOutcome> truth_outcomes;  // parallel to the truths input
    std::vector<bool> pred_matched;            // parallel to the preds input
};

/// One-to-one greedy matching: candidate (pred, truth) pairs of equal
/// class with IoU >= threshold are accepted in descending IoU order (ties:
/// higher confidence first, then input order). Matched truths are
/// `correct`. An unmatched truth overlapped at >= threshold only by
/// wrong-class predictions is `wrong`; all remaining truths are `missed`,
/// so correct + wrong + missed always partitions the truths.
MatchResult match_detections(std::span<const Detection> preds,
                             std::span<const GroundTruth> truths,
                             double iou_threshold = 0.5);

struct ClassEval {
    int class_id = 0;
    long long total = 0;  // ground-truth occurrences
    long long correct = 0;
    long long wrong = 0;
    long long missed = 0;

    /// Fraction of ground-truth objects matched by a correct-class
    /// prediction at the IoU threshold (a recall-style figure, not the
    /// PASCAL precision/recall-area AP).
    double map() const { return total > 0 ? static_cast<double>(correct) / static_cast<double>(total) : 0.0; }
};

struct EvalReport {
    std::vector<ClassEval> classes;  // ascending class_id, only classes with total > 0

    long long total_truths() const;
    long long total_correct() const;
    /// Occurrence-weighted average over all classes.
    double overall_map() const;
};

/// Accumulates matching outcomes across images into an EvalReport.
class EvalAccumulator {
public:
    void add(std::span<const GroundTruth> truths, const MatchResult& match);
    EvalReport report() const;

private:
    std::map<int, ClassEval> classes_;
};

/// Convenience: match + accumulate over parallel per-image lists.
EvalReport evaluate_detections(const std::vector<std::vector<Detection>>& preds_per_image,
                               const std::vector<std::vector<GroundTruth>>& truths_per_image,
                               double iou_threshold = 0.5);

struct TrackReport {
    long long frames_total = 0;
    long long frames_single = 0;
    long long frames_multiple = 0;
    long long frames_none = 0;
    double pct_single = 0, pct_multiple = 0, pct_none = 0;  // of frames_total, in [0,100]
};

/// Per frame, counts detections of target_class: 0 -> none, 1 -> single,
/// >= 2 -> multiple. Throws EmptyInput for an empty frame list.
TrackReport tracking_report(const std::vector<std::vector<Detection>>& per_frame_detections,
                            int target_class);

/// Normalized center/size record to a pixel-corner box.
Box denormalize(const LabelRecord& record, double image_w, double image_h);

/// Prediction file format: one line per detection,
/// "<class_id> <confidence> <x_center> <y_center> <width> <height>",
/// normalized coordinates, 6 decimals.
std::vector<Detection> parse_predictions(const std::string& text);
std::string write_predictions(std::span<const Detection> preds);

}  // namespace sceneforge
